"""Shared operation handlers behind the CLI and the HTTP API.

Each handler takes plain JSON-compatible data, runs the core computation,
and returns ``(payload, violation)`` where *payload* is a JSON-ready dict
and *violation* is True when the request found a counterexample or a
negative verdict (CLI exit code 1).  Budget refusals raise
:class:`BudgetError`; malformed requests raise :class:`UsageError`.
"""

from __future__ import annotations

from dataclasses import asdict

from .classify import (adapted_vectors, d_bound, decompose_rc,
                       detect_adapted_exception, detect_type)
from .enumeration import DEFAULT_BUDGET, count_subspaces, enumerate_subspaces
from .errors import BudgetError, DecompositionError, FieldError
from .gf import field_make
from .harness import THEOREM_IDS, ScanConfig, verify_theorem
from .io import (FORMAT_VERSION, jsonable, map_from_json, map_to_json,
                 mapspace_to_json, report_to_json, space_from_json,
                 space_to_json)
from .preservers import classify_preservers
from .rcmaps import is_local, local_space, rc_space
from .reflexivity import reflexivity_report
from .spaces import Space, common_kernel, named_space

LIST_CAP = 10_000  # max spaces returned inline by the enumeration handler


class UsageError(ValueError):
    """Malformed request (bad label, missing field, wrong shape)."""


def parse_field(q, k: int | None = None):
    """Field from a size ``q`` (prime power), or from ``(p, k)`` when k given."""
    try:
        if k is not None:
            return field_make(int(q), int(k))
        q = int(q)
        for p in (2, 3, 5, 7, 11, 13):
            kk = 0
            n = q
            while n % p == 0:
                n //= p
                kk += 1
            if n == 1 and kk >= 1:
                return field_make(p, kk)
        raise UsageError(f"field size {q} is not a supported prime power")
    except FieldError as e:
        raise UsageError(str(e)) from e


def _load_space(req: dict) -> Space:
    if "space" in req and req["space"] is not None:
        try:
            return space_from_json(req["space"])
        except (KeyError, ValueError, FieldError) as e:
            raise UsageError(f"bad space payload: {e}") from e
    if "named" in req and req["named"] is not None:
        if "field" not in req or req["field"] is None:
            raise UsageError("named space needs a field")
        F = parse_field(req["field"], req.get("k"))
        try:
            return named_space(F, req["named"], n=req.get("n"), p=req.get("p"))
        except ValueError as e:
            raise UsageError(str(e)) from e
    raise UsageError("request needs either a space payload or a named label")


def handle_space(req: dict) -> tuple[dict, bool]:
    S = _load_space(req)
    payload = {
        "format": FORMAT_VERSION,
        "space": space_to_json(S),
        "dim": S.dim,
        "codim": S.codim,
        "gfp_dim": S.gfp_dim,
        "common_kernel_dim": len(common_kernel(S)),
        "d_bound": d_bound(S.field, S.rows),
    }
    return payload, False


def handle_rc(req: dict) -> tuple[dict, bool]:
    S = _load_space(req)
    flavor = req.get("flavor", "linear")
    action = req.get("action", "space")
    budget = int(req.get("budget", DEFAULT_BUDGET))
    if action == "space":
        ms = rc_space(S, flavor, budget=budget)
        loc, _ = local_space(S)
        payload = {
            "format": FORMAT_VERSION,
            "flavor": flavor,
            "kdim": ms.kdim,
            "Kdim": ms.Kdim,
            "local_kdim": loc.kdim,
            "local_Kdim": loc.Kdim,
            "all_local": ms.kdim == loc.kdim,
            "rc": mapspace_to_json(ms),
        }
        return payload, False
    if "map" not in req or req["map"] is None:
        raise UsageError(f"rc action {action!r} needs a map payload")
    try:
        Fm = map_from_json(req["map"])
    except (KeyError, ValueError) as e:
        raise UsageError(f"bad map payload: {e}") from e
    if Fm.domain != S:
        raise UsageError("map domain does not match the given space")
    if action == "is-local":
        x = is_local(S, Fm)
        payload = {"format": FORMAT_VERSION, "local": x is not None,
                   "vector": list(x) if x is not None else None}
        return payload, x is None
    if action == "decompose":
        try:
            dec = decompose_rc(S, Fm, budget=budget)
        except DecompositionError as e:
            return {"format": FORMAT_VERSION, "decomposed": False,
                    "error": str(e)}, True
        payload = {"format": FORMAT_VERSION, "decomposed": True,
                   "decomposition": jsonable(dec)}
        return payload, False
    raise UsageError(f"unknown rc action {action!r}")


def handle_classify(req: dict) -> tuple[dict, bool]:
    S = _load_space(req)
    budget = int(req.get("budget", DEFAULT_BUDGET))
    trep = detect_type(S, budget=budget)
    payload = {"format": FORMAT_VERSION, "type": jsonable(trep)}
    if S.rows == 3 and S.cols >= 2:
        arep = adapted_vectors(S)
        hit = detect_adapted_exception(S, budget=budget)
        payload["adapted"] = jsonable(arep)
        payload["adapted_exception"] = hit[0] if hit else None
    return payload, False


def handle_reflex(req: dict) -> tuple[dict, bool]:
    S = _load_space(req)
    rep = reflexivity_report(S)
    return {"format": FORMAT_VERSION, "reflexivity": jsonable(rep)}, False


def handle_preserve(req: dict) -> tuple[dict, bool]:
    S = _load_space(req)
    q = req.get("q", S.cols)
    flavor = req.get("flavor", "linear")
    budget = int(req.get("budget", DEFAULT_BUDGET))
    rep = classify_preservers(S, int(q), flavor, budget=budget)
    return {"format": FORMAT_VERSION, "preservers": jsonable(rep)}, False


def handle_enum(req: dict) -> tuple[dict, bool]:
    F = parse_field(req.get("field", 2), req.get("k"))
    n, p = int(req.get("n", 3)), int(req.get("p", 3))
    kw = {}
    for key in ("dim", "codim", "max_codim"):
        if req.get(key) is not None:
            kw[key] = int(req[key])
    if not kw:
        kw["max_codim"] = n * p
    budget = int(req.get("budget", DEFAULT_BUDGET))
    total = count_subspaces(F, n, p, **kw)
    payload = {"format": FORMAT_VERSION, "field": {"p": F.p, "k": F.k},
               "n": n, "p": p, "count": total}
    if req.get("list"):
        if total > min(budget, LIST_CAP):
            raise BudgetError(
                f"listing {total} spaces exceeds the cap "
                f"{min(budget, LIST_CAP)}")
        payload["spaces"] = [space_to_json(S)
                             for S in enumerate_subspaces(F, n, p, **kw)]
    return payload, False


def handle_verify(req: dict) -> tuple[dict, bool]:
    tid = req.get("theorem")
    if tid not in THEOREM_IDS:
        raise UsageError(f"unknown theorem id {tid!r}; "
                         f"choose from {', '.join(THEOREM_IDS)}")
    known = {f for f in ScanConfig.__dataclass_fields__}
    cfg_kw = {}
    if req.get("field") is not None:
        F = parse_field(req["field"], req.get("k"))
        cfg_kw["p"], cfg_kw["k"] = F.p, F.k
    for key in ("rows", "cols", "codim_max", "mode", "seed", "count",
                "budget", "jobs"):
        if req.get(key) is not None:
            val = req[key]
            cfg_kw[key] = val if key == "mode" else int(val)
    bad = set(cfg_kw) - known
    if bad:
        raise UsageError(f"bad config keys {sorted(bad)}")
    cfg = ScanConfig(**cfg_kw)
    rep = verify_theorem(tid, cfg, timing=bool(req.get("timing")))
    payload = report_to_json(rep)
    is_sharpness = tid.startswith("sharpness")
    violation = rep.failed > 0 or (is_sharpness and not rep.witnesses)
    payload["verdict"] = "fail" if violation else "pass"
    return payload, violation


HANDLERS = {
    "space": handle_space,
    "rc": handle_rc,
    "classify": handle_classify,
    "reflex": handle_reflex,
    "preserve": handle_preserve,
    "enum": handle_enum,
    "verify": handle_verify,
}


def run_operation(op: str, req: dict) -> tuple[dict, bool]:
    if op not in HANDLERS:
        raise UsageError(f"unknown operation {op!r}")
    return HANDLERS[op](req)
