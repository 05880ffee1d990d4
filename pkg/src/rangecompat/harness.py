"""Theorem verification suites over enumerated or sampled space instances.

Each suite checks one classification/structure statement on every generated
instance that satisfies its hypotheses, and reports machine-readable counts
plus full payloads for counterexamples (treated as implementation bugs) and
sharpness witnesses (required to exist).

Reports are deterministic: instance order is the canonical enumeration (or
the seeded sample order), results are merged in that order regardless of
the parallelism degree, and wall time is only included on request.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from time import perf_counter
from typing import Callable, Iterable

from .classify import (adapted_vectors, d_bound, decompose_rc,
                       detect_adapted_exception, detect_type)
from .enumeration import (DEFAULT_BUDGET, count_subspaces, enumerate_subspaces,
                          random_space, random_spaces)
from .errors import BudgetError, DecompositionError, VerificationError
from .gf import endo_space, field_make
from .io import jsonable, map_to_json, space_to_json
from .linalg import FieldElim, Mat
from .preservers import classify_preservers
from .rcmaps import (exceptional_map, is_local, local_space, map_from_images,
                     map_span, eval_map, project_map, rc_space,
                     verify_rc_by_enumeration)
from .reflexivity import reflexivity_report
from .spaces import (Space, common_kernel, named_space, projective_reps,
                     space_make)

THEOREM_IDS = (
    "first-classification",
    "main-linear",
    "second-classification",
    "symmetric",
    "generalized-first",
    "K-local",
    "adapted-dichotomy",
    "three-vectors",
    "reflexivity-bound",
    "preserver-standard",
    "preserver-type1",
    "preserver-type2",
    "sharpness-dn",
    "sharpness-first",
)


@dataclass(frozen=True)
class ScanConfig:
    p: int = 2
    k: int = 1
    rows: int = 3
    cols: int = 3
    codim_max: int = 2
    mode: str = "exhaustive"      # "exhaustive" | "random"
    seed: int = 0
    count: int = 100
    budget: int = DEFAULT_BUDGET
    jobs: int = 1


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    config: dict
    checked: int
    passed: int
    failed: int
    refused: int
    witnesses: tuple = ()
    counterexamples: tuple = ()
    elapsed: float | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.checked > 0


def _instances(cfg: ScanConfig) -> list[Space]:
    F = field_make(cfg.p, cfg.k)
    if cfg.mode == "exhaustive":
        total = count_subspaces(F, cfg.rows, cfg.cols, max_codim=cfg.codim_max)
        if total > cfg.budget:
            raise BudgetError(
                f"exhaustive scan needs {total} spaces, over budget {cfg.budget}")
        return list(enumerate_subspaces(F, cfg.rows, cfg.cols,
                                        max_codim=cfg.codim_max))
    if cfg.mode == "random":
        return random_spaces(F, cfg.rows, cfg.cols, count=cfg.count,
                             seed=cfg.seed, max_codim=cfg.codim_max)
    raise ValueError(f"unknown scan mode {cfg.mode!r}")


# result of a single instance check: (status, payload)
# status: "pass" | "fail" | "skip" | "refused"
Check = Callable[[Space], tuple[str, dict | None]]


def _scan(cfg: ScanConfig, check: Check, spaces: Iterable[Space] | None = None):
    items = list(spaces) if spaces is not None else _instances(cfg)
    jobs = max(1, cfg.jobs)
    if jobs == 1:
        results = [check(S) for S in items]
    else:
        # contiguous chunks, merged back in enumeration order
        size = (len(items) + jobs - 1) // jobs or 1
        parts = [items[i : i + size] for i in range(0, len(items), size)]
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            mapped = ex.map(lambda part: [check(S) for S in part], parts)
        results = [r for part in mapped for r in part]
    checked = passed = failed = refused = 0
    counterexamples = []
    witnesses = []
    for status, payload in results:
        if status == "skip":
            continue
        if status == "refused":
            refused += 1
            continue
        checked += 1
        if status == "pass":
            passed += 1
            if payload is not None:
                witnesses.append(payload)
        else:
            failed += 1
            if payload is not None:
                counterexamples.append(payload)
    return checked, passed, failed, refused, witnesses, counterexamples


def _report(tid: str, cfg: ScanConfig, scan, t0: float | None) -> TheoremReport:
    checked, passed, failed, refused, wit, cex = scan
    return TheoremReport(
        theorem_id=tid, config=asdict(cfg),
        checked=checked, passed=passed, failed=failed, refused=refused,
        witnesses=tuple(jsonable(w) for w in wit),
        counterexamples=tuple(jsonable(c) for c in cex),
        elapsed=(perf_counter() - t0) if t0 is not None else None,
    )


# -- per-suite checks ----------------------------------------------------------


def _check_main_linear(S: Space):
    if S.codim > d_bound(S.field, S.rows):
        return "skip", None
    rc = rc_space(S, "linear")
    loc, _ = local_space(S)
    if rc.kdim == loc.kdim:
        return "pass", None
    bad = next(B for B in rc.basis if is_local(S, B) is None)
    return "fail", {"space": space_to_json(S), "rc_kdim": rc.kdim,
                    "local_kdim": loc.kdim, "nonlocal_map": map_to_json(bad)}


def _check_first_classification(S: Space):
    if S.codim > S.rows - 2:
        return "skip", None
    rc = rc_space(S, "additive")
    loc, _ = local_space(S)
    if rc.kdim == loc.kdim:
        return "pass", None
    bad = next(B for B in rc.basis if is_local(S, B) is None)
    return "fail", {"space": space_to_json(S), "rc_kdim": rc.kdim,
                    "local_kdim": loc.kdim, "nonlocal_map": map_to_json(bad)}


def _check_second_classification(S: Space):
    n = S.rows
    if S.field.q <= 2 or S.codim > 2 * n - 3:
        return "skip", None
    loc, _ = local_space(S)
    rc_lin = rc_space(S, "linear")
    if rc_lin.kdim != loc.kdim:       # point (a)
        return "fail", {"space": space_to_json(S), "part": "linear",
                        "rc_kdim": rc_lin.kdim, "local_kdim": loc.kdim}
    rc = rc_space(S, "additive")
    trep = detect_type(S)
    if rc.kdim > loc.kdim and trep.verdict not in ("type1", "type2", "type3"):
        return "fail", {"space": space_to_json(S), "part": "type-detection",
                        "rc_kdim": rc.kdim, "local_kdim": loc.kdim}
    try:
        for B in rc.basis:
            decompose_rc(S, B, trep)
    except (DecompositionError, VerificationError) as e:
        return "fail", {"space": space_to_json(S), "part": "decomposition",
                        "error": str(e)}
    return "pass", None


def _symmetric_instances():
    for (p, k) in ((3, 1), (2, 1), (2, 2)):
        for n in (2, 3):
            yield field_make(p, k), n


def _check_symmetric(item):
    F, n = item
    S = named_space(F, "symmetric", n=n)
    rc = rc_space(S, "additive")
    loc, _ = local_space(S)
    payload = {"field": {"p": F.p, "k": F.k}, "n": n, "rc_kdim": rc.kdim,
               "local_kdim": loc.kdim}
    if F.p != 2:
        ok = rc.kdim == loc.kdim and loc.Kdim == n
    else:
        expected = n + 1 if F.k == 1 else 2 * n + 2
        ok = rc.kdim == expected
        # span equality: local maps + root-linear diagonal extractions
        gens = list(loc.basis)
        for alpha in endo_space(F, "rootlinear"):
            gens.append(exceptional_map(S, "diag", alpha=alpha, r=n, verify=False))
        span = map_span(S, n, gens)
        ok = ok and span.kdim == rc.kdim and all(rc.contains(B) for B in span.basis)
    return ("pass", None) if ok else ("fail", payload)


def _generalized_first_items(cfg: ScanConfig):
    F = field_make(cfg.p, cfg.k)
    if F.k == 1:
        raise ValueError("generalized-first needs a non-prime field")
    rng = random.Random(cfg.seed)
    n, p = cfg.rows, cfg.cols
    items = []
    for _ in range(cfg.count):
        codim = rng.randrange(max(1, n - 1))          # codim <= n-2
        S = random_space(F, n, p, n * p - codim, rng)
        gens = list(S.gfp_basis())
        for _ in range(rng.randrange(3)):
            gens.append(Mat(F, n, p, tuple(rng.randrange(F.q)
                                           for _ in range(n * p))))
        T = space_make(F, n, p, gens, scalars="prime")
        items.append(T)
    return items


def _check_generalized_first(T: Space):
    F = T.field
    rc = rc_space(T, "additive")
    gens = []
    for x in _field_basis_vectors(F, T.cols):
        gens.append(eval_map(T, x))
    loc = map_span(T, T.rows, gens)
    if rc.kdim == loc.kdim:
        return "pass", None
    return "fail", {"space": space_to_json(T), "rc_kdim": rc.kdim,
                    "local_kdim": loc.kdim}


def _field_basis_vectors(F, p: int):
    for i in range(p):
        for j in range(F.k):
            tj = F.from_digits([0] * j + [1] + [0] * (F.k - 1 - j))
            yield tuple(tj if jj == i else 0 for jj in range(p))


def _k_local_items():
    for (p, k) in ((2, 1), (3, 1), (2, 2)):
        for label in ("K1", "K2", "K3", "K4"):
            yield field_make(p, k), label


def _check_k_local(item):
    F, label = item
    S = named_space(F, label)
    rc = rc_space(S, "additive")
    loc, _ = local_space(S)
    if label == "K2" and F.k > 1:
        # the one space of the family with non-local homomorphisms
        trep = detect_type(S)
        ok = rc.kdim > loc.kdim and trep.verdict == "type1"
        payload = {"field": {"p": F.p, "k": F.k}, "label": label,
                   "rc_kdim": rc.kdim, "local_kdim": loc.kdim,
                   "verdict": trep.verdict}
        return ("pass", payload) if ok else ("fail", payload)
    ok = rc.kdim == loc.kdim
    payload = {"field": {"p": F.p, "k": F.k}, "label": label,
               "rc_kdim": rc.kdim, "local_kdim": loc.kdim}
    return ("pass", None) if ok else ("fail", payload)


def _check_adapted_dichotomy(S: Space):
    n = S.rows
    if n != 3 or S.cols < 2 or S.codim > 2 * n - 3:
        return "skip", None
    rep = adapted_vectors(S, cross_check=False)
    if rep.hyperplane_cover:
        return "pass", None
    hit = detect_adapted_exception(S)
    if hit is None:
        return "fail", {"space": space_to_json(S),
                        "non_adapted": [list(y) for y in rep.non_adapted]}
    label = hit[0]
    if label != "zero_coprod":
        span = FieldElim(S.field, n)
        for e in rep.entries:
            if e.adapted:
                span.add_row(list(e.y))
        if span.rank < n:
            return "fail", {"space": space_to_json(S), "label": label,
                            "part": "adapted-basis"}
    return "pass", {"space": space_to_json(S), "label": label}


def _check_three_vectors(S: Space):
    n = S.rows
    if n < 3 or S.codim > 2 * n - 3:
        return "skip", None
    rc = rc_space(S, "additive")
    for B in rc.basis:
        span = FieldElim(S.field, n)
        for y in projective_reps(S.field, n):
            Sp, Bp = project_map(S, B, y)
            if is_local(Sp, Bp) is not None:
                span.add_row(list(y))
        if span.rank >= 3 and is_local(S, B) is None:
            return "fail", {"space": space_to_json(S), "map": map_to_json(B)}
    return "pass", None


def _check_reflexivity(S: Space):
    try:
        rep = reflexivity_report(S)
    except VerificationError as e:
        return "fail", {"space": space_to_json(S), "error": str(e)}
    payload = None
    if rep.bound_applies:
        payload = {"space": space_to_json(S), "dim": rep.dim,
                   "reflexive": rep.reflexive}
    return "pass", payload


def _check_preserver_standard(S: Space):
    n = S.rows
    if (S.codim > d_bound(S.field, n) or common_kernel(S)
            or detect_type(S).verdict != "none"):
        return "skip", None
    try:
        rep = classify_preservers(S, S.cols, "linear")
    except BudgetError:
        return "refused", None
    ok = (rep.mode == "enumerated" and rep.all_classified
          and all(e.kind == "standard" for e in rep.entries))
    if ok:
        return "pass", None
    return "fail", {"space": space_to_json(S), "count": rep.count,
                    "kinds": sorted({e.kind for e in rep.entries})}


def _preserver_type1_items():
    yield field_make(2), 2, 2, 2
    yield field_make(3), 2, 2, 2
    yield field_make(2, 2), 2, 2, 2
    yield field_make(2), 3, 2, 2
    yield field_make(3), 3, 2, 2
    # existence threshold: q < p admits no preserver
    yield field_make(3), 2, 2, 1
    yield field_make(2, 2), 2, 2, 1


def _check_preserver_type1(item):
    F, n, p, q = item
    S = named_space(F, "type1_canonical", n=n, p=p)
    rep = classify_preservers(S, q, "additive")
    payload = {"field": {"p": F.p, "k": F.k}, "n": n, "p_cols": p, "q": q,
               "count": rep.count,
               "kinds": sorted({e.kind for e in rep.entries})}
    if q < p:
        return ("pass", payload) if rep.count == 0 else ("fail", payload)
    ok = (rep.count and rep.all_classified
          and all(e.kind in ("standard", "twisted-corner") for e in rep.entries)
          and all(e.corner.R_injective for e in rep.entries
                  if e.kind == "twisted-corner"))
    return ("pass", payload) if ok else ("fail", payload)


def _preserver_type2_items():
    F2, F4 = field_make(2), field_make(2, 2)
    yield F2, 2, 2, 1   # q < r: no preservers
    yield F2, 2, 2, 2
    yield F2, 2, 2, 3
    yield F4, 2, 2, 2
    yield F2, 3, 3, 3   # r = 3 family
    yield F2, 3, 3, 2   # q < r


def _check_preserver_type2(item):
    F, n, r, q = item
    label = "type2_canonical" if r == 2 else "type3_canonical"
    S = named_space(F, label, n=n, p=r)
    rep = classify_preservers(S, q, "additive")
    payload = {"field": {"p": F.p, "k": F.k}, "n": n, "r": r, "q": q,
               "count": rep.count,
               "kinds": sorted({e.kind for e in rep.entries})}
    if q < r:
        return ("pass", payload) if rep.count == 0 else ("fail", payload)
    ok = (rep.count and rep.all_classified
          and all(e.kind in ("standard", "symmetric-diagonal")
                  for e in rep.entries)
          and all(e.symdiag.R_rootlinear for e in rep.entries
                  if e.kind == "symmetric-diagonal"))
    return ("pass", payload) if ok else ("fail", payload)


def _sharpness_dn_items():
    yield field_make(3), "intro_U", None, (0, 1), "top"
    yield field_make(2, 2), "intro_U", None, (0, 1), "top"
    yield field_make(2), "f2_sharpness", None, None, "diag2"
    yield field_make(3), "intro_U_extended", None, (0, 1), "top"


def _check_sharpness_dn(item):
    F, label, _n, entry, kind = item
    S = (named_space(F, label) if label == "intro_U"
         else named_space(F, label, n=3, p=3))
    n = S.rows
    if kind == "top":
        i, j = entry
        images = [tuple([g.get(i, j)] + [0] * (n - 1)) for g in S.gfp_basis()]
    else:
        images = [tuple([g.get(0, 0), g.get(1, 1)] + [0] * (n - 2))
                  for g in S.gfp_basis()]
    Fm = map_from_images(S, n, images)
    ok = (S.codim >= d_bound(F, n) + 1
          and verify_rc_by_enumeration(S, Fm)
          and is_local(S, Fm) is None
          and Fm.is_klinear())
    payload = {"field": {"p": F.p, "k": F.k}, "label": label,
               "codim": S.codim, "d_bound": d_bound(F, n),
               "map": map_to_json(Fm)}
    return ("pass", payload) if ok else ("fail", payload)


def _check_sharpness_first(item):
    F = item
    S = named_space(F, "type1_canonical", n=2, p=2)
    # a non-linear additive endomorphism: projection onto the prime subfield
    alpha = None
    for cand in endo_space(F, "additive"):
        if not cand.is_linear():
            alpha = cand
            break
    assert alpha is not None
    Fm = exceptional_map(S, "type1", x=(1, 0), alpha=alpha)
    ok = (S.codim == S.rows - 1
          and is_local(S, Fm) is None
          and not Fm.is_klinear())
    payload = {"field": {"p": F.p, "k": F.k}, "codim": S.codim,
               "map": map_to_json(Fm)}
    return ("pass", payload) if ok else ("fail", payload)


# -- dispatch ------------------------------------------------------------------


_SPACE_SUITES = {
    "main-linear": _check_main_linear,
    "first-classification": _check_first_classification,
    "second-classification": _check_second_classification,
    "adapted-dichotomy": _check_adapted_dichotomy,
    "three-vectors": _check_three_vectors,
    "reflexivity-bound": _check_reflexivity,
    "preserver-standard": _check_preserver_standard,
}

_FIXED_SUITES = {
    "symmetric": (_symmetric_instances, _check_symmetric),
    "K-local": (_k_local_items, _check_k_local),
    "preserver-type1": (_preserver_type1_items, _check_preserver_type1),
    "preserver-type2": (_preserver_type2_items, _check_preserver_type2),
    "sharpness-dn": (_sharpness_dn_items, _check_sharpness_dn),
    "sharpness-first": (lambda: [field_make(2, 2)], _check_sharpness_first),
}


def verify_theorem(theorem_id: str, config: ScanConfig | None = None,
                   timing: bool = False) -> TheoremReport:
    """Run one verification suite and return its report.

    Space-scan suites draw instances from *config* (exhaustive enumeration
    or a seeded sample); fixed suites check a pinned list of instances and
    ignore the scan part of the configuration.
    """
    if theorem_id not in THEOREM_IDS:
        raise ValueError(f"unknown theorem id {theorem_id!r}")
    cfg = config or ScanConfig()
    t0 = perf_counter() if timing else None
    if theorem_id in _SPACE_SUITES:
        scan = _scan(cfg, _SPACE_SUITES[theorem_id])
    elif theorem_id == "generalized-first":
        scan = _scan(cfg, _check_generalized_first,
                     spaces=_generalized_first_items(cfg))
    else:
        items, check = _FIXED_SUITES[theorem_id]
        scan = _scan(cfg, check, spaces=list(items()))
    return _report(theorem_id, cfg, scan, t0)
