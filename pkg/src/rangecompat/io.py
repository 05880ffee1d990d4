"""Versioned JSON formats for spaces, maps, and reports.

All serializers emit plain dicts of JSON scalars/lists; ``dumps`` renders
them canonically (sorted keys, fixed separators) so that identical inputs
produce byte-identical output.  Every file format carries ``"format": 1``.

Field encoding: ``{"p", "k", "poly"}`` with the reduction polynomial given
little-endian without the leading coefficient (length k); a length-(k+1)
list ending in 1 is accepted on input.  Matrix entries are row-major
integer element codes.  Additive-map matrices are GF(p) blocks in the
fixed (stored basis) x (1, t, ..., t^(k-1)) coordinates.
"""

from __future__ import annotations

import json
from dataclasses import is_dataclass
from typing import Any

from .errors import FieldError
from .gf import Field, field_make
from .linalg import Mat
from .rcmaps import AdditiveMap, MapSpace
from .spaces import Space, space_make

FORMAT_VERSION = 1


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


# -- field ---------------------------------------------------------------------


def field_to_json(F: Field) -> dict:
    return {"p": F.p, "k": F.k, "poly": list(F.poly)}


def field_from_json(d: dict) -> Field:
    p, k = int(d["p"]), int(d["k"])
    F = field_make(p, k)
    poly = [int(c) % p for c in d.get("poly", list(F.poly))]
    if len(poly) == k + 1:
        if poly[-1] != 1:
            raise FieldError("reduction polynomial must be monic")
        poly = poly[:-1]
    if len(poly) != k or tuple(poly) != tuple(F.poly):
        raise FieldError(
            f"unsupported reduction polynomial {poly} for GF({p}^{k}); "
            f"this build fixes {list(F.poly)}")
    return F


# -- spaces --------------------------------------------------------------------


def space_to_json(S: Space) -> dict:
    return {
        "format": FORMAT_VERSION,
        "field": field_to_json(S.field),
        "rows": S.rows,
        "cols": S.cols,
        "scalars": S.scalars,
        "basis": [list(B.entries) for B in S.basis],
    }


def space_from_json(d: dict) -> Space:
    if d.get("format") != FORMAT_VERSION:
        raise ValueError(f"unsupported space format {d.get('format')!r}")
    F = field_from_json(d["field"])
    rows, cols = int(d["rows"]), int(d["cols"])
    basis = []
    for entries in d["basis"]:
        codes = [int(x) for x in entries]
        if len(codes) != rows * cols or any(not 0 <= c < F.q for c in codes):
            raise ValueError("bad basis matrix entries")
        basis.append(Mat(F, rows, cols, tuple(codes)))
    return space_make(F, rows, cols, basis, scalars=d.get("scalars", "field"))


def mat_to_json(M: Mat) -> list[int]:
    return list(M.entries)


# -- maps ----------------------------------------------------------------------


def map_to_json(F: AdditiveMap, flavor: str = "additive") -> dict:
    return {
        "format": FORMAT_VERSION,
        "domain": space_to_json(F.domain),
        "flavor": flavor,
        "target_rows": F.target_rows,
        "target_cols": 1,
        "matrix_fp": [list(row) for row in F.matrix],
    }


def map_from_json(d: dict) -> AdditiveMap:
    if d.get("format") != FORMAT_VERSION:
        raise ValueError(f"unsupported map format {d.get('format')!r}")
    domain = space_from_json(d["domain"])
    tr = int(d["target_rows"]) * int(d.get("target_cols", 1))
    mat = tuple(tuple(int(x) % domain.field.p for x in row)
                for row in d["matrix_fp"])
    if len(mat) != domain.field.k * tr or any(len(r) != domain.gfp_dim for r in mat):
        raise ValueError("bad map matrix shape")
    return AdditiveMap(domain, tr, mat)


def opmap_to_json(F) -> dict:
    d = map_to_json(F.amap)
    d["target_rows"] = F.target_rows
    d["target_cols"] = F.target_cols
    return d


def opmap_from_json(d: dict):
    from .preservers import OpMap

    am = map_from_json(d)
    return OpMap(am.domain, int(d["target_rows"]), int(d["target_cols"]), am)


def mapspace_to_json(ms: MapSpace) -> dict:
    return {
        "format": FORMAT_VERSION,
        "domain": space_to_json(ms.domain),
        "flavor": ms.flavor,
        "target_rows": ms.target_rows,
        "kdim": ms.kdim,
        "Kdim": ms.Kdim,
        "basis": [[list(row) for row in B.matrix] for B in ms.basis],
    }


# -- reports -------------------------------------------------------------------


def jsonable(obj: Any) -> Any:
    """Recursively convert report dataclasses and core objects to JSON data."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Mat):
        return {"rows": obj.rows, "cols": obj.cols, "entries": list(obj.entries)}
    if isinstance(obj, Space):
        return space_to_json(obj)
    if isinstance(obj, AdditiveMap):
        return map_to_json(obj)
    if isinstance(obj, MapSpace):
        return mapspace_to_json(obj)
    if isinstance(obj, Field):
        return field_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "amap") and hasattr(obj, "target_cols"):  # OpMap
        return opmap_to_json(obj)
    if is_dataclass(obj):
        return {f: jsonable(getattr(obj, f)) for f in obj.__dataclass_fields__}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_to_json(report: Any) -> dict:
    out = jsonable(report)
    if isinstance(out, dict):
        out.setdefault("format", FORMAT_VERSION)
    return out
