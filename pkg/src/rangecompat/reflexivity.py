"""Algebraic reflexivity of matrix spaces.

The reflexive closure of S is R(S) = {g : g x in S x for every x}; S is
reflexive when R(S) = S.  R(S) is canonically isomorphic to the space of
linear range-compatible maps on the evaluation image S^ = {x^ : x in K^p}
(x^ sends a basis matrix B_i to B_i x), which is asserted as a hard
invariant on every report.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import VerificationError
from .linalg import FieldElim
from .rcmaps import rc_space
from .spaces import Space, column_sum, common_kernel, hat_space, projective_reps, space_make


def reflexive_closure(S: Space) -> Space:
    """R(S) = {g in Mat_{n,p} : g x in S x for every x in K^p}."""
    F = S.field
    n, p = S.rows, S.cols
    elim = FieldElim(F, n * p)
    for x in projective_reps(F, p):
        # span of S x and its annihilating covectors
        sx = FieldElim(F, n)
        for B in S.basis:
            sx.add_row([_dot(F, B.row(i), x) for i in range(n)])
        for y in sx.nullspace():
            # y . (g x) = 0  ->  sum_{i,j} y_i x_j g[i][j] = 0
            row = [0] * (n * p)
            for i, yi in enumerate(y):
                if yi:
                    for j, xj in enumerate(x):
                        if xj:
                            row[i * p + j] = F.mul(yi, xj)
            elim.add_row(row)
    from .linalg import Mat

    gens = [Mat(F, n, p, tuple(v)) for v in elim.nullspace()]
    return space_make(F, n, p, gens)


def _dot(F, a, b) -> int:
    acc = 0
    for u, v in zip(a, b):
        if u and v:
            acc = F.add(acc, F.mul(u, v))
    return acc


def is_reduced(S: Space) -> bool:
    """No common kernel vector and the images of S together span K^n."""
    return not common_kernel(S) and column_sum(S).rank == S.rows


@dataclass(frozen=True)
class ReflexReport:
    rows: int
    cols: int
    dim: int
    dim_closure: int
    reflexive: bool
    reduced: bool
    bound_applies: bool  # reduced and cols >= rows*dim - 2*rows + 3 (+1 more if q = 2)
    closure: Space


def reflexivity_report(S: Space) -> ReflexReport:
    """Compute R(S) and cross-check it against the evaluation-image picture.

    Hard invariants (VerificationError on failure):
    - dim R(S) equals the K-dimension of the linear range-compatible maps
      on the evaluation image of S;
    - when the codimension bound applies (S reduced, with the evaluation
      image of codimension at most the sharp locality bound), S is reflexive.
    """
    closure = reflexive_closure(S)
    if not closure.contains_space(S):
        raise VerificationError("closure must contain the space")
    hat = hat_space(S)
    rc = rc_space(hat, "linear")
    if rc.Kdim != closure.dim:
        raise VerificationError(
            f"closure dim {closure.dim} != range-compatible dim {rc.Kdim} on the evaluation image")
    reduced = is_reduced(S)
    extra = 1 if S.field.q == 2 else 0
    bound_applies = reduced and S.cols >= S.rows * S.dim - 2 * S.rows + 3 + extra
    reflexive = closure.dim == S.dim
    if bound_applies and not reflexive:
        raise VerificationError("codimension bound satisfied but space not reflexive")
    return ReflexReport(
        rows=S.rows, cols=S.cols, dim=S.dim, dim_closure=closure.dim,
        reflexive=reflexive, reduced=reduced, bound_applies=bound_applies,
        closure=closure,
    )
