"""Range and kernel preservers between matrix spaces.

An operator map F : S -> Mat_{m,q} is *range-restricting* when
``im F(M) <= im M`` for every M in S, and a *range preserver* when the two
ranges are equal; *kernel-extending* and *kernel-preserving* maps reduce to
the range side through transposition (``F^T : N -> F(N^T)^T``).

Range-restricting maps form a GF(p)-space: localizing at each target column
gives a range-compatible map on S, and conversely any q-tuple of
range-compatible maps glues to a range-restricting map.  Range preservers do
not form a space; they are found by filtering the restricting space (with an
injectivity prefilter, since a range-preserving homomorphism is injective)
and classified by fitting exact normal forms:

- standard:         M -> [M 0] Q with Q invertible;
- padded standard:  [N 0] -> [N 0] Q when S has trailing zero columns;
- twisted-corner:   block form with an injective corner homomorphism R, for
                    subspaces of K vee Mat_{n-1,p-1};
- symmetric-diagonal: [M 0] + diagonal root-linear padding, for
                    Sym_r vee Mat_{n-r,p-r} in characteristic 2.

Every certificate is re-evaluated against the map it claims to describe;
a mismatch raises VerificationError.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import modp
from .classify import TypeReport, d_bound, detect_type
from .errors import BudgetError, ShapeError, VerificationError
from .gf import AdditiveEndo, endo_from_images, endo_space
from .linalg import (Mat, complete_basis, inverse, is_invertible, rank,
                     same_column_space)
from .rcmaps import (AdditiveMap, MapSpace, eval_map, is_local, is_rc_map,
                     map_from_images, rc_space, zero_map)
from .spaces import Space, act, common_kernel, full_space, transpose_space, vee

DEFAULT_BUDGET = 2**20


# -- operator-valued maps -------------------------------------------------------


@dataclass(frozen=True)
class OpMap:
    """A map S -> Mat_{tr,tc}(K) stored as an additive map into K^(tr*tc).

    Target matrices are flattened column-major: coordinate ``j*tr + i`` is
    the (i, j) entry, so column j of every value occupies one contiguous
    block and localizes to an additive map S -> K^tr.
    """

    domain: Space
    target_rows: int
    target_cols: int
    amap: AdditiveMap

    def __post_init__(self) -> None:
        if self.amap.target_rows != self.target_rows * self.target_cols:
            raise ShapeError("flattened target size mismatch")

    @property
    def field(self):
        return self.domain.field

    def flat(self) -> tuple[int, ...]:
        return self.amap.flat()

    def evaluate(self, M: Mat) -> Mat:
        v = self.amap.evaluate(M)
        tr, tc = self.target_rows, self.target_cols
        entries = tuple(v[j * tr + i] for i in range(tr) for j in range(tc))
        return Mat(self.field, tr, tc, entries)

    def column(self, j: int) -> AdditiveMap:
        """The localized additive map M -> (j-th column of F(M))."""
        k = self.field.k
        tr = self.target_rows
        block = self.amap.matrix[j * tr * k : (j + 1) * tr * k]
        return AdditiveMap(self.domain, tr, block)

    def columns(self) -> list[AdditiveMap]:
        return [self.column(j) for j in range(self.target_cols)]

    def is_klinear(self) -> bool:
        return self.amap.is_klinear()

    def is_semilinear(self, s: int) -> bool:
        return self.amap.is_semilinear(s)

    @property
    def is_zero(self) -> bool:
        return self.amap.is_zero

    def is_injective(self) -> bool:
        p = self.field.p
        d = self.domain.gfp_dim
        return not modp.nullspace(p, [list(r) for r in self.amap.matrix], d)


def op_from_columns(domain: Space, target_rows: int,
                    cols: Sequence[AdditiveMap]) -> OpMap:
    """Glue per-column additive maps S -> K^tr into one operator map."""
    for c in cols:
        if c.domain != domain or c.target_rows != target_rows:
            raise ShapeError("column map domain/target mismatch")
    matrix = tuple(row for c in cols for row in c.matrix)
    am = AdditiveMap(domain, target_rows * len(cols), matrix)
    return OpMap(domain, target_rows, len(cols), am)


def op_from_images(domain: Space, target_rows: int, target_cols: int,
                   images: Sequence[Mat]) -> OpMap:
    """Build an operator map from the images of the domain's GF(p)-basis."""
    flats = []
    for M in images:
        if (M.rows, M.cols) != (target_rows, target_cols):
            raise ShapeError("image shape mismatch")
        flats.append(tuple(M.get(i, j) for j in range(target_cols)
                           for i in range(target_rows)))
    am = map_from_images(domain, target_rows * target_cols, flats)
    return OpMap(domain, target_rows, target_cols, am)


def op_right_mult(S: Space, U: Mat) -> OpMap:
    """The map M -> M U."""
    if U.rows != S.cols:
        raise ShapeError("multiplier row count must match domain columns")
    cols = [eval_map(S, U.col(j)) for j in range(U.cols)]
    if not cols:
        return op_from_images(S, S.rows, 0, [Mat.zero(S.field, S.rows, 0)
                                             for _ in S.gfp_basis()])
    return op_from_columns(S, S.rows, cols)


def op_zero(S: Space, target_rows: int, target_cols: int) -> OpMap:
    am = zero_map(S, target_rows * target_cols)
    return OpMap(S, target_rows, target_cols, am)


# -- the space of range-restricting maps -----------------------------------------


@dataclass(frozen=True)
class OpMapSpace:
    """A GF(p)-span of operator maps (canonical per-column RREF basis)."""

    domain: Space
    flavor: str
    target_rows: int
    target_cols: int
    basis: tuple[OpMap, ...]
    kdim: int
    Kdim: int | None

    def element_count(self) -> int:
        return self.domain.field.p ** self.kdim

    def maps(self) -> Iterator[OpMap]:
        """Iterate all p^kdim maps in the span (lexicographic coefficients)."""
        p = self.domain.field.p
        for coeffs in itertools.product(range(p), repeat=self.kdim):
            am = zero_map(self.domain, self.target_rows * self.target_cols)
            for c, B in zip(coeffs, self.basis):
                if c:
                    am = am + B.amap.scale_gfp(c)
            yield OpMap(self.domain, self.target_rows, self.target_cols, am)


def range_restricting_space(S: Space, q: int, flavor: str = "linear",
                            budget: int = DEFAULT_BUDGET) -> OpMapSpace:
    """All range-restricting maps S -> Mat_{n,q} of the given flavor.

    Built columnwise: a map is range-restricting iff each of its q localized
    columns is range-compatible on S, so the GF(p)-dimension is exactly
    q times that of the range-compatible space.
    """
    if q < 0:
        raise ValueError("q must be non-negative")
    rc = rc_space(S, flavor, budget)
    n = S.rows
    zero = zero_map(S, n)
    basis = []
    for j in range(q):
        for B in rc.basis:
            cols = [B if jj == j else zero for jj in range(q)]
            basis.append(op_from_columns(S, n, cols))
    kdim = q * rc.kdim
    assert len(basis) == kdim
    Kdim = q * rc.Kdim if rc.Kdim is not None else None
    return OpMapSpace(S, flavor, n, q, tuple(basis), kdim, Kdim)


# -- preserving filters -----------------------------------------------------------


def transpose_dual(F: OpMap) -> OpMap:
    """The map N -> F(N^T)^T on the transposed domain.

    F is kernel-extending (resp. kernel-preserving) iff its dual is
    range-restricting (resp. range-preserving).
    """
    St = transpose_space(F.domain)
    images = [F.evaluate(g.T).T for g in St.gfp_basis()]
    return op_from_images(St, F.target_cols, F.target_rows, images)


def _kernel_equal(M: Mat, N: Mat) -> bool:
    from .linalg import nullspace as mat_nullspace

    if rank(M) != rank(N):
        return False
    return all((N @ v).is_zero for v in mat_nullspace(M))


def preserving_filter(S: Space, F: OpMap, mode: str = "range",
                      budget: int = DEFAULT_BUDGET) -> bool:
    """Decide whether F preserves ranges (or kernels) on every element of S.

    Kernel mode runs through the transpose duality and re-verifies the
    verdict directly on a sample of elements (VerificationError on any
    disagreement between the two routes).
    """
    if F.domain != S:
        raise ShapeError("filter domain mismatch")
    fld = S.field
    total = fld.p ** S.gfp_dim
    if total > budget:
        raise BudgetError(f"enumerating {total} elements exceeds budget {budget}")
    if mode == "range":
        if F.target_rows != S.rows:
            raise ShapeError("range mode needs matching row counts")
        return all(same_column_space(M, F.evaluate(M)) for M in S.elements())
    if mode == "kernel":
        if F.target_cols != S.cols:
            raise ShapeError("kernel mode needs matching column counts")
        dual = transpose_dual(F)
        verdict = preserving_filter(dual.domain, dual, "range", budget)
        direct = True
        for M in itertools.islice(S.elements(), 64):
            if not _kernel_equal(M, F.evaluate(M)):
                direct = False
                break
        if verdict and not direct:
            raise VerificationError("transpose duality disagrees with direct kernel check")
        if not verdict and direct and total <= 64:
            raise VerificationError("transpose duality disagrees with direct kernel check")
        return verdict
    raise ValueError(f"unknown mode {mode!r}")


# -- explicit preservers ------------------------------------------------------------


def standard_preserver(S: Space, q: int, Q: Mat,
                       budget: int = DEFAULT_BUDGET) -> OpMap:
    """The standard range preserver M -> [M 0] Q with Q in GL_q."""
    p = S.cols
    if q < p:
        raise ShapeError(f"target width {q} < domain width {p}")
    if (Q.rows, Q.cols) != (q, q) or not is_invertible(Q):
        raise ShapeError("Q must be an invertible q x q matrix")
    U = Q.submatrix(range(p), range(q))  # [M 0] Q = M . (first p rows of Q)
    F = op_right_mult(S, U)
    if S.field.p ** S.gfp_dim <= budget:
        if not preserving_filter(S, F, "range", budget):
            raise VerificationError("standard preserver failed the range filter")
    return F


def nonstandard_preserver(S: Space, m: int, q: int, F_list: Sequence[AdditiveMap],
                          budget: int = DEFAULT_BUDGET,
                          verify: bool = True) -> tuple[Space, OpMap, bool]:
    """Glue range-compatible maps on S into a range preserver on S vee Mat_{m,q}.

    With r = len(F_list) >= q >= 1, the result G sends the block matrix
    M = [[A, ?], [0, ?]] (A in S) to [M 0] padded to width p+r, plus the
    columns F_1(A), ..., F_r(A) inserted at positions p+1..p+r of the top
    block.  G preserves ranges whenever every F_i is range-compatible, and
    is standard iff every F_i is local (both directions are checked when
    verify is set).

    Returns (domain, G, standard).
    """
    r = len(F_list)
    if not 1 <= q <= r:
        raise ShapeError("need r >= q >= 1 column maps")
    fld = S.field
    n, p = S.rows, S.cols
    for Fi in F_list:
        if Fi.domain != S or Fi.target_rows != n:
            raise ShapeError("column maps must be K^n-valued maps on S")
        if not is_rc_map(S, Fi):
            raise VerificationError("a column map is not range-compatible")
    T = vee(S, full_space(fld, m, q))
    images = []
    for g in T.gfp_basis():
        A = g.submatrix(range(n), range(p))
        padded = g.hstack(Mat.zero(fld, n + m, r - q))
        extra = [[0] * (p + r) for _ in range(n + m)]
        for i, Fi in enumerate(F_list):
            col = Fi.evaluate(A)
            for row in range(n):
                extra[row][p + i] = col[row]
        images.append(padded + Mat.from_rows(fld, extra))
    G = op_from_images(T, n + m, p + r, images)
    locals_ok = all(is_local(S, Fi) is not None for Fi in F_list)
    standard, _ = is_standard(T, G, budget)
    if verify:
        if fld.p ** T.gfp_dim <= budget and not preserving_filter(T, G, "range", budget):
            raise VerificationError("glued map failed the range filter")
        if standard != locals_ok:
            raise VerificationError("standardness must match locality of the column maps")
    return T, G, standard


# -- normal-form fitting ------------------------------------------------------------


def _solve_params(p: int, param_flats: Sequence[Sequence[int]],
                  target: Sequence[int]):
    rows = [[pf[r] for pf in param_flats] for r in range(len(target))]
    return modp.solve(p, rows, list(target))


def _right_mult_params(S: Space, q: int) -> tuple[list[tuple[int, int, int]],
                                                  list[tuple[int, ...]]]:
    fld = S.field
    k = fld.k
    keys, flats = [], []
    for l in range(S.cols):
        for j in range(q):
            for dig in range(k):
                td = fld.from_digits([0] * dig + [1] + [0] * (k - 1 - dig))
                U = Mat.unit(fld, S.cols, q, l, j, td)
                keys.append((l, j, dig))
                flats.append(op_right_mult(S, U).flat())
    return keys, flats


def _coords_to_mat(fld, rows: int, cols: int, coords: Sequence[int]) -> Mat:
    """Digit coordinates in (row, col, digit) order -> matrix of field codes."""
    k = fld.k
    entries = []
    for l in range(rows):
        for j in range(cols):
            base = (l * cols + j) * k
            entries.append(fld.from_digits(coords[base : base + k]))
    return Mat(fld, rows, cols, tuple(entries))


def right_mult_fit(S: Space, F: OpMap,
                   budget: int = DEFAULT_BUDGET) -> tuple[Mat | None, list[Mat]]:
    """Solve F(M) = M U for U; returns (particular U, kernel basis) or (None, [])."""
    fld = S.field
    q = F.target_cols
    _, flats = _right_mult_params(S, q)
    part, kern = _solve_params(fld.p, flats, F.flat())
    if part is None:
        return None, []
    U0 = _coords_to_mat(fld, S.cols, q, part)
    kmats = [_coords_to_mat(fld, S.cols, q, v) for v in kern]
    return U0, kmats


def _best_rank_solution(fld, U0: Mat, kern: list[Mat], want: int,
                        budget: int) -> Mat | None:
    """A solution U0 + span(kern) of rank >= want, or None."""
    if rank(U0) >= want:
        return U0
    total = fld.p ** len(kern)
    if total > budget:
        raise BudgetError(f"{total} right-multiplier candidates exceed budget {budget}")
    for coeffs in itertools.product(range(fld.p), repeat=len(kern)):
        U = U0
        for c, Z in zip(coeffs, kern):
            if c:
                U = U + Z.scale(fld.scalar(c))
        if rank(U) >= want:
            return U
    return None


def _rows_completed_on_top(fld, lower_rows: list[Sequence[int]], q: int) -> Mat:
    """An invertible q x q matrix whose last rows are the given independent rows."""
    comp = complete_basis(fld, lower_rows, q)  # columns: given vectors, then fill
    cols = [comp.col(j) for j in range(q)]
    rows = cols[len(lower_rows):] + cols[: len(lower_rows)]
    Q = Mat.from_rows(fld, rows)
    assert is_invertible(Q)
    return Q


def is_standard(S: Space, F: OpMap,
                budget: int = DEFAULT_BUDGET) -> tuple[bool, Mat | None]:
    """Decide F(M) = [M 0] Q for some invertible Q; returns (verdict, Q)."""
    fld = S.field
    p, q = S.cols, F.target_cols
    if q < p:
        return False, None
    U0, kern = right_mult_fit(S, F, budget)
    if U0 is None:
        return False, None
    U = _best_rank_solution(fld, U0, kern, p, budget)
    if U is None:
        return False, None
    rows = [U.row(i) for i in range(p)]
    comp = complete_basis(fld, rows, q)
    Q = Mat.from_rows(fld, [comp.col(j) for j in range(q)])
    assert is_invertible(Q) and all(Q.row(i) == U.row(i) for i in range(p))
    _assert_cert(S, F, lambda M: M @ U)
    return True, Q


def _assert_cert(S: Space, F: OpMap, form) -> None:
    for g in S.gfp_basis():
        if F.evaluate(g) != form(g):
            raise VerificationError("certificate does not re-evaluate to the map")


# twisted-corner form, for subspaces of K vee Mat_{n-1,p-1} ------------------------


def _is_corner_shaped(S: Space) -> bool:
    """First column supported on the top entry only, not entirely zero."""
    if any(B.get(i, 0) for B in S.basis for i in range(1, S.rows)):
        return False
    return any(B.get(0, 0) for B in S.basis)


def _corner_params(S: Space, q: int):
    """Parameter maps for F(M) = M P + (top row J(m_11)): P digits, then J."""
    fld = S.field
    k = fld.k
    keys, flats = _right_mult_params(S, q)
    n = S.rows
    for j in range(q):
        for a in range(k):
            for b in range(k):
                emat = tuple(tuple(1 if (r, c) == (a, b) else 0 for c in range(k))
                             for r in range(k))
                endo = AdditiveEndo(fld, emat)
                images = []
                for g in S.gfp_basis():
                    img = Mat.unit(fld, n, q, 0, j, endo(g.get(0, 0))) \
                        if endo(g.get(0, 0)) else Mat.zero(fld, n, q)
                    images.append(img)
                keys.append(("J", j, a, b))
                flats.append(op_from_images(S, n, q, images).flat())
    return keys, flats


@dataclass(frozen=True)
class CornerForm:
    """F(M) = [[R(m11), L(M) + R'(m11)], [0, K(M)]] Q with R injective."""

    Q: Mat
    R_images: tuple[tuple[int, ...], ...]    # images of 1, t, ..., t^(k-1)
    Rp_images: tuple[tuple[int, ...], ...]
    R_injective: bool

    def R(self, fld, c: int) -> list[int]:
        return _hom_apply(fld, self.R_images, c)

    def Rp(self, fld, c: int) -> list[int]:
        return _hom_apply(fld, self.Rp_images, c)


def _hom_apply(fld, images: Sequence[Sequence[int]], c: int) -> list[int]:
    out = [0] * (len(images[0]) if images else 0)
    for d, dig in enumerate(fld.digits(c)):
        if dig:
            s = fld.scalar(dig)
            out = [fld.add(o, fld.mul(s, v)) for o, v in zip(out, images[d])]
    return out


def _hom_injective(fld, images: Sequence[Sequence[int]]) -> bool:
    return all(any(_hom_apply(fld, images, c)) for c in fld.elements() if c)


def corner_fit(S: Space, F: OpMap,
               budget: int = DEFAULT_BUDGET) -> CornerForm | None:
    """Fit the twisted-corner preserver form on a corner-shaped space."""
    fld = S.field
    n, p = S.rows, S.cols
    q = F.target_cols
    if q < p or not _is_corner_shaped(S):
        return None
    keys, flats = _corner_params(S, q)
    part, kern = _solve_params(fld.p, flats, F.flat())
    if part is None:
        return None
    k = fld.k
    nP = p * q * k
    P = _coords_to_mat(fld, p, q, part[:nP])
    # J images on 1, t, ..., t^(k-1): unknown ("J", j, a, b) contributes digit a
    # of column j of J(t^b)
    jcoef = part[nP:]
    J_images = []
    for b in range(k):
        row = []
        for j in range(q):
            digs = [jcoef[(j * k + a) * k + b] for a in range(k)]
            row.append(fld.from_digits(digs))
        J_images.append(tuple(row))
    # P must keep rank p-1 on its lower block for a genuine preserver
    P1_rows = [P.row(i) for i in range(1, p)]
    from .linalg import rref_rows

    vecs, _ = rref_rows(fld, P1_rows, q)
    if len(vecs) != p - 1:
        return None
    Q = _rows_completed_on_top(fld, P1_rows, q)
    Qi = inverse(Q)
    z = Mat(fld, 1, q, P.row(0)) @ Qi
    # rho(c) = c z + J(c) Q^{-1}; split at q-p+1 into (R, R')
    R_images, Rp_images = [], []
    for d in range(k):
        td = fld.from_digits([0] * d + [1] + [0] * (k - 1 - d))
        rho = (z.scale(td) + Mat(fld, 1, q, J_images[d]) @ Qi).entries
        R_images.append(tuple(rho[: q - p + 1]))
        Rp_images.append(tuple(rho[q - p + 1 :]))
    form = CornerForm(Q, tuple(R_images), tuple(Rp_images),
                      _hom_injective(fld, R_images))

    def reeval(M: Mat) -> Mat:
        c = M.get(0, 0)
        top = form.R(fld, c) + [fld.add(a, b) for a, b in
                                zip(M.row(0)[1:], form.Rp(fld, c))]
        rows = [top] + [[0] * (q - p + 1) + list(M.row(i)[1:]) for i in range(1, n)]
        return Mat.from_rows(fld, rows) @ Q

    _assert_cert(S, F, reeval)
    return form


# symmetric-diagonal form, for Sym_r vee Mat_{n-r,p-r} in characteristic 2 ----------


@dataclass(frozen=True)
class SymDiagForm:
    """F(M) = ([M 0] + [0_r | R(m_ii) stacked; 0]) Q with R root-linear."""

    r: int
    Q: Mat
    R_images: tuple[tuple[int, ...], ...]    # images of 1, t, ..., t^(k-1)
    R_rootlinear: bool

    def R(self, fld, c: int) -> list[int]:
        return _hom_apply(fld, self.R_images, c)


def _diag_params(S: Space, q: int, r: int):
    fld = S.field
    k = fld.k
    keys, flats = _right_mult_params(S, q)
    n = S.rows
    for j in range(q):
        for a in range(k):
            for b in range(k):
                emat = tuple(tuple(1 if (rr, c) == (a, b) else 0 for c in range(k))
                             for rr in range(k))
                endo = AdditiveEndo(fld, emat)
                images = []
                for g in S.gfp_basis():
                    rows = [[endo(g.get(i, i)) if (jj == j and i < r) else 0
                             for jj in range(q)] for i in range(n)]
                    images.append(Mat.from_rows(fld, rows))
                keys.append(("R", j, a, b))
                flats.append(op_from_images(S, n, q, images).flat())
    return keys, flats


def symdiag_fit(S: Space, F: OpMap, r: int,
                budget: int = DEFAULT_BUDGET) -> SymDiagForm | None:
    """Fit the symmetric-diagonal preserver form on Sym_r vee Mat_{n-r,p-r}."""
    fld = S.field
    n, p = S.rows, S.cols
    q = F.target_cols
    if q < p:
        return None
    keys, flats = _diag_params(S, q, r)
    part, kern = _solve_params(fld.p, flats, F.flat())
    if part is None:
        return None
    k = fld.k
    nP = p * q * k
    P = _coords_to_mat(fld, p, q, part[:nP])
    rcoef = part[nP:]
    raw_images = []
    for b in range(k):
        row = []
        for j in range(q):
            digs = [rcoef[(j * k + a) * k + b] for a in range(k)]
            row.append(fld.from_digits(digs))
        raw_images.append(tuple(row))
    if rank(P) != p:
        return None
    # invertible Q0 whose first p rows are the rows of P
    comp = complete_basis(fld, [P.row(i) for i in range(p)], q)
    cols = [comp.col(j) for j in range(q)]
    Q0 = Mat.from_rows(fld, cols[:p] + cols[p:])
    assert is_invertible(Q0) and all(Q0.row(i) == P.row(i) for i in range(p))
    Qi = inverse(Q0)
    # rho(c) = raw(c) Q0^{-1} = (alpha_1(c), ..., alpha_q(c))
    rho_images = [tuple((Mat(fld, 1, q, raw_images[d]) @ Qi).entries)
                  for d in range(k)]
    # express alpha_1..alpha_r through alpha_{p+1}..alpha_q over K
    endos = [endo_from_images(fld, [rho_images[d][j] for d in range(k)])
             for j in range(q)]
    X = [[0] * r for _ in range(q - p)]  # correction block, (q-p) x r over K
    for i in range(r):
        # solve endos[i] = sum_l mul(C_l) o endos[p+l] for C_l in K
        kk = k * k
        rows = [[0] * ((q - p) * k) for _ in range(kk)]
        for l in range(q - p):
            for d in range(k):
                td = fld.from_digits([0] * d + [1] + [0] * (k - 1 - d))
                contrib = [fld.mul(td, endos[p + l](fld.from_digits(
                    [1 if dd == col else 0 for dd in range(k)])))
                    for col in range(k)]
                for col in range(k):
                    for a, dig in enumerate(fld.digits(contrib[col])):
                        rows[col * k + a][l * k + d] = dig
        target = []
        for col in range(k):
            e = fld.from_digits([1 if dd == col else 0 for dd in range(k)])
            target.extend(fld.digits(endos[i](e)))
        sol, _ = modp.solve(fld.p, rows, target)
        if sol is None:
            return None
        for l in range(q - p):
            X[l][i] = fld.neg(fld.from_digits(sol[l * k : (l + 1) * k]))
    # Q1 = identity with X in the lower-left (rows p.., cols < r) block
    q1_rows = [[1 if i == j else 0 for j in range(q)] for i in range(q)]
    for l in range(q - p):
        for i in range(r):
            q1_rows[p + l][i] = X[l][i]
    Q1 = Mat.from_rows(fld, q1_rows)
    rho1_images = [tuple((Mat(fld, 1, q, rho_images[d]) @ Q1).entries)
                   for d in range(k)]
    if any(rho1_images[d][j] for d in range(k) for j in range(r)):
        return None
    R_images = tuple(tuple(rho1_images[d][r:]) for d in range(k))
    Qfinal = inverse(Q1) @ Q0
    rootlin = all(endo_from_images(fld, [R_images[d][j] for d in range(k)])
                  .is_rootlinear() for j in range(q - r))
    form = SymDiagForm(r, Qfinal, R_images, rootlin)

    def reeval(M: Mat) -> Mat:
        pad = M.hstack(Mat.zero(fld, n, q - p))
        extra = [[0] * r + (form.R(fld, M.get(i, i)) if i < r else [0] * (q - r))
                 for i in range(n)]
        return (pad + Mat.from_rows(fld, extra)) @ Qfinal

    _assert_cert(S, F, reeval)
    return form


# -- classification -----------------------------------------------------------------


@dataclass(frozen=True)
class PreserverEntry:
    op: OpMap
    twist: int                      # Frobenius power for semilinear flavor
    linear: bool
    kind: str                       # standard | padded-standard | twisted-corner
                                    # | symmetric-diagonal | unclassified
    U: Mat | None = None
    Q: Mat | None = None
    corner: CornerForm | None = None
    symdiag: SymDiagForm | None = None


@dataclass(frozen=True)
class PreserverReport:
    rows: int
    cols: int
    dim: int
    q: int
    flavor: str
    verdict: str                    # applicable family for this space
    mode: str                       # enumerated | fitted
    restricting_kdim: int
    count: int | None
    entries: tuple[PreserverEntry, ...]
    all_classified: bool
    exists: bool | None


def _trailing_zero_cols(S: Space) -> int:
    c = 0
    for j in range(S.cols - 1, -1, -1):
        if all(B.get(i, j) == 0 for B in S.basis for i in range(S.rows)):
            c += 1
        else:
            break
    return c


def _applicable_family(S: Space, trep: TypeReport) -> tuple[str, int | None]:
    """The classification family this space falls under, plus the rank r
    for the symmetric-diagonal family."""
    n = S.rows
    ck = common_kernel(S)
    if ck:
        if S.codim <= 2 * n - 3 and _trailing_zero_cols(S) >= 1:
            return "padded-standard", None
        return "out-of-range", None
    if trep.verdict == "none" and S.codim <= d_bound(S.field, n):
        return "standard", None
    if trep.verdict == "type1" and S.codim <= 2 * n - 3 and _is_corner_shaped(S):
        return "twisted-corner", None
    if trep.verdict == "type2":
        return "symmetric-diagonal", 2
    if trep.verdict == "type3":
        return "symmetric-diagonal", 3
    return "out-of-range", None


def _classify_entry(S: Space, op: OpMap, family: str, r: int | None,
                    trep: TypeReport, twist: int, budget: int) -> PreserverEntry:
    fld = S.field
    linear = op.is_klinear()
    std, Q = is_standard(S, op, budget)
    if std:
        return PreserverEntry(op, twist, linear, "standard", U=None, Q=Q)
    if family == "padded-standard":
        c = _trailing_zero_cols(S)
        U0, kern = right_mult_fit(S, op, budget)
        if U0 is not None:
            U = _best_rank_solution(fld, U0, kern, S.cols - c, budget)
            if U is not None:
                # certificate: invertible Q whose first p-c rows carry the action
                rows = [U.row(i) for i in range(S.cols - c)]
                from .linalg import rref_rows

                vecs, _ = rref_rows(fld, rows, op.target_cols)
                if len(vecs) == S.cols - c:
                    comp = complete_basis(fld, rows, op.target_cols)
                    Qc = Mat.from_rows(fld, [comp.col(j)
                                             for j in range(op.target_cols)])
                    _assert_cert(S, op, lambda M: M @ U)
                    return PreserverEntry(op, twist, linear, "padded-standard",
                                          U=U, Q=Qc)
    if family == "twisted-corner":
        form = corner_fit(S, op, budget)
        if form is not None:
            return PreserverEntry(op, twist, linear, "twisted-corner",
                                  Q=form.Q, corner=form)
    if family == "symmetric-diagonal":
        target = S
        op_t = op
        if trep.certificate is not None:
            P, Qc = trep.certificate
            target = act(P, Qc, S)
            Pi, Qci = inverse(P), inverse(Qc)
            images = [P @ op.evaluate(Pi @ g @ Qc) for g in target.gfp_basis()]
            op_t = op_from_images(target, op.target_rows, op.target_cols, images)
        form = symdiag_fit(target, op_t, r or 2, budget)
        if form is not None:
            return PreserverEntry(op, twist, linear, "symmetric-diagonal",
                                  Q=form.Q, symdiag=form)
    return PreserverEntry(op, twist, linear, "unclassified")


def _enumerate_preservers(S: Space, q: int, flavor: str,
                          budget: int) -> tuple[int, list[OpMap]]:
    restr = range_restricting_space(S, q, flavor, budget)
    total = restr.element_count()
    if total > budget:
        raise BudgetError(
            f"restricting space has {total} elements, over budget {budget}")
    if S.field.p ** S.gfp_dim > budget:
        raise BudgetError("domain too large to filter exhaustively")
    found = []
    for op in restr.maps():
        if not op.is_injective():
            continue
        if preserving_filter(S, op, "range", budget):
            found.append(op)
    return restr.kdim, found


def _sample_family(S: Space, q: int, family: str, r: int | None,
                   rng: random.Random) -> list[OpMap]:
    """A few members of the applicable preserver family, for spot checks."""
    fld = S.field
    p = S.cols
    out: list[OpMap] = []
    if family == "standard" and q >= p:
        for _ in range(3):
            while True:
                Q = Mat(fld, q, q, tuple(rng.randrange(fld.q)
                                         for _ in range(q * q)))
                if is_invertible(Q):
                    break
            out.append(standard_preserver(S, q, Q, budget=0))
    return out


def classify_preservers(S: Space, q: int, flavor: str = "linear",
                        budget: int = DEFAULT_BUDGET) -> PreserverReport:
    """Enumerate and classify the range preservers S -> Mat_{n,q}.

    Every preserver found is matched against the normal form of the family
    the space falls under (standard / padded-standard / twisted-corner /
    symmetric-diagonal), with exact certificates.  For the "semilinear"
    flavor the k Frobenius twists are each handled by a linear-algebra
    solve and the results are merged.

    When the restricting space is too large to enumerate, the report
    switches to fitted mode: sampled members of the applicable family are
    verified instead (no exhaustive count).
    """
    trep = detect_type(S, budget)
    family, r = _applicable_family(S, trep)
    flavors = ([(s, f"semilinear:{s}") for s in range(S.field.k)]
               if flavor == "semilinear" else [(0, flavor)])
    try:
        seen: dict[tuple[int, ...], tuple[int, OpMap]] = {}
        kdim = 0
        for twist, fl in flavors:
            kd, ops = _enumerate_preservers(S, q, fl, budget)
            kdim = max(kdim, kd)
            for op in ops:
                seen.setdefault(op.flat(), (twist, op))
        entries = tuple(_classify_entry(S, op, family, r, trep, twist, budget)
                        for twist, op in seen.values())
        count = len(entries)
        return PreserverReport(
            rows=S.rows, cols=S.cols, dim=S.dim, q=q, flavor=flavor,
            verdict=family, mode="enumerated", restricting_kdim=kdim,
            count=count, entries=entries,
            all_classified=all(e.kind != "unclassified" for e in entries),
            exists=count > 0,
        )
    except BudgetError:
        rng = random.Random(0)
        samples = _sample_family(S, q, family, r, rng)
        entries = tuple(_classify_entry(S, op, family, r, trep, 0, budget)
                        for op in samples)
        restr_kdim = q * rc_space(S, flavors[0][1], budget).kdim
        return PreserverReport(
            rows=S.rows, cols=S.cols, dim=S.dim, q=q, flavor=flavor,
            verdict=family, mode="fitted", restricting_kdim=restr_kdim,
            count=None, entries=entries,
            all_classified=all(e.kind != "unclassified" for e in entries),
            exists=bool(entries) or None,
        )
