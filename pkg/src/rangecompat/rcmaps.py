"""Range-compatible maps on a matrix space.

A map F : S -> K^m is *range-compatible* when F(M) lies in the column space
of M for every M in S; it is *local* when F(M) = M x for a fixed vector x.
This module computes the full space of range-compatible maps of a given
flavor ("linear", "additive", or "semilinear:s" for the p^s-power
automorphism twist), decides locality, and builds the exceptional
(non-local) generators used by the classification results.

Maps are stored additively: a ``(k*m) x (k*d)`` matrix over the prime field,
whose coordinates are fixed to (stored GF(p)-basis of S) x (1, t, ...,
t^(k-1)) digit blocks.

Constraint generation groups by covectors: F is range-compatible iff
``y . F(M) = 0`` whenever ``y^T M = 0``, and for fixed y the set
``S_y = {M in S : y^T M = 0}`` is a subspace on which ``M -> y . F(M)`` is
additive, so one constraint per GF(p)-basis element of S_y per projective y
captures the whole system exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import modp
from .errors import BudgetError, DecompositionError, ShapeError
from .gf import AdditiveEndo, Field
from .linalg import FieldElim, Mat
from .spaces import Space, coprod, evaluate_span, project_mod, projective_reps

DEFAULT_BUDGET = 2**20

FLAVORS = ("linear", "additive")  # plus "semilinear:s"


def parse_flavor(flavor: str, field: Field) -> tuple[str, int]:
    """Normalize a flavor string; returns (kind, frobenius_power)."""
    if flavor == "linear":
        return "linear", 0
    if flavor == "additive":
        return "additive", 0
    if flavor.startswith("semilinear:"):
        s = int(flavor.split(":", 1)[1])
        if not 0 <= s < max(field.k, 1):
            raise ValueError(f"frobenius power {s} out of range for {field}")
        return "semilinear", s
    raise ValueError(f"unknown flavor {flavor!r}")


@dataclass(frozen=True)
class AdditiveMap:
    """An additive map S -> K^m in fixed GF(p) coordinates."""

    domain: Space
    target_rows: int
    matrix: tuple[tuple[int, ...], ...]

    @property
    def field(self) -> Field:
        return self.domain.field

    def flat(self) -> tuple[int, ...]:
        return tuple(x for row in self.matrix for x in row)

    def evaluate(self, M: Mat) -> tuple[int, ...]:
        """F(M) as a tuple of m field codes.  M must lie in the domain."""
        coords = self.domain.gfp_coords(M)
        if coords is None:
            raise ShapeError("matrix is not in the domain of the map")
        return self.evaluate_coords(coords)

    def evaluate_coords(self, coords: Sequence[int]) -> tuple[int, ...]:
        F = self.field
        p, k = F.p, F.k
        out = modp.mat_vec(p, self.matrix, coords)
        return tuple(F.from_digits(out[r * k : (r + 1) * k]) for r in range(self.target_rows))

    def images(self) -> list[tuple[int, ...]]:
        """Images of the domain's GF(p)-basis elements."""
        d = len(self.matrix[0]) if self.matrix else 0
        outs = []
        for g in range(d):
            e = [0] * d
            e[g] = 1
            outs.append(self.evaluate_coords(e))
        return outs

    def __add__(self, other: "AdditiveMap") -> "AdditiveMap":
        if self.domain != other.domain or self.target_rows != other.target_rows:
            raise ShapeError("map addition: domain/target mismatch")
        p = self.field.p
        mat = tuple(tuple((a + b) % p for a, b in zip(ra, rb))
                    for ra, rb in zip(self.matrix, other.matrix))
        return AdditiveMap(self.domain, self.target_rows, mat)

    def __neg__(self) -> "AdditiveMap":
        p = self.field.p
        return AdditiveMap(self.domain, self.target_rows,
                           tuple(tuple((-a) % p for a in row) for row in self.matrix))

    def __sub__(self, other: "AdditiveMap") -> "AdditiveMap":
        return self + (-other)

    def scale_gfp(self, c: int) -> "AdditiveMap":
        p = self.field.p
        return AdditiveMap(self.domain, self.target_rows,
                           tuple(tuple((c * a) % p for a in row) for row in self.matrix))

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for row in self.matrix for a in row)

    def is_klinear(self) -> bool:
        """True iff F(lam M) = lam F(M) for all lam (checked on t and a basis)."""
        F = self.field
        if F.k == 1:
            return True
        gb = self.domain.gfp_basis()
        t = F.gen
        for g in gb:
            lhs = self.evaluate(g.scale(t))
            rhs = tuple(F.mul(t, a) for a in self.evaluate(g))
            if lhs != rhs:
                return False
        return True

    def is_semilinear(self, s: int) -> bool:
        """True iff F(lam M) = lam^(p^s) F(M) for all lam."""
        F = self.field
        if F.k == 1:
            return True
        gb = self.domain.gfp_basis()
        t = F.gen
        ts = F.frobenius(t, s)
        for g in gb:
            lhs = self.evaluate(g.scale(t))
            rhs = tuple(F.mul(ts, a) for a in self.evaluate(g))
            if lhs != rhs:
                return False
        return True


def map_from_images(domain: Space, target_rows: int,
                    images: Sequence[Sequence[int]]) -> AdditiveMap:
    """Build an additive map from the images (K^m code tuples) of the GF(p)-basis."""
    F = domain.field
    k = F.k
    d = domain.gfp_dim
    if len(images) != d:
        raise ShapeError(f"need {d} images, got {len(images)}")
    mat = [[0] * d for _ in range(k * target_rows)]
    for g, img in enumerate(images):
        for r, code in enumerate(img):
            for j, dig in enumerate(F.digits(code)):
                mat[r * k + j][g] = dig
    return AdditiveMap(domain, target_rows, tuple(tuple(row) for row in mat))


def zero_map(domain: Space, target_rows: int) -> AdditiveMap:
    k = domain.field.k
    return AdditiveMap(domain, target_rows,
                       tuple((0,) * domain.gfp_dim for _ in range(k * target_rows)))


def eval_map(S: Space, x: Sequence[int]) -> AdditiveMap:
    """The local map M -> M x."""
    xc = Mat.column(S.field, list(x))
    images = [tuple((g @ xc).entries) for g in S.gfp_basis()]
    return map_from_images(S, S.rows, images)


# -- span of maps -------------------------------------------------------------


@dataclass(frozen=True)
class MapSpace:
    """A GF(p)-span of additive maps with a canonical (RREF) basis."""

    domain: Space
    flavor: str
    target_rows: int
    basis: tuple[AdditiveMap, ...]
    kdim: int
    Kdim: int | None

    def contains(self, F: AdditiveMap) -> bool:
        p = self.domain.field.p
        elim = modp.ModpElim(p, _flat_width(self.domain, self.target_rows))
        for B in self.basis:
            elim.add_row(B.flat())
        return all(a == 0 for a in elim.reduce(F.flat()))

    def coords(self, F: AdditiveMap) -> list[int] | None:
        """GF(p)-coordinates of F in the canonical basis, or None."""
        p = self.domain.field.p
        if not self.basis:
            return [] if F.is_zero else None
        rows = [list(B.flat()) for B in self.basis]
        part, _ = modp.solve(p, _transpose(rows), list(F.flat()))
        return part

    def maps(self):
        """Iterate all p^kdim maps in the span (lexicographic coefficient order)."""
        p = self.domain.field.p
        for coeffs in itertools.product(range(p), repeat=self.kdim):
            F = zero_map(self.domain, self.target_rows)
            for c, B in zip(coeffs, self.basis):
                if c:
                    F = F + B.scale_gfp(c)
            yield F


def _transpose(rows: list[list[int]]) -> list[list[int]]:
    return [list(col) for col in zip(*rows)]


def _flat_width(domain: Space, target_rows: int) -> int:
    k = domain.field.k
    return (k * target_rows) * domain.gfp_dim


def map_span(domain: Space, target_rows: int, maps: Iterable[AdditiveMap],
             flavor: str = "additive", Kdim: int | None = None) -> MapSpace:
    """Canonicalize a generating set of additive maps into a MapSpace."""
    p = domain.field.p
    width = _flat_width(domain, target_rows)
    vecs, _ = modp.rref(p, [list(F.flat()) for F in maps], width)
    basis = tuple(_map_from_flat(domain, target_rows, v) for v in vecs)
    return MapSpace(domain, flavor, target_rows, basis, len(basis), Kdim)


def _map_from_flat(domain: Space, target_rows: int, vec: Sequence[int]) -> AdditiveMap:
    k = domain.field.k
    d = domain.gfp_dim
    mat = tuple(tuple(vec[r * d : (r + 1) * d]) for r in range(k * target_rows))
    return AdditiveMap(domain, target_rows, mat)


# -- constraint assembly -------------------------------------------------------


def _sy_gfp_coords(S: Space, y: Sequence[int]) -> list[list[int]]:
    """GF(p)-coordinate basis of S_y = {M in S : y^T M = 0}."""
    F = S.field
    if S.scalars == "field":
        # Solve over K for coefficient vectors c with sum c_i (y^T B_i) = 0.
        d = S.dim
        elim = FieldElim(F, d)
        for j in range(S.cols):
            row = [_dot(F, y, B.col(j)) for B in S.basis]
            elim.add_row(row)
        out = []
        for c in elim.nullspace():
            # GF(p)-basis of the K-line spans: t^j * (sum c_i B_i)
            for j in range(F.k):
                tj = F.from_digits([0] * j + [1] + [0] * (F.k - 1 - j))
                coords: list[int] = []
                for ci in c:
                    coords.extend(F.digits(F.mul(tj, ci)))
                out.append(coords)
        return out
    # prime scalars: solve over GF(p) directly
    d = S.dim
    rows = []
    for j in range(S.cols):
        vals = [_dot(F, y, B.col(j)) for B in S.basis]
        for dig in range(F.k):
            rows.append([F.digits(v)[dig] for v in vals])
    return modp.nullspace(F.p, rows, d)


def _dot(F: Field, y: Sequence[int], v: Sequence[int]) -> int:
    acc = 0
    for a, b in zip(y, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def _y_hat(F: Field, y: Sequence[int]) -> list[list[int]]:
    """k x (k*len(y)) GF(p) matrix computing the digits of y . v from digits of v."""
    k = F.k
    blocks = [F.mul_matrix(a) for a in y]
    return [[blocks[i][r][s] for i in range(len(y)) for s in range(k)] for r in range(k)]


def rc_space(S: Space, flavor: str = "linear", budget: int = DEFAULT_BUDGET) -> MapSpace:
    """The space of all range-compatible maps S -> K^n of the given flavor.

    Always contains the local maps.  For "linear" the result is a K-space
    and ``Kdim`` is set; for "additive"/"semilinear:s" only the GF(p)
    dimension is meaningful.
    """
    kind, s = parse_flavor(flavor, S.field)
    if kind != "additive" and S.scalars == "prime":
        raise ShapeError("linear/semilinear flavors need field scalars")
    if kind == "linear":
        return _rc_space_linear(S)
    return _rc_space_additive(S, kind, s)


def _rc_space_linear(S: Space) -> MapSpace:
    """K-linear range-compatible maps, solved over K."""
    F = S.field
    n, d = S.rows, S.dim
    width = d * n  # unknown u[(i, r)] = F(B_i)_r, i major
    elim = FieldElim(F, width)
    for y in projective_reps(F, n):
        sy = FieldElim(F, d)
        for j in range(S.cols):
            sy.add_row([_dot(F, y, B.col(j)) for B in S.basis])
        for c in sy.nullspace():
            row = [0] * width
            for i, ci in enumerate(c):
                if ci:
                    for r, yr in enumerate(y):
                        if yr:
                            row[i * n + r] = F.mul(ci, yr)
            elim.add_row(row)
    gens: list[AdditiveMap] = []
    null = elim.nullspace()
    for u in null:
        images = []
        for g_index in range(d):
            base = u[g_index * n : (g_index + 1) * n]
            images.append(tuple(base))
        # extend K-linearly to the GF(p)-basis t^j B_i
        full_images = []
        for i in range(d):
            for j in range(F.k):
                tj = F.from_digits([0] * j + [1] + [0] * (F.k - 1 - j))
                full_images.append(tuple(F.mul(tj, a) for a in images[i]))
        gens.append(map_from_images(S, n, full_images))
        # GF(p)-span closure: also t * F for each K-basis map
        for j in range(1, F.k):
            tj = F.from_digits([0] * j + [1] + [0] * (F.k - 1 - j))
            scaled = [tuple(F.mul(tj, a) for a in img) for img in full_images]
            gens.append(map_from_images(S, n, scaled))
    Kdim = len(null)
    ms = map_span(S, S.rows, gens, flavor="linear", Kdim=Kdim)
    assert ms.kdim == Kdim * F.k
    return ms


def _rc_space_additive(S: Space, kind: str, s: int) -> MapSpace:
    F = S.field
    p, k = F.p, F.k
    n = S.rows
    dgf = S.gfp_dim  # number of matrix columns of an additive map
    width = (k * n) * dgf

    use_bits = p == 2
    elim2 = modp.Gf2Elim(width) if use_bits else None
    elimp = modp.ModpElim(p, width) if not use_bits else None

    def add_constraint(yhat_row: Sequence[int], mvec: Sequence[int]) -> None:
        if use_bits:
            mbits = 0
            for v, a in enumerate(mvec):
                if a:
                    mbits |= 1 << v
            row = 0
            for u, a in enumerate(yhat_row):
                if a:
                    row |= mbits << (u * dgf)
            elim2.add_row(row)  # type: ignore[union-attr]
        else:
            row = [0] * width
            for u, a in enumerate(yhat_row):
                if a:
                    for v, b in enumerate(mvec):
                        if b:
                            row[u * dgf + v] = (a * b) % p
            elimp.add_row(row)  # type: ignore[union-attr]

    for y in projective_reps(F, n):
        yhat = _y_hat(F, y)
        for mvec in _sy_gfp_coords(S, y):
            for r in range(k):
                add_constraint(yhat[r], mvec)

    if kind == "semilinear":
        ts = F.frobenius(F.gen, s) if k > 1 else 1
        rt = F.mul_matrix(ts)
        for g in range(dgf):
            mprime = _times_t_coords(S, g)
            for u in range(k * n):
                i, r = divmod(u, k)
                if use_bits:
                    row = 0
                    for v, b in enumerate(mprime):
                        if b:
                            row |= 1 << (u * dgf + v)
                    for ss in range(k):
                        if rt[r][ss]:
                            row ^= 1 << ((i * k + ss) * dgf + g)
                    elim2.add_row(row)  # type: ignore[union-attr]
                else:
                    row = [0] * width
                    for v, b in enumerate(mprime):
                        row[u * dgf + v] = b % p
                    for ss in range(k):
                        row[(i * k + ss) * dgf + g] = (row[(i * k + ss) * dgf + g]
                                                      - rt[r][ss]) % p
                    elimp.add_row(row)  # type: ignore[union-attr]

    if use_bits:
        null = elim2.nullspace()  # type: ignore[union-attr]
        vecs = [[(v >> i) & 1 for i in range(width)] for v in null]
    else:
        vecs = elimp.nullspace()  # type: ignore[union-attr]
    gens = [_map_from_flat(S, n, v) for v in vecs]
    return map_span(S, n, gens, flavor=("additive" if kind == "additive" else f"semilinear:{s}"))


def _times_t_coords(S: Space, g: int) -> list[int]:
    """GF(p)-coordinates of t * (g-th GF(p)-basis element) for field scalars."""
    F = S.field
    k = F.k
    if S.scalars != "field":
        raise ShapeError("scalar twist needs field scalars")
    i, j = divmod(g, k)
    out = [0] * S.gfp_dim
    if j + 1 < k:
        out[i * k + j + 1] = 1
    else:
        # t^k = -sum poly_c t^c
        for c, a in enumerate(F.poly):
            out[i * k + c] = (-a) % F.p
    return out


# -- locality ------------------------------------------------------------------


def local_space(S: Space) -> tuple[MapSpace, list[Mat]]:
    """The span of the local maps M -> M x, and a basis of the common kernel.

    The K-dimension of the span is cols - dim(common kernel).
    """
    F = S.field
    gens = []
    kern_elim = FieldElim(F, S.cols)
    for B in S.basis:
        for i in range(B.rows):
            kern_elim.add_row(B.row(i))
    for i in range(S.cols):
        for j in range(F.k):
            tj = F.from_digits([0] * j + [1] + [0] * (F.k - 1 - j))
            x = [tj if jj == i else 0 for jj in range(S.cols)]
            gens.append(eval_map(S, x))
    kern = [Mat.column(F, v) for v in kern_elim.nullspace()]
    Kdim = S.cols - len(kern)
    ms = map_span(S, S.rows, gens, flavor="additive", Kdim=Kdim)
    return ms, kern


def is_local(S: Space, F: AdditiveMap) -> tuple[int, ...] | None:
    """Witness x with F(M) = M x for all M, or None.

    Returns the lexicographically smallest witness (by integer element
    codes) when several exist.
    """
    fld = S.field
    p, k = fld.p, fld.k
    n, pc = S.rows, S.cols
    gb = S.gfp_basis()
    rows: list[list[int]] = []
    rhs: list[int] = []
    for gi, g in enumerate(gb):
        img = F.evaluate_coords([1 if t == gi else 0 for t in range(len(gb))])
        for r in range(n):
            mats = [fld.mul_matrix(g.get(r, j)) for j in range(pc)]
            for dig in range(k):
                row = [mats[j][dig][ss] for j in range(pc) for ss in range(k)]
                rows.append(row)
                rhs.append(fld.digits(img[r])[dig])
    part, kern = modp.solve(p, rows, rhs)
    if part is None:
        return None
    candidates = [part]
    if kern and p ** len(kern) <= 4096:
        candidates = []
        for coeffs in itertools.product(range(p), repeat=len(kern)):
            v = list(part)
            for c, kv in zip(coeffs, kern):
                v = [(a + c * b) % p for a, b in zip(v, kv)]
            candidates.append(v)
    best = min(tuple(fld.from_digits(v[j * k : (j + 1) * k]) for j in range(pc))
               for v in candidates)
    return best


# -- exact verification --------------------------------------------------------


def is_rc_map(S: Space, F: AdditiveMap) -> bool:
    """Exact range-compatibility check via the per-covector constraint system."""
    fld = S.field
    k = fld.k
    for y in projective_reps(fld, S.rows):
        yhat = _y_hat(fld, y)
        for mvec in _sy_gfp_coords(S, y):
            img = F.evaluate_coords(mvec)
            digs = [d for code in img for d in fld.digits(code)]
            for r in range(k):
                if sum(a * b for a, b in zip(yhat[r], digs)) % fld.p:
                    return False
    return True


def verify_rc_by_enumeration(S: Space, F: AdditiveMap, budget: int = DEFAULT_BUDGET) -> bool:
    """Brute-force check F(M) in im M over every element of S (budget-guarded)."""
    fld = S.field
    total = fld.p**S.gfp_dim
    if total > budget:
        raise BudgetError(f"enumerating {total} elements exceeds budget {budget}")
    from .linalg import in_column_space

    for M in S.elements():
        v = F.evaluate(M)
        if not in_column_space(M, v):
            return False
    return True


# -- exceptional generators ------------------------------------------------------


def exceptional_map(S: Space, kind: str, *, x: Sequence[int] | None = None,
                    alpha: AdditiveEndo | None = None, r: int | None = None,
                    budget: int = DEFAULT_BUDGET, verify: bool = True) -> AdditiveMap:
    """Build one of the non-local generator shapes.

    - kind="type1": requires ``dim Sx = 1``; the map M -> alpha(c(M)) w where
      M x = c(M) w and w spans S x.
    - kind="diag": the map M -> (alpha(m_11), ..., alpha(m_rr), 0, ...);
      alpha should be root-linear for range-compatibility on symmetric-type
      spaces.

    The result is verified range-compatible by full enumeration before it is
    returned (BudgetError if the domain is too large to enumerate).
    """
    fld = S.field
    if alpha is None:
        raise ValueError("alpha is required")
    if kind == "type1":
        if x is None:
            raise ValueError("type1 needs the witness vector x")
        span = evaluate_span(S, x)
        if span.dim != 1:
            raise DecompositionError(f"dim S x = {span.dim}, need 1")
        w = span.basis[0]  # canonical (monic) generator of the line
        widx = next(i for i, a in enumerate(w.entries) if a)
        xc = Mat.column(fld, list(x))
        images = []
        for g in S.gfp_basis():
            gx = g @ xc
            c = fld.div(gx.entries[widx], w.entries[widx])
            if gx != w.scale(c):
                raise DecompositionError("image of x escapes the line S x")
            images.append(tuple(w.scale(alpha(c)).entries))
        F = map_from_images(S, S.rows, images)
    elif kind == "diag":
        if r is None:
            r = min(S.rows, S.cols)
        images = []
        for g in S.gfp_basis():
            img = [alpha(g.get(i, i)) if i < r else 0 for i in range(S.rows)]
            images.append(tuple(img))
        F = map_from_images(S, S.rows, images)
    else:
        raise ValueError(f"unknown exceptional kind {kind!r}")
    if verify and not verify_rc_by_enumeration(S, F, budget=budget):
        raise DecompositionError("constructed map is not range-compatible on this space")
    return F


# -- projection and splitting -----------------------------------------------------


def project_map(S: Space, F: AdditiveMap, y: Sequence[int]) -> tuple[Space, AdditiveMap]:
    """The induced map F mod y on S mod y, with (F mod y)(pi o M) = pi(F(M)).

    Well-defined whenever F is range-compatible (images of matrices mapping
    into K y are multiples of y); raises DecompositionError otherwise.
    """
    fld = S.field
    Sp, pi = project_mod(S, y)
    gb = S.gfp_basis()
    d = len(gb)
    # GF(p)-linear map "compose with pi" from coords of S to coords of S mod y
    cols = []
    for gi, g in enumerate(gb):
        c = Sp.gfp_coords(pi @ g)
        assert c is not None
        cols.append(c)
    proj_rows = _transpose([list(c) for c in cols])  # (dgf of Sp) x d
    # images of a GF(p)-basis of S mod y through a section
    dgf_p = Sp.gfp_dim
    images = []
    for h in range(dgf_p):
        target = [1 if t == h else 0 for t in range(dgf_p)]
        sol, _ = modp.solve(fld.p, proj_rows, target)
        if sol is None:  # pragma: no cover - projection is surjective
            raise DecompositionError("projection is not surjective")
        img = F.evaluate_coords(sol)
        pim = pi @ Mat.column(fld, list(img))
        images.append(tuple(pim.entries))
    Fp = map_from_images(Sp, Sp.rows, images)
    # well-definedness: kernel of the projection must map into K y
    kern = modp.nullspace(fld.p, proj_rows, d)
    for c in kern:
        img = F.evaluate_coords(c)
        pim = pi @ Mat.column(fld, list(img))
        if not pim.is_zero:
            raise DecompositionError("map does not descend modulo y")
    return Sp, Fp


def split_map(A: Space, B: Space, F: AdditiveMap) -> tuple[AdditiveMap, AdditiveMap]:
    """Split F on coprod(A, B) into its unique restrictions f on A and g on B."""
    T = F.domain
    fld = T.field
    if (T.rows, T.cols) != (A.rows, A.cols + B.cols):
        raise ShapeError("domain is not the coproduct of the given spaces")
    zb = Mat.zero(fld, A.rows, B.cols)
    za = Mat.zero(fld, A.rows, A.cols)
    f = map_from_images(A, T.rows, [F.evaluate(a.hstack(zb)) for a in A.gfp_basis()])
    g = map_from_images(B, T.rows, [F.evaluate(za.hstack(b)) for b in B.gfp_basis()])
    return f, g


def join_map(A: Space, B: Space, f: AdditiveMap, g: AdditiveMap) -> AdditiveMap:
    """The map [a | b] -> f(a) + g(b) on coprod(A, B)."""
    T = coprod(A, B)
    fld = T.field
    images = []
    for M in T.gfp_basis():
        a = M.submatrix(range(A.rows), range(A.cols))
        b = M.submatrix(range(A.rows), range(A.cols, A.cols + B.cols))
        fa = f.evaluate(a)
        gb = g.evaluate(b)
        images.append(tuple(fld.add(u, v) for u, v in zip(fa, gb)))
    return map_from_images(T, T.rows, images)
