"""Linear subspaces of n x p matrices over a small finite field.

A ``Space`` stores a canonical basis: the matrices are flattened row-major
and the stacked coefficient matrix is put in reduced row echelon form, so two
spaces are equal iff their canonical bases are identical tuples.

``scalars`` selects the coefficient ring of the span:
  - "field": a K-subspace (the default);
  - "prime": a subgroup, i.e. a subspace over the prime field GF(p) only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import modp
from .errors import ShapeError
from .gf import Field
from .linalg import (
    FieldElim,
    Mat,
    column_span_elim,
    inverse,
    rref_rows,
)


@dataclass(frozen=True)
class Space:
    field: Field
    rows: int
    cols: int
    scalars: str
    basis: tuple[Mat, ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        """Dimension over the chosen scalars (K for "field", GF(p) for "prime")."""
        return len(self.basis)

    @property
    def codim(self) -> int:
        """Codimension in Mat_{n,p}(K) over the chosen scalars."""
        ambient = self.rows * self.cols
        if self.scalars == "prime":
            ambient *= self.field.k
        return ambient - self.dim

    @property
    def gfp_dim(self) -> int:
        """Dimension as a group, i.e. over the prime field GF(p)."""
        return self.dim * (self.field.k if self.scalars == "field" else 1)

    @property
    def ambient_dim(self) -> int:
        return self.rows * self.cols

    def gfp_basis(self) -> list[Mat]:
        """GF(p)-basis of the underlying group.

        For field scalars this is ``t^j * B_i`` ordered with i major and j
        minor, matching the coordinate convention of additive maps.
        """
        if self.scalars == "prime":
            return list(self.basis)
        F = self.field
        out = []
        for B in self.basis:
            for j in range(F.k):
                out.append(B.scale(F.from_digits([0] * j + [1] + [0] * (F.k - 1 - j))))
        return out

    # -- membership and coordinates ----------------------------------------

    def coords(self, M: Mat) -> list[int] | None:
        """Coordinates of M in the stored basis, or None if M is not in the space.

        Field scalars: K-coordinates (one per basis matrix).  Prime scalars:
        GF(p)-coordinates (one per basis matrix).
        """
        if (M.rows, M.cols) != (self.rows, self.cols) or M.field != self.field:
            raise ShapeError("matrix shape/field does not match the space")
        if self.scalars == "field":
            vec = M.entries
            cs = [vec[piv] for piv in self.pivots]
            acc = Mat.zero(self.field, self.rows, self.cols)
            for c, B in zip(cs, self.basis):
                acc = acc + B.scale(c)
            return cs if acc == M else None
        vec = _gfp_vec(M)
        cs = [vec[piv] for piv in self.pivots]
        p = self.field.p
        acc = [0] * len(vec)
        for c, B in zip(cs, self.basis):
            bv = _gfp_vec(B)
            acc = [(a + c * b) % p for a, b in zip(acc, bv)]
        return cs if acc == list(vec) else None

    def contains(self, M: Mat) -> bool:
        return self.coords(M) is not None

    def contains_space(self, other: "Space") -> bool:
        return all(self.contains(B) for B in other.basis)

    def gfp_coords(self, M: Mat) -> list[int] | None:
        """GF(p)-coordinates of M in the ``gfp_basis`` ordering, or None."""
        cs = self.coords(M)
        if cs is None:
            return None
        if self.scalars == "prime":
            return cs
        F = self.field
        out: list[int] = []
        for c in cs:
            out.extend(F.digits(c))
        return out

    def from_gfp_coords(self, coords: Sequence[int]) -> Mat:
        acc = Mat.zero(self.field, self.rows, self.cols)
        for c, B in zip(coords, self.gfp_basis()):
            if c:
                acc = acc + B.scale(self.field.scalar(c))
        return acc

    def elements(self) -> Iterator[Mat]:
        """All elements, in lexicographic order of GF(p)-coordinates."""
        gb = self.gfp_basis()
        p = self.field.p
        m = len(gb)
        coords = [0] * m
        cur = Mat.zero(self.field, self.rows, self.cols)
        yield cur
        total = p**m
        for _ in range(total - 1):
            i = m - 1
            while True:
                coords[i] += 1
                cur = cur + gb[i]
                if coords[i] < p:
                    break
                coords[i] = 0
                i -= 1
            yield cur

    def __repr__(self) -> str:
        return (f"Space({self.field}, {self.rows}x{self.cols}, dim={self.dim}, "
                f"scalars={self.scalars})")


def _gfp_vec(M: Mat) -> tuple[int, ...]:
    """Row-major entries expanded to GF(p) digits (entry major, digit minor)."""
    F = M.field
    out: list[int] = []
    for e in M.entries:
        out.extend(F.digits(e))
    return tuple(out)


def space_make(
    field: Field,
    rows: int,
    cols: int,
    generators: Iterable[Mat] | Iterable[Sequence[int]],
    scalars: str = "field",
) -> Space:
    """Canonicalize a generating set into a ``Space``.

    Generators may be ``Mat`` objects or row-major entry sequences.
    """
    if scalars not in ("field", "prime"):
        raise ValueError(f"scalars must be 'field' or 'prime', got {scalars!r}")
    mats: list[Mat] = []
    for g in generators:
        if isinstance(g, Mat):
            if (g.rows, g.cols) != (rows, cols) or g.field != field:
                raise ShapeError("generator shape/field mismatch")
            mats.append(g)
        else:
            mats.append(Mat(field, rows, cols, tuple(int(x) for x in g)))
    if scalars == "field":
        basis_rows, pivots = rref_rows(field, [list(M.entries) for M in mats], rows * cols)
        basis = tuple(Mat(field, rows, cols, tuple(r)) for r in basis_rows)
    else:
        width = rows * cols * field.k
        vecs, pivots = modp.rref(field.p, [list(_gfp_vec(M)) for M in mats], width)
        basis = tuple(_mat_from_gfp_vec(field, rows, cols, v) for v in vecs)
    return Space(field, rows, cols, scalars, basis, tuple(pivots))


def _mat_from_gfp_vec(field: Field, rows: int, cols: int, vec: Sequence[int]) -> Mat:
    k = field.k
    entries = tuple(field.from_digits(vec[e * k : (e + 1) * k]) for e in range(rows * cols))
    return Mat(field, rows, cols, entries)


def full_space(field: Field, rows: int, cols: int) -> Space:
    gens = [Mat.unit(field, rows, cols, i, j) for i in range(rows) for j in range(cols)]
    return space_make(field, rows, cols, gens)


# -- projective vectors ------------------------------------------------------


def projective_reps(field: Field, n: int) -> list[tuple[int, ...]]:
    """Lexicographically smallest representative of every line of K^n.

    A representative is the vector on the line whose first nonzero
    coordinate is 1; they are returned in lexicographic order of the code
    tuple.
    """
    out = []
    for code in range(1, field.q**n):
        v, c = [], code
        for _ in range(n):
            v.append(c % field.q)
            c //= field.q
        v.reverse()
        first = next(x for x in v if x)
        if first == 1:
            out.append(tuple(v))
    return out


def all_vectors(field: Field, n: int) -> Iterator[tuple[int, ...]]:
    for code in range(field.q**n):
        v, c = [], code
        for _ in range(n):
            v.append(c % field.q)
            c //= field.q
        v.reverse()
        yield tuple(v)


# -- constructions ------------------------------------------------------------


def vee(A: Space, B: Space) -> Space:
    """The space of block matrices [[a, c], [0, b]], a in A, b in B, c arbitrary."""
    if A.field != B.field or A.scalars != "field" or B.scalars != "field":
        raise ShapeError("vee: needs two field-scalar spaces over the same field")
    F = A.field
    m, p, n, q = A.rows, A.cols, B.rows, B.cols
    R, C = m + n, p + q
    gens: list[Mat] = []
    for a in A.basis:
        M = [[0] * C for _ in range(R)]
        for i in range(m):
            for j in range(p):
                M[i][j] = a.get(i, j)
        gens.append(Mat.from_rows(F, M))
    for b in B.basis:
        M = [[0] * C for _ in range(R)]
        for i in range(n):
            for j in range(q):
                M[m + i][p + j] = b.get(i, j)
        gens.append(Mat.from_rows(F, M))
    for i in range(m):
        for j in range(q):
            gens.append(Mat.unit(F, R, C, i, p + j))
    return space_make(F, R, C, gens, A.scalars)


def coprod(A: Space, B: Space) -> Space:
    """The space of row-concatenations [a | b], a in A, b in B (same row count)."""
    if A.field != B.field or A.rows != B.rows or A.scalars != B.scalars:
        raise ShapeError("coprod: field/rows/scalars mismatch")
    F = A.field
    n, p, q = A.rows, A.cols, B.cols
    gens = [a.hstack(Mat.zero(F, n, q)) for a in A.basis]
    gens += [Mat.zero(F, n, p).hstack(b) for b in B.basis]
    return space_make(F, n, p + q, gens, A.scalars)


def named_space(field: Field, label: str, n: int | None = None, p: int | None = None) -> Space:
    """Construct one of the named example spaces.

    Labels: full, symmetric, alternating, type1_canonical, type2_canonical,
    type3_canonical, intro_U, intro_U_extended, f2_sharpness, K1, K2, K3,
    K4, diag_line.
    """
    F = field
    if label == "full":
        _need(n, p)
        return full_space(F, n, p)  # type: ignore[arg-type]
    if label == "symmetric":
        _need(n)
        gens = []
        for i in range(n):  # type: ignore[arg-type]
            for j in range(i, n):  # type: ignore[arg-type]
                M = Mat.unit(F, n, n, i, j)  # type: ignore[arg-type]
                if i != j:
                    M = M + Mat.unit(F, n, n, j, i)  # type: ignore[arg-type]
                gens.append(M)
        return space_make(F, n, n, gens)  # type: ignore[arg-type]
    if label == "alternating":
        _need(n)
        gens = [Mat.unit(F, n, n, i, j) - Mat.unit(F, n, n, j, i)  # type: ignore[arg-type]
                for i in range(n) for j in range(i + 1, n)]  # type: ignore[arg-type]
        return space_make(F, n, n, gens)  # type: ignore[arg-type]
    if label == "type1_canonical":
        _need(n, p)
        return vee(full_space(F, 1, 1), full_space(F, n - 1, p - 1))  # type: ignore[operator]
    if label in ("type2_canonical", "f2_sharpness"):
        _need(n, p)
        return vee(named_space(F, "symmetric", 2), full_space(F, n - 2, p - 2))  # type: ignore[operator]
    if label == "type3_canonical":
        _need(p)
        return coprod(named_space(F, "symmetric", 3), full_space(F, 3, p - 3))  # type: ignore[operator]
    if label == "intro_U":
        return space_make(F, 2, 2, [(1, 0, 0, 1), (0, 1, 0, 0)])
    if label == "intro_U_extended":
        _need(n, p)
        return vee(named_space(F, "intro_U"), full_space(F, n - 2, p - 2))  # type: ignore[operator]
    if label == "K1":
        gens = [Mat.unit(F, 3, 3, i, j) for i in range(3) for j in range(3) if i != j]
        return space_make(F, 3, 3, gens)
    if label == "K2":
        return space_make(F, 3, 2, [(1, 0, 0, 0, 0, 0), (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 1)])
    if label == "K3":
        return space_make(F, 3, 2, [(1, 0, 0, 0, 0, 0), (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 1)])
    if label == "K4":
        return space_make(F, 3, 2, [(0, 0, 1, 0, 0, 1), (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)])
    if label == "diag_line":
        _need(n)
        return space_make(F, n, 1, [(1,) * n])  # type: ignore[operator]
    raise ValueError(f"unknown space label {label!r}")


def _need(*args) -> None:
    if any(a is None for a in args):
        raise ValueError("this label needs explicit dimensions")


# -- operations ----------------------------------------------------------------


def act(P: Mat, Q: Mat, S: Space) -> Space:
    """The equivalent space P S Q^{-1} (P in GL_n, Q in GL_p)."""
    Qi = inverse(Q)
    return space_make(S.field, S.rows, S.cols, [P @ B @ Qi for B in S.basis], S.scalars)


def transpose_space(S: Space) -> Space:
    return space_make(S.field, S.cols, S.rows, [B.T for B in S.basis], S.scalars)


def orthogonal(S: Space) -> Space:
    """Trace-form orthogonal: {N in Mat_{p,n} : tr(N M) = 0 for all M in S}."""
    if S.scalars != "field":
        raise ShapeError("orthogonal is defined for field-scalar spaces")
    F = S.field
    n, p = S.rows, S.cols
    # Unknown N is p x n; tr(N M) = sum_{i,j} N[j,i] M[i,j].
    rows = []
    for B in S.basis:
        row = [0] * (p * n)
        for i in range(n):
            for j in range(p):
                row[j * n + i] = B.get(i, j)
        rows.append(row)
    elim = FieldElim(F, p * n)
    for r in rows:
        elim.add_row(r)
    gens = [Mat(F, p, n, tuple(v)) for v in elim.nullspace()]
    return space_make(F, p, n, gens)


def evaluate_span(S: Space, x: Sequence[int]) -> Space:
    """The column space S x = {M x : M in S}, as a space of n x 1 matrices."""
    xc = Mat.column(S.field, list(x))
    return space_make(S.field, S.rows, 1, [B @ xc for B in S.basis], S.scalars)


def common_kernel(S: Space) -> list[Mat]:
    """Basis of {x in K^p : M x = 0 for all M in S} (column vectors)."""
    elim = FieldElim(S.field, S.cols)
    for B in S.basis:
        for i in range(B.rows):
            elim.add_row(B.row(i))
    return [Mat.column(S.field, v) for v in elim.nullspace()]


def column_sum(S: Space) -> FieldElim:
    """Accumulated span of all images: sum of im(M) over M in S."""
    return column_span_elim(S.field, S.rows, S.basis)


def projection_mod(field: Field, y: Sequence[int]) -> Mat:
    """The canonical projection K^n -> K^(n-1) with kernel K y, as a matrix.

    The vector is scaled so its first nonzero coordinate (the pivot) is 1;
    the pivot coordinate is dropped and each remaining coordinate j maps to
    v_j - y_j v_pivot.
    """
    y = list(y)
    n = len(y)
    piv = next((i for i, a in enumerate(y) if a), None)
    if piv is None:
        raise ShapeError("projection_mod: y must be nonzero")
    c = field.inv(y[piv])
    y = [field.mul(c, a) for a in y]
    rows = []
    for j in range(n):
        if j == piv:
            continue
        row = [0] * n
        row[j] = 1
        row[piv] = field.neg(y[j])
        rows.append(row)
    return Mat.from_rows(field, rows)


def project_mod(S: Space, y: Sequence[int]) -> tuple[Space, Mat]:
    """The projected space S mod y = {pi o M : M in S} and the projection pi."""
    pi = projection_mod(S.field, y)
    gens = [pi @ B for B in S.basis]
    return space_make(S.field, S.rows - 1, S.cols, gens, S.scalars), pi


def hat_space(S: Space) -> Space:
    """Evaluation image: {x_hat : x in K^p} with x_hat = [B_1 x | ... | B_d x].

    The result lives in Mat_{n, dim S}; its columns are indexed by the
    stored basis of S.
    """
    F = S.field
    d = S.dim
    if d == 0:
        return space_make(F, S.rows, 0, [])
    gens = []
    for i in range(S.cols):
        x = Mat.column(F, [1 if j == i else 0 for j in range(S.cols)])
        cols = [B @ x for B in S.basis]
        M = cols[0]
        for c in cols[1:]:
            M = M.hstack(c)
        gens.append(M)
    if not gens:
        return space_make(F, S.rows, d, [])
    return space_make(F, S.rows, d, gens)


def sum_spaces(A: Space, B: Space) -> Space:
    if (A.rows, A.cols, A.field, A.scalars) != (B.rows, B.cols, B.field, B.scalars):
        raise ShapeError("sum: space mismatch")
    return space_make(A.field, A.rows, A.cols, list(A.basis) + list(B.basis), A.scalars)
