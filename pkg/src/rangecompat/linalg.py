"""Exact dense matrices and Gaussian elimination over a small finite field.

``Mat`` is an immutable matrix of integer element codes.  The elimination
routines are deterministic: leftmost pivots, full reduction, and canonical
(RREF) output, so equal row spans always produce identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ShapeError
from .gf import Field


@dataclass(frozen=True)
class Mat:
    """An immutable rows x cols matrix with row-major integer entries."""

    field: Field
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rows(field: Field, rows: Sequence[Sequence[int]]) -> "Mat":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ShapeError("ragged rows")
        return Mat(field, r, c, tuple(x for row in rows for x in row))

    @staticmethod
    def zero(field: Field, rows: int, cols: int) -> "Mat":
        return Mat(field, rows, cols, (0,) * (rows * cols))

    @staticmethod
    def identity(field: Field, n: int) -> "Mat":
        return Mat(field, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def unit(field: Field, rows: int, cols: int, i: int, j: int, value: int = 1) -> "Mat":
        e = [0] * (rows * cols)
        e[i * cols + j] = value
        return Mat(field, rows, cols, tuple(e))

    @staticmethod
    def column(field: Field, values: Sequence[int]) -> "Mat":
        return Mat(field, len(values), 1, tuple(values))

    # -- access ------------------------------------------------------------

    def get(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    # -- arithmetic ----------------------------------------------------------

    def _check_same_shape(self, other: "Mat") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols) or self.field != other.field:
            raise ShapeError("shape or field mismatch")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same_shape(other)
        add = self.field.add_table
        return Mat(self.field, self.rows, self.cols,
                   tuple(add[a][b] for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same_shape(other)
        F = self.field
        return Mat(F, self.rows, self.cols,
                   tuple(F.sub(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Mat":
        neg = self.field.neg_table
        return Mat(self.field, self.rows, self.cols, tuple(neg[a] for a in self.entries))

    def scale(self, c: int) -> "Mat":
        mul = self.field.mul_table[c]
        return Mat(self.field, self.rows, self.cols, tuple(mul[a] for a in self.entries))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows or self.field != other.field:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        F = self.field
        add, mul = F.add_table, F.mul_table
        out = []
        for i in range(self.rows):
            ri = self.entries[i * self.cols : (i + 1) * self.cols]
            for j in range(other.cols):
                acc = 0
                for t, a in enumerate(ri):
                    if a:
                        acc = add[acc][mul[a][other.entries[t * other.cols + j]]]
                out.append(acc)
        return Mat(F, self.rows, other.cols, tuple(out))

    @property
    def T(self) -> "Mat":
        return Mat(self.field, self.cols, self.rows,
                   tuple(self.entries[i * self.cols + j]
                         for j in range(self.cols) for i in range(self.rows)))

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows or self.field != other.field:
            raise ShapeError("hstack: row count mismatch")
        ent = []
        for i in range(self.rows):
            ent.extend(self.row(i))
            ent.extend(other.row(i))
        return Mat(self.field, self.rows, self.cols + other.cols, tuple(ent))

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols or self.field != other.field:
            raise ShapeError("vstack: column count mismatch")
        return Mat(self.field, self.rows + other.rows, self.cols, self.entries + other.entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat(self.field, len(rows), len(cols),
                   tuple(self.get(i, j) for i in rows for j in cols))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"Mat({self.field}, [{body}])"


# -- elimination over the field -------------------------------------------


class FieldElim:
    """Incremental RREF accumulator over the field (rows are code lists)."""

    def __init__(self, field: Field, width: int) -> None:
        self.field = field
        self.width = width
        self.pivot_rows: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, row: Sequence[int]) -> list[int]:
        F = self.field
        sub, mul = F.sub, F.mul_table
        r = list(row)
        for col, prow in self.pivot_rows.items():
            c = r[col]
            if c:
                mc = mul[c]
                r = [sub(a, mc[b]) for a, b in zip(r, prow)]
        return r

    def add_row(self, row: Sequence[int]) -> bool:
        F = self.field
        r = self.reduce(row)
        pivot = next((j for j, a in enumerate(r) if a), None)
        if pivot is None:
            return False
        inv = F.inv(r[pivot])
        mi = F.mul_table[inv]
        r = [mi[a] for a in r]
        for col, prow in self.pivot_rows.items():
            c = prow[pivot]
            if c:
                mc = F.mul_table[c]
                self.pivot_rows[col] = [F.sub(a, mc[b]) for a, b in zip(prow, r)]
        self.pivot_rows[pivot] = r
        return True

    def basis(self) -> list[list[int]]:
        return [self.pivot_rows[c] for c in sorted(self.pivot_rows)]

    def pivots(self) -> list[int]:
        return sorted(self.pivot_rows)

    def nullspace(self) -> list[list[int]]:
        F = self.field
        pivs = self.pivots()
        piv_set = set(pivs)
        out = []
        for free in range(self.width):
            if free in piv_set:
                continue
            v = [0] * self.width
            v[free] = 1
            for c in pivs:
                v[c] = F.neg(self.pivot_rows[c][free])
            out.append(v)
        return out

    def contains(self, row: Sequence[int]) -> bool:
        return all(a == 0 for a in self.reduce(row))


def rref_rows(field: Field, rows: Iterable[Sequence[int]], width: int) -> tuple[list[list[int]], list[int]]:
    elim = FieldElim(field, width)
    for r in rows:
        elim.add_row(r)
    return elim.basis(), elim.pivots()


def rank(M: Mat) -> int:
    elim = FieldElim(M.field, M.cols)
    for i in range(M.rows):
        elim.add_row(M.row(i))
    return elim.rank


def rref(M: Mat) -> tuple[Mat, list[int]]:
    basis, pivots = rref_rows(M.field, M.row_lists(), M.cols)
    basis += [[0] * M.cols] * (M.rows - len(basis))
    return Mat.from_rows(M.field, basis) if basis else Mat.zero(M.field, 0, M.cols), pivots


def nullspace(M: Mat) -> list[Mat]:
    """Basis of {x : M x = 0}, as column matrices, deterministic order."""
    elim = FieldElim(M.field, M.cols)
    for i in range(M.rows):
        elim.add_row(M.row(i))
    return [Mat.column(M.field, v) for v in elim.nullspace()]


def left_nullspace(M: Mat) -> list[list[int]]:
    """Basis of {y : y^T M = 0}, as coefficient lists of length M.rows."""
    elim = FieldElim(M.field, M.rows)
    for j in range(M.cols):
        elim.add_row(M.col(j))
    return elim.nullspace()


def solve(A: Mat, b: Sequence[int]) -> tuple[list[int] | None, list[list[int]]]:
    """Solve A x = b.  Returns (particular or None, kernel basis vectors)."""
    F = A.field
    elim = FieldElim(F, A.cols + 1)
    for i in range(A.rows):
        elim.add_row(list(A.row(i)) + [b[i]])
    kern_elim = FieldElim(F, A.cols)
    for i in range(A.rows):
        kern_elim.add_row(A.row(i))
    kern = kern_elim.nullspace()
    if A.cols in elim.pivot_rows:
        return None, kern
    part = [0] * A.cols
    for c, prow in elim.pivot_rows.items():
        part[c] = prow[A.cols]
    return part, kern


def in_column_space(M: Mat, v: Sequence[int]) -> bool:
    """True iff the column vector v lies in the column space of M."""
    elim = FieldElim(M.field, M.rows)
    for j in range(M.cols):
        elim.add_row(M.col(j))
    return elim.contains(list(v))


def is_invertible(M: Mat) -> bool:
    return M.rows == M.cols and rank(M) == M.rows


def inverse(M: Mat) -> Mat:
    if M.rows != M.cols:
        raise ShapeError("only square matrices are invertible")
    F = M.field
    n = M.rows
    elim = FieldElim(F, 2 * n)
    for i in range(n):
        elim.add_row(list(M.row(i)) + [1 if j == i else 0 for j in range(n)])
    if elim.pivots()[:n] != list(range(n)):
        raise ShapeError("matrix is singular")
    basis = elim.basis()
    return Mat.from_rows(F, [row[n:] for row in basis])


def column_span_elim(field: Field, width: int, mats: Iterable[Mat]) -> FieldElim:
    """Accumulate the columns of the given matrices (as length-*width* vectors)."""
    elim = FieldElim(field, width)
    for M in mats:
        for j in range(M.cols):
            elim.add_row(list(M.col(j)))
    return elim


def same_column_space(A: Mat, B: Mat) -> bool:
    ea = column_span_elim(A.field, A.rows, [A])
    eb = column_span_elim(B.field, B.rows, [B])
    if ea.rank != eb.rank:
        return False
    return all(ea.contains(list(B.col(j))) for j in range(B.cols))


def complete_basis(field: Field, vectors: Sequence[Sequence[int]], n: int) -> Mat:
    """Invertible n x n matrix whose first columns are the given vectors.

    The remaining columns are the standard basis vectors that keep the
    collection independent, chosen in increasing index order (deterministic).
    """
    elim = FieldElim(field, n)
    cols: list[list[int]] = []
    for v in vectors:
        if not elim.add_row(v):
            raise ShapeError("complete_basis: given vectors are dependent")
        cols.append(list(v))
    for i in range(n):
        if len(cols) == n:
            break
        e = [1 if j == i else 0 for j in range(n)]
        if elim.add_row(e):
            cols.append(e)
    return Mat.from_rows(field, cols).T
