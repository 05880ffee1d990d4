"""Dense linear algebra over prime fields GF(p).

Rows are lists of ints in ``[0, p)``.  Everything is exact and
deterministic: pivots are always the leftmost nonzero column, rows are kept
fully reduced (RREF), and nullspace vectors are emitted in increasing order
of their free column.

For ``p == 2`` an equivalent bit-packed eliminator is provided; it is the
speed path for the large scans and is cross-checked against the generic one
in the test suite.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class ModpElim:
    """Incremental RREF accumulator over GF(p)."""

    def __init__(self, p: int, width: int) -> None:
        self.p = p
        self.width = width
        self.pivot_rows: dict[int, list[int]] = {}  # pivot column -> reduced row

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, row: Sequence[int]) -> list[int]:
        """Return *row* reduced against the accumulated rows."""
        p = self.p
        r = list(row)
        for col, prow in self.pivot_rows.items():
            c = r[col]
            if c:
                r = [(a - c * b) % p for a, b in zip(r, prow)]
        return r

    def add_row(self, row: Sequence[int]) -> bool:
        """Insert *row*; return True if it increased the rank."""
        p = self.p
        r = self.reduce(row)
        pivot = next((j for j, a in enumerate(r) if a), None)
        if pivot is None:
            return False
        inv = pow(r[pivot], p - 2, p)
        r = [(a * inv) % p for a in r]
        # Back-reduce existing rows so the accumulated set stays in RREF.
        for col, prow in self.pivot_rows.items():
            c = prow[pivot]
            if c:
                self.pivot_rows[col] = [(a - c * b) % p for a, b in zip(prow, r)]
        self.pivot_rows[pivot] = r
        return True

    def basis(self) -> list[list[int]]:
        """RREF rows ordered by pivot column."""
        return [self.pivot_rows[c] for c in sorted(self.pivot_rows)]

    def pivots(self) -> list[int]:
        return sorted(self.pivot_rows)

    def nullspace(self) -> list[list[int]]:
        """Kernel basis of the accumulated row system (rows as constraints).

        One vector per free column, in increasing column order; the vector
        has 1 at its free column.
        """
        p = self.p
        pivs = self.pivots()
        piv_set = set(pivs)
        out: list[list[int]] = []
        for free in range(self.width):
            if free in piv_set:
                continue
            v = [0] * self.width
            v[free] = 1
            for c in pivs:
                v[c] = (-self.pivot_rows[c][free]) % p
            out.append(v)
        return out


class Gf2Elim:
    """Bit-packed RREF accumulator over GF(2); rows are ints, bit j = column j."""

    def __init__(self, width: int) -> None:
        self.width = width
        self.pivot_rows: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, row: int) -> int:
        for col, prow in self.pivot_rows.items():
            if (row >> col) & 1:
                row ^= prow
        return row

    def add_row(self, row: int) -> bool:
        row = self.reduce(row)
        if row == 0:
            return False
        pivot = (row & -row).bit_length() - 1
        for col, prow in list(self.pivot_rows.items()):
            if (prow >> pivot) & 1:
                self.pivot_rows[col] = prow ^ row
        self.pivot_rows[pivot] = row
        return True

    def basis(self) -> list[int]:
        return [self.pivot_rows[c] for c in sorted(self.pivot_rows)]

    def pivots(self) -> list[int]:
        return sorted(self.pivot_rows)

    def nullspace(self) -> list[int]:
        pivs = self.pivots()
        piv_set = set(pivs)
        out: list[int] = []
        for free in range(self.width):
            if free in piv_set:
                continue
            v = 1 << free
            for c in pivs:
                if (self.pivot_rows[c] >> free) & 1:
                    v |= 1 << c
            out.append(v)
        return out


def rref(p: int, rows: Iterable[Sequence[int]], width: int) -> tuple[list[list[int]], list[int]]:
    """RREF of a row collection; returns (basis rows, pivot columns)."""
    elim = ModpElim(p, width)
    for r in rows:
        elim.add_row(r)
    return elim.basis(), elim.pivots()


def nullspace(p: int, rows: Iterable[Sequence[int]], width: int) -> list[list[int]]:
    elim = ModpElim(p, width)
    for r in rows:
        elim.add_row(r)
    return elim.nullspace()


def solve(
    p: int, rows: Sequence[Sequence[int]], rhs: Sequence[int]
) -> tuple[list[int] | None, list[list[int]]]:
    """Solve ``rows @ x = rhs`` over GF(p).

    Returns ``(particular, kernel_basis)``; *particular* is None when the
    system is inconsistent.  The particular solution is the canonical one
    with zeros at all free columns, reduced so it is the lexicographically
    smallest representative on the pivot columns.
    """
    if not rows:
        return [0] * 0, []
    width = len(rows[0])
    elim = ModpElim(p, width + 1)
    for r, b in zip(rows, rhs):
        elim.add_row(list(r) + [b % p])
    if width in elim.pivot_rows:
        return None, _strip_kernel(p, rows, width)
    part = [0] * width
    for c, prow in elim.pivot_rows.items():
        part[c] = prow[width] % p
    kern = _strip_kernel(p, rows, width)
    return part, kern


def _strip_kernel(p: int, rows: Sequence[Sequence[int]], width: int) -> list[list[int]]:
    elim = ModpElim(p, width)
    for r in rows:
        elim.add_row(r)
    return elim.nullspace()


def mat_vec(p: int, rows: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(r, x)) % p for r in rows]


def span_contains(p: int, basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    elim = ModpElim(p, len(v))
    for r in basis:
        elim.add_row(r)
    return all(a == 0 for a in elim.reduce(v))
