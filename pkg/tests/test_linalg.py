"""Exact linear algebra against naive oracles, incl. the two GF(2) eliminations."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rangecompat import modp
from rangecompat.gf import field_make
from rangecompat.linalg import (FieldElim, Mat, complete_basis,
                                in_column_space, inverse, is_invertible,
                                nullspace, rank, rref, same_column_space,
                                solve)

from conftest import random_mat


def naive_matmul(F, A, B):
    out = []
    for i in range(A.rows):
        for j in range(B.cols):
            acc = 0
            for l in range(A.cols):
                acc = F.add(acc, F.mul(A.get(i, l), B.get(l, j)))
            out.append(acc)
    return Mat(F, A.rows, B.cols, tuple(out))


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_matmul_matches_naive(p, k, rng):
    F = field_make(p, k)
    for _ in range(25):
        r, m, c = rng.randrange(1, 5), rng.randrange(1, 5), rng.randrange(1, 5)
        A, B = random_mat(F, r, m, rng), random_mat(F, m, c, rng)
        assert A @ B == naive_matmul(F, A, B)


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (3, 1)])
def test_rank_nullity_and_nullspace(p, k, rng):
    F = field_make(p, k)
    for _ in range(30):
        A = random_mat(F, rng.randrange(1, 5), rng.randrange(1, 5), rng)
        ns = nullspace(A)
        assert rank(A) + len(ns) == A.cols
        for v in ns:
            assert (A @ v).is_zero


def test_rref_properties(F4, rng):
    for _ in range(20):
        A = random_mat(F4, 4, 3, rng)
        R, pivots = rref(A)
        assert rank(R) == rank(A) == len(pivots)
        # pivot columns are unit vectors in order
        for row_idx, j in enumerate(pivots):
            col = R.col(j)
            assert col[row_idx] == 1
            assert all(col[i] == 0 for i in range(R.rows) if i != row_idx)
        # row space unchanged: every row of A reduces to zero against R
        elim = FieldElim(F4, A.cols)
        for i in range(R.rows):
            elim.add_row(list(R.row(i)))
        for i in range(A.rows):
            assert elim.contains(A.row(i))


@pytest.mark.parametrize("p,k", [(3, 1), (2, 2), (2, 4)])
def test_inverse(p, k, rng):
    F = field_make(p, k)
    found = 0
    while found < 10:
        A = random_mat(F, 3, 3, rng)
        if not is_invertible(A):
            continue
        found += 1
        assert A @ inverse(A) == Mat.identity(F, 3)
        assert inverse(A) @ A == Mat.identity(F, 3)


def test_solve_and_column_space(F3, rng):
    for _ in range(30):
        A = random_mat(F3, 3, 2, rng)
        x = [rng.randrange(3), rng.randrange(3)]
        b = (A @ Mat.column(F3, x)).col(0)
        sol, kern = solve(A, b)
        assert sol is not None
        assert (A @ Mat.column(F3, sol)).col(0) == tuple(b)
        assert in_column_space(A, b)
        for v in kern:
            assert (A @ Mat.column(F3, v)).is_zero


def test_same_column_space(F2):
    A = Mat.from_rows(F2, [[1, 0], [0, 1], [0, 0]])
    B = Mat.from_rows(F2, [[1, 1], [1, 0], [0, 0]])
    C = Mat.from_rows(F2, [[1, 0], [0, 0], [0, 1]])
    assert same_column_space(A, B)
    assert not same_column_space(A, C)


def test_complete_basis(F4, rng):
    for _ in range(20):
        v = [rng.randrange(4) for _ in range(4)]
        if all(x == 0 for x in v):
            continue
        Q = complete_basis(F4, [v], 4)
        assert is_invertible(Q)
        assert Q.col(0) == tuple(v)


# -- dual-route GF(2) elimination check ---------------------------------------


def _rref_oracle_rows(p, rows, width):
    """Textbook RREF, coded independently of both production eliminations."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], p - 2, p) if p > 2 else 1
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] % p:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return [rows[i] for i in range(r)], pivots


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_gf2_bitpacked_vs_generic_vs_oracle(seed):
    rng = random.Random(seed)
    h, w = rng.randrange(1, 7), rng.randrange(1, 7)
    rows = [[rng.randrange(2) for _ in range(w)] for _ in range(h)]
    generic = modp.ModpElim(2, w)
    packed = modp.Gf2Elim(w)
    for row in rows:
        generic.add_row(list(row))
        packed.add_row(sum(b << j for j, b in enumerate(row)))
    want_rows, want_pivots = _rref_oracle_rows(2, rows, w)
    unpacked = [[(r >> j) & 1 for j in range(w)] for r in packed.basis()]
    assert generic.rank == packed.rank == len(want_pivots)
    assert sorted(generic.basis()) == sorted(want_rows)
    assert sorted(unpacked) == sorted(want_rows)
    assert generic.pivots() == packed.pivots() == want_pivots


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_modp_elim_vs_oracle_gf3(seed):
    rng = random.Random(seed)
    h, w = rng.randrange(1, 6), rng.randrange(1, 6)
    rows = [[rng.randrange(3) for _ in range(w)] for _ in range(h)]
    got_rows, got_pivots = modp.rref(3, rows, w)
    want_rows, want_pivots = _rref_oracle_rows(3, rows, w)
    assert got_rows == want_rows and got_pivots == want_pivots
