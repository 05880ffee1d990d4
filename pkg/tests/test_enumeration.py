"""Subspace enumeration: counts, uniqueness, determinism, budget guard."""

import itertools

import pytest

from rangecompat.enumeration import (DEFAULT_BUDGET, check_budget,
                                     count_subspaces, enumerate_subspaces,
                                     gaussian_binomial, random_spaces)
from rangecompat.errors import BudgetError
from rangecompat.gf import field_make
from rangecompat.linalg import Mat
from rangecompat.spaces import space_make


def test_gaussian_binomial_values():
    assert gaussian_binomial(9, 8, 2) == 511
    assert gaussian_binomial(9, 7, 2) == 43435
    assert gaussian_binomial(6, 5, 4) == 1365
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(5, 0, 3) == 1
    # symmetry [n k] = [n n-k]
    for n in range(7):
        for k in range(n + 1):
            assert gaussian_binomial(n, k, 3) == gaussian_binomial(n, n - k, 3)


def test_count_matches_enumeration(F2, F3):
    for F, rows, cols in ((F2, 2, 2), (F3, 2, 2), (F2, 3, 2)):
        N = rows * cols
        for d in range(N + 1):
            want = gaussian_binomial(N, d, F.q)
            got = list(enumerate_subspaces(F, rows, cols, dim=d))
            assert count_subspaces(F, rows, cols, dim=d) == want
            assert len(got) == len({S.basis for S in got}) == want
            for S in got:
                assert S.dim == d


def test_enumeration_is_exhaustive_brute_force(F2):
    """Independent oracle: all distinct spans of generator subsets of F2^(2x2)."""
    mats = [Mat(F2, 2, 2, e) for e in itertools.product(range(2), repeat=4)]
    seen = set()
    for r in range(5):
        for combo in itertools.combinations(mats[1:], r):
            S = space_make(F2, 2, 2, list(combo))
            seen.add(S.basis)
    total = sum(count_subspaces(F2, 2, 2, dim=d) for d in range(5))
    assert len(seen) == total == 67


def test_enumeration_order_deterministic(F4):
    a = [S.basis for S in enumerate_subspaces(F4, 2, 2, max_codim=1)]
    b = [S.basis for S in enumerate_subspaces(F4, 2, 2, max_codim=1)]
    assert a == b
    assert len(a) == 1 + gaussian_binomial(4, 3, 4)


def test_random_spaces_reproducible(F3):
    a = random_spaces(F3, 3, 2, count=20, seed=42, max_codim=3)
    b = random_spaces(F3, 3, 2, count=20, seed=42, max_codim=3)
    c = random_spaces(F3, 3, 2, count=20, seed=43, max_codim=3)
    assert [S.basis for S in a] == [S.basis for S in b]
    assert [S.basis for S in a] != [S.basis for S in c]
    assert all(S.codim <= 3 for S in a)


def test_budget_guard():
    check_budget(10, 100)
    with pytest.raises(BudgetError):
        check_budget(101, 100)
    assert DEFAULT_BUDGET >= 1 << 20
