"""Reflexive closure against a raw enumeration oracle and the hat-space route."""

import itertools
import random

import pytest

from rangecompat.enumeration import random_space
from rangecompat.gf import field_make
from rangecompat.linalg import Mat, in_column_space
from rangecompat.rcmaps import rc_space
from rangecompat.reflexivity import (is_reduced, reflexive_closure,
                                     reflexivity_report)
from rangecompat.spaces import (all_vectors, full_space, hat_space,
                                named_space, space_make)


def brute_force_closure(S):
    """{g : g x in span(S x) for every x}, enumerating all g directly."""
    F = S.field
    n, p = S.rows, S.cols
    assert F.q ** (n * p) <= 1 << 14, "oracle ambient too large"
    spans = []
    for x in all_vectors(F, p):
        xc = Mat.column(F, list(x))
        cols = None
        for B in S.basis:
            v = B @ xc
            cols = v if cols is None else cols.hstack(v)
        spans.append((xc, cols))
    good = []
    for entries in itertools.product(F.elements(), repeat=n * p):
        g = Mat(F, n, p, tuple(entries))
        ok = True
        for xc, cols in spans:
            v = (g @ xc).col(0)
            if cols is None:
                if any(v):
                    ok = False
                    break
            elif not in_column_space(cols, v):
                ok = False
                break
        if ok:
            good.append(g)
    return space_make(F, n, p, good)


@pytest.mark.parametrize("p,k,n,cols", [(2, 1, 2, 3), (3, 1, 2, 2),
                                        (2, 1, 3, 2)])
def test_closure_matches_brute_force(p, k, n, cols):
    F = field_make(p, k)
    rng = random.Random(99)
    for _ in range(8):
        S = random_space(F, n, cols, rng.randrange(1, n * cols), rng)
        assert reflexive_closure(S) == brute_force_closure(S)


def test_closure_contains_and_idempotent(F4):
    rng = random.Random(5)
    for _ in range(10):
        S = random_space(F4, 3, 2, rng.randrange(1, 6), rng)
        R = reflexive_closure(S)
        assert all(R.contains(B) for B in S.basis)
        assert reflexive_closure(R) == R


def test_hat_space_correspondence(F3):
    # dim R(S) equals the K-dimension of the RC linear maps on the hat space
    rng = random.Random(17)
    for _ in range(15):
        S = random_space(F3, 2, 3, rng.randrange(1, 6), rng)
        R = reflexive_closure(S)
        H = hat_space(S)
        assert R.dim == rc_space(H, "linear").Kdim


def test_intro_U_not_reflexive(F3):
    S = named_space(F3, "intro_U")
    rep = reflexivity_report(S)
    assert rep.dim == 2 and rep.dim_closure == 3 and not rep.reflexive


def test_full_space_reflexive(F4):
    rep = reflexivity_report(full_space(F4, 2, 2))
    assert rep.reflexive


def test_is_reduced(F2):
    S = space_make(F2, 2, 2, [(1, 0, 0, 0)])   # second column always zero
    assert not is_reduced(S)
    assert is_reduced(full_space(F2, 2, 2))


def test_bound_implies_reflexive(F3):
    # reduced spaces with enough columns relative to dim are reflexive
    rng = random.Random(23)
    hit = 0
    for _ in range(60):
        S = random_space(F3, 2, 4, rng.randrange(1, 4), rng)
        rep = reflexivity_report(S)
        if rep.bound_applies:
            hit += 1
            assert rep.reflexive
    assert hit > 0
