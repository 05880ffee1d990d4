"""Space construction, block constructors, duality, and the group action."""

import pytest

from rangecompat.gf import field_make
from rangecompat.linalg import Mat, is_invertible
from rangecompat.spaces import (Space, act, all_vectors, common_kernel, coprod,
                                evaluate_span, full_space, hat_space,
                                named_space, orthogonal, project_mod,
                                projective_reps, space_make, sum_spaces,
                                transpose_space, vee)

from conftest import random_mat, random_subspace


def test_space_make_is_canonical(F3, rng):
    for _ in range(15):
        S = random_subspace(F3, 2, 3, 3, rng)
        # regenerate from scaled/summed generators: same canonical object
        gens = [S.basis[0].scale(2), S.basis[1] + S.basis[0], S.basis[2],
                S.basis[2].scale(2) + S.basis[1]]
        assert space_make(F3, 2, 3, gens) == S


def test_full_space_dims(F4):
    S = full_space(F4, 3, 2)
    assert S.dim == 6 and S.codim == 0 and S.gfp_dim == 12


def test_vee_coprod_dims(F3):
    A = named_space(F3, "symmetric", n=2)
    B = full_space(F3, 2, 1)
    V = vee(A, B)
    assert (V.rows, V.cols) == (4, 3)
    # dim = dim A + dim B + full corner block rows(A) x cols(B)
    assert V.dim == A.dim + B.dim + 2 * 1
    C = coprod(A, B)
    assert (C.rows, C.cols) == (2, 3)
    assert C.dim == A.dim + B.dim


def test_orthogonal_duality(F4, rng):
    for _ in range(10):
        S = random_subspace(F4, 3, 2, rng.randrange(1, 6), rng)
        O = orthogonal(S)
        assert O.dim == S.codim
        assert orthogonal(O) == S
        for M in S.basis:
            for N in O.basis:    # N is p x n; tr(N M) = 0
                tr = 0
                P = N @ M
                for i in range(P.rows):
                    tr = F4.add(tr, P.get(i, i))
                assert tr == 0


def test_act_preserves_invariants(F3, rng):
    S = named_space(F3, "intro_U")
    while True:
        P, Q = random_mat(F3, 2, 2, rng), random_mat(F3, 2, 2, rng)
        if is_invertible(P) and is_invertible(Q):
            break
    T = act(P, Q, S)
    assert T.dim == S.dim and T.codim == S.codim
    mult_S = sorted(evaluate_span(S, x).dim for x in projective_reps(F3, 2))
    mult_T = sorted(evaluate_span(T, x).dim for x in projective_reps(F3, 2))
    assert mult_S == mult_T
    assert act(Mat.identity(F3, 2), Mat.identity(F3, 2), S) == S


@pytest.mark.parametrize("p,k,n", [(2, 1, 3), (3, 1, 2), (2, 2, 2)])
def test_projective_reps(p, k, n):
    F = field_make(p, k)
    reps = projective_reps(F, n)
    assert len(reps) == (F.q**n - 1) // (F.q - 1)
    seen = set()
    for y in reps:
        line = frozenset(tuple(F.mul(c, a) for a in y) for c in F.units())
        assert line not in seen
        seen.add(line)
    assert sum(1 for _ in all_vectors(F, n)) == F.q**n


def test_named_space_dims(F2, F3, F4):
    assert named_space(F2, "K1").dim == 6
    assert named_space(F2, "K2").dim == 3
    assert named_space(F2, "K3").dim == 3
    assert named_space(F2, "K4").dim == 3
    assert named_space(F3, "symmetric", n=3).dim == 6
    assert named_space(F3, "alternating", n=3).dim == 3
    assert named_space(F3, "intro_U").dim == 2
    U = named_space(F4, "type1_canonical", n=3, p=3)
    assert (U.rows, U.cols) == (3, 3) and U.codim == 2  # n - 1


def test_common_kernel(F2):
    S = named_space(F2, "K2")  # columns never mix: no common kernel
    assert common_kernel(S) == []
    padded = space_make(F2, 2, 2, [(1, 0, 0, 0), (0, 0, 1, 0)])
    ck = common_kernel(padded)
    assert len(ck) == 1 and ck[0].col(0) == (0, 1)


def test_project_mod_codim_formula(F3, rng):
    for _ in range(15):
        S = random_subspace(F3, 3, 2, rng.randrange(1, 6), rng)
        O = orthogonal(S)
        for y in projective_reps(F3, 3):
            Sm, _ = project_mod(S, y)
            assert Sm.rows == 2 and Sm.cols == 2
            assert Sm.codim == S.codim - evaluate_span(O, y).dim


def test_transpose_and_hat(F3):
    S = named_space(F3, "intro_U")
    T = transpose_space(S)
    assert (T.rows, T.cols) == (2, 2) and T.dim == 2
    assert transpose_space(T) == S
    H = hat_space(S)
    assert H.rows == S.cols and H.cols == S.dim


def test_sum_spaces(F2):
    A = space_make(F2, 2, 2, [(1, 0, 0, 0)])
    B = space_make(F2, 2, 2, [(0, 1, 0, 0)])
    assert sum_spaces(A, B).dim == 2
    assert sum_spaces(A, A) == A
