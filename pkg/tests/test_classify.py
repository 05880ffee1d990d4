"""Type detection, equivalence certificates, adapted vectors, decomposition."""

import random

import pytest

from rangecompat.classify import (adapted_exception_space, adapted_vectors,
                                  d_bound, decompose_rc,
                                  detect_adapted_exception, detect_type,
                                  equivalent_spaces, theorem_gate)
from rangecompat.enumeration import random_space
from rangecompat.errors import DecompositionError
from rangecompat.gf import field_make
from rangecompat.linalg import is_invertible
from rangecompat.rcmaps import is_local, local_space, rc_space
from rangecompat.spaces import act, full_space, named_space, space_make

from conftest import random_mat


def test_d_bound_values(F2, F3, F4):
    assert d_bound(F2, 3) == 2      # 2n - 4 when q = 2
    assert d_bound(F3, 3) == 3      # 2n - 3 otherwise
    assert d_bound(F4, 3) == 3
    assert d_bound(F2, 2) == 0
    assert d_bound(F4, 2) == 1


def test_theorem_gate(F3):
    S = named_space(F3, "intro_U")   # codim 2 > d_2 = 1
    g = theorem_gate(S)
    assert not g.within_main_linear and not g.within_first
    T = full_space(F3, 3, 3)
    gt = theorem_gate(T)
    assert gt.within_main_linear and gt.within_first and gt.within_second


@pytest.mark.parametrize("label,verdict", [("type1_canonical", "type1"),
                                           ("type2_canonical", "type2"),
                                           ("type3_canonical", "type3")])
def test_detect_type_canonical(F4, label, verdict):
    S = named_space(F4, label, n=3, p=3)
    rep = detect_type(S)
    assert rep.verdict == verdict
    assert rep.canonical_label == label or verdict == "type1"


def test_detect_type_none(F4):
    assert detect_type(full_space(F4, 3, 3)).verdict == "none"
    assert detect_type(named_space(F4, "K1")).verdict == "none"
    assert detect_type(named_space(F4, "K2")).verdict == "type1"


def test_detect_type_is_equivalence_invariant(F4, rng):
    S = named_space(F4, "type2_canonical", n=3, p=3)
    for _ in range(3):
        while True:
            P = random_mat(F4, 3, 3, rng)
            Q = random_mat(F4, 3, 3, rng)
            if is_invertible(P) and is_invertible(Q):
                break
        T = act(P, Q, S)
        rep = detect_type(T)
        assert rep.verdict == "type2"
        # certificate transports T back onto the canonical space
        Pc, Qc = rep.certificate
        C = named_space(F4, rep.canonical_label, n=3, p=3)
        assert act(Pc, Qc, T) == C


def test_equivalent_spaces_certificate(F3, rng):
    S = named_space(F3, "K3")
    while True:
        P, Q = random_mat(F3, 3, 3, rng), random_mat(F3, 2, 2, rng)
        if is_invertible(P) and is_invertible(Q):
            break
    T = act(P, Q, S)
    cert = equivalent_spaces(T, S)
    assert cert is not None
    assert act(cert[0], cert[1], T) == S
    assert equivalent_spaces(S, named_space(F3, "K2")) is None


def test_adapted_vectors_formula_cross_check(F4, rng):
    # cross_check=True re-derives codim(S mod y) independently and raises
    # on mismatch; surviving the call is the dual-route assertion
    r = random.Random(7)
    for _ in range(10):
        S = random_space(F4, 3, 2, r.randrange(1, 7), r)
        rep = adapted_vectors(S, cross_check=True)
        assert rep.cross_checked
        assert len(rep.entries) == (4**3 - 1) // 3


def test_adapted_exception_spaces(F3):
    for label in ("zero_coprod", "K1_coprod", "K2_coprod", "K3_coprod"):
        C = adapted_exception_space(F3, label, 3)
        hit = detect_adapted_exception(C)
        assert hit is not None and hit[0] == label
        # every vector of the canonical exception space is non-adapted
        rep = adapted_vectors(C)
        assert not rep.hyperplane_cover


def test_adapted_exception_transported(F3, rng):
    C = adapted_exception_space(F3, "K2_coprod", 3)
    while True:
        P, Q = random_mat(F3, 3, 3, rng), random_mat(F3, 3, 3, rng)
        if is_invertible(P) and is_invertible(Q):
            break
    T = act(P, Q, C)
    hit = detect_adapted_exception(T)
    assert hit is not None and hit[0] == "K2_coprod"
    assert act(hit[1], hit[2], T) == C


def test_decompose_rc_exact(F4):
    rng = random.Random(13)
    checked = 0
    for _ in range(40):
        S = random_space(F4, 3, 2, rng.randrange(3, 7), rng)
        if S.codim > 3:
            continue
        ms = rc_space(S, "additive")
        rep = detect_type(S)
        for B in ms.basis:
            dec = decompose_rc(S, B, rep)
            total = dec.local + dec.exceptional
            assert total.matrix == B.matrix
            assert is_local(S, dec.local) is not None
            checked += 1
    assert checked > 20


def test_decompose_rc_rejects_out_of_range(F3):
    S = named_space(F3, "intro_U")    # codim 2 > 2n-3 = 1: not covered
    ms = rc_space(S, "linear")
    loc, _ = local_space(S)
    bad = next(B for B in ms.basis if is_local(S, B) is None)
    with pytest.raises(DecompositionError):
        decompose_rc(S, bad)
