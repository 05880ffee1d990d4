"""Verification suites: pass/fail accounting, determinism, budget handling."""

import pytest

from rangecompat.errors import BudgetError
from rangecompat.harness import (THEOREM_IDS, ScanConfig, TheoremReport,
                                 verify_theorem)
from rangecompat.io import dumps, report_to_json


def test_unknown_theorem_id():
    with pytest.raises(ValueError):
        verify_theorem("not-a-theorem")


def test_main_linear_exhaustive_small():
    cfg = ScanConfig(p=2, k=1, rows=3, cols=2, codim_max=2)
    rep = verify_theorem("main-linear", cfg)
    assert rep.checked == 715  # 1 + 63 + 651 subspaces of F2^6
    assert rep.failed == 0 and rep.ok


def test_first_classification_exhaustive_small():
    cfg = ScanConfig(p=2, k=1, rows=3, cols=2, codim_max=2)
    rep = verify_theorem("first-classification", cfg)
    assert rep.failed == 0 and rep.checked == 64  # codim <= n-2 = 1 gate


def test_second_classification_random_f4():
    cfg = ScanConfig(p=2, k=2, rows=3, cols=2, codim_max=3, mode="random",
                     seed=7, count=25)
    rep = verify_theorem("second-classification", cfg)
    assert rep.checked == 25 and rep.failed == 0


def test_fixed_suites_pass():
    for tid in ("symmetric", "K-local", "sharpness-dn", "sharpness-first"):
        rep = verify_theorem(tid)
        assert rep.failed == 0 and rep.checked > 0, tid
        if tid.startswith("sharpness"):
            assert len(rep.witnesses) == rep.checked


def test_k_local_has_type1_witness():
    rep = verify_theorem("K-local")
    assert any(w.get("label") == "K2" and w.get("verdict") == "type1"
               for w in rep.witnesses)


def test_adapted_and_three_vectors_random():
    cfg = ScanConfig(p=2, k=1, rows=3, cols=3, codim_max=3, mode="random",
                     seed=11, count=30)
    assert verify_theorem("adapted-dichotomy", cfg).failed == 0
    cfg2 = ScanConfig(p=2, k=1, rows=3, cols=3, codim_max=3, mode="random",
                      seed=5, count=10)
    assert verify_theorem("three-vectors", cfg2).failed == 0


def test_generalized_first_random():
    cfg = ScanConfig(p=2, k=2, rows=3, cols=2, mode="random", seed=3, count=10)
    rep = verify_theorem("generalized-first", cfg)
    assert rep.checked == 10 and rep.failed == 0


def test_reflexivity_bound_random():
    cfg = ScanConfig(p=3, k=1, rows=2, cols=4, codim_max=4, mode="random",
                     seed=2, count=20)
    assert verify_theorem("reflexivity-bound", cfg).failed == 0


def test_jobs_do_not_change_report_bytes():
    base = ScanConfig(p=2, k=1, rows=3, cols=2, codim_max=2)
    reports = []
    for jobs in (1, 2, 5):
        cfg = ScanConfig(p=2, k=1, rows=3, cols=2, codim_max=2, jobs=jobs)
        d = report_to_json(verify_theorem("main-linear", cfg))
        d["config"]["jobs"] = 1   # only the echoed config may differ
        reports.append(dumps(d))
    assert reports[0] == reports[1] == reports[2]


def test_seed_reproducibility():
    cfg = ScanConfig(p=2, k=2, rows=3, cols=2, codim_max=3, mode="random",
                     seed=19, count=15)
    a = dumps(report_to_json(verify_theorem("second-classification", cfg)))
    b = dumps(report_to_json(verify_theorem("second-classification", cfg)))
    assert a == b


def test_exhaustive_budget_refusal():
    cfg = ScanConfig(p=2, k=1, rows=3, cols=3, codim_max=3, budget=1000)
    with pytest.raises(BudgetError):
        verify_theorem("main-linear", cfg)


def test_timing_flag():
    cfg = ScanConfig(p=2, k=1, rows=2, cols=2, codim_max=1)
    rep = verify_theorem("main-linear", cfg, timing=True)
    assert rep.elapsed is not None and rep.elapsed >= 0
    rep2 = verify_theorem("main-linear", cfg)
    assert rep2.elapsed is None


def test_all_ids_registered():
    assert len(THEOREM_IDS) == 14
    assert len(set(THEOREM_IDS)) == 14
