import math

import numpy as np
import pytest

from ballasy.exceptions import DomainError, UncoveredRegimeError
from ballasy.kernels import family
from ballasy.verifier import (REPRESENTATIVE, SweepPlan, default_radii, fit_boundary_exponent, run_sweep,
                              verdict, worker_count)


def test_radial_closed_form_sweep_is_flat():
    rep = run_sweep(family("PropA_I", 1, c=1))
    assert rep.summary["window"] <= 1.01
    assert verdict(rep, window_bound=2)
    assert rep.summary["slope"] == pytest.approx(-1, abs=1e-3)
    assert not rep.excluded_rows


@pytest.mark.parametrize("c", [0.5, 2.0])
def test_slope_examples(c):
    rep = run_sweep(family("PropA_I", 2, c=c))
    assert rep.summary["slope"] == pytest.approx(-c, abs=0.05)
    assert verdict(rep)


def test_bounded_case_slope_zero():
    rep = run_sweep(family("PropA_I", 1, c=-0.5))
    assert str(rep.case) == "A(1)"
    assert abs(rep.summary["slope"]) <= 0.05


def test_one_sided_lower_bound_pass():
    rep = run_sweep(family("L22", 1, t=1.6, r=0.4, k=-1))
    v = verdict(rep)
    assert v.one_sided and v.passed
    assert rep.summary["ratio_min"] >= 1 / 50


def test_shifted_rhs_fails_on_slope():
    rep = run_sweep(family("PropA_I", 1, c=1), rhs_shift=0.5)
    v = verdict(rep)
    assert not v.passed and not v.slope_ok
    assert any("slope" in s for s in v.reasons)


def test_diverging_ratio_fails_window():
    # a rate that is too strong by 0.5: the ratio decays like (1-|w|^2)^0.5 and never settles
    plan = SweepPlan(radii=default_radii(range(2, 20)))
    rep = run_sweep(family("PropA_I", 1, c=1), plan, rhs_shift=-0.5)
    v = verdict(rep)
    assert not v.window_ok and not v.stable and not v.passed
    assert rep.summary["window"] > 50


def test_parallel_equals_serial():
    fam = family("PropB", 2, delta=0, t=1.5, r=1, k=0)
    plan = SweepPlan(radii=default_radii(range(2, 8)), coupling="rotated",
                     directions=((1, 0), (1, 1j), (0.3, 1)))
    a = run_sweep(fam, plan, workers=1)
    b = run_sweep(fam, plan, workers=2)
    assert [r.lhs for r in a.rows] == [r.lhs for r in b.rows]
    assert len(a.rows) == 18


def test_worker_cap_from_env(monkeypatch):
    monkeypatch.setenv("BALL_ASY_THREADS", "2")
    assert worker_count(8) == 2
    assert worker_count(1) == 1
    assert worker_count(None) == 2


def test_poor_error_rows_are_excluded():
    plan = SweepPlan(radii=default_radii(range(2, 8)), coupling="fixed",
                     directions=((1, 0), (0.6, 0.8j)))
    rep = run_sweep(family("PropB", 2, delta=0, t=1.5, r=1.5, k=0), plan)
    for row in rep.rows:
        assert row.excluded == (not row.lhs_err <= 1e-3 * abs(row.lhs) or row.note.startswith("quad"))
    assert rep.excluded_rows == [r.index for r in rep.rows if r.excluded]


def test_uncovered_family_is_refused():
    with pytest.raises(UncoveredRegimeError):
        run_sweep(family("P32", 1, delta=0, t=1, r=3, k=1))


def test_plan_validation():
    with pytest.raises(DomainError):
        SweepPlan(radii=(0.9, 0.5))
    with pytest.raises(DomainError):
        SweepPlan(coupling="sideways")
    with pytest.raises(DomainError):
        run_sweep(family("PropA_J", 2, delta=0, t=0.5, c=0.5, k=0), SweepPlan(directions=((1,),)))


def test_log_rate_fit_divides_out_logs():
    rep = run_sweep(family("L21_I1", delta=0, c=0, k=0))
    slope, pred = fit_boundary_exponent(rep)
    assert pred == 0 and abs(slope) <= 0.1
    assert rep.summary["log_growth"] == pytest.approx(1, abs=0.2)


def test_representative_table_covers_every_case():
    seen = {case for _, case, _, _ in REPRESENTATIVE}
    expected = ({f"3.1({i})" for i in range(1, 5)} | {f"B({i})" for i in range(1, 10)}
                | {f"C({i})" for i in range(1, 9)} | {f"3.2({i})" for i in range(1, 4)}
                | {f"2.1({i})" for i in range(1, 5)})
    assert seen == expected
    from ballasy.asymptotics import classify
    for tag, case, by_n, _ in REPRESENTATIVE:
        for n, p in by_n.items():
            assert str(classify(family(tag, n=n, **p))) == case
