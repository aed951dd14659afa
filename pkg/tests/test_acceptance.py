"""Acceptance gate: one PASS/FAIL line per criterion, printed even when output is captured."""

import math
import time

import numpy as np
import pytest

from ballasy.asymptotics import note1_forms, sup_bound_21
from ballasy.geometry import CPoint, mobius_array, random_ball_points
from ballasy.kernels import PointPair, eval_lhs, family
from ballasy.quadrature import QuadConfig
from ballasy.spaces import (SpaceParams, bergman_reproduce, constant, fpms_norm, make_fw, make_Gw, matched_nu,
                            monomial, multiplier_criteria, psi1, psi2, psi3, sup_grid)
from ballasy.verifier import SweepPlan, representative_plans, run_sweep, verdict
from ballasy.weights import NormalWeight, build_g, g_deriv_defect, g_eval_defect

TIGHT = QuadConfig(rel_tol=1e-12)


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nacceptance {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_criterion_01_geometry_identities(report):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    w11 = w12 = winv = 0.0
    for n in (1, 2, 3):
        A, Z, W = (random_ball_points(rng, n, 10_000, 0.999) for _ in range(3))
        for a, z, w in zip(A, Z, W):
            fz, fw = mobius_array(a, z), mobius_array(a, w)
            aa, zz = np.vdot(a, a).real, np.vdot(z, z).real
            w12 = max(w12, abs((1 - np.vdot(fz, fz).real) - (1 - aa) * (1 - zz) / abs(1 - np.vdot(a, z)) ** 2))
            rhs = (1 - aa) * (1 - np.vdot(w, z)) / ((1 - np.vdot(a, z)) * (1 - np.vdot(w, a)))
            w11 = max(w11, abs((1 - np.vdot(fw, fz)) - rhs))
            winv = max(winv, np.linalg.norm(mobius_array(a, fz) - z))
    dt = time.perf_counter() - t0
    ok = w11 <= 1e-12 and w12 <= 1e-12 and winv <= 1e-10 and dt < 5
    report(1, ok, f"residuals {w11:.1e}, {w12:.1e}; involution {winv:.1e}; {dt:.1f}s")


def test_criterion_02_closed_form_oracles(report):
    worst = 0.0
    for m in range(1, 14):
        r = 1 - 2.0 ** -m
        v = eval_lhs(family("PropA_I", 1, c=1), PointPair(CPoint((r,))), TIGHT).value
        worst = max(worst, abs(v * (1 - r * r) - 1))
    for rho in (0.1, 0.5, 0.9, 0.99, 1 - 2.0 ** -13):
        om = 1 - rho
        v1 = eval_lhs(family("L21_I1", delta=0, c=1, k=0), PointPair(rho=rho), TIGHT, one_minus_rho=om).value
        v0 = eval_lhs(family("L21_I1", delta=0, c=0, k=0), PointPair(rho=rho), TIGHT, one_minus_rho=om).value
        worst = max(worst, abs(v1 * om - 1), abs(v0 / (-math.log(om) / rho) - 1))
    report(2, worst <= 1e-8, f"worst relative error {worst:.1e}")


def test_criterion_03_exponent_fits(report):
    t0 = time.perf_counter()
    lines, ok = [], True
    for c in (0.5, 1.0, 2.0):
        for n in (1, 2):
            s = run_sweep(family("PropA_I", n, c=c)).summary["slope"]
            ok &= abs(s + c) <= 0.05
            lines.append(f"A(3) c={c} n={n}: {s:.3f}")
    for n in (1, 2):
        s = run_sweep(family("PropA_I", n, c=-0.5)).summary["slope"]
        ok &= abs(s) <= 0.05
        lines.append(f"A(1) n={n}: {s:.3f}")
    s = run_sweep(family("P31_G", 1, c=0.5, k=1)).summary["slope"]
    ok &= abs(s + 0.5) <= 0.1
    lines.append(f"3.1(2): {s:.3f}")
    dt = time.perf_counter() - t0
    report(3, ok and dt < 180, "; ".join(lines) + f"; {dt:.1f}s")


def test_criterion_04_ratio_windows(report):
    t0 = time.perf_counter()
    failed, count, widest = [], 0, 0.0
    for fam, case, plan in representative_plans():
        rep = run_sweep(fam, plan, workers=8)
        v = verdict(rep, window_bound=50)
        count += 1
        widest = max(widest, v.window)
        if not (v.passed and str(rep.case) == case):
            failed.append(f"{fam.describe()} {plan.coupling}: {v.reasons}")
    dt = time.perf_counter() - t0
    report(4, not failed and dt < 600,
           f"{count - len(failed)}/{count} sweeps pass, widest window {widest:.2f}, {dt:.1f}s"
           + ("" if not failed else "; failing: " + "; ".join(failed)))


def test_criterion_05_log_form_chain(report):
    rng = np.random.default_rng(505)
    P = random_ball_points(rng, 1, 200, 0.999)
    lower_bad = upper_bad = 0
    worst = 0.0
    M = None
    for w, a in P.reshape(100, 2, 1):
        L1, L2, M = note1_forms(CPoint(w), CPoint(a), 0.0, 3.0)
        lower_bad += L2 > L1 * (1 + 1e-12)
        upper_bad += L1 > (M + 1) * L2 * (1 + 1e-12)
        worst = max(worst, L2 / L1)
    ok = lower_bad == 0 and upper_bad == 0 and M == pytest.approx(1.0)
    report(5, ok, f"M = {M:.12g}; L2 <= L1 violated {lower_bad}/100 (max L2/L1 {worst:.4f}); "
                  f"L1 <= (M+1) L2 violated {upper_bad}/100")


def test_criterion_06_sup_bound(report):
    rng = np.random.default_rng(606)
    eps = rng.uniform(0, 3, 1000)
    eps[eps == 0] = 3.0
    ys = rng.uniform(-4, 4, 1000)
    bad = sum(sup > bound * (1 + 1e-12) for sup, bound in (sup_bound_21(e, y) for e, y in zip(eps, ys)))
    report(6, bad == 0, f"{1000 - bad}/1000 draws satisfy sup <= bound")


def test_criterion_07_lacunary_series(report):
    x = 2.0 ** -np.linspace(0, 20, 4001)
    ok, parts = True, []
    for alpha in (0.5, 1.0):
        mu = NormalWeight(alpha)
        m = np.exp(mu.log_from_defect(x * (2 - x)))
        stats = []
        for J in (40, 50):
            g = build_g(mu, J)
            gv, gd = g_eval_defect(g, x), g_deriv_defect(g, x)
            stats.append((np.min(m * gv), np.max(m * np.abs(gv)), np.max(x * m * gd)))
        (mn, mx, md), (_, mx50, md50) = stats
        ch = max(abs(mx50 / mx - 1), abs(md50 / md - 1))
        ok &= mn >= 0.2 and ch <= 0.05
        parts.append(f"alpha={alpha}: min {mn:.3f}, change {ch:.1e}")
    report(7, ok, "; ".join(parts))


def test_criterion_08_bergman_reproduction(report):
    rng = np.random.default_rng(808)
    Z = random_ball_points(rng, 1, 10, 0.95)
    worst = 0.0
    for f in (constant(1.0), monomial((1,)), monomial((2,))):
        for alpha in (0.0, 1.0):
            for z in Z:
                got, direct = bergman_reproduce(f, alpha, CPoint(tuple(z)))
                worst = max(worst, abs(got - direct))
    report(8, worst <= 1e-5, f"worst |reproduced - f(z)| = {worst:.1e} over 60 evaluations")


def test_criterion_09_test_functions(report):
    radii = (0.9, 0.99, 0.999)
    zero = all(make_fw(w, NormalWeight(1, 0, 0, 0.5, 1.5), 2, 1).value(w.array) == 0
               for w in (CPoint((r,)) for r in radii))
    parts, ok = [f"f_w(w) = 0: {zero}"], zero
    half = NormalWeight(0.5)
    fw = [fpms_norm(make_fw(CPoint((r,)), half, 2, 1), SpaceParams(2, 1, half, half, 1)) for r in radii]
    ok &= max(fw) / min(fw) <= 3
    parts.append(f"f_w ratio {max(fw) / min(fw):.3f}")
    # G_w regimes: beta > 0 with s < p, s = p, s > p, and beta <= 0; s from n = 1 + p(alpha - 1)
    for name, p, alpha, beta in (("beta>0 s<p", 2, 1.0, 1.0), ("beta>0 s=p", 1, 1.0, 1.0),
                                 ("beta>0 s>p", 0.5, 0.75, 1.0), ("beta<0", 2, 1.0, -1.0),
                                 ("beta=0", 2, 1.0, 0.0)):
        s = p * alpha + 1 - p
        mu = NormalWeight(alpha, beta)
        sp = SpaceParams(p, s, mu, mu, 1)
        vals = [fpms_norm(make_Gw(CPoint((r,)), beta), sp) for r in radii]
        ok &= max(vals) / min(vals) <= 3
        parts.append(f"G_w {name} ratio {max(vals) / min(vals):.3f}")
    report(9, ok, "; ".join(parts))


def test_criterion_10_counterexample_flags(report):
    mu = NormalWeight(1.0)
    sp = SpaceParams(2, 1, mu, matched_nu(mu, 1, 1, 2), 1)
    c1, c2, c3 = (multiplier_criteria(f, sp) for f in (psi1(), psi2(), psi3()))
    # refinement compares the published grids (m <= 12 against m <= 16), without the deep shell
    coarse = c2["3.12"].published_value
    fine = multiplier_criteria(psi2(), sp, sup_grid(1, 16, tangential=True, deep=True))["3.12"].published_value
    drift = abs(fine / coarse - 1)
    ok = c1["3.12"].diverges and c2["hinf"].diverges and c3["hinf"].diverges and drift <= 0.1
    report(10, ok, f"psi1 (3.12) flag {c1['3.12'].diverges}; sup|psi2| flag {c2['hinf'].diverges}; "
                   f"sup|psi3| flag {c3['hinf'].diverges}; psi2 (3.12) refinement drift {drift:.1%}")


def test_criterion_11_negative_control(report):
    caught = []
    for c in (0.5, 1.0, 2.0):
        for n in (1, 2):
            v = verdict(run_sweep(family("PropA_I", n, c=c), rhs_shift=0.5))
            caught.append(not v.slope_ok and not v.passed)
    report(11, all(caught), f"shifted right-hand side rejected in {sum(caught)}/{len(caught)} sweeps")
