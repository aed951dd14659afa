import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ballasy.asymptotics import (classify, eval_rhs, lookup_case, note1_constant, note1_forms,
                                 predicted_exponent, sup_bound_21, sup_x_eps_log)
from ballasy.exceptions import DomainError, UncoveredRegimeError
from ballasy.geometry import CPoint, mobius, random_ball_points
from ballasy.kernels import PointPair, family


def test_classify_examples():
    assert str(classify(family("PropA_I", 1, c=-0.5))) == "A(1)"
    cid = classify(family("PropB", 1, delta=0, t=1.5, r=1, k=0))
    assert str(cid) == "B(4)"
    assert cid.label == "B(4): t+r−δ>n+1>max{r−δ,t−δ}"
    assert str(classify(family("P31_G", 1, c=0, k=-1))) == "3.1(4)"
    assert classify(family("L22", 1, t=1.6, r=0.4, k=-1)).one_sided


def test_uncovered_regimes():
    with pytest.raises(UncoveredRegimeError):
        classify(family("P32", 1, delta=0, t=1, r=3, k=1))
    with pytest.raises(UncoveredRegimeError):
        classify(family("L21_I2", delta=0, c=1, k=0))
    with pytest.raises(UncoveredRegimeError):
        classify(family("PropB", 1, delta=0, t=0.5, r=2.5, k=0))  # mirror of B(6)


# independent restatement of the case conditions; each row is (index, predicate)
def b_table(d, t, r, n):
    N, T, R, S = n + 1, t - d, r - d, t + r - d
    return [(1, S < N), (2, S == N and t > 0 and r > 0), (3, T == N and N > R and r > 0),
            (4, S > N and N > max(R, T)), (5, T == N == R), (6, T > N > R), (7, T > N and R > N),
            (8, T > N and R == N), (9, T == N and r == 0)]


def c_table(t, r, n):
    s = t + r + n
    return [(1, s < 0), (2, s == 0), (3, t == 0 and r < 0 and s > 0), (4, s > 0 and r < 0 and t < 0),
            (5, t == 0 == r), (6, t > 0 > r), (7, t > 0 and r > 0), (8, t > 0 and r == 0)]


def p32_table(d, t, r, n):
    N, T, R, S = n + 1, t - d, r - d, t + r - d
    return [(1, S > N and N > max(T, R)), (2, T == N and N > R), (3, T > N and N > R)]


def check_against(table, fam):
    hits = [i for i, ok in table if ok]
    assert len(hits) <= 1, f"overlapping cases {hits} for {fam.describe()}"
    if hits:
        assert classify(fam).index == hits[0]
    else:
        with pytest.raises(UncoveredRegimeError):
            classify(fam)


HALF = [x / 2 for x in range(0, 13)]


@pytest.mark.parametrize("n", [1, 2])
def test_two_point_table_on_half_integer_lattice(n):
    for d, t, r in itertools.product((0.0, 0.5, 1.0), HALF, HALF):
        check_against(b_table(d, t, r, n), family("PropB", n, delta=d, t=t, r=r, k=1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_unweighted_two_point_table_on_quarter_lattice(n):
    grid = [x / 4 for x in range(-4 * n + 1, 9)]
    for t, r in itertools.product(grid, grid):
        check_against(c_table(t, r, n), family("PropC", n, t=t, r=r))


@pytest.mark.parametrize("n", [1, 2])
def test_log_weighted_two_point_table(n):
    for d, t, r in itertools.product((0.0, 0.5), HALF[1:], HALF[1:]):
        check_against(p32_table(d, t, r, n), family("P32", n, delta=d, t=t, r=r, k=1))


def test_case_totality_fuzz():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        n = int(rng.integers(1, 4))
        d = float(rng.choice([0.0, 0.5, rng.uniform(-0.9, 2)]))
        t, r = (float(rng.choice([rng.uniform(0, 6), round(rng.uniform(0, 6) * 2) / 2])) for _ in range(2))
        for fam in (family("PropB", n, delta=d, t=t, r=r, k=1.0),
                    family("P32", n, delta=d, t=t + 0.1, r=r + 0.1, k=1.0),
                    family("PropC", n, t=t - n + 0.01, r=r - n + 0.01)):
            try:
                cid = classify(fam)
            except UncoveredRegimeError:
                continue
            assert cid.index is not None


def test_radial_and_one_point_tables():
    assert str(classify(family("L21_I1", delta=0, c=0, k=-2))) == "2.1(1)"
    assert str(classify(family("L21_I1", delta=0, c=0.5, k=1))) == "2.1(2)"
    assert str(classify(family("L21_I2", delta=0, c=0, k=0))) == "2.1(3)"
    assert str(classify(family("L21_I1", delta=0, c=0, k=-1))) == "2.1(4)"
    assert str(classify(family("P31_F", 2, delta=0, c=0, k=-2))) == "3.1(1)"
    assert str(classify(family("P31_F", 2, delta=0, c=-1, k=5))) == "3.1(1)"
    assert str(classify(family("P31_G", 2, c=0.1, k=-3))) == "3.1(2)"
    assert str(classify(family("P31_G", 2, c=0, k=-0.5))) == "3.1(3)"


def test_eval_rhs_examples():
    w = CPoint((math.sqrt(0.75),))
    assert eval_rhs(family("PropA_I", 1, c=1), PointPair(w))[1] == pytest.approx(4)
    cid, v = eval_rhs(family("L21_I1", delta=0, c=0, k=0), PointPair(rho=0.5))
    assert str(cid) == "2.1(3)" and v == pytest.approx(1 + math.log(2))
    a = CPoint((0.2j,))
    assert eval_rhs(family("PropB", 1, delta=0, t=0.5, r=0.5, k=0), PointPair(w, a))[1] == 1


def test_eval_rhs_two_term_sum():
    w, a = CPoint((0.9,)), CPoint((0.5j,))
    fam = family("PropC", 1, t=0.5, r=0.25)
    n, t, r = 1, 0.5, 0.25
    wa = abs(1 - 0.9 * np.conj(0.5j))
    expected = (1 - 0.81) ** -t * wa ** -(n + r) + (1 - 0.25) ** -r * wa ** -(n + t)
    assert eval_rhs(fam, PointPair(w, a))[1] == pytest.approx(expected, rel=1e-13)


def test_eval_rhs_phi_factor_matches_mobius():
    w, a = CPoint((0.7, 0.1j)), CPoint((-0.2, 0.5))
    fam = family("PropC", 2, t=0, r=-0.5)  # C(3): |1-<w,a>|^-(n+r) log(e/|1-<w,phi_w(a)>|)
    phi = mobius(w, a).array
    wa = abs(1 - np.vdot(a.array, w.array))
    expected = wa ** -1.5 * math.log(math.e / abs(1 - np.vdot(phi, w.array)))
    assert eval_rhs(fam, PointPair(w, a))[1] == pytest.approx(expected, rel=1e-10)


def test_eval_rhs_needs_points():
    with pytest.raises(DomainError):
        eval_rhs(family("PropB", 1, delta=0, t=1.5, r=1, k=0), PointPair(CPoint((0.5,))))
    with pytest.raises(DomainError):
        eval_rhs(family("L21_I1", delta=0, c=0, k=0), PointPair(CPoint((0.5,))))


def test_rhs_positive_everywhere():
    rng = np.random.default_rng(4)
    fams = [family("PropB", 1, delta=0, t=t, r=r, k=1) for t in (0.5, 1, 2, 2.5, 3) for r in (0, 0.5, 1, 2, 3)]
    pts = random_ball_points(rng, 1, 400, 0.999999)
    for fam in fams:
        try:
            lookup_case(fam)
        except UncoveredRegimeError:
            continue
        for w, a in pts.reshape(-1, 2, 1):
            assert eval_rhs(fam, PointPair(CPoint(w), CPoint(a)))[1] > 0


def test_predicted_exponents():
    assert predicted_exponent(family("PropA_I", 1, c=0.7)) == -0.7
    assert predicted_exponent(family("PropA_I", 1, c=-0.7)) == 0.0
    fam = family("PropB", 1, delta=0, t=3, r=0.5, k=0)  # B(6)
    assert predicted_exponent(fam, "same") == pytest.approx(-1.5)
    assert predicted_exponent(fam, "fixed") == pytest.approx(-1.0)
    assert predicted_exponent(fam, "fixed", shift=0.5) == pytest.approx(-0.5)


def test_log_form_constant_examples():
    assert note1_constant(1.0) == pytest.approx(1.0)
    assert note1_constant(2.0) == pytest.approx(math.e / 2)
    w = CPoint((0.0,))
    L1, L2, M = note1_forms(w, w, 0.0, 3.0)
    assert L1 == pytest.approx(L2) and M == pytest.approx(1.0)
    with pytest.raises(DomainError):
        note1_forms(w, w, 0.0, 2.0)


def test_log_forms_provable_chain():
    # L1 <= (M+1) L2 always; in the other direction only L2 <= (1 + log 2) L1 is guaranteed,
    # because |1-<w,a>| / (1-|w|^2) can drop to 1/(1+|w|)
    rng = np.random.default_rng(11)
    P = random_ball_points(rng, 1, 20_000, 0.9999)
    for w, a in P.reshape(-1, 2, 1):
        L1, L2, M = note1_forms(CPoint(w), CPoint(a), 0.0, 3.0)
        assert L1 <= (M + 1) * L2 * (1 + 1e-12)
        assert L2 <= (1 + math.log(2)) * L1 * (1 + 1e-12)


def test_log_forms_literal_lower_chain_has_counterexamples():
    # w moderate, a close to the boundary away from w: the log factor for L2 exceeds the one for L1
    w, a = CPoint((-0.28141899 - 0.27493416j,)), CPoint((-0.39596569 - 0.88052284j,))
    L1, L2, _ = note1_forms(w, a, 0.0, 3.0)
    assert 1.05 * L1 < L2 <= (1 + math.log(2)) * L1


def test_sup_x_eps_log_examples():
    assert sup_x_eps_log(1.0, 0.0) == pytest.approx(2.0)
    assert sup_x_eps_log(1.0, 1.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        sup_x_eps_log(0.0, 1.0)


@settings(max_examples=1000, deadline=None)
@given(st.floats(1e-3, 3.0), st.floats(-4.0, 4.0))
def test_sup_bound_and_brute_force(eps, y):
    sup, bound = sup_bound_21(eps, y)
    assert 1.0 <= sup * (1 + 1e-12)
    assert sup <= bound * (1 + 1e-12)
    deep = -max(60.0, 4 * abs(y) / eps)
    u = np.linspace(math.log(2.0), deep, 40001)  # u = log x
    if y > 0 and 1 - y / eps < math.log(2.0):
        u = np.append(u, 1 - y / eps)
    brute = float(np.exp(np.max(eps * u + y * np.log(1 - u))))
    assert brute <= sup * (1 + 1e-9)
    assert sup <= brute * (1 + 1e-4) or sup == pytest.approx(brute, rel=1e-4)
