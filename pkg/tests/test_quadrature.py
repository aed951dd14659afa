import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ballasy.exceptions import DimensionError, DomainError, QuadratureError
from ballasy.geometry import CPoint
from ballasy.quadrature import (QuadConfig, RadialWeight, integrate_ball, integrate_circle,
                                integrate_disc, integrate_radial, integrate_sphere,
                                periodic_trapezoid)


def test_config_validation():
    with pytest.raises(DomainError):
        QuadConfig(rel_tol=0)
    with pytest.raises(DomainError):
        QuadConfig(mc_samples=10)
    with pytest.raises(DomainError):
        QuadConfig(abs_tol=-1)


@pytest.mark.parametrize("f,exact", [
    (lambda r: r, 0.5),
    (lambda r: (1 - r) ** -0.5, 2.0),
    (lambda r: 1 / (1 - 0.5 * r), 2 * math.log(2)),
    (lambda r: r ** -0.5 * np.log(np.e / r), 6.0),
    (lambda r: (1 - r) ** 0.3 * r ** -0.9, math.gamma(1.3) * math.gamma(0.1) / math.gamma(1.4)),
])
def test_radial_closed_forms(f, exact):
    res = integrate_radial(f)
    assert res.value == pytest.approx(exact, rel=1e-8)
    assert res.method == "adaptive"
    assert 0 <= res.error_estimate <= 1e-6 * abs(exact)


def test_radial_complement_variable_near_peak():
    # int_0^1 (1 - rho r)^-2 dr = 1/(1 - rho) with 1 - rho = 1e-10, in x = 1 - r
    om = 1e-10
    rho = 1 - om
    res = integrate_radial(lambda x: (om + rho * x) ** -2.0, complement=True, scale=om)
    assert res.value == pytest.approx(1 / om, rel=1e-8)


def test_radial_non_integrable_raises():
    with pytest.raises(QuadratureError):
        integrate_radial(lambda r: 1 / (1 - r))


def test_radial_non_convergence_carries_partial():
    cfg = QuadConfig(rel_tol=1e-15, max_subdivisions=1)
    with pytest.raises(QuadratureError) as err:
        integrate_radial(lambda r: np.sin(200 * r) ** 2, cfg)
    assert err.value.partial is not None


@pytest.mark.parametrize("f", [lambda r: np.exp(r), lambda r: (1 - r) ** -0.7,
                               lambda r: np.log(np.e / r) ** 2])
def test_refinement_is_within_reported_error(f):
    prev = integrate_radial(f, QuadConfig(rel_tol=1e-6))
    for tol in (5e-7, 2.5e-7, 1.25e-7):
        cur = integrate_radial(f, QuadConfig(rel_tol=tol))
        assert abs(cur.value - prev.value) <= prev.error_estimate + 1e-15
        prev = cur


@pytest.mark.parametrize("n", [1, 2, 3])
def test_normalisation(n):
    one = lambda Z: np.ones(Z.shape[:-1])  # noqa: E731
    assert integrate_sphere(one, n).value == pytest.approx(1, abs=1e-10)
    assert integrate_ball(one, n).value == pytest.approx(1, abs=1e-10)
    base = CPoint((0.5,) + (0,) * (n - 1))
    assert integrate_sphere(one, n, slice_base=base).value == pytest.approx(1, abs=1e-10)
    assert integrate_ball(one, n, slice_base=base).value == pytest.approx(1, abs=1e-10)


def test_circle_kernel_closed_form():
    w = CPoint((0.5j,))
    f = lambda X: np.abs(1 - X @ np.conj(w.array)) ** -2.0  # noqa: E731
    assert integrate_sphere(f, 1, slice_base=w).value == pytest.approx(4 / 3, rel=1e-8)
    assert integrate_sphere(f, 1).value == pytest.approx(4 / 3, rel=1e-8)


def test_circle_peaked_integrand():
    x = 1e-9
    w = 1 - x
    res = integrate_circle(lambda th: np.abs(1 - w * np.exp(1j * th)) ** -2.0,
                           peaks=[(0.0, x)], cfg=QuadConfig(rel_tol=1e-10))
    assert res.value == pytest.approx(1 / (1 - w * w), rel=1e-8)


def test_periodic_trapezoid_smooth():
    res = periodic_trapezoid(lambda th: np.exp(np.cos(th)))
    from scipy.special import i0
    assert res.value == pytest.approx(i0(1.0), rel=1e-12)


@pytest.mark.parametrize("n,exact", [(1, 0.5), (2, 1 / 3), (3, 0.25)])
def test_ball_radial_polynomial(n, exact):
    f = lambda Z: 1 - np.sum(np.abs(Z) ** 2, axis=-1)  # noqa: E731
    assert integrate_ball(f, n).value == pytest.approx(exact, abs=1e-8)
    assert integrate_ball(f, n, slice_base=CPoint((0.3,) + (0,) * (n - 1))).value == pytest.approx(exact, abs=1e-8)


def test_disc_weight_and_odd_integrand():
    # int_D (1 - |z|^2)^{1/2} dA/pi = 2/3
    res = integrate_disc(lambda x, th: np.ones(np.broadcast(x, th).shape), RadialWeight.power(0.5))
    assert res.value == pytest.approx(2 / 3, rel=1e-10)
    # an integrand that vanishes by symmetry converges through the absolute floor
    cfg = QuadConfig(rel_tol=1e-10, abs_tol=1e-14)
    odd = integrate_disc(lambda x, th: (1 - x) * np.cos(th) + 0 * x, cfg=cfg)
    assert abs(odd.value) < 1e-13


def test_slice_dimension_mismatch():
    with pytest.raises(DimensionError):
        integrate_sphere(lambda Z: np.ones(Z.shape[:-1]), 2, slice_base=CPoint((0.1,)))
    with pytest.raises(DimensionError):
        integrate_ball(lambda Z: np.ones(Z.shape[:-1]), 3, slice_base=CPoint((0.1, 0.2)))


def test_monte_carlo_determinism():
    f = lambda Z: np.abs(1 - Z @ np.array([0.7, 0.2j]).conj()) ** -1.5  # noqa: E731
    cfg = QuadConfig(seed=7, mc_samples=20_000)
    a, b = integrate_sphere(f, 2, cfg), integrate_sphere(f, 2, cfg)
    assert a.value == b.value and a.error_estimate == b.error_estimate
    c = integrate_sphere(f, 2, QuadConfig(seed=8, mc_samples=20_000))
    assert c.value != a.value
    assert integrate_ball(f, 2, cfg).value == integrate_ball(f, 2, cfg).value


def test_slice_reduction_agrees_with_monte_carlo():
    rng = np.random.default_rng(2024)
    cfg = QuadConfig(mc_samples=200_000, seed=3)
    for i in range(20):
        n = 2 + i % 2
        w = rng.normal(size=n) + 1j * rng.normal(size=n)
        w *= rng.uniform(0.2, 0.95) / np.linalg.norm(w)
        q = rng.uniform(0.2, n - 0.2)
        f = lambda Z: np.abs(1 - Z @ np.conj(w)) ** -q  # noqa: E731
        sl = integrate_sphere(f, n, slice_base=CPoint(w))
        mc = integrate_sphere(f, n, cfg, stream=i)
        assert sl.method == "slice-reduced" and mc.method == "monte-carlo"
        assert abs(sl.value - mc.value) <= 3 * mc.error_estimate


def beta(a, b):
    return math.gamma(a + 1) * math.gamma(b + 1) / math.gamma(a + b + 2)


@settings(max_examples=60, deadline=None)
@given(st.floats(-0.99, 3.0), st.floats(-0.99, 3.0))
def test_beta_integrals_split_variable(a, b):
    res = integrate_radial(lambda r, x: r ** a * x ** b, split=True)
    assert res.value == pytest.approx(beta(a, b), rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.99, 3.0), st.floats(-0.75, 3.0))
def test_beta_integrals_plain_variable(a, b):
    # the end reached through 1 - t is fine for moderate singularities
    res = integrate_radial(lambda r: r ** a * (1 - r) ** b)
    assert res.value == pytest.approx(beta(a, b), rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.99, 3.0), st.floats(-0.999, 3.0), st.booleans())
def test_radial_never_silently_wrong(a, b, complement):
    # strong singularities at the end reached through 1 - t may be refused, never misreported
    if complement:
        f = lambda x: (1 - x) ** a * x ** b  # noqa: E731
    else:
        f = lambda r: r ** a * (1 - r) ** b  # noqa: E731
    try:
        res = integrate_radial(f, complement=complement)
    except QuadratureError:
        return
    exact = beta(a, b)
    assert abs(res.value - exact) <= max(1e-8 * exact, 1.01 * res.error_estimate)
