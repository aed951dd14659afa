"""Left-hand sides: the kernel integrals as numbers.

Every family is described by a :class:`KernelFamily` record (a tag, the
dimension and the exponents).  :func:`eval_lhs` turns a record plus the
points into an :class:`IntegrationResult`.

Single-point families and two-point families whose points are collinear
(``a = lambda * w`` for a complex lambda) depend on z only through
``zeta = <z, e>`` with e the unit vector along w.  Such integrals are
reduced to the unit disc:

* sphere, n >= 2:  (n-1) * int_D (1-|zeta|^2)^(n-2) H(zeta) dA
* ball,   n >= 2:  int_D Q_n(1-|zeta|^2) H(zeta) dA,
  Q_n(S) = n(n-1) int_0^S (S-x)^(n-2) P(x) dx
* n = 1: the circle itself, or the disc with weight P.

``Q_n`` is available in closed form for the weights that occur,
P(x) = x^delta log^k(e/x); see :func:`log_slice_weight`.  Everything
else falls back to Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.special import binom, hyperu

from .exceptions import DomainError, QuadratureError
from .geometry import CPoint, as_point
from .quadrature import (IntegrationResult, QuadConfig, RadialWeight, _mc_mean, _stream,
                         ball_samples, integrate_circle, integrate_disc, integrate_radial,
                         one_minus_rotated, sphere_samples)

#: parameter names per family tag, in canonical order
FAMILY_PARAMS: dict[str, tuple[str, ...]] = {
    "PropA_I": ("c",),
    "PropA_J": ("t", "c"),
    "P31_G": ("c", "k"),
    "P31_F": ("delta", "c", "k"),
    "PropB": ("delta", "t", "r", "k"),
    "PropC": ("t", "r"),
    "P32": ("delta", "t", "r", "k"),
    "L22": ("t", "r", "k"),
    "L21_I1": ("delta", "c", "k"),
    "L21_I2": ("delta", "c", "k"),
}

SPHERE_FAMILIES = {"PropA_I", "P31_G", "PropC", "L22"}
BALL_FAMILIES = {"PropA_J", "P31_F", "PropB", "P32"}
TWO_POINT_FAMILIES = {"PropB", "PropC", "P32", "L22"}
RADIAL_FAMILIES = {"L21_I1", "L21_I2"}


@dataclass(frozen=True)
class KernelFamily:
    """One integral family with its exponents.

    ``variant`` only matters for families with a complex logarithm
    (P31_G, P31_F, P32): ``"complex"`` uses |Log(e/u)| as displayed,
    ``"modulus"`` uses log(e/|u|).
    """

    tag: str
    n: int
    params: Mapping[str, float] = field(default_factory=dict)
    variant: str = "complex"

    def __post_init__(self):
        if self.tag not in FAMILY_PARAMS:
            raise DomainError(f"unknown family {self.tag!r}")
        if self.n < 1 or int(self.n) != self.n:
            raise DomainError("dimension n must be a positive integer")
        if self.variant not in ("complex", "modulus"):
            raise DomainError(f"unknown variant {self.variant!r}")
        names = FAMILY_PARAMS[self.tag]
        missing = [p for p in names if p not in self.params]
        extra = [p for p in self.params if p not in names]
        if missing or extra:
            raise DomainError(f"{self.tag} takes parameters {names}; "
                              f"missing {missing}, unexpected {extra}")
        object.__setattr__(self, "params", {p: float(self.params[p]) for p in names})
        _check_ranges(self)

    def __getattr__(self, name):
        params = self.__dict__.get("params", {})
        if name in params:
            return params[name]
        raise AttributeError(name)

    def __hash__(self):
        return hash((self.tag, self.n, tuple(self.params.items()), self.variant))

    def with_params(self, **changes) -> "KernelFamily":
        return KernelFamily(self.tag, self.n, {**self.params, **changes}, self.variant)

    def describe(self) -> str:
        inner = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.tag}{{{inner}}} n={self.n}"

    @property
    def domain(self) -> str:
        if self.tag in SPHERE_FAMILIES:
            return "sphere"
        if self.tag in BALL_FAMILIES:
            return "ball"
        return "interval"


def family(tag: str, n: int = 1, variant: str = "complex", **params) -> KernelFamily:
    """Shorthand constructor: ``family("PropB", 1, delta=0, t=1.5, r=1, k=0)``."""
    return KernelFamily(tag, n, params, variant)


def _check_ranges(f: KernelFamily) -> None:
    p, n = f.params, f.n

    def need(cond, text):
        if not cond:
            raise DomainError(f"{f.tag}: requires {text}")

    if "delta" in p:
        need(p["delta"] > -1, "delta > -1")
    if f.tag == "PropA_J":
        need(p["t"] > -1, "t > -1")
    elif f.tag == "PropB":
        need(p["t"] >= 0 and p["r"] >= 0 and p["k"] >= 0, "t >= 0, r >= 0, k >= 0")
    elif f.tag == "PropC":
        need(p["t"] + n > 0 and p["r"] + n > 0, "t + n > 0 and r + n > 0")
    elif f.tag == "P32":
        need(p["t"] > 0 and p["r"] > 0 and p["k"] > 0, "t > 0, r > 0, k > 0")
    elif f.tag == "L22":
        need(p["t"] > n > p["r"] > 0, "t > n > r > 0")
        need(p["k"] < 0, "k < 0")
    elif f.tag in RADIAL_FAMILIES:
        need(p["c"] >= 0, "c >= 0")


@dataclass(frozen=True)
class PointPair:
    """The evaluation point(s): w, the optional second point, or rho."""

    w: CPoint | None = None
    second: CPoint | None = None
    rho: float | None = None

    def __post_init__(self):
        if self.w is not None:
            object.__setattr__(self, "w", as_point(self.w))
        if self.second is not None:
            object.__setattr__(self, "second", as_point(self.second))


def log_factor(u, k: float):
    """|Log(e/u)|^k on the principal branch, for u != 0 (vectorised)."""
    u = np.asarray(u, dtype=complex)
    if np.any(u == 0):
        raise DomainError("log factor is singular at u = 0 (boundary contact)")
    val = np.abs(np.log(np.e / u)) ** k
    return float(val) if val.ndim == 0 else val


def _log_abs_log(u, variant: str):
    """log |Log(e/u)| or log log(e/|u|) depending on the variant."""
    if variant == "modulus":
        return np.log(1.0 - np.log(np.abs(u)))
    return np.log(np.abs(1.0 - np.log(u)))


# ----------------------------------------------------------------------
# radial weights for the slice reductions

def expected_log_power(M, k: float):
    """E_k(M) = int_0^inf e^-v (1 + v/M)^k dv  (= M U(1, k+2, M))."""
    M = np.asarray(M, dtype=float)
    if k == 0:
        return np.ones_like(M)
    return M * hyperu(1.0, k + 2.0, M)


def log_slice_weight(logS, n: int, delta: float, k: float):
    """log Q_n(S) for P(x) = x^delta log^k(e/x), n >= 2.

    Q_n(S) = n(n-1) S^(n-1+delta) L^k sum_j C(n-2, j) (-1)^j
             E_k((delta+1+j) L) / (delta+1+j),  L = log(e/S).
    """
    logS = np.asarray(logS, dtype=float)
    L = 1.0 - logS
    total = np.zeros_like(L)
    for j in range(n - 1):
        a = delta + 1.0 + j
        total = total + binom(n - 2, j) * (-1.0) ** j * expected_log_power(a * L, k) / a
    return math.log(n * (n - 1)) + (n - 1 + delta) * logS + k * np.log(L) + np.log(total)


def ball_weight(n: int, delta: float, k: float = 0.0) -> RadialWeight:
    """Disc weight reproducing int_B (1-|z|^2)^delta log^k(e/(1-|z|^2)) H(<z,e>) dv."""
    if n == 1:
        def log_w(x, logx):
            logS = logx + np.log(2.0 - x)
            return delta * logS + (k * np.log(1.0 - logS) if k else 0.0)
        return RadialWeight(log_w, delta)

    def log_w(x, logx):
        return log_slice_weight(logx + np.log(2.0 - x), n, delta, k)
    return RadialWeight(log_w, delta + n - 1.0)


def sphere_weight(n: int) -> RadialWeight:
    return RadialWeight.power(n - 2.0, n - 1.0)


# ----------------------------------------------------------------------
# integrands

def _kernel_terms(fam: KernelFamily):
    """Return (weight_delta, weight_k, terms) with terms a list of
    (point_slot, power_of_|u|, log_power, log_kind).

    The integrand is prod |u_slot|^(-power) * (log factor)^log_power, where
    u_slot = 1 - <z, point>; log_kind is "complex" (|Log(e/u)|, or the
    modulus variant) or "modulus" (log(e/|u|)).
    """
    p, n, tag = fam.params, fam.n, fam.tag
    if tag == "PropA_I":
        return 0.0, 0.0, [("w", n + p["c"], 0.0, None)]
    if tag == "PropA_J":
        return p["t"], 0.0, [("w", n + 1 + p["t"] + p["c"], 0.0, None)]
    if tag == "P31_G":
        return 0.0, 0.0, [("w", n + p["c"], p["k"], "complex")]
    if tag == "P31_F":
        return p["delta"], 0.0, [("w", n + 1 + p["delta"] + p["c"], p["k"], "complex")]
    if tag == "PropB":
        return p["delta"], p["k"], [("w", p["t"], 0.0, None), ("a", p["r"], 0.0, None)]
    if tag == "PropC":
        return 0.0, 0.0, [("w", n + p["t"], 0.0, None), ("a", n + p["r"], 0.0, None)]
    if tag == "P32":
        return p["delta"], p["k"], [("w", p["t"], 0.0, None), ("a", p["r"], -p["k"], "complex")]
    if tag == "L22":
        return 0.0, 0.0, [("w", p["t"], 0.0, None), ("a", p["r"], p["k"], "modulus")]
    raise DomainError(f"{tag} is not a ball or sphere family")


def _log_integrand(terms, us: dict, variant: str):
    out = 0.0
    for slot, power, lpow, kind in terms:
        u = us[slot]
        out = out - power * np.log(np.abs(u))
        if lpow:
            lk = _log_abs_log(u, "modulus" if kind == "modulus" else variant)
            out = out + lpow * lk
    return out


def _collinear_coefficients(w: np.ndarray, a: np.ndarray | None, n: int, tol: float = 1e-13):
    """Express <z, w> = c_w zeta and <z, a> = c_a zeta with zeta = <z, e>.

    Returns (c_w, eps_w, c_a, eps_a) or None when a is not collinear with w.
    For n = 1 the frame is e = 1 so that zeta = z.
    """
    if n == 1:
        cw = complex(np.conj(w[0]))
        ca = complex(np.conj(a[0])) if a is not None else None
        return cw, ca
    nw = np.linalg.norm(w)
    if nw == 0.0:
        if a is None or np.linalg.norm(a) == 0.0:
            return 0j, (0j if a is not None else None)
        e = a / np.linalg.norm(a)
        return 0j, complex(np.linalg.norm(a))
    e = w / nw
    if a is None:
        return complex(nw), None
    lam = np.vdot(e, a)  # a = lam * e if collinear
    if np.linalg.norm(a - lam * e) > tol * max(1.0, np.linalg.norm(a)):
        return None
    return complex(nw), complex(np.conj(lam))


def _slice_route(fam: KernelFamily, pts: PointPair, cfg: QuadConfig) -> IntegrationResult | None:
    n = fam.n
    w = pts.w.array
    a = pts.second.array if pts.second is not None else None
    coeffs = _collinear_coefficients(w, a, n)
    if coeffs is None:
        return None
    cw, ca = coeffs
    slots = {"w": (cw, 1.0 - pts.w.norm())}
    if ca is not None:
        slots["a"] = (ca, 1.0 - pts.second.norm())
    delta, kw, terms = _kernel_terms(fam)
    peaks = []
    for c, eps in slots.values():
        if abs(c) > 0:
            peaks.append((-math.atan2(c.imag, c.real), max(eps, 1e-16)))
    symmetric = all(abs(c.imag) == 0.0 and c.real >= 0 for c, _ in slots.values())
    if symmetric:
        peaks = [(0.0, min((e for _, e in peaks), default=1.0))]

    def us_at(x, theta):
        return {s: one_minus_rotated(c, x, theta, eps) for s, (c, eps) in slots.items()}

    if fam.domain == "sphere" and n == 1:
        def h1(theta):
            return np.exp(_log_integrand(terms, us_at(0.0, theta), fam.variant))
        return integrate_circle(h1, peaks=peaks, symmetric=symmetric, cfg=cfg)

    weight = sphere_weight(n) if fam.domain == "sphere" else ball_weight(n, delta, kw)

    def h(x, theta):
        return np.exp(_log_integrand(terms, us_at(x, theta), fam.variant))
    return integrate_disc(h, weight, peaks=peaks, symmetric=symmetric, cfg=cfg)


def _monte_carlo_route(fam: KernelFamily, pts: PointPair, cfg: QuadConfig,
                       stream: int = 0) -> IntegrationResult:
    n = fam.n
    rng = _stream(cfg, stream)
    delta, kw, terms = _kernel_terms(fam)
    if fam.domain == "sphere":
        Z = sphere_samples(n, cfg.mc_samples, rng)
        logwt = 0.0
    else:
        Z = ball_samples(n, cfg.mc_samples, rng)
        S = 1.0 - np.sum(np.abs(Z) ** 2, axis=1)
        logwt = delta * np.log(S) + (kw * np.log(1.0 - np.log(S)) if kw else 0.0)
    us = {"w": 1.0 - Z @ np.conj(pts.w.array)}
    if pts.second is not None:
        us["a"] = 1.0 - Z @ np.conj(pts.second.array)
    return _mc_mean(np.exp(logwt + _log_integrand(terms, us, fam.variant)))


def _radial_lhs(fam: KernelFamily, rho: float, cfg: QuadConfig,
                one_minus_rho: float | None = None) -> IntegrationResult:
    delta, c, k = fam.delta, fam.c, fam.k
    om = 1.0 - rho if one_minus_rho is None else one_minus_rho

    if fam.tag == "L21_I1":
        def f(x):
            d = om + rho * x  # 1 - rho r with x = 1 - r
            return np.exp(delta * np.log(x) - (delta + 1 + c) * np.log(d)
                          + (k * np.log(1.0 - np.log(d)) if k else 0.0))
    else:
        def f(x):
            d = om + rho * x
            return np.exp(delta * np.log(x) - (delta + 1 + c) * np.log(d)
                          + (k * np.log(1.0 + np.log1p(rho * x / om)) if k else 0.0))
    with np.errstate(divide="ignore"):
        return integrate_radial(f, cfg, complement=True, scale=max(om, 1e-300),
                                exponents=(0.0, delta))


def eval_lhs(fam: KernelFamily, pts: PointPair, cfg: QuadConfig = QuadConfig(),
             stream: int = 0, one_minus_rho: float | None = None) -> IntegrationResult:
    """Numerical value of the family's integral at the given point(s)."""
    if fam.tag in RADIAL_FAMILIES:
        if pts.rho is None or pts.w is not None or pts.second is not None:
            raise DomainError(f"{fam.tag} needs exactly a rho value")
        if not 0 <= pts.rho < 1:
            raise DomainError("rho must lie in [0, 1)")
        return _radial_lhs(fam, pts.rho, cfg, one_minus_rho)
    if pts.w is None or pts.rho is not None:
        raise DomainError(f"{fam.tag} needs a point w")
    two = fam.tag in TWO_POINT_FAMILIES
    if two != (pts.second is not None):
        raise DomainError(f"{fam.tag} takes {'two points' if two else 'one point'}")
    for p in (pts.w, pts.second):
        if p is not None:
            if p.dim != fam.n:
                raise DomainError(f"point dimension {p.dim} differs from n = {fam.n}")
            p.require_interior()
    res = _slice_route(fam, pts, cfg)
    if res is None:
        res = _monte_carlo_route(fam, pts, cfg, stream)
    return res
