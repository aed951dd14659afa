"""Normal weights and the lacunary series built from them.

The weight family is

    mu(r) = (1-r^2)^alpha * log^beta(e/(1-r^2)) * (log log(e^2/(1-r^2)))^gamma

together with a declared pair of exponents (a, b) such that
mu/(1-r^2)^a decreases and mu/(1-r^2)^b increases.  Everything is
evaluated through the defect S = 1 - r^2 so that radii within 1e-30 of
the sphere are still meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError
from .geometry import CPoint, as_point

LOG2 = np.log(2.0)


@dataclass(frozen=True)
class NormalWeight:
    alpha: float
    beta: float = 0.0
    gamma: float = 0.0
    decl_a: float | None = None
    decl_b: float | None = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        a = self.alpha if self.decl_a is None else self.decl_a
        b = self.alpha if self.decl_b is None else self.decl_b
        if not 0 < a <= self.alpha:
            raise DomainError(f"decl_a must lie in (0, alpha], got {a}")
        if b < self.alpha:
            raise DomainError(f"decl_b must be >= alpha, got {b}")
        object.__setattr__(self, "decl_a", float(a))
        object.__setattr__(self, "decl_b", float(b))

    # evaluation -------------------------------------------------------
    def log_from_defect(self, S):
        """log mu as a function of S = 1 - r^2 (vectorised)."""
        return self.log_from_log_defect(np.log(np.asarray(S, dtype=float)))

    def log_from_log_defect(self, logS):
        """log mu given log S; lets callers go far below the float range of S."""
        logS = np.asarray(logS, dtype=float)
        out = self.alpha * logS
        if self.beta:
            out = out + self.beta * np.log1p(-logS)
        if self.gamma:
            out = out + self.gamma * np.log(np.log(2.0 - logS))
        return out

    def from_defect(self, S):
        return np.exp(self.log_from_defect(S))

    def __call__(self, r):
        return weight_eval(self, r)


def weight_eval(mu: NormalWeight, r):
    """mu(r) for 0 <= r < 1; works elementwise on arrays."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= 1):
        raise DomainError("weight is defined on [0, 1) only")
    val = mu.from_defect((1.0 - r) * (1.0 + r))
    return float(val) if val.ndim == 0 else val


def defect_grid(grid_size: int, depth: int = 200) -> np.ndarray:
    """Decreasing S = 1 - r^2 values: uniform in r, then geometric to 2^-depth."""
    r = np.linspace(0.0, 1.0, grid_size, endpoint=False)
    S_uniform = (1.0 - r) * (1.0 + r)
    S_geo = 2.0 ** -np.linspace(0.0, depth, 4 * grid_size)
    S = np.unique(np.concatenate([S_uniform, S_geo]))[::-1]
    return S


def normality_check(mu: NormalWeight, grid_size: int = 400, r0: float = 0.0,
                    tol: float = 1e-12) -> bool:
    """Grid test of the two monotonicity conditions on [r0, 1).

    True iff mu/(1-r^2)^a is non-increasing and mu/(1-r^2)^b is
    non-decreasing along a boundary-refined grid, each step allowed a
    relative slack of ``tol``.
    """
    if grid_size < 100:
        raise DomainError("grid_size must be at least 100")
    S = defect_grid(grid_size)
    S = S[S <= (1.0 - r0) * (1.0 + r0)]
    lm = mu.log_from_defect(S)
    lower = lm - mu.decl_a * np.log(S)
    upper = lm - mu.decl_b * np.log(S)
    ok_a = np.all(np.diff(lower) <= tol)
    ok_b = np.all(np.diff(upper) >= -tol)
    return bool(ok_a and ok_b)


def lemma23_ratio_check(mu: NormalWeight, z: CPoint, w: CPoint) -> bool:
    """mu(|z|)/mu(|w|) <= q^a + q^b with q = (1-|z|^2)/(1-|w|^2)."""
    z, w = as_point(z), as_point(w)
    Sz, Sw = z.defect(), w.defect()
    if Sz <= 0 or Sw <= 0:
        raise DomainError("points must be interior")
    q = Sz / Sw
    lhs = np.exp(mu.log_from_defect(Sz) - mu.log_from_defect(Sw))
    return bool(lhs <= (q ** mu.decl_a + q ** mu.decl_b) * (1 + 1e-12))


def weight_ratio(mu: NormalWeight, z: CPoint, w: CPoint) -> float:
    """mu(|w|)/mu(|z|), used for the comparability check on metric balls."""
    z, w = as_point(z), as_point(w)
    return float(np.exp(mu.log_from_defect(w.defect()) - mu.log_from_defect(z.defect())))


@dataclass(frozen=True)
class GSeries:
    """Partial sum g(u) = 1 + sum_j 2^j u^{n_j}, j = 1..J.

    ``roots`` keeps 1 - r_j (the level points), exponents are stored as
    floats since they outgrow 64-bit integers for long series.
    """

    weight: NormalWeight
    exponents: np.ndarray
    roots: np.ndarray = field(repr=False)

    @property
    def J(self) -> int:
        return len(self.exponents)

    @property
    def coefficients(self) -> np.ndarray:
        return 2.0 ** np.arange(1, self.J + 1)

    @property
    def terms(self) -> list[tuple[float, float]]:
        return list(zip(self.coefficients, self.exponents))


def _level_root(mu: NormalWeight, j: int, depth: float = 1000.0) -> float:
    """Smallest r with mu(r) = 2^-j, returned as x = 1 - r.

    The search runs in log x, scanning downwards from x = 1 until the
    first sign change, then bisecting to full double precision.
    """
    target = -j * LOG2

    def f(logx):
        return mu.log_from_log_defect(logx + np.log(2.0 - np.exp(logx))) - target

    grid = np.linspace(0.0, -depth, 4001)
    vals = f(grid)
    # r = 0 corresponds to x = 1; a root at the left end counts too
    sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]
    if sign_change.size == 0:
        raise DomainError(f"mu(r) = 2^-{j} has no root in [0, 1)")
    i = sign_change[0]
    lo, hi = grid[i], grid[i + 1]
    flo = vals[i]
    if flo == 0.0:
        return float(np.exp(lo))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or abs(hi - lo) < 1e-15 * max(1.0, abs(mid)):
            lo = hi = mid
            break
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return float(np.exp(0.5 * (lo + hi)))


def build_g(mu: NormalWeight, J: int) -> GSeries:
    """Lacunary series attached to ``mu`` with J terms."""
    if not 1 <= J <= 60:
        raise DomainError("J must lie in 1..60")
    xs = np.array([_level_root(mu, j) for j in range(1, J + 1)])
    # n_j = floor(1/(1 - r_j)); the tiny relative nudge keeps exact
    # reciprocals such as 1/0.25 from flooring to 3
    nj = np.floor(1.0 / xs * (1 + 4e-16))
    if np.any(np.diff(nj) <= 0):
        raise DomainError("exponents n_j are not strictly increasing; weight decays too slowly")
    return GSeries(mu, nj, xs)


def g_eval(g: GSeries, u):
    """Partial sum at complex u with |u| < 1."""
    u = np.asarray(u, dtype=complex)
    if np.any(np.abs(u) >= 1):
        raise DomainError("g is evaluated inside the unit disc only")
    logu = np.log(np.where(u == 0, 1.0, u))
    powers = np.exp(np.multiply.outer(logu, g.exponents))
    powers = np.where((u == 0)[..., None], 0.0, powers)
    val = 1.0 + powers @ g.coefficients
    return complex(val) if val.ndim == 0 else val


def g_eval_defect(g: GSeries, x):
    """g(1 - x) for real 0 < x <= 1, computed without forming r."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        logr = np.log1p(-np.minimum(x, 1.0))
    powers = np.exp(np.multiply.outer(logr, g.exponents))
    out = 1.0 + powers @ g.coefficients
    return float(out) if out.ndim == 0 else out


def g_deriv(g: GSeries, r):
    """Term-wise derivative g'(r) on [0, 1)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= 1):
        raise DomainError("g' is evaluated on [0, 1) only")
    return g_deriv_defect(g, 1.0 - r)


def g_deriv_defect(g: GSeries, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        logr = np.log1p(-np.minimum(x, 1.0))
        powers = np.exp(np.multiply.outer(logr, g.exponents - 1.0))
    powers = np.where(np.isnan(powers), 0.0, powers)
    out = powers @ (g.coefficients * g.exponents)
    return float(out) if out.ndim == 0 else out
