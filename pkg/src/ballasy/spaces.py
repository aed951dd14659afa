"""F(p, mu, s) seminorms, Bloch-type norms, test functions and multiplier criteria.

Suprema over the ball are replaced by maxima over boundary-refined grids
(radii 1 - 2^-m, m <= 12), so every norm computed here is a grid lower
bound.  The multiplier criteria additionally use tangential approach
points near the boundary point e_1 and one deep shell, 1 - |z| = e^-1e12,
evaluated in log form; that shell is what separates slowly divergent
quantities (log log growth) from bounded ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import roots_laguerre

from .exceptions import DimensionError, DomainError
from .geometry import CPoint, as_point
from .kernels import log_slice_weight
from .quadrature import (IntegrationResult, QuadConfig, RadialWeight, integrate_ball,
                         integrate_disc, one_minus_rotated)
from .weights import NormalWeight

LOG2 = math.log(2.0)
DEEP_LOGX = -1e12
N_ANGLES = 16
TILTS = (math.pi / 8, math.pi / 4, 3 * math.pi / 8)
TANGENTIAL = ((0.5, 0.5), (0.5, 1.0), (0.5, math.sqrt(2.0)), (0.5, 2.0), (0.5, 4.0),
              (1.0, 0.5), (1.0, 1.0), (1.0, 2.0))


@dataclass(frozen=True)
class SpaceParams:
    p: float
    s: float
    mu: NormalWeight
    nu: NormalWeight
    n: int = 1

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError(f"p must be positive, got {self.p}")
        if not self.s >= 0:
            raise DomainError(f"s must be non-negative, got {self.s}")
        if self.n < 1:
            raise DimensionError("dimension must be positive")

    @property
    def q(self) -> float:
        """(n - s)/p, the exponent in the pointwise bound."""
        return (self.n - self.s) / self.p


def matched_nu(mu: NormalWeight, n: int, s: float, p: float) -> NormalWeight:
    """nu = mu (1 - r^2)^((n-s)/p), the weight for which F(p,mu,s) embeds in B_nu."""
    q = (n - s) / p
    return NormalWeight(mu.alpha + q, mu.beta, mu.gamma, mu.decl_a + q, mu.decl_b + q)


# ----------------------------------------------------------------------
# one-variable profiles, written in terms of lw = log(1 - u)

class _Profile:
    """F(u) and F'(u) from lw = log(1 - u) and logS = log(1 - |u|^2)."""

    singular = False
    needs_u = False  # value() also takes u itself when cancellation must be exact

    def value(self, lw, logS):
        raise NotImplementedError

    def deriv(self, lw, logS):
        raise NotImplementedError

    def log_abs_value(self, lw, logS):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.value(lw, logS)))

    def log_abs_deriv(self, lw, logS):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.deriv(lw, logS)))


@dataclass(frozen=True)
class _Pole(_Profile):
    gamma: float
    singular = True

    def value(self, lw, logS):
        return np.exp(-self.gamma * lw)

    def deriv(self, lw, logS):
        return self.gamma * np.exp(-(self.gamma + 1.0) * lw)

    def log_abs_value(self, lw, logS):
        return -self.gamma * lw.real

    def log_abs_deriv(self, lw, logS):
        with np.errstate(divide="ignore"):
            return math.log(abs(self.gamma)) - (self.gamma + 1.0) * lw.real if self.gamma \
                else np.full(np.shape(lw), -np.inf)


@dataclass(frozen=True)
class _LogPole(_Profile):
    """Log^gamma(e/(1-u)) with the principal branch."""
    gamma: float
    singular = True

    def value(self, lw, logS):
        return (1.0 - lw) ** self.gamma

    def deriv(self, lw, logS):
        return self.gamma * (1.0 - lw) ** (self.gamma - 1.0) * np.exp(-lw)

    def log_abs_value(self, lw, logS):
        return self.gamma * np.log(np.abs(1.0 - lw))

    def log_abs_deriv(self, lw, logS):
        with np.errstate(divide="ignore"):
            return (np.log(abs(self.gamma)) + (self.gamma - 1.0) * np.log(np.abs(1.0 - lw))
                    - lw.real)


class _Psi1(_Profile):
    """exp((u+1)/(u-1)) = exp(1 - 2/(1-u))."""
    singular = True

    def value(self, lw, logS):
        return np.exp(1.0 - 2.0 * np.exp(-lw))

    def deriv(self, lw, logS):
        return -2.0 * np.exp(-2.0 * lw) * self.value(lw, logS)

    def log_abs_value(self, lw, logS):
        # Re((u+1)/(u-1)) = -(1-|u|^2)/|1-u|^2
        return -np.exp(logS - 2.0 * lw.real)

    def log_abs_deriv(self, lw, logS):
        return LOG2 - 2.0 * lw.real + self.log_abs_value(lw, logS)


class _Psi2(_Profile):
    """log log(e^2/(1-u))."""
    singular = True

    def value(self, lw, logS):
        return np.log(2.0 - lw)

    def deriv(self, lw, logS):
        return np.exp(-lw) / (2.0 - lw)

    def log_abs_deriv(self, lw, logS):
        return -lw.real - np.log(np.abs(2.0 - lw))


class _Psi3(_Profile):
    """log log log(e^4/(1-u))."""
    singular = True

    def value(self, lw, logS):
        return np.log(np.log(4.0 - lw))

    def deriv(self, lw, logS):
        lam = 4.0 - lw
        return np.exp(-lw) / (lam * np.log(lam))

    def log_abs_deriv(self, lw, logS):
        lam = 4.0 - lw
        return -lw.real - np.log(np.abs(lam)) - np.log(np.abs(np.log(lam)))


@dataclass(frozen=True)
class _TestFw(_Profile):
    """K [(1-|w|^2)(1-u)^-(e+1) - (1-u)^-e] with e = b + n/p, written so f_w(w) = 0."""
    K: float
    e: float
    ww: float
    needs_u = True

    def value(self, lw, logS, u=None):
        u = -np.expm1(lw) if u is None else u
        return self.K * np.exp(-(self.e + 1.0) * lw) * (u - self.ww)

    def deriv(self, lw, logS):
        one_w = 1.0 - self.ww
        return self.K * ((self.e + 1.0) * one_w * np.exp(-(self.e + 2.0) * lw)
                         - self.e * np.exp(-(self.e + 1.0) * lw))


@dataclass(frozen=True)
class _TestGw(_Profile):
    """Lambda(u)^2/Lambda(|w|^2) - 2 Lambda(u), Lambda(u) = int_0^u (1-t)^-1 log^-beta(e/(1-t)) dt."""
    beta: float
    lam_w: float

    def _lam(self, lw):
        logl = np.log1p(-lw)  # log of l = log(e/(1-u)) = 1 - lw
        if self.beta == 1.0:
            return logl
        a = 1.0 - self.beta
        return np.expm1(a * logl) / a

    def value(self, lw, logS):
        lam = self._lam(lw)
        return lam * lam / self.lam_w - 2.0 * lam

    def deriv(self, lw, logS):
        lam = self._lam(lw)
        dlam = np.exp(-lw) * (1.0 - lw) ** (-self.beta)
        return (2.0 * lam / self.lam_w - 2.0) * dlam


def _gw_lambda(x: float, beta: float) -> float:
    """Lambda at real x in [0, 1)."""
    ell = 1.0 - math.log1p(-x)
    if beta == 1.0:
        return math.log(ell)
    return (ell ** (1.0 - beta) - 1.0) / (1.0 - beta)


# ----------------------------------------------------------------------
# catalog functions

@dataclass(frozen=True)
class HoloFunction:
    """A catalog holomorphic function on B_n with exact value and gradient.

    ``kind`` is "profile" (F(<z, w0>)), "monomial" or "const".
    """

    tag: str
    n: int
    kind: str
    params: tuple = ()
    w0: tuple[complex, ...] | None = None
    profile: _Profile | None = field(default=None, repr=False, compare=False)
    powers: tuple[int, ...] | None = None
    const: complex = 0.0
    factor: complex = 1.0

    # ---------------- evaluation on arrays of shape (..., n)
    def _u(self, Z):
        return Z @ np.conj(np.asarray(self.w0, dtype=complex))

    def _profile_args(self, Z):
        u = self._u(Z)
        with np.errstate(divide="ignore", invalid="ignore"):
            lw = np.log(1.0 - u)
            au = np.abs(u)
            logS = np.log((1.0 - au) * (1.0 + au))
        return lw, logS

    def value(self, Z) -> np.ndarray:
        return self.factor * self._value(np.asarray(Z, dtype=complex))

    def grad(self, Z) -> np.ndarray:
        return self.factor * self._grad(np.asarray(Z, dtype=complex))

    def _value(self, Z):
        if self.kind == "const":
            return np.full(Z.shape[:-1], self.const, dtype=complex)
        if self.kind == "monomial":
            return np.prod(Z ** np.asarray(self.powers), axis=-1)
        if self.profile.needs_u:
            return self.profile.value(*self._profile_args(Z), u=self._u(Z))
        return self.profile.value(*self._profile_args(Z))

    def _grad(self, Z):
        if self.kind == "const":
            return np.zeros_like(Z)
        if self.kind == "monomial":
            k = np.asarray(self.powers)
            out = np.empty_like(Z)
            for j in range(self.n):
                kj = k.copy()
                kj[j] = max(k[j] - 1, 0)
                out[..., j] = k[j] * np.prod(Z ** kj, axis=-1)
            return out
        d = self.profile.deriv(*self._profile_args(Z))
        return d[..., None] * np.conj(np.asarray(self.w0, dtype=complex))

    def grad_norm(self, Z) -> np.ndarray:
        return np.linalg.norm(self.grad(Z), axis=-1)

    @property
    def axis(self) -> np.ndarray | None:
        """Unit vector e with f depending on z only through <z, e>, if any."""
        if self.kind == "profile":
            w = np.asarray(self.w0, dtype=complex)
            return w / np.linalg.norm(w)
        if self.kind == "monomial" and sum(1 for k in self.powers if k) <= 1:
            e = np.zeros(self.n, dtype=complex)
            e[int(np.argmax(self.powers))] = 1.0
            return e
        return None

    @property
    def singular_on_e1(self) -> bool:
        """True when the only singularity is the boundary point e_1."""
        if self.kind != "profile" or not self.profile.singular:
            return False
        e1 = np.zeros(self.n, dtype=complex)
        e1[0] = 1.0
        return bool(np.array_equal(np.asarray(self.w0, dtype=complex), e1))

    def peak(self) -> tuple[np.ndarray, float] | None:
        """Boundary point where |grad f| concentrates and its distance scale."""
        if self.kind != "profile":
            return None
        w = np.asarray(self.w0, dtype=complex)
        nw = float(np.linalg.norm(w))
        return w / nw, max(1.0 - nw, 1e-12)

    def scaled(self, c: complex) -> "HoloFunction":
        """c f, for homogeneity checks."""
        return replace(self, factor=self.factor * complex(c))


def _unit(n: int, j: int = 0) -> tuple[complex, ...]:
    e = [0j] * n
    e[j] = 1.0 + 0j
    return tuple(e)


def _vec(w, n: int) -> tuple[complex, ...]:
    w = tuple(complex(x) for x in np.atleast_1d(np.asarray(w, dtype=complex)))
    if len(w) != n:
        raise DimensionError(f"point has dimension {len(w)}, expected {n}")
    return w


def constant(c: complex, n: int = 1) -> HoloFunction:
    return HoloFunction("const", n, "const", (("c", c),), const=complex(c))


def monomial(powers) -> HoloFunction:
    powers = tuple(int(k) for k in powers)
    if any(k < 0 for k in powers):
        raise DomainError("monomial powers must be non-negative")
    return HoloFunction("monomial", len(powers), "monomial", (("powers", powers),), powers=powers)


def kernel_power(w0, gamma: float, n: int | None = None) -> HoloFunction:
    """(1 - <z, w0>)^-gamma, |w0| <= 1."""
    w0 = _vec(w0, n or len(np.atleast_1d(w0)))
    if np.linalg.norm(w0) > 1 + 1e-15 or np.linalg.norm(w0) == 0:
        raise DomainError("kernel centre must satisfy 0 < |w0| <= 1")
    return HoloFunction("kernel", len(w0), "profile", (("w0", w0), ("gamma", gamma)), w0,
                        _Pole(float(gamma)))


def log_power(w0, gamma: float, n: int | None = None) -> HoloFunction:
    """Log^gamma(e/(1 - <z, w0>)), |w0| <= 1."""
    w0 = _vec(w0, n or len(np.atleast_1d(w0)))
    if np.linalg.norm(w0) > 1 + 1e-15 or np.linalg.norm(w0) == 0:
        raise DomainError("kernel centre must satisfy 0 < |w0| <= 1")
    return HoloFunction("logkernel", len(w0), "profile", (("w0", w0), ("gamma", gamma)), w0,
                        _LogPole(float(gamma)))


def make_fw(w, mu: NormalWeight, p: float, s: float) -> HoloFunction:
    """Point-evaluation test function with f_w(w) = 0 (b = decl_b of mu)."""
    w = as_point(w)
    n = w.dim
    ww = float(np.real(w.array @ np.conj(w.array)))
    if not 0 < ww < 1:
        raise DomainError("f_w needs 0 < |w| < 1")
    b = mu.decl_b
    S = 1.0 - ww
    K = math.exp((1 + b + s / p) * math.log(S) - mu.log_from_defect(S))
    prof = _TestFw(K, b + n / p, ww)
    return HoloFunction("fw", n, "profile", (("w", w.coords), ("p", p), ("s", s), ("mu", mu)),
                        w.coords, prof)


def make_Gw(w, beta: float) -> HoloFunction:
    """Log-weighted test function built from Lambda(u)."""
    w = as_point(w)
    ww = float(np.real(w.array @ np.conj(w.array)))
    if not 0 < ww < 1:
        raise DomainError("G_w needs 0 < |w| < 1")
    prof = _TestGw(float(beta), _gw_lambda(ww, beta))
    return HoloFunction("Gw", w.dim, "profile", (("w", w.coords), ("beta", beta)), w.coords, prof)


def psi1(n: int = 1) -> HoloFunction:
    return HoloFunction("psi1", n, "profile", (), _unit(n), _Psi1())


def psi2(n: int = 1) -> HoloFunction:
    return HoloFunction("psi2", n, "profile", (), _unit(n), _Psi2())


def psi3(n: int = 1) -> HoloFunction:
    return HoloFunction("psi3", n, "profile", (), _unit(n), _Psi3())


CATALOG_TAGS = ("const", "monomial", "kernel", "logkernel", "fw", "Gw", "psi1", "psi2", "psi3")


def catalog(tag: str, n: int = 1, **params) -> HoloFunction:
    """Catalog lookup by tag (used by the command line)."""
    if tag == "const":
        return constant(params.get("c", 1.0), n)
    if tag == "monomial":
        return monomial(params.get("powers", (1,) + (0,) * (n - 1)))
    if tag in ("kernel", "logkernel"):
        w0 = params.get("w0", _unit(n))
        make = kernel_power if tag == "kernel" else log_power
        return make(w0, params.get("gamma", 1.0), n)
    if tag == "fw":
        return make_fw(params["w"], params["mu"], params["p"], params["s"])
    if tag == "Gw":
        return make_Gw(params["w"], params["beta"])
    if tag in ("psi1", "psi2", "psi3"):
        return {"psi1": psi1, "psi2": psi2, "psi3": psi3}[tag](n)
    raise DomainError(f"unknown catalog tag {tag!r}; known: {', '.join(CATALOG_TAGS)}")


def gradient(f: HoloFunction, z: CPoint) -> CPoint:
    """Exact gradient at an interior point."""
    z = as_point(z)
    z.require_interior()
    if z.dim != f.n:
        raise DimensionError(f"point has dimension {z.dim}, function has {f.n}")
    g = f.grad(z.array)
    if not np.all(np.isfinite(g)):
        raise DomainError(f"{f.tag}: gradient is singular at {z.coords}")
    return CPoint(tuple(complex(x) for x in g))


# ----------------------------------------------------------------------
# grids

@dataclass(frozen=True)
class Grid:
    """Boundary-refined point set.

    ``points`` are float coordinates; ``logx`` = log(1 - |z|) is exact even
    where the float point has been rounded onto the sphere.  Points in the
    z_1-plane also carry ``theta`` in log form (``ltheta``, ``sign``), so
    functions singular at e_1 can be evaluated far below float resolution.
    ``shell`` is 0 for the centre, m for radius 1 - 2^-m and ``deep_shell``
    for the log-form shell.
    """

    n: int
    points: np.ndarray
    logx: np.ndarray
    shell: np.ndarray
    plane: np.ndarray
    ltheta: np.ndarray
    sign: np.ndarray
    deep_shell: int | None = None

    @property
    def logS(self) -> np.ndarray:
        x = np.exp(self.logx)
        return self.logx + np.log(2.0 - x)

    def subset(self, mask) -> "Grid":
        mask = np.asarray(mask)
        return Grid(self.n, self.points[mask], self.logx[mask], self.shell[mask],
                    self.plane[mask], self.ltheta[mask], self.sign[mask], self.deep_shell)

    def z1_log_omega(self) -> tuple[np.ndarray, np.ndarray]:
        """(log(1 - z_1), log(1 - |z_1|^2)) on plane points, in log form."""
        lx = self.logx
        x = np.exp(lx)
        th = self.sign * np.exp(self.ltheta)
        tiny = self.ltheta < -20
        with np.errstate(divide="ignore"):
            lsin_half = np.where(tiny, self.ltheta - LOG2, np.log(np.abs(np.sin(th / 2))))
            lsin = np.where(tiny, self.ltheta, np.log(np.abs(np.sin(th))))
            l1x = np.log1p(-x)
            # Re(1 - z) = x + (1-x) 2 sin^2(theta/2);  Im(1 - z) = -(1-x) sin(theta)
            lre = np.logaddexp(lx, l1x + LOG2 + 2 * lsin_half)
            lim = l1x + lsin
        top = np.maximum(lre, lim)
        labs = top + 0.5 * np.log(np.exp(2 * (lre - top)) + np.exp(2 * (lim - top)))
        arg = np.arctan2(-np.sign(np.sin(th)) * np.exp(lim - top), np.exp(lre - top))
        arg = np.where(tiny, np.arctan2(-self.sign * np.exp(lim - top), np.exp(lre - top)), arg)
        return labs + 1j * arg, self.logS


def _directions(n: int, n_dirs: int | None = None) -> np.ndarray:
    if n == 1:
        k = n_dirs or N_ANGLES
        return np.exp(2j * np.pi * np.arange(k) / k)[:, None]
    # phases times tilts away from e_1; the untilted ring lies in the z_1-plane
    dirs = []
    for tilt in (0.0,) + TILTS:
        for j in range(N_ANGLES):
            ph = 2 * np.pi * j / N_ANGLES
            v = np.zeros(n, dtype=complex)
            v[0] = math.cos(tilt) * np.exp(1j * ph)
            v[1] = math.sin(tilt)
            dirs.append(v)
    dirs = np.array(dirs)
    return dirs[:n_dirs] if n_dirs else dirs


def sup_grid(n: int, m_max: int = 12, *, tangential: bool = False, deep: bool = False,
             n_dirs: int | None = None) -> Grid:
    """Published sup grid: centre plus radii 1 - 2^-m (m <= m_max) times directions.

    16 directions for n = 1, 64 for n = 2 (16 phases in the z_1-plane and
    three tilts).  ``tangential`` adds approach points theta = +-tau x^kappa
    towards e_1 on every shell; ``deep`` appends the log-form shell.
    """
    dirs = _directions(n, n_dirs)
    plane = np.array([abs(abs(d[0]) - 1.0) < 1e-15 for d in dirs])
    ph = np.angle(dirs[:, 0])
    pts, lx, sh, pl, lt, sg = [np.zeros(n, dtype=complex)], [0.0], [0], [True], [-np.inf], [1.0]
    shells = [(m, -m * LOG2) for m in range(1, m_max + 1)]
    deep_shell = None
    if deep:
        deep_shell = m_max + 1
        shells.append((deep_shell, DEEP_LOGX))
    for m, logx in shells:
        x = math.exp(logx)
        for d, p, phase in zip(dirs, plane, ph):
            pts.append((1.0 - x) * d)
            lx.append(logx)
            sh.append(m)
            pl.append(bool(p))
            lt.append(math.log(abs(phase)) if p and phase != 0 else -np.inf)
            sg.append(1.0 if phase >= 0 else -1.0)
        if tangential:
            for kappa, tau in TANGENTIAL:
                ltheta = math.log(tau) + kappa * logx
                for sign in (1.0, -1.0):
                    th = sign * math.exp(ltheta)
                    z = np.zeros(n, dtype=complex)
                    z[0] = (1.0 - x) * np.exp(1j * th)
                    pts.append(z)
                    lx.append(logx)
                    sh.append(m)
                    pl.append(True)
                    lt.append(ltheta)
                    sg.append(sign)
    # the centre has 1 - |z| = 1, i.e. logx = 0
    return Grid(n, np.array(pts), np.array(lx), np.array(sh), np.array(pl), np.array(lt),
                np.array(sg), deep_shell)


def _log_abs_on_grid(f: HoloFunction, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """(log|f|, log|grad f|) at every grid point."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        lv = np.log(np.abs(f.value(grid.points)))
        lg = np.log(f.grad_norm(grid.points))
    if f.singular_on_e1:
        mask = grid.plane
        sub = grid.subset(mask)
        lw, logS = sub.z1_log_omega()
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            lf = np.log(abs(f.factor))
            lv[mask] = f.profile.log_abs_value(lw, logS) + lf
            lg[mask] = f.profile.log_abs_deriv(lw, logS) + lf
    return lv, lg


# ----------------------------------------------------------------------
# F(p, mu, s)

def transverse_weight(mu: NormalWeight, p: float, n: int) -> RadialWeight:
    """Disc weight for int_B H(<z,e>) mu^p(|z|) / (1-|z|^2) dv(z).

    n = 1 is the weight itself; for n >= 2 the transverse variables are
    integrated out: Q(S) = n(n-1) S^(n-1) int_0^1 M(S sigma)(1-sigma)^(n-2) dsigma
    with M(S) = mu^p/S.  Pure power-log weights use the closed form in
    terms of the confluent function; a log log factor uses Gauss-Laguerre
    in y = -log sigma.
    """
    delta = p * mu.alpha - 1.0

    if n == 1:
        def log_w(x, logx):
            logS = logx + np.log(2.0 - x)
            return p * mu.log_from_log_defect(logS) - logS
        return RadialWeight(log_w, delta)

    if mu.gamma == 0.0:
        def log_w(x, logx):
            logS = logx + np.log(2.0 - x)
            return log_slice_weight(logS, n, delta, p * mu.beta)
        return RadialWeight(log_w, n - 1.0 + delta)

    t, wt = roots_laguerre(64)
    a = p * mu.alpha
    y = t / a

    def log_w(x, logx):
        logS = np.asarray(logx + np.log(2.0 - x), dtype=float)
        ls = logS[..., None] - y
        logM_rest = p * mu.log_from_log_defect(ls) - (a - 1.0) * ls  # log-factor part
        vals = (-np.expm1(-y)) ** (n - 2) * np.exp(logM_rest - logM_rest[..., :1])
        inner = np.log(vals @ wt / a) + logM_rest[..., 0]
        return math.log(n * (n - 1)) + (n - 1.0 + delta) * logS + inner
    return RadialWeight(log_w, n - 1.0 + delta)


def _coupling(e: np.ndarray, w: np.ndarray) -> complex:
    """c with <zeta e, w> = zeta c."""
    return complex(np.sum(e * np.conj(w)))


def _collinear(e: np.ndarray, w: np.ndarray, tol: float = 1e-13) -> bool:
    nw = np.linalg.norm(w)
    return nw == 0 or np.linalg.norm(w - np.vdot(e, w) * e) <= tol * nw


def fpms_local(f: HoloFunction, w: CPoint, sp: SpaceParams,
               cfg: QuadConfig = QuadConfig(rel_tol=1e-7)) -> float:
    """int_B (1-|w|^2)^s |grad f(z)|^p |1-<z,w>|^-2s mu^p(|z|)/(1-|z|^2) dv(z)."""
    return fpms_local_result(f, w, sp, cfg).value


def fpms_local_result(f: HoloFunction, w: CPoint, sp: SpaceParams,
                      cfg: QuadConfig = QuadConfig(rel_tol=1e-7)) -> IntegrationResult:
    w = as_point(w)
    n = sp.n
    if w.dim != n or f.n != n:
        raise DimensionError("function, point and space must share the dimension")
    w.require_interior("w")
    if f.kind == "const":
        return IntegrationResult(0.0, 0.0, 0, "exact")
    p, s = sp.p, sp.s
    wa = w.array
    log_pref = s * math.log(w.defect())
    e = f.axis
    if e is None and n == 1:
        e = np.ones(1, dtype=complex)
    if e is not None and (n == 1 or _collinear(e, wa)):
        cw = _coupling(e, wa)
        peaks = []
        if abs(cw) > 0:
            peaks.append((-math.atan2(cw.imag, cw.real), max(1.0 - abs(cw), 1e-15)))
        pk = f.peak()
        if pk is not None:
            c0 = _coupling(e, pk[0])
            peaks.append((-math.atan2(c0.imag, c0.real), pk[1]))

        def h(x, th):
            zeta = (1.0 - x) * np.exp(1j * th)
            Z = zeta[..., None] * e
            with np.errstate(divide="ignore"):
                lg = np.log(f.grad_norm(Z))
            lk = -2.0 * s * np.log(np.abs(one_minus_rotated(cw, x, th))) if s else 0.0
            return np.exp(p * lg + lk + log_pref)
        res = integrate_disc(h, transverse_weight(sp.mu, p, n), peaks=peaks, cfg=cfg,
                             method="slice-reduced")
        return res

    def g(Z):
        nz = np.linalg.norm(Z, axis=-1)
        S = (1.0 - nz) * (1.0 + nz)
        with np.errstate(divide="ignore"):
            lg = np.log(f.grad_norm(Z))
            lk = -2.0 * s * np.log(np.abs(1.0 - Z @ np.conj(wa))) if s else 0.0
            lm = p * sp.mu.log_from_defect(np.maximum(S, 1e-300)) - np.log(np.maximum(S, 1e-300))
        return np.exp(p * lg + lk + lm + log_pref)
    return integrate_ball(g, n, cfg)


@dataclass(frozen=True)
class NormReport:
    value: float
    at_zero: float
    sup_local: float
    argmax: tuple[complex, ...]
    local: np.ndarray = field(repr=False)
    grid: Grid = field(repr=False)


def fpms_norm_report(f: HoloFunction, sp: SpaceParams, wgrid: Grid | None = None,
                     cfg: QuadConfig = QuadConfig(rel_tol=1e-7)) -> NormReport:
    grid = wgrid or sup_grid(sp.n)
    local = np.array([fpms_local(f, CPoint(tuple(pt)), sp, cfg) for pt in grid.points])
    i = int(np.argmax(local))
    at0 = float(abs(f.value(np.zeros(sp.n, dtype=complex))))
    val = at0 + float(local[i]) ** (1.0 / sp.p)
    return NormReport(val, at0, float(local[i]), tuple(grid.points[i]), local, grid)


def fpms_norm(f: HoloFunction, sp: SpaceParams, wgrid: Grid | None = None,
              cfg: QuadConfig = QuadConfig(rel_tol=1e-7)) -> float:
    """|f(0)| + (max over the grid of the local integral)^(1/p): a grid lower bound."""
    return fpms_norm_report(f, sp, wgrid, cfg).value


def bloch_norm(f: HoloFunction, nu: NormalWeight, zgrid: Grid | None = None) -> float:
    """|f(0)| + max over the grid of nu(|z|) |grad f(z)|."""
    grid = zgrid or sup_grid(f.n)
    _, lg = _log_abs_on_grid(f, grid)
    vals = np.exp(nu.log_from_log_defect(grid.logS) + lg)
    return float(abs(f.value(np.zeros(f.n, dtype=complex)))) + float(np.nanmax(vals))


def lemma24_check(f: HoloFunction, sp: SpaceParams, wgrid: Grid | None = None,
                  cfg: QuadConfig = QuadConfig(rel_tol=1e-7), norm: float | None = None) -> float:
    """max over the grid of |grad f(w)| (1-|w|^2)^((n-s)/p) mu(|w|) / grid norm."""
    grid = wgrid or sup_grid(sp.n)
    if f.kind == "const":
        return 0.0
    norm = fpms_norm(f, sp, grid, cfg) if norm is None else norm
    _, lg = _log_abs_on_grid(f, grid)
    logS = grid.logS
    vals = np.exp(lg + sp.q * logS + sp.mu.log_from_log_defect(logS))
    return float(np.nanmax(vals)) / norm


def prop33_check(h: HoloFunction, mu1: NormalWeight, mu2: NormalWeight,
                 zgrid: Grid | None = None) -> tuple[float, float]:
    """(M, M'): grid sups of mu1|h|/mu2 and (1-|z|^2) mu1 |grad h| / mu2."""
    grid = zgrid or sup_grid(h.n)
    lv, lg = _log_abs_on_grid(h, grid)
    logS = grid.logS
    ratio = mu1.log_from_log_defect(logS) - mu2.log_from_log_defect(logS)
    M = float(np.nanmax(np.exp(ratio + lv)))
    Mp = float(np.nanmax(np.exp(ratio + logS + lg)))
    return M, Mp


# ----------------------------------------------------------------------
# multiplier criteria

def _radial_antiderivative(sp: SpaceParams, logS_max: np.ndarray) -> np.ndarray:
    """int_0^r d rho / (mu(rho)(1-rho^2)^((n-s)/p)) at the radii with the given log S."""
    from scipy.integrate import quad
    out = []
    for ls in np.atleast_1d(logS_max):
        r = math.sqrt(max(0.0, -math.expm1(ls))) if ls > -700 else 1.0
        if ls <= -700:
            out.append(np.nan)
            continue

        def g(rho):
            S = (1.0 - rho) * (1.0 + rho)
            return math.exp(-sp.mu.log_from_defect(S) - sp.q * math.log(S))
        val, _ = quad(g, 0.0, r, limit=400)
        out.append(val)
    return np.array(out)


@dataclass
class CriterionValue:
    criterion: str
    value: float
    published_value: float
    diverges: bool
    shells: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"value": self.value, "published_grid_value": self.published_value,
                "diverges": self.diverges,
                "shell_max": {str(k): v for k, v in self.shells.items()}}


def _shell_max(vals: np.ndarray, shells: np.ndarray) -> dict:
    out = {}
    for m in np.unique(shells):
        sel = vals[shells == m]
        sel = sel[np.isfinite(sel)]
        out[int(m)] = float(sel.max()) if sel.size else float("nan")
    return out


def multiplier_criteria(psi: HoloFunction, sp: SpaceParams, zgrid: Grid | None = None) -> dict:
    """Grid suprema of the multiplier quantities with divergence flags.

    Keys: "3.8", "3.9", "3.10", "3.11", "3.12", "hinf" (sup |psi|), "bloch"
    (sup nu |grad psi|), and "3.5" when s > n.  A flag is raised when the
    value on the last shell exceeds twice the value on the previous one;
    with the default grid those are the deep log-form shell and 1 - 2^-12.
    """
    grid = zgrid or sup_grid(sp.n, tangential=True, deep=True)
    lv, lg = _log_abs_on_grid(psi, grid)
    logS = grid.logS
    L = 1.0 - logS
    lnu = sp.nu.log_from_log_defect(logS)
    lmu = sp.mu.log_from_log_defect(logS)
    with np.errstate(divide="ignore", invalid="ignore"):
        loglogL = np.log(np.log1p(-logS))  # log log(e/(1-|z|^2))
        logL = np.log(L)
        quantities = {
            "3.8": lnu + lv - lmu - sp.q * logS,
            "3.9": lnu + lg + np.log(np.maximum(np.log1p(-logS), 0.0)),
            "3.10": lnu + lg + (1.0 - sp.mu.beta) * logL,
            "3.11": logS + lg + logL + loglogL,
            "3.12": logS + lg + logL,
            "hinf": lv,
            "bloch": lnu + lg,
        }
        if sp.s > sp.n:
            anti = np.full(logS.shape, np.nan)
            fin = grid.shell != grid.deep_shell
            anti[fin] = _radial_antiderivative(sp, logS[fin])
            quantities["3.5"] = lnu + lg + np.log(anti)
    shells = sorted(set(grid.shell.tolist()))
    out = {}
    for key, lq in quantities.items():
        vals = np.exp(lq)
        per_shell = _shell_max(vals, grid.shell)
        finite = [m for m in shells if np.isfinite(per_shell.get(m, np.nan))]
        last, prev = (finite[-1], finite[-2]) if len(finite) >= 2 else (None, None)
        diverges = bool(last is not None and per_shell[last] > 2.0 * per_shell[prev])
        pub = grid.shell != grid.deep_shell if grid.deep_shell is not None else np.ones_like(vals, bool)
        pv = vals[pub]
        pv = pv[np.isfinite(pv)]
        allv = vals[np.isfinite(vals)]
        out[key] = CriterionValue(key, float(allv.max()) if allv.size else float("nan"),
                                  float(pv.max()) if pv.size else float("nan"), diverges,
                                  per_shell)
    return out


def criteria_record(psi: HoloFunction, sp: SpaceParams, zgrid: Grid | None = None) -> dict:
    """JSON-ready record: criterion id -> value, flag and grid metadata."""
    grid = zgrid or sup_grid(sp.n, tangential=True, deep=True)
    crit = multiplier_criteria(psi, sp, grid)
    return {
        "function": psi.tag,
        "n": sp.n, "p": sp.p, "s": sp.s,
        "mu": {"alpha": sp.mu.alpha, "beta": sp.mu.beta, "gamma": sp.mu.gamma},
        "nu": {"alpha": sp.nu.alpha, "beta": sp.nu.beta, "gamma": sp.nu.gamma},
        "criteria": {k: v.as_dict() for k, v in crit.items()},
        "grid": {"points": int(grid.points.shape[0]), "max_published_m": int(
            max(m for m in grid.shell if m != grid.deep_shell)),
            "deep_log_defect": DEEP_LOGX if grid.deep_shell is not None else None},
    }


# ----------------------------------------------------------------------
# weighted Bergman reproduction

def bergman_constant(n: int, alpha: float) -> float:
    """c_alpha = Gamma(n+1+alpha) / (n! Gamma(alpha+1))."""
    if not alpha > -1:
        raise DomainError("alpha must exceed -1")
    return math.exp(math.lgamma(n + 1 + alpha) - math.lgamma(n + 1) - math.lgamma(alpha + 1))


def bergman_reproduce(f: HoloFunction, alpha: float, z: CPoint,
                      cfg: QuadConfig = QuadConfig(rel_tol=1e-10)) -> tuple[complex, complex]:
    """(int_B f(w)/(1-<z,w>)^(n+1+alpha) dv_alpha(w), f(z)).

    Real and imaginary parts are integrated separately; an absolute floor
    lets a part that vanishes by symmetry converge.
    """
    cfg = replace(cfg, abs_tol=max(cfg.abs_tol, 1e-13))
    z = as_point(z)
    z.require_interior()
    n = f.n
    if z.dim != n:
        raise DimensionError("point and function dimensions differ")
    logc = math.log(bergman_constant(n, alpha))
    za = z.array
    expo = n + 1 + alpha

    def kern(W):
        return f.value(W) * np.exp(-expo * np.log(1.0 - np.conj(W) @ za))

    parts = []
    for take in (np.real, np.imag):
        if n == 1:
            weight = RadialWeight.power(alpha, math.exp(logc))

            def h(x, th, take=take):
                W = ((1.0 - x) * np.exp(1j * th))[..., None]
                return take(kern(W))
            peak = [(math.atan2(za[0].imag, za[0].real), max(1.0 - abs(za[0]), 1e-15))] if za[0] else []
            parts.append(integrate_disc(h, weight, peaks=peak, cfg=cfg, method="adaptive").value)
        else:
            def g(W, take=take):
                nw = np.linalg.norm(W, axis=-1)
                S = (1.0 - nw) * (1.0 + nw)
                return take(kern(W)) * np.exp(logc) * S ** alpha
            parts.append(integrate_ball(g, n, cfg).value)
    direct = complex(f.value(za))
    return complex(parts[0], parts[1]), direct


# ----------------------------------------------------------------------
# the weight condition separating the two multiplier regimes

def radial_integral_finite(mu: NormalWeight, sp: SpaceParams, depth: float = 700.0) -> bool:
    """Whether int_0^1 mu^-1(rho)(1-rho^2)^((s-n)/p) d rho converges.

    Decided from the exponents: with e = -alpha + (s-n)/p the integrand is
    S^e log^-beta(e/S) (log log)^-gamma near the rim, integrable iff e > -1,
    or e = -1 and -beta < -1, or e = -1, beta = 1 and gamma > 1.
    """
    e = -mu.alpha - sp.q
    if abs(e + 1.0) > 1e-12:
        return e > -1.0
    if abs(mu.beta - 1.0) > 1e-12:
        return mu.beta > 1.0
    return mu.gamma > 1.0


def regime_ratio(mu: NormalWeight, sp: SpaceParams, radii) -> np.ndarray:
    """(1 + int_0^r mu^-1 (1-rho^2)^((s-n)/p)) / (mu^-1(r) (1-r^2)^(1+(s-n)/p)) on radii."""
    radii = np.asarray(radii, dtype=float)
    S = (1.0 - radii) * (1.0 + radii)
    anti = _radial_antiderivative(sp, np.log(S))
    rhs = np.exp(-mu.log_from_defect(S) + (1.0 - sp.q) * np.log(S))
    return (1.0 + anti) / rhs
