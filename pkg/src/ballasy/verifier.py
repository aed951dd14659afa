"""Boundary sweeps: compare numerical left-hand sides with the claimed rates.

A sweep walks w = radius * u towards the sphere (radii 1 - 2^-m by
default), evaluates LHS and RHS at every point and summarises the ratio
LHS/RHS:

* the *window* max(ratio)/min(ratio) must stay bounded,
* it must have settled (window over the last 4 radii within 25% of the
  window over the last 8),
* the fitted boundary exponent must match the exponent of the dominant
  RHS term.

The exponent fit divides out the non-power part of the dominant term
(its logarithms and any bounded factors) before regressing on
log(1 - |w|^2), so log factors do not bias the slope.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .asymptotics import (Case, CaseId, base_logs, dominant_term, has_log_factors,
                          lookup_case, term_log_value)
from .exceptions import CaseDriftError, DomainError, QuadratureError
from .geometry import CPoint
from .kernels import RADIAL_FAMILIES, TWO_POINT_FAMILIES, KernelFamily, PointPair, eval_lhs
from .quadrature import QuadConfig

COUPLINGS = ("same", "antipodal", "fixed", "rotated")
DEFAULT_M = tuple(range(2, 14))
FIT_ROWS = 6
MAX_REL_ERR = 1e-3


def default_radii(ms: Sequence[int] = DEFAULT_M) -> tuple[float, ...]:
    return tuple(1.0 - 2.0 ** -m for m in ms)


@dataclass(frozen=True)
class SweepPlan:
    radii: tuple[float, ...] = default_radii()
    directions: tuple[tuple[complex, ...], ...] | None = None
    coupling: str = "same"
    fixed_scale: float = 0.5
    fixed_point: tuple[complex, ...] | None = None
    rotation: float = 0.1
    cfg: QuadConfig = QuadConfig(rel_tol=1e-8)

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.size == 0 or np.any(np.diff(r) <= 0):
            raise DomainError("radii must be strictly increasing")
        if r[0] <= 0 or r[-1] >= 1 - 1e-6:
            raise DomainError("radii must lie in (0, 1 - 1e-6)")
        if self.coupling not in COUPLINGS:
            raise DomainError(f"unknown coupling {self.coupling!r}")
        object.__setattr__(self, "radii", tuple(float(x) for x in r))

    def unit_directions(self, n: int) -> list[np.ndarray]:
        if self.directions is None:
            e = np.zeros(n, dtype=complex)
            e[0] = 1.0
            return [e]
        out = []
        for d in self.directions:
            v = np.asarray(d, dtype=complex)
            if v.size != n:
                raise DomainError(f"direction {d} has wrong dimension for n = {n}")
            out.append(v / np.linalg.norm(v))
        return out

    def second_point(self, w: np.ndarray, u: np.ndarray) -> np.ndarray:
        if self.coupling == "same":
            return w.copy()
        if self.coupling == "antipodal":
            return -w
        if self.coupling == "rotated":
            return np.exp(1j * self.rotation) * w
        if self.fixed_point is not None:
            return np.asarray(self.fixed_point, dtype=complex)
        return self.fixed_scale * u


@dataclass(frozen=True)
class SweepRow:
    index: int
    m: float
    radius: float
    dir_index: int
    coupling: str
    lhs: float
    lhs_err: float
    rhs: float
    ratio: float
    case_id: str
    dominant: int
    log_defect: float
    log_rhs_dominant: float
    excluded: bool = False
    note: str = ""


@dataclass
class SweepReport:
    family: KernelFamily
    plan: SweepPlan
    case: CaseId
    rows: list[SweepRow]
    predicted: float
    rhs_shift: float = 0.0
    summary: dict = field(default_factory=dict)

    @property
    def usable(self) -> list[SweepRow]:
        return [r for r in self.rows if not r.excluded]

    @property
    def excluded_rows(self) -> list[int]:
        return [r.index for r in self.rows if r.excluded]


def _m_of(radius: float) -> float:
    m = -math.log2(1.0 - radius)
    return float(round(m)) if abs(m - round(m)) < 1e-9 else m


def _points(fam: KernelFamily, plan: SweepPlan):
    """(index, radius, dir_index, PointPair, one_minus_rho) for every plan point."""
    jobs = []
    idx = 0
    if fam.tag in RADIAL_FAMILIES:
        for rad in plan.radii:
            jobs.append((idx, rad, 0, PointPair(rho=rad), 2.0 ** -_m_of(rad)
                         if float(_m_of(rad)).is_integer() else 1.0 - rad))
            idx += 1
        return jobs
    for di, u in enumerate(plan.unit_directions(fam.n)):
        for rad in plan.radii:
            w = rad * u
            a = CPoint(plan.second_point(w, u)) if fam.tag in TWO_POINT_FAMILIES else None
            jobs.append((idx, rad, di, PointPair(CPoint(w), a), None))
            idx += 1
    return jobs


def _eval_row(args) -> SweepRow:
    fam, case, coupling, cfg, shift, (idx, rad, di, pts, om) = args
    dom, power = dominant_term(case, coupling)
    logs = base_logs(pts)
    dist = "R" if pts.rho is not None else "W"
    log_d = logs[dist]
    rhs_terms = [term_log_value(t, logs) for t in case.terms]
    # the debug shift perturbs the exponent of the boundary distance
    rhs_terms = [v + shift * log_d for v in rhs_terms]
    rhs = float(sum(math.exp(v) for v in rhs_terms))
    try:
        res = eval_lhs(fam, pts, cfg, stream=idx, one_minus_rho=om)
        lhs, err, excluded, note = res.value, res.error_estimate, False, res.method
        if not (lhs > 0 and math.isfinite(lhs)):
            excluded, note = True, "non-positive or non-finite value"
    except QuadratureError as exc:
        part = exc.partial
        lhs = float(getattr(part, "value", math.nan) if part is not None else math.nan)
        err = float(getattr(part, "error_estimate", math.inf) if part is not None else math.inf)
        excluded, note = True, f"quadrature failure: {exc}"
    return SweepRow(idx, _m_of(rad), rad, di, coupling, lhs, err, rhs,
                    lhs / rhs if rhs else math.nan, str(case.cid), dom, log_d,
                    rhs_terms[dom], excluded, note)


def worker_count(requested: int | None = None) -> int:
    env = os.environ.get("BALL_ASY_THREADS")
    cap = int(env) if env and env.isdigit() and int(env) > 0 else (os.cpu_count() or 1)
    return max(1, min(requested or cap, cap))


def run_sweep(fam: KernelFamily, plan: SweepPlan = SweepPlan(), *, workers: int | None = 1,
              rhs_shift: float = 0.0) -> SweepReport:
    """Evaluate LHS and RHS over the plan and summarise.

    ``rhs_shift`` adds to the exponent of the boundary distance in every
    RHS term (a deliberately wrong rate for negative controls).
    """
    case = lookup_case(fam)
    coupling = ("radial" if fam.tag in RADIAL_FAMILIES else
                plan.coupling if fam.tag in TWO_POINT_FAMILIES else "none")
    jobs = [(fam, case, coupling, plan.cfg, rhs_shift, j) for j in _points(fam, plan)]
    nw = worker_count(workers)
    if nw > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=nw) as ex:
            rows = list(ex.map(_eval_row, jobs))
    else:
        rows = [_eval_row(j) for j in jobs]
    rows.sort(key=lambda r: r.index)
    if len({r.case_id for r in rows}) > 1:
        raise CaseDriftError(f"plan straddles cases {sorted({r.case_id for r in rows})}")
    # rows with a poor error estimate are kept in the table but not used
    rows = [replace(r, excluded=True, note=r.note + "; error above 1e-3")
            if not r.excluded and not (r.lhs_err <= MAX_REL_ERR * abs(r.lhs)) else r
            for r in rows]
    predicted = dominant_term(case, coupling)[1] + rhs_shift
    rep = SweepReport(fam, plan, case.cid, rows, predicted, rhs_shift)
    rep.summary = summarise(rep, case, coupling)
    return rep


def _window(rows: Sequence[SweepRow]) -> float:
    ratios = [r.ratio for r in rows]
    return max(ratios) / min(ratios) if ratios else math.nan


def _tail(rows: Sequence[SweepRow], count: int) -> list[SweepRow]:
    """Rows belonging to the ``count`` largest radii (all directions)."""
    radii = sorted({r.radius for r in rows})[-count:]
    keep = set(radii)
    return [r for r in rows if r.radius in keep]


def _ols_slope(x, y) -> float:
    x, y = np.asarray(x, float), np.asarray(y, float)
    return float(np.polyfit(x, y, 1)[0])


def summarise(rep: SweepReport, case: Case, coupling: str) -> dict:
    rows = rep.usable
    out = {"case": str(rep.case), "n_rows": len(rep.rows), "excluded_rows": rep.excluded_rows}
    if not rows:
        out.update(window=math.nan, slope=math.nan, predicted=rep.predicted)
        return out
    ratios = [r.ratio for r in rows]
    out.update(ratio_min=min(ratios), ratio_max=max(ratios), window=_window(rows),
               window_last4=_window(_tail(rows, 4)), window_last8=_window(_tail(rows, 8)),
               predicted=rep.predicted, log_factors=has_log_factors(case, coupling))
    try:
        slope, _ = fit_boundary_exponent(rep)
        out["slope"] = slope
        out["raw_slope"] = raw_boundary_slope(rep)
        out["log_growth"] = fit_log_growth(rep)
    except DomainError:
        out.update(slope=math.nan, raw_slope=math.nan, log_growth=math.nan)
    return out


def _fit_rows(rep: SweepReport) -> list[SweepRow]:
    rows = _tail(rep.usable, FIT_ROWS)
    if len({r.radius for r in rows}) < 4:
        raise DomainError("need at least 4 usable tail radii for a fit")
    return rows


def fit_boundary_exponent(rep: SweepReport) -> tuple[float, float]:
    """(fitted, predicted) exponent of the boundary distance.

    Fits log(LHS / (dominant RHS term without its power)) against
    log(1 - |w|^2) (or log(1 - rho)) over the last six radii.
    """
    rows = _fit_rows(rep)
    p = rep.predicted
    x = [r.log_defect for r in rows]
    y = [math.log(r.lhs) - (r.log_rhs_dominant - p * r.log_defect) for r in rows]
    return _ols_slope(x, y), p


def raw_boundary_slope(rep: SweepReport) -> float:
    """Plain least-squares slope of log LHS against log distance."""
    rows = _fit_rows(rep)
    return _ols_slope([r.log_defect for r in rows], [math.log(r.lhs) for r in rows])


def fit_log_growth(rep: SweepReport) -> float:
    """Slope of log LHS against log log(e/distance): the power of a pure log rate."""
    rows = _fit_rows(rep)
    return _ols_slope([math.log(1.0 - r.log_defect) for r in rows], [math.log(r.lhs) for r in rows])


@dataclass(frozen=True)
class Verdict:
    passed: bool
    window: float
    window_ok: bool
    stable: bool
    slope: float
    predicted: float
    slope_ok: bool
    one_sided: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self):
        return self.passed


def verdict(rep: SweepReport, window_bound: float = 50.0,
            slope_tol: float | None = None) -> Verdict:
    """Pass/fail decision for a sweep.

    Two-sided estimates need a bounded, settled window and a matching
    exponent; the one-sided lower bound only needs min(ratio) >= 1/bound.
    ``slope_tol`` defaults to 0.05, or 0.1 when the dominant term has log
    factors.
    """
    s = rep.summary
    window = s.get("window", math.nan)
    slope = s.get("slope", math.nan)
    if slope_tol is None:
        slope_tol = 0.1 if s.get("log_factors") else 0.05
    reasons = []
    if rep.case.one_sided:
        ok = s.get("ratio_min", 0.0) >= 1.0 / window_bound
        if not ok:
            reasons.append(f"ratio_min {s.get('ratio_min', math.nan):.3g} below 1/{window_bound:g}")
        return Verdict(ok, window, ok, True, slope, rep.predicted, True, True, tuple(reasons))
    window_ok = bool(window <= window_bound)
    w4, w8 = s.get("window_last4", math.nan), s.get("window_last8", math.nan)
    stable = bool(abs(w4 - w8) <= 0.25 * w8)
    slope_ok = bool(abs(slope - rep.predicted) <= slope_tol)
    if not window_ok:
        reasons.append(f"window {window:.3g} exceeds {window_bound:g}")
    if not stable:
        reasons.append(f"tail windows {w4:.3g} (last 4) vs {w8:.3g} (last 8) differ by more than 25%")
    if not slope_ok:
        reasons.append(f"slope {slope:.4f} vs predicted {rep.predicted:.4f} (tol {slope_tol:g})")
    passed = window_ok and stable and slope_ok
    return Verdict(passed, window, window_ok, stable, slope, rep.predicted, slope_ok, False,
                   tuple(reasons))


# ----------------------------------------------------------------------
# representative parameter sets, one per case
#
# Each entry is (family tag, expected case, {n: params}, deep).  Sets are
# chosen so that the first correction to the leading rate decays at
# least like (1 - |w|^2)^1 for the fixed coupling; ``deep`` marks log
# rates with a constant offset, whose ratio settles only like 1/log and
# therefore needs radii out to 1 - 2^-19.

def _both(**p):
    return {1: dict(p), 2: dict(p)}


REPRESENTATIVE: tuple[tuple[str, str, dict, bool], ...] = (
    ("P31_G", "3.1(1)", _both(c=-0.5, k=0), False),
    ("P31_G", "3.1(2)", _both(c=0.5, k=1), False),
    ("P31_G", "3.1(3)", _both(c=0, k=0), False),
    ("P31_G", "3.1(4)", _both(c=0, k=-1), False),
    ("P31_G", "3.1(1)", _both(c=0, k=-2), False),
    ("P31_F", "3.1(1)", _both(delta=0, c=-0.5, k=0), False),
    ("P31_F", "3.1(2)", _both(delta=0, c=0.5, k=1), False),
    ("P31_F", "3.1(3)", _both(delta=0, c=0, k=0), False),
    ("P31_F", "3.1(4)", _both(delta=0, c=0, k=-1), False),
    ("L21_I1", "2.1(1)", {1: dict(delta=0, c=0, k=-2)}, False),
    ("L21_I1", "2.1(2)", {1: dict(delta=0, c=0.5, k=1)}, False),
    ("L21_I1", "2.1(3)", {1: dict(delta=0, c=0, k=0)}, False),
    ("L21_I1", "2.1(4)", {1: dict(delta=0, c=0, k=-1)}, False),
    ("L21_I2", "2.1(1)", {1: dict(delta=0, c=0, k=-2)}, False),
    ("L21_I2", "2.1(3)", {1: dict(delta=0, c=0, k=0)}, False),
    ("L21_I2", "2.1(4)", {1: dict(delta=0, c=0, k=-1)}, False),
    ("PropB", "B(1)", _both(delta=0, t=0.5, r=0.5, k=0), False),
    ("PropB", "B(2)", {1: dict(delta=0, t=1, r=1, k=0), 2: dict(delta=0, t=1.5, r=1.5, k=0)}, False),
    ("PropB", "B(3)", {1: dict(delta=0, t=2, r=0.5, k=0), 2: dict(delta=0, t=3, r=0.5, k=0)}, False),
    ("PropB", "B(4)", {1: dict(delta=0, t=1, r=1.5, k=0), 2: dict(delta=0, t=2, r=1.5, k=0)}, False),
    ("PropB", "B(5)", {1: dict(delta=0, t=2, r=2, k=0), 2: dict(delta=0, t=3, r=3, k=0)}, True),
    ("PropB", "B(6)", {1: dict(delta=0, t=2.5, r=0.5, k=0), 2: dict(delta=0, t=3.5, r=0.5, k=0)}, False),
    ("PropB", "B(7)", {1: dict(delta=0, t=3, r=3, k=0), 2: dict(delta=0, t=4, r=4, k=0)}, False),
    ("PropB", "B(8)", {1: dict(delta=0, t=3, r=2, k=0), 2: dict(delta=0, t=4, r=3, k=0)}, False),
    ("PropB", "B(9)", {1: dict(delta=0, t=2, r=0, k=0), 2: dict(delta=0, t=3, r=0, k=0)}, False),
    ("PropC", "C(1)", {1: dict(t=-0.75, r=-0.75), 2: dict(t=-1.5, r=-1.5)}, False),
    ("PropC", "C(2)", {1: dict(t=-0.5, r=-0.5), 2: dict(t=-1, r=-1)}, False),
    ("PropC", "C(3)", _both(t=0, r=-0.5), False),
    ("PropC", "C(4)", {1: dict(t=-0.25, r=-0.25), 2: dict(t=-0.5, r=-0.5)}, False),
    ("PropC", "C(5)", _both(t=0, r=0), False),
    ("PropC", "C(6)", _both(t=0.5, r=-0.5), False),
    ("PropC", "C(7)", _both(t=1, r=1), False),
    ("PropC", "C(8)", _both(t=1, r=0), False),
    ("P32", "3.2(1)", {1: dict(delta=0, t=1, r=1.5, k=1), 2: dict(delta=0, t=2, r=2, k=1)}, False),
    ("P32", "3.2(2)", {1: dict(delta=0, t=2, r=0.5, k=1), 2: dict(delta=0, t=3, r=0.5, k=1)}, False),
    ("P32", "3.2(3)", {1: dict(delta=0, t=2.5, r=0.5, k=1), 2: dict(delta=0, t=3.5, r=0.5, k=1)}, False),
)

DEEP_M = tuple(range(2, 20))


def representative_plans(couplings: Sequence[str] = ("same", "fixed")):
    """Yield (family, expected case, plan) over the representative table."""
    from .kernels import family
    for tag, case, by_n, deep in REPRESENTATIVE:
        radii = default_radii(DEEP_M if deep else DEFAULT_M)
        for n, params in by_n.items():
            fam = family(tag, n=n, **params)
            cps = couplings if tag in TWO_POINT_FAMILIES else ("same",)
            for cp in cps:
                yield fam, case, SweepPlan(radii=radii, coupling=cp)
