"""Right-hand sides: the case tables and their closed-form rates.

Each estimate is stored as data.  A :class:`Case` carries a predicate on
the exponents, human-readable condition text and a list of terms; a
term is a product of powers of a few base quantities:

=========  ==================================================
``W``      1 - |w|^2
``A``      1 - |a|^2
``WA``     |1 - <w, a>|
``LW``     log(e / (1 - |w|^2))
``LA``     log(e / (1 - |a|^2))
``LWA``    log(e / |1 - <w, a>|)
``LWPHI``  log(e / |1 - <w, phi_w(a)>|)
``LAPHI``  log(e / |1 - <a, phi_a(w)>|)
``LPHI2``  log(e / (1 - |phi_w(a)|^2))  (= same with phi_a(w))
``LLW``    log log(e^2 / (1 - |w|^2))
``R``      1 - rho, with ``LR``, ``LLR`` as above
=========  ==================================================

For the two-point families ``a`` stands for the second point (eta in
the log-weighted families).  Two-term cases evaluate to the sum of the
terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import DomainError, UncoveredRegimeError
from .geometry import CPoint, as_point, inner
from .kernels import KernelFamily, PointPair

EQ_TOL = 1e-12

LOG_KINDS = {"LW", "LA", "LWA", "LWPHI", "LAPHI", "LPHI2", "LLW", "LR", "LLR"}
POWER_KINDS = {"W", "A", "WA", "R"}


def _eq(x: float, y: float) -> bool:
    return abs(x - y) <= EQ_TOL * max(1.0, abs(x), abs(y))


def _gt(x: float, y: float) -> bool:
    return x > y and not _eq(x, y)


def _lt(x: float, y: float) -> bool:
    return x < y and not _eq(x, y)


Term = dict  # factor kind -> exponent


@dataclass(frozen=True)
class CaseId:
    prop: str
    index: int | None
    condition: str
    headline: str = ""
    one_sided: bool = False

    def __str__(self):
        return self.prop if self.index is None else f"{self.prop}({self.index})"

    @property
    def label(self) -> str:
        return f"{self}: {self.headline or self.condition}"


@dataclass(frozen=True)
class Case:
    cid: CaseId
    terms: tuple[Term, ...]
    formula: str = ""


def _case(prop, idx, cond, terms, formula, headline=None, one_sided=False):
    return Case(CaseId(prop, idx, cond, headline or cond, one_sided), tuple(terms), formula)


# ----------------------------------------------------------------------
# classification

def _classify_A(f: KernelFamily) -> Case:
    c = f.c
    if _lt(c, 0):
        return _case("A", 1, "c<0", [{}], "1", "bounded")
    if _eq(c, 0):
        return _case("A", 2, "c=0", [{"LW": 1}], "log(e/(1−|w|²))",
                     "logarithmic growth log(e/(1−|w|²))")
    return _case("A", 3, "c>0", [{"W": -c}], "(1−|w|²)^(−c)", "power growth (1−|w|²)^(−c)")


def _classify_31(f: KernelFamily) -> Case:
    c, k = f.c, f.k
    if _lt(c, 0) or (_eq(c, 0) and _lt(k, -1)):
        return _case("3.1", 1, "c<0, or c=0 and k<−1", [{}], "1")
    if _gt(c, 0):
        return _case("3.1", 2, "c>0", [{"W": -c, "LW": k}],
                     "(1−|w|²)^(−c)·log^k(e/(1−|w|²))")
    if _gt(k, -1):
        return _case("3.1", 3, "c=0 and k>−1", [{"LW": k + 1}], "log^(k+1)(e/(1−|w|²))")
    return _case("3.1", 4, "c=0 and k=−1", [{"LLW": 1}], "log log(e²/(1−|w|²))")


def _classify_21(f: KernelFamily) -> Case:
    c, k = f.c, f.k
    if _eq(c, 0) and _lt(k, -1):
        return _case("2.1", 1, "c=0 and k<−1", [{}], "1")
    if _gt(c, 0):
        if f.tag == "L21_I2":
            raise UncoveredRegimeError(
                f.tag, "c>0 is stated for I₁ only; no estimate is given for I₂")
        return _case("2.1", 2, "c>0", [{"R": -c, "LR": k}], "(1−ρ)^(−c)·log^k(e/(1−ρ))")
    if _gt(k, -1):
        return _case("2.1", 3, "c=0 and k>−1", [{"LR": k + 1}], "log^(k+1)(e/(1−ρ))")
    return _case("2.1", 4, "c=0 and k=−1", [{"LLR": 1}], "log log(e²/(1−ρ))")


def _classify_B(f: KernelFamily) -> Case:
    d, t, r, k, N = f.delta, f.t, f.r, f.k, f.n + 1
    T, R, S = t - d, r - d, t + r - d
    if _lt(S, N):
        return _case("B", 1, "t+r−δ<n+1", [{}], "1")
    if _eq(S, N) and t > 0 and r > 0:
        return _case("B", 2, "t+r−δ=n+1, t>0, r>0", [{"LWA": k + 1}],
                     "log^(k+1)(e/|1−⟨w,a⟩|)")
    if _eq(T, N) and _gt(N, R) and r > 0:
        return _case("B", 3, "t−δ=n+1>r−δ, r>0", [{"WA": -r, "LW": k, "LWPHI": 1}],
                     "|1−⟨w,a⟩|^(−r)·log^k(e/(1−|w|²))·log(e/|1−⟨w,φ_w(a)⟩|)")
    if _gt(S, N) and _gt(N, max(R, T)):
        return _case("B", 4, "t+r−δ>n+1>max{r−δ,t−δ}", [{"WA": -(S - N), "LWA": k}],
                     "|1−⟨w,a⟩|^(−(t+r−δ−n−1))·log^k(e/|1−⟨w,a⟩|)")
    if _eq(T, N) and _eq(R, N):
        return _case("B", 5, "t−δ=n+1=r−δ",
                     [{"WA": -(d + N), "LW": k, "LWPHI": 1},
                      {"WA": -(d + N), "LA": k, "LAPHI": 1}],
                     "|1−⟨w,a⟩|^(−(δ+n+1))·[log^k(e/(1−|w|²))·log(e/|1−⟨w,φ_w(a)⟩|)"
                     " + log^k(e/(1−|a|²))·log(e/|1−⟨a,φ_a(w)⟩|)]")
    if _gt(T, N) and _gt(N, R):
        return _case("B", 6, "t−δ>n+1>r−δ", [{"W": N - T, "WA": -r, "LW": k}],
                     "(1−|w|²)^(n+1+δ−t)·|1−⟨w,a⟩|^(−r)·log^k(e/(1−|w|²))")
    if _gt(T, N) and _gt(R, N):
        return _case("B", 7, "t−δ>n+1, r−δ>n+1",
                     [{"W": N - T, "WA": -r, "LW": k}, {"A": N - R, "WA": -t, "LA": k}],
                     "(1−|w|²)^(n+1+δ−t)|1−⟨w,a⟩|^(−r)log^k(e/(1−|w|²))"
                     " + (1−|a|²)^(n+1+δ−r)|1−⟨w,a⟩|^(−t)log^k(e/(1−|a|²))")
    if _gt(T, N) and _eq(R, N):
        return _case("B", 8, "t−δ>n+1=r−δ",
                     [{"W": N - T, "WA": -(d + N), "LW": k}, {"WA": -t, "LA": k, "LAPHI": 1}],
                     "(1−|w|²)^(n+1+δ−t)|1−⟨w,a⟩|^(−(δ+n+1))log^k(e/(1−|w|²))"
                     " + |1−⟨w,a⟩|^(−t)log^k(e/(1−|a|²))log(e/|1−⟨a,φ_a(w)⟩|)")
    if _eq(T, N) and r == 0:
        return _case("B", 9, "t−δ=n+1, r=0", [{"LW": k + 1}], "log^(k+1)(e/(1−|w|²))")
    raise UncoveredRegimeError(
        f.tag, f"t−δ={T:g}, r−δ={R:g}, n+1={N}: mirror regime with the roles of w and a "
               "swapped (only the displayed orientation is stated)")


def _classify_C(f: KernelFamily) -> Case:
    t, r, n = f.t, f.r, f.n
    s = t + r + n
    if _lt(s, 0):
        return _case("C", 1, "t+r+n<0", [{}], "1")
    if _eq(s, 0):
        return _case("C", 2, "t+r+n=0", [{"LWA": 1}], "log(e/|1−⟨w,a⟩|)")
    if _eq(t, 0) and _lt(r, 0):
        return _case("C", 3, "t=0>r", [{"WA": -(n + r), "LWPHI": 1}],
                     "|1−⟨w,a⟩|^(−(n+r))·log(e/|1−⟨w,φ_w(a)⟩|)")
    if _lt(r, 0) and _lt(t, 0):
        return _case("C", 4, "t+r+n>0>max{r,t}", [{"WA": -s}], "|1−⟨w,a⟩|^(−(t+r+n))")
    if _eq(t, 0) and _eq(r, 0):
        return _case("C", 5, "t=0=r", [{"WA": -n, "LPHI2": 1}],
                     "|1−⟨w,a⟩|^(−n)·log(e/(1−|φ_w(a)|²))")
    if _gt(t, 0) and _lt(r, 0):
        return _case("C", 6, "t>0>r", [{"W": -t, "WA": -(n + r)}],
                     "(1−|w|²)^(−t)·|1−⟨w,a⟩|^(−(n+r))")
    if _gt(t, 0) and _gt(r, 0):
        return _case("C", 7, "t>0, r>0", [{"W": -t, "WA": -(n + r)}, {"A": -r, "WA": -(n + t)}],
                     "(1−|w|²)^(−t)|1−⟨w,a⟩|^(−(n+r)) + (1−|a|²)^(−r)|1−⟨w,a⟩|^(−(n+t))")
    if _gt(t, 0) and _eq(r, 0):
        return _case("C", 8, "t>0=r", [{"W": -t, "WA": -n}, {"WA": -(n + t), "LPHI2": 1}],
                     "(1−|w|²)^(−t)|1−⟨w,a⟩|^(−n) + |1−⟨w,a⟩|^(−(n+t))log(e/(1−|φ_a(w)|²))")
    raise UncoveredRegimeError(
        f.tag, f"t={t:g}, r={r:g}: mirror regime with the roles of w and a swapped")


def _classify_32(f: KernelFamily) -> Case:
    d, t, r, k, N = f.delta, f.t, f.r, f.k, f.n + 1
    T, R, S = t - d, r - d, t + r - d
    if _gt(S, N) and _gt(N, max(T, R)):
        return _case("3.2", 1, "r+t−δ>n+1>max{t−δ,r−δ}", [{"WA": -(S - N)}],
                     "|1−⟨w,η⟩|^(−(r+t−δ−n−1))")
    if _eq(T, N) and _gt(N, R):
        return _case("3.2", 2, "t−δ=n+1>r−δ", [{"WA": -r, "LWA": -k, "LW": k, "LWPHI": 1}],
                     "|1−⟨w,η⟩|^(−r)·log^(−k)(e/|1−⟨w,η⟩|)·log^k(e/(1−|w|²))"
                     "·log(e/|1−⟨w,φ_w(η)⟩|)")
    if _gt(T, N) and _gt(N, R):
        return _case("3.2", 3, "t−δ>n+1>r−δ", [{"W": N - T, "WA": -r, "LWA": -k, "LW": k}],
                     "(1−|w|²)^(n+1+δ−t)·|1−⟨w,η⟩|^(−r)·log^(−k)(e/|1−⟨w,η⟩|)"
                     "·log^k(e/(1−|w|²))")
    raise UncoveredRegimeError(
        f.tag, f"t−δ={T:g}, r−δ={R:g}, t+r−δ={S:g}, n+1={N}: outside the three stated cases")


def _classify_22(f: KernelFamily) -> Case:
    n, t, r, k = f.n, f.t, f.r, f.k
    return _case("2.2-lower", None, "t>n>r>0, k<0", [{"W": -(t - n), "WA": -r, "LWA": k}],
                 "(1−|w|²)^(−(t−n))·|1−⟨w,η⟩|^(−r)·log^k(e/|1−⟨w,η⟩|)",
                 "one-sided lower bound", one_sided=True)


_CLASSIFIERS: dict[str, Callable[[KernelFamily], Case]] = {
    "PropA_I": _classify_A, "PropA_J": _classify_A,
    "P31_G": _classify_31, "P31_F": _classify_31,
    "L21_I1": _classify_21, "L21_I2": _classify_21,
    "PropB": _classify_B, "PropC": _classify_C, "P32": _classify_32, "L22": _classify_22,
}


def lookup_case(fam: KernelFamily) -> Case:
    """The full case record (terms and formula) matching ``fam``."""
    return _CLASSIFIERS[fam.tag](fam)


def classify(fam: KernelFamily) -> CaseId:
    """Unique case of the estimate table that covers ``fam``."""
    return lookup_case(fam).cid


# ----------------------------------------------------------------------
# evaluation

def base_logs(pts: PointPair) -> dict[str, float]:
    """Logarithms of the base quantities at the given points.

    Quantities involving phi are taken from the Mobius identities
    1 - <phi_w(a), w> = (1-|w|^2)/(1-<a,w>) and
    1 - |phi_w(a)|^2 = (1-|w|^2)(1-|a|^2)/|1-<a,w>|^2,
    which avoid the cancellation of forming phi_w(a) near the sphere.
    """
    out: dict[str, float] = {}
    if pts.rho is not None:
        lr = math.log1p(-pts.rho)
        out.update(R=lr, LR=math.log(1.0 - lr), LLR=math.log(math.log(2.0 - lr)))
        return out
    w = pts.w
    lw = math.log(w.defect())
    out.update(W=lw, LW=math.log(1.0 - lw), LLW=math.log(math.log(2.0 - lw)))
    if pts.second is not None:
        a = pts.second
        la = math.log(a.defect())
        lwa = math.log(abs(1.0 - inner(w, a)))
        out.update(A=la, LA=math.log(1.0 - la), WA=lwa, LWA=math.log(1.0 - lwa),
                   LWPHI=math.log(1.0 + lwa - lw), LAPHI=math.log(1.0 + lwa - la),
                   LPHI2=math.log(1.0 - (lw + la - 2.0 * lwa)))
    return out


def term_log_value(term: Term, logs: dict[str, float]) -> float:
    return sum(e * logs[kind] for kind, e in term.items() if e)


def eval_case(case: Case, pts: PointPair) -> float:
    logs = base_logs(pts)
    return float(sum(math.exp(term_log_value(t, logs)) for t in case.terms))


def _check_points(fam: KernelFamily, pts: PointPair) -> None:
    if fam.tag.startswith("L21"):
        if pts.rho is None:
            raise DomainError(f"{fam.tag} needs rho")
        return
    if pts.w is None:
        raise DomainError(f"{fam.tag} needs a point w")
    pts.w.require_interior()
    if pts.second is not None:
        pts.second.require_interior()
    elif any(k in ("A", "WA") for t in lookup_case(fam).terms for k in t):
        raise DomainError(f"{fam.tag} needs a second point")


def eval_rhs(fam: KernelFamily, pts: PointPair) -> tuple[CaseId, float]:
    """The claimed rate of the matching case, evaluated at ``pts``."""
    case = lookup_case(fam)
    _check_points(fam, pts)
    return case.cid, eval_case(case, pts)


# ----------------------------------------------------------------------
# boundary exponents per coupling

#: power of (1 - |w|^2) carried by each base quantity as |w| -> 1
COUPLING_POWERS = {
    "none": {"W": 1.0},
    "same": {"W": 1.0, "A": 1.0, "WA": 1.0},
    "antipodal": {"W": 1.0, "A": 1.0, "WA": 0.0},
    "rotated": {"W": 1.0, "A": 1.0, "WA": 0.0},
    "fixed": {"W": 1.0, "A": 0.0, "WA": 0.0},
    "radial": {"R": 1.0},
}


def term_power(term: Term, coupling: str) -> float:
    """Power of the boundary distance carried by one term."""
    powers = COUPLING_POWERS[coupling]
    return sum(e * powers.get(kind, 0.0) for kind, e in term.items() if kind in POWER_KINDS)


def dominant_term(case: Case, coupling: str) -> tuple[int, float]:
    """Index and power of the term that blows up fastest at the sphere."""
    powers = [term_power(t, coupling) for t in case.terms]
    i = int(np.argmin(powers))
    return i, powers[i]


def predicted_exponent(fam: KernelFamily, coupling: str = "none", shift: float = 0.0) -> float:
    """Boundary exponent of the matching case; ``shift`` perturbs it on purpose."""
    return dominant_term(lookup_case(fam), coupling)[1] + shift


def has_log_factors(case: Case, coupling: str) -> bool:
    i, _ = dominant_term(case, coupling)
    return any(kind in LOG_KINDS and e for kind, e in case.terms[i].items())


# ----------------------------------------------------------------------
# equivalent log forms and the sup bound for x^eps log^y(e/x)

def sup_x_eps_log(eps: float, y: float) -> float:
    """sup over 0 < x < 2 of x^eps log^y(e/x) by stationary-point analysis."""
    if not eps > 0:
        raise DomainError("eps must be positive")

    def h(x):
        return x ** eps * math.log(math.e / x) ** y

    candidates = [h(2.0)]
    if y > 0:
        xs = math.exp(1.0 - y / eps)
        if xs < 2.0:
            candidates.append(math.exp(eps - y) * (y / eps) ** y)
    return max(candidates)


def sup_bound_21(eps: float, y: float) -> tuple[float, float]:
    """(sup value, stated upper bound) for the family x^eps log^y(e/x)."""
    sup = sup_x_eps_log(eps, y)
    ay = abs(y)
    bound = max(math.exp(eps - ay) * ((ay + 1.0) / eps) ** ay,
                2.0 ** eps * math.log(math.e / 2.0) ** y)
    return sup, bound


def note1_constant(eps: float) -> float:
    """M = sup over 0 < x < 2 of x^eps log(e/x)."""
    return sup_x_eps_log(eps, 1.0)


def note1_forms(w: CPoint, a: CPoint, delta: float, t: float,
                k0: float = 0.0) -> tuple[float, float, float]:
    """The two equivalent right-hand sides of the regime t-delta > n+1 = r-delta.

    L1 uses log(e/(1-|phi_a(w)|^2)), L2 uses log(e/|1-<phi_a(w), a>|).
    ``k0`` multiplies the first and second terms by log^k0 of the matching
    defect, as in the general weighted case; the unweighted comparison is k0 = 0.
    Returns (L1, L2, M).
    """
    w, a = as_point(w), as_point(a)
    w.require_interior("w")
    a.require_interior("a")
    n = w.dim
    eps = t - delta - n - 1
    if not eps > 0:
        raise DomainError("note1_forms needs t - delta > n + 1")
    pts = PointPair(w, a)
    g = base_logs(pts)
    first = math.exp((n + 1 + delta - t) * g["W"] - (delta + n + 1) * g["WA"] + k0 * g["LW"])
    scale2 = math.exp(-t * g["WA"] + k0 * g["LA"])
    L1 = first + scale2 * math.exp(g["LPHI2"])
    L2 = first + scale2 * math.exp(g["LAPHI"])
    return L1, L2, note1_constant(eps)
