"""Point arithmetic on the unit ball of C^n.

The Mobius map is the standard involutive automorphism written in
projection form,

    phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>),

with ``P_a`` the orthogonal projection onto the complex line through
``a``, ``Q_a = I - P_a`` and ``s_a = sqrt(1 - |a|^2)``.  Its correctness
is pinned by the two classical identities

    1 - <phi_a(z), phi_a(w)> = (1-|a|^2)(1-<z,w>) / ((1-<z,a>)(1-<a,w>))
    1 - |phi_a(z)|^2         = (1-|a|^2)(1-|z|^2) / |1-<z,a>|^2

which the test-suite checks on random triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionError, DomainError

#: points closer than this to the unit sphere are refused
BOUNDARY_GAP = 1e-14


@dataclass(frozen=True)
class CPoint:
    """A point of C^n stored as an immutable tuple of complex coordinates.

    A bare ``CPoint`` may lie anywhere in C^n (boundary points are needed
    for inner products of sphere samples).  Use :meth:`interior` when the
    point has to sit strictly inside the ball.
    """

    coords: tuple[complex, ...]

    def __init__(self, coords: Iterable[complex] | complex):
        if np.isscalar(coords):
            coords = (coords,)
        vals = tuple(complex(c) for c in coords)
        if not vals:
            raise DomainError("a point needs at least one coordinate")
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in vals):
            raise DomainError(f"non-finite coordinate in {vals}")
        object.__setattr__(self, "coords", vals)

    @classmethod
    def interior(cls, coords: Iterable[complex] | complex) -> "CPoint":
        """Build a point and check that it lies in the open ball."""
        pt = cls(coords)
        pt.require_interior()
        return pt

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)

    def norm_sq(self) -> float:
        return float(sum(c.real * c.real + c.imag * c.imag for c in self.coords))

    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq()))

    def defect(self) -> float:
        """1 - |z|^2, the distance-like quantity every formula uses."""
        return 1.0 - self.norm_sq()

    def require_interior(self, name: str = "point") -> None:
        if 1.0 - self.norm() < BOUNDARY_GAP:
            raise DomainError(f"{name} {self.coords} is not inside the unit ball")

    def scaled(self, factor: complex) -> "CPoint":
        return CPoint(factor * c for c in self.coords)

    def __len__(self) -> int:
        return self.dim

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def as_point(z: CPoint | Sequence[complex] | complex) -> CPoint:
    return z if isinstance(z, CPoint) else CPoint(z)


def _check_dims(*pts: CPoint) -> None:
    dims = {p.dim for p in pts}
    if len(dims) > 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")


def inner(z: CPoint, w: CPoint) -> complex:
    """Hermitian product sum z_i conj(w_i)."""
    z, w = as_point(z), as_point(w)
    _check_dims(z, w)
    return complex(np.dot(z.array, np.conj(w.array)))


def inner_many(Z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Vectorised product of each row of ``Z`` (shape (m, n)) with ``w``."""
    return np.asarray(Z, dtype=complex) @ np.conj(np.asarray(w, dtype=complex))


def mobius_array(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Apply phi_a to one point or to every row of ``z`` (no validation)."""
    a = np.asarray(a, dtype=complex)
    z = np.asarray(z, dtype=complex)
    aa = float(np.real(np.vdot(a, a)))
    za = z @ np.conj(a)
    if aa == 0.0:
        return -z
    s = np.sqrt(1.0 - aa)
    proj = np.multiply.outer(za / aa, a) if z.ndim > 1 else (za / aa) * a
    num = a - proj - s * (z - proj)
    den = 1.0 - za
    return num / (den[:, None] if z.ndim > 1 else den)


def mobius(a: CPoint, z: CPoint) -> CPoint:
    """The involutive automorphism phi_a evaluated at z."""
    a, z = as_point(a), as_point(z)
    _check_dims(a, z)
    a.require_interior("centre a")
    z.require_interior("point z")
    return CPoint(mobius_array(a.array, z.array))


def mobius_defect(a: CPoint, z: CPoint) -> float:
    """1 - |phi_a(z)|^2 from the product identity, accurate near the sphere."""
    a, z = as_point(a), as_point(z)
    _check_dims(a, z)
    return a.defect() * z.defect() / abs(1.0 - inner(z, a)) ** 2


@dataclass(frozen=True)
class MobiusMap:
    """phi_a as a callable object."""

    center: CPoint

    def __post_init__(self):
        self.center.require_interior("centre a")

    def __call__(self, z: CPoint) -> CPoint:
        return mobius(self.center, z)


def bergman_metric(z: CPoint, a: CPoint) -> float:
    """beta(z, a) = artanh |phi_a(z)|.

    Written as ``log(1 + x) - log(1 - x^2) / 2`` with ``1 - x^2`` taken from
    the product identity and ``x`` from the map itself, so both the
    near-diagonal and the near-boundary regimes keep full precision.
    """
    z, a = as_point(z), as_point(a)
    _check_dims(z, a)
    z.require_interior("point z")
    a.require_interior("point a")
    x = mobius(a, z).norm()
    q = mobius_defect(a, z)
    return float(max(np.log1p(x) - 0.5 * np.log(q), 0.0))


def in_bergman_ball(a: CPoint, r: float, z: CPoint) -> bool:
    """Membership of z in the metric ball D(a, r)."""
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r}")
    return bergman_metric(z, a) < r


def random_ball_points(rng: np.random.Generator, n: int, size: int,
                       rmax: float = 1.0) -> np.ndarray:
    """Uniform samples from the ball of radius ``rmax`` as a (size, n) array."""
    g = rng.standard_normal((size, n)) + 1j * rng.standard_normal((size, n))
    g /= np.linalg.norm(g, axis=1)[:, None]
    rad = rmax * rng.random(size) ** (1.0 / (2 * n))
    return g * rad[:, None]
