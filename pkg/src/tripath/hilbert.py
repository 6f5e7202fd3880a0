"""Ray geometry in a three dimensional real Hilbert space.

States are rays: unit vectors identified up to a global sign.  The
canonical representative of a ray makes its first nonzero coefficient
positive, so two rays are equal exactly when their canonical vectors
coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegeneratePairError, ZeroVectorError

COEFF_TOL = 1e-12


@dataclass(frozen=True)
class RayState:
    """Unit vector in the three path basis.

    The norm must be 1 within 1e-12.  The stored sign is whatever the
    constructor supplied; use :meth:`canonical` to fix the global sign.
    """

    c1: float
    c2: float
    c3: float

    def __post_init__(self) -> None:
        norm = math.sqrt(self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"ray coefficients have norm {norm!r}, expected 1")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3])

    def canonical(self) -> "RayState":
        """Representative with the first coefficient above 1e-12 positive."""
        v = self.vector
        return RayState(*_canonical_sign(v))

    def flipped(self) -> "RayState":
        return RayState(-self.c1, -self.c2, -self.c3)

    def __iter__(self):
        return iter((self.c1, self.c2, self.c3))


@dataclass(frozen=True)
class SpherePoint:
    """Orthographic chart coordinates (u, v) = (c2, c3) of a hemisphere ray."""

    u: float
    v: float

    def __post_init__(self) -> None:
        if self.u * self.u + self.v * self.v > 1.0 + 1e-9:
            raise ValueError("projected point lies outside the unit disk")


def _as_array(v: RayState | Sequence[float] | np.ndarray) -> np.ndarray:
    if isinstance(v, RayState):
        return v.vector
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    return arr


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    for c in v:
        if abs(c) > COEFF_TOL:
            return -v if c < 0 else v
    return v


def normalize(v: Sequence[float] | np.ndarray) -> RayState:
    """Scale a raw coefficient vector to a canonical unit ray.

    Raises
    ------
    ZeroVectorError
        If the norm of ``v`` is at or below 1e-12.
    """
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    norm = float(np.linalg.norm(arr))
    if norm <= 1e-12:
        raise ZeroVectorError("cannot normalize a vector of norm <= 1e-12")
    return RayState(*_canonical_sign(arr / norm))


def inner(a: RayState | Sequence[float], b: RayState | Sequence[float]) -> float:
    """Real inner product of the stored representatives."""
    return float(np.dot(_as_array(a), _as_array(b)))


def same_ray(a: RayState | Sequence[float], b: RayState | Sequence[float], tol: float = 1e-12) -> bool:
    """Equality up to a global sign flip."""
    va, vb = _as_array(a), _as_array(b)
    return bool(
        np.linalg.norm(va - vb) <= tol or np.linalg.norm(va + vb) <= tol
    )


def orthogonal_to_pair(a: RayState | Sequence[float], b: RayState | Sequence[float]) -> RayState:
    """The unique ray orthogonal to two non-parallel rays.

    Computed as the vector cross product, then normalized to canonical
    sign.  Raises DegeneratePairError when ``a`` and ``b`` are parallel
    within 1e-9 (their span does not fix a third direction).
    """
    va, vb = _as_array(a), _as_array(b)
    if abs(float(np.dot(va, vb))) >= 1.0 - 1e-9:
        raise DegeneratePairError("rays are parallel within tolerance")
    cross = np.cross(va, vb)
    return normalize(cross)


def hemisphere_project(psi: RayState | Sequence[float]) -> SpherePoint:
    """Project a ray onto the c1 >= 0 hemisphere chart.

    The representative with c1 > 0 is projected to (c2, c3).  Equator
    rays (c1 = 0) use the canonical sign of c2, then of c3, to pick the
    representative.
    """
    v = _as_array(psi)
    if v[0] < -COEFF_TOL:
        v = -v
    elif abs(v[0]) <= COEFF_TOL:
        if v[1] < -COEFF_TOL:
            v = -v
        elif abs(v[1]) <= COEFF_TOL and v[2] < 0:
            v = -v
    return SpherePoint(float(v[1]), float(v[2]))


def great_circle(axis: RayState | Sequence[float], n: int) -> list[RayState]:
    """Sample ``n`` rays orthogonal to ``axis``, uniform in angle.

    The samples cover the full circle, so for even ``n`` antipodal
    samples describe the same ray twice.
    """
    if n < 2:
        raise ValueError("need at least 2 samples on a great circle")
    a = _as_array(axis)
    a = a / np.linalg.norm(a)
    seed = np.zeros(3)
    seed[int(np.argmin(np.abs(a)))] = 1.0
    e1 = seed - np.dot(seed, a) * a
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(a, e1)
    angles = 2.0 * np.pi * np.arange(n) / n
    return [
        normalize(np.cos(t) * e1 + np.sin(t) * e2)
        for t in angles
    ]


def circle_points(axis: RayState | Sequence[float], n: int) -> np.ndarray:
    """Raw (n, 3) samples of the great circle orthogonal to ``axis``.

    Unlike :func:`great_circle` the points keep their parametrization
    sign, which renderers need for continuous polylines.
    """
    a = _as_array(axis)
    a = a / np.linalg.norm(a)
    seed = np.zeros(3)
    seed[int(np.argmin(np.abs(a)))] = 1.0
    e1 = seed - np.dot(seed, a) * a
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(a, e1)
    angles = 2.0 * np.pi * np.arange(n) / n
    return np.outer(np.cos(angles), e1) + np.outer(np.sin(angles), e2)
