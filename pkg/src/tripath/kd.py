"""Kirkwood-Dirac joint quasi-probabilities of path pairs.

For real rays a, b and a real pure state psi the joint quasi-probability
is

    rho(a, b) = <b|a><a|psi><psi|b>

which is symmetric in (a, b), invariant under global sign flips of any
argument, and satisfies rho(a, b)^2 = <a|b>^2 P(a) P(b).  Ten pair
combinations are physically meaningful: five (outer, inner) pairs that
each occur in exactly one non-contextual photon trajectory, and five
(outer, outer) pairs.  Negative values among them witness contextuality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DegeneratePairError, UnknownPathError
from .hilbert import RayState, inner, normalize
from .interferometer import (
    INNER_PATHS,
    OPPOSITE_OUTER,
    PATH_NAMES,
    PathSystem,
    default_system,
)


@dataclass(frozen=True)
class KDPair:
    """One of the ten canonical path pairs."""

    a: str
    b: str
    kind: str  # "inner" or "outer"

    @property
    def label(self) -> str:
        return f"rho({self.a},{self.b})"


# Fixed profile order: the five trajectory (outer, inner) pairs, then the
# five (outer, outer) pairs.
KD_PAIRS = (
    KDPair("1", "P2", "inner"),
    KDPair("2", "P1", "inner"),
    KDPair("f", "3", "inner"),
    KDPair("S1", "D2", "inner"),
    KDPair("S2", "D1", "inner"),
    KDPair("1", "f", "outer"),
    KDPair("1", "S2", "outer"),
    KDPair("2", "f", "outer"),
    KDPair("2", "S1", "outer"),
    KDPair("S1", "S2", "outer"),
)

INNER_SLICE = slice(0, 5)
OUTER_SLICE = slice(5, 10)

_PAIR_INDEX = {frozenset((p.a, p.b)): i for i, p in enumerate(KD_PAIRS)}

# Per outer path, the context whose completeness turns three KD values
# into the path probability; terms listed with the trajectory pair last.
DECOMPOSITION_PAIRS = {
    "1": (("1", "f"), ("1", "S2"), ("1", "P2")),
    "S1": (("S1", "S2"), ("2", "S1"), ("S1", "D2")),
    "f": (("1", "f"), ("2", "f"), ("f", "3")),
    "S2": (("S1", "S2"), ("1", "S2"), ("S2", "D1")),
    "2": (("2", "f"), ("2", "S1"), ("2", "P1")),
}


@dataclass(frozen=True)
class KDProfile:
    """The ten canonical quasi-probabilities of one state."""

    state: RayState
    values: tuple[float, ...]

    def value(self, a: str, b: str) -> float:
        try:
            return self.values[_PAIR_INDEX[frozenset((a, b))]]
        except KeyError:
            raise UnknownPathError(f"({a},{b}) is not a canonical pair") from None

    @property
    def inner_values(self) -> tuple[float, ...]:
        return self.values[INNER_SLICE]

    @property
    def outer_values(self) -> tuple[float, ...]:
        return self.values[OUTER_SLICE]

    def as_dict(self) -> dict[str, float]:
        return {p.label: v for p, v in zip(KD_PAIRS, self.values)}


def kd_value(psi: RayState, a: str, b: str, system: PathSystem | None = None) -> float:
    """rho(a, b) for any two distinct paths, canonical pair or not."""
    if system is None:
        system = default_system()
    va, vb = system.ray(a), system.ray(b)
    return inner(vb, va) * inner(va, psi) * inner(psi, vb)


def kd_profile(psi: RayState, system: PathSystem | None = None) -> KDProfile:
    """All ten canonical quasi-probabilities of ``psi``."""
    if system is None:
        system = default_system()
    values = tuple(kd_value(psi, p.a, p.b, system) for p in KD_PAIRS)
    return KDProfile(state=psi, values=values)


def profile_values_batch(vectors: np.ndarray, system: PathSystem | None = None) -> np.ndarray:
    """Profiles of many unit vectors at once; rows follow KD_PAIRS order."""
    if system is None:
        system = default_system()
    paths = system.matrix()
    idx = {n: i for i, n in enumerate(PATH_NAMES)}
    amps = np.asarray(vectors, dtype=float) @ paths.T
    out = np.empty((amps.shape[0], len(KD_PAIRS)))
    for j, p in enumerate(KD_PAIRS):
        ia, ib = idx[p.a], idx[p.b]
        overlap = float(paths[ia] @ paths[ib])
        out[:, j] = overlap * amps[:, ia] * amps[:, ib]
    return out


def decompose_outer(
    psi: RayState, i: str, system: PathSystem | None = None
) -> list[tuple[KDPair, float]]:
    """Split P(i) into its three KD terms for an outer path ``i``.

    The terms sum over the context that contains neither i nor a path
    orthogonal to it, so completeness makes the sum exactly P(i).
    """
    if i not in DECOMPOSITION_PAIRS:
        raise UnknownPathError(f"decompose_outer expects an outer path, got {i!r}")
    if system is None:
        system = default_system()
    out = []
    for a, b in DECOMPOSITION_PAIRS[i]:
        pair = KD_PAIRS[_PAIR_INDEX[frozenset((a, b))]]
        out.append((pair, kd_value(psi, a, b, system)))
    return out


def inequality_sum(psi: RayState, system: PathSystem | None = None) -> float:
    """Summed probability of the five inner paths.

    Any assignment of one definite path per context forces this sum to
    at least 1; quantum states can dip below.
    """
    if system is None:
        system = default_system()
    return float(
        sum(inner(system.ray(k), psi) ** 2 for k in INNER_PATHS)
    )


def jacobi_eigh(matrix: np.ndarray, tol: float = 1e-14, max_sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues in ascending order and the matching eigenvectors
    as columns.  Iterates full sweeps until the off-diagonal norm drops
    below ``tol``.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.T, atol=1e-12):
        raise ValueError("jacobi_eigh expects a symmetric matrix")
    v = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2) * 2.0)
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    order = np.argsort(np.diag(a))
    return np.diag(a)[order], v[:, order]


def inequality_operator(system: PathSystem | None = None) -> np.ndarray:
    """Sum of the five inner path projectors."""
    if system is None:
        system = default_system()
    m = np.zeros((3, 3))
    for k in INNER_PATHS:
        vk = system.ray(k).vector
        m += np.outer(vk, vk)
    return m


def max_violation(system: PathSystem | None = None) -> tuple[RayState, float]:
    """State minimizing the inner path sum, and the amount below 1.

    Found as the lowest eigenvector of the summed inner projectors.
    """
    if system is None:
        system = default_system()
    vals, vecs = jacobi_eigh(inequality_operator(system))
    state = normalize(vecs[:, 0])
    return state, float(1.0 - vals[0])


def kd_negative_bound(a: str, b: str, system: PathSystem | None = None) -> float:
    """Largest magnitude rho(a, b) can reach on the negative side.

    Equals g(1 - g)/2 with g the magnitude of the path overlap <a|b>,
    attained on the great circle through a and b at the ray orthogonal
    to their bisector.
    """
    if system is None:
        system = default_system()
    g = abs(inner(system.ray(a), system.ray(b)))
    if g <= 1e-12 or g >= 1.0 - 1e-12:
        raise DegeneratePairError(
            f"paths {a!r} and {b!r} are orthogonal or parallel; no negative range"
        )
    return g * (1.0 - g) / 2.0


@dataclass(frozen=True)
class ExtremalScan:
    """Extremal quasi-probability states found on a great circle scan."""

    pair: tuple[str, str]
    max_state: RayState
    max_value: float
    min_state: RayState
    min_value: float


def extremal_kd_on_circle(
    a: str, b: str, n: int = 100_000, system: PathSystem | None = None
) -> ExtremalScan:
    """Scan rho(a, b) over ``n`` rays of the great circle through a and b.

    The extrema of rho(a, b) over the whole sphere lie on this circle, at
    a mutually orthogonal pair of rays, so a dense scan brackets both.
    """
    if n < 4:
        raise ValueError("need at least 4 scan samples")
    if system is None:
        system = default_system()
    va = system.ray(a).vector
    vb = system.ray(b).vector
    g = float(va @ vb)
    if abs(g) <= 1e-12 or abs(g) >= 1.0 - 1e-12:
        raise DegeneratePairError(
            f"paths {a!r} and {b!r} do not span a proper circle of distinct rays"
        )
    e2 = vb - g * va
    e2 /= np.linalg.norm(e2)
    angles = np.pi * np.arange(n) / n  # half turn covers every ray once
    points = np.outer(np.cos(angles), va) + np.outer(np.sin(angles), e2)
    rho = g * (points @ va) * (points @ vb)
    hi, lo = int(np.argmax(rho)), int(np.argmin(rho))
    return ExtremalScan(
        pair=(a, b),
        max_state=normalize(points[hi]),
        max_value=float(rho[hi]),
        min_state=normalize(points[lo]),
        min_value=float(rho[lo]),
    )


def profile_to_json(profile: KDProfile, label: str | None = None) -> dict:
    """Structured record of one profile, stable key order."""
    doc: dict = {}
    if label is not None:
        doc["name"] = label
    # adding 0.0 drops IEEE negative zeros from the serialized floats
    doc["state"] = [profile.state.c1 + 0.0, profile.state.c2 + 0.0, profile.state.c3 + 0.0]
    doc["values"] = [
        {"pair": [p.a, p.b], "kind": p.kind, "value": v + 0.0}
        for p, v in zip(KD_PAIRS, profile.values)
    ]
    return doc


def profiles_to_csv(rows: Iterable[tuple[str, KDProfile]]) -> str:
    """CSV document of labeled profiles, one row per state."""
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["state"] + [p.label for p in KD_PAIRS])
    for label, profile in rows:
        writer.writerow([label] + [repr(v) for v in profile.values])
    return buf.getvalue()
