import numpy as np
import pytest

from tripath import classify, interferometer, states


@pytest.fixture(scope="session")
def system():
    return interferometer.default_system()


@pytest.fixture(scope="session")
def named(system):
    return states.canonical_states(system)


@pytest.fixture(scope="session")
def table(system):
    return classify.build_subclass_table(system)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def random_unit_vectors(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def fibonacci_sphere(n):
    golden = (1.0 + 5.0**0.5) / 2.0
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    theta = 2.0 * np.pi * i / golden
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])


def brute_force_min_inner_sum(system, n=1_000_000):
    """Grid minimum of the summed inner path probabilities.

    Global Fibonacci lattice pass, then one dense tangent-plane zoom
    around the best point; independent of the eigen-solver route.
    """
    inner_rows = np.array([system.ray(k).vector for k in ("3", "D1", "P1", "P2", "D2")])

    def sums(points):
        return ((points @ inner_rows.T) ** 2).sum(axis=1)

    pts = fibonacci_sphere(n)
    best = pts[np.argmin(sums(pts))]

    t1 = np.cross(best, [1.0, 0.0, 0.0])
    if np.linalg.norm(t1) < 1e-6:
        t1 = np.cross(best, [0.0, 1.0, 0.0])
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(best, t1)
    span = 2.0 * np.sqrt(4.0 * np.pi / n)
    offsets = np.linspace(-span, span, 400)
    a, b = np.meshgrid(offsets, offsets)
    local = best + a.ravel()[:, None] * t1 + b.ravel()[:, None] * t2
    local /= np.linalg.norm(local, axis=1, keepdims=True)
    return float(sums(local).min())
