"""Five stage beam splitter cascade and its ten path states.

A photon enters in one of three input paths.  Five two-path beam
splitters connect the inputs to three output paths, creating seven
intermediate paths along the way.  Each path carries a state vector in
the input basis; the ten vectors organize into five measurement
contexts of three mutually orthogonal paths each.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import InvalidReflectivityError, UnknownPathError
from .hilbert import RayState, inner, same_ray

PATH_NAMES = ("1", "2", "3", "S1", "D1", "f", "P1", "P2", "S2", "D2")

# Outer paths run along the rim of the pentagram of contexts; inner
# paths sit between consecutive beam splitters.
OUTER_PATHS = ("1", "2", "S1", "f", "S2")
INNER_PATHS = ("3", "D1", "P1", "P2", "D2")

# Each inner path pairs with the one outer path it shares no context with.
OPPOSITE_OUTER = {"3": "f", "D1": "S2", "P1": "2", "P2": "1", "D2": "S1"}

# Cyclic order of the outer paths around the pentagram rim.
OUTER_CYCLE = ("1", "S1", "f", "S2", "2")


@dataclass(frozen=True)
class Context:
    """One orthonormal triple of simultaneously measurable paths."""

    name: str
    members: tuple[str, str, str]

    @property
    def inner_path(self) -> str:
        for m in self.members:
            if m in INNER_PATHS:
                return m
        raise AssertionError(f"context {self.name} has no inner path")

    @property
    def outer_paths(self) -> tuple[str, str]:
        return tuple(m for m in self.members if m in OUTER_PATHS)  # type: ignore[return-value]


CONTEXTS = (
    Context("C1", ("1", "2", "3")),
    Context("C2", ("1", "S1", "D1")),
    Context("C3", ("S1", "f", "P1")),
    Context("C4", ("f", "S2", "P2")),
    Context("C5", ("S2", "2", "D2")),
)


@dataclass(frozen=True)
class InterferometerSpec:
    """Reflectivities of the five beam splitters, in stage order.

    The subscript names the path that runs parallel to the splitter.
    """

    r1: float = 1 / 2
    rS1: float = 1 / 3
    rf: float = 1 / 4
    rS2: float = 1 / 3
    r2: float = 1 / 2

    def __post_init__(self) -> None:
        for name, r in self.as_dict().items():
            if not 0.0 < r < 1.0:
                raise InvalidReflectivityError(
                    f"reflectivity {name}={r!r} outside the open interval (0, 1)"
                )

    def as_dict(self) -> dict[str, float]:
        return {"r1": self.r1, "rS1": self.rS1, "rf": self.rf, "rS2": self.rS2, "r2": self.r2}

    @classmethod
    def from_file(cls, path: str | Path) -> "InterferometerSpec":
        """Read reflectivities from a key=value file.

        Values may be decimals or p/q rationals; missing keys keep their
        defaults, unknown keys are an error.
        """
        values: dict[str, float] = {}
        known = {k.lower(): k for k in ("r1", "rS1", "rf", "rS2", "r2")}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'name = value'")
            key, _, text = line.partition("=")
            key = key.strip().lower()
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown reflectivity {key!r}")
            values[known[key]] = float(Fraction(text.strip()))
        return cls(**values)


@dataclass(frozen=True, eq=False)
class PathSystem:
    """The ten path states and five contexts built from a reflectivity spec.

    Path vectors keep the orientation the cascade produces, which is what
    makes inner products between physically consecutive paths carry
    meaningful signs.  All derived quantities (probabilities, joint
    quasi-probabilities) are insensitive to those global signs.
    """

    spec: InterferometerSpec
    paths: Mapping[str, RayState]
    outputs: Mapping[str, RayState]
    contexts: tuple[Context, ...] = CONTEXTS

    def ray(self, name: str) -> RayState:
        try:
            return self.paths[name]
        except KeyError:
            raise UnknownPathError(f"unknown path {name!r}") from None

    def matrix(self, names: tuple[str, ...] = PATH_NAMES) -> np.ndarray:
        """Rows of path vectors in the given name order."""
        return np.array([self.ray(n).vector for n in names])


def _splitter(outer: np.ndarray, mid: np.ndarray, r: float) -> tuple[np.ndarray, np.ndarray]:
    sr, st = np.sqrt(r), np.sqrt(1.0 - r)
    return sr * outer + st * mid, st * outer - sr * mid


def build(spec: InterferometerSpec | None = None) -> PathSystem:
    """Run the cascade stage by stage and collect all path states.

    Stage order: (2,3) -> (S1,D1), (1,D1) -> (f,P1), (S1,P1) -> (S2,P2),
    (f,P2) -> (2out,D2), (S2,D2) -> (1out,3out).
    """
    if spec is None:
        spec = InterferometerSpec()
    e1, e2, e3 = np.eye(3)
    s1, d1 = _splitter(e2, e3, spec.r1)
    f, p1 = _splitter(e1, d1, spec.rS1)
    s2, p2 = _splitter(s1, p1, spec.rf)
    out2, d2 = _splitter(f, p2, spec.rS2)
    out1, out3 = _splitter(s2, d2, spec.r2)
    paths = {
        "1": RayState(*e1),
        "2": RayState(*e2),
        "3": RayState(*e3),
        "S1": RayState(*s1),
        "D1": RayState(*d1),
        "f": RayState(*f),
        "P1": RayState(*p1),
        "P2": RayState(*p2),
        "S2": RayState(*s2),
        "D2": RayState(*d2),
    }
    outputs = {"1": RayState(*out1), "2": RayState(*out2), "3": RayState(*out3)}
    return PathSystem(spec=spec, paths=MappingProxyType(paths), outputs=MappingProxyType(outputs))


@lru_cache(maxsize=1)
def default_system() -> PathSystem:
    """The cascade at the canonical reflectivities (1/2, 1/3, 1/4, 1/3, 1/2)."""
    return build()


def verify_closure(system: PathSystem, tol: float = 1e-12) -> bool:
    """Check that each output state equals its input basis state up to sign."""
    return all(
        same_ray(system.outputs[name], system.ray(name), tol) for name in ("1", "2", "3")
    )


def probabilities(psi: RayState, system: PathSystem | None = None) -> dict[str, float]:
    """Detection probability of every path for the state ``psi``."""
    if system is None:
        system = default_system()
    return {name: inner(system.ray(name), psi) ** 2 for name in PATH_NAMES}
