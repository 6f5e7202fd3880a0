"""Classification of rays by the signs of their ten quasi-probabilities.

The ten zero-probability great circles cut the ray sphere into 31
polygons.  Inside each polygon the ten canonical quasi-probabilities
keep fixed signs, so the sign pattern identifies the polygon.  The
polygons group into six classes by their negativity counts
(inner negatives / outer negatives):

    N 5/0   V 4/0   B 3/0   T 2/2   X 1/2   Q 0/2

with 1, 5, 5, 5, 10 and 5 sub-classes respectively.

Sub-class names carry the defining paths: V(i) and the five B(i,j) and
T(i,j) pairs use outer paths, X(i,k) pairs an outer path with the inner
path completing one of the five trajectories, and Q(i,l) names the
trajectory pair whose quasi-probability it maximizes.  The ten X index
pairs are exactly (i,k) and (j,k) for each trajectory {i, k, j}:
(1,D2), (f,D2), (1,P1), (S2,P1), (S1,3), (S2,3), (2,P2), (S1,P2),
(2,D1), (f,D1).

The sub-class table is built numerically: for each polygon, average the
corner rays (signs aligned first), normalize, and read off the interior
sign pattern.  States on a boundary produce zero entries in their
pattern; classification then reports every sub-class whose pattern is
consistent with some resolution of the zeros.  At high order corners
this consistency set can be larger than the set of polygons that
actually touch the corner.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import TableInconsistencyError, UnknownPatternError
from .hilbert import RayState
from .kd import KD_PAIRS, KDProfile, kd_profile, profile_values_batch
from .interferometer import PathSystem, default_system
from .states import canonical_states

DEFAULT_TOL = 1e-9

CLASS_NAMES = ("N", "V", "B", "T", "X", "Q")

# Expected (inner, outer) negativity counts per class.
NEGATIVITY_SIGNATURE = {
    "N": (5, 0),
    "V": (4, 0),
    "B": (3, 0),
    "T": (2, 2),
    "X": (1, 2),
    "Q": (0, 2),
}


@dataclass(frozen=True, order=True)
class ClassLabel:
    """A sub-class name such as N, V(1), B(1,S2), X(S2,3) or Q(S2,D1)."""

    cls: str
    params: tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.params:
            return self.cls
        return f"{self.cls}({','.join(self.params)})"

    @classmethod
    def parse(cls, text: str) -> "ClassLabel":
        text = text.strip()
        if "(" not in text:
            return cls(text)
        head, _, tail = text.partition("(")
        return cls(head, tuple(tail.rstrip(")").split(",")))


SignPattern = tuple[int, ...]


def sign_pattern(profile: KDProfile, tol: float = DEFAULT_TOL) -> SignPattern:
    """Ten trits in profile order: -1, 0 or +1 per quasi-probability."""
    return tuple(
        0 if abs(v) <= tol else (1 if v > 0 else -1) for v in profile.values
    )


def pattern_string(pattern: SignPattern) -> str:
    return "".join({1: "+", 0: "0", -1: "-"}[t] for t in pattern)


# Corner rays of every polygon.  V corners: the outer path plus the
# pentagon edge orthogonal to its opposite inner path.  B corners: the
# two outer paths plus the pentagon corner orthogonal to both.  T
# corners: a full trajectory.  X corners: outer path, trajectory inner
# path, and the theta state adjoining both.  Q corners: a trajectory
# pair flanked by the two theta states that share its peak.
POLYGON_CORNERS: tuple[tuple[ClassLabel, tuple[str, ...]], ...] = (
    (ClassLabel("N"), ("N_f", "N_1", "N_S2", "N_S1", "N_2")),
    (ClassLabel("V", ("f",)), ("f", "N_S1", "N_S2")),
    (ClassLabel("V", ("1",)), ("1", "N_S1", "N_2")),
    (ClassLabel("V", ("S2",)), ("S2", "N_f", "N_2")),
    (ClassLabel("V", ("S1",)), ("S1", "N_f", "N_1")),
    (ClassLabel("V", ("2",)), ("2", "N_1", "N_S2")),
    (ClassLabel("B", ("1", "f")), ("N_S1", "1", "f")),
    (ClassLabel("B", ("1", "S2")), ("N_2", "1", "S2")),
    (ClassLabel("B", ("S1", "S2")), ("N_f", "S1", "S2")),
    (ClassLabel("B", ("2", "S1")), ("N_1", "2", "S1")),
    (ClassLabel("B", ("2", "f")), ("N_S2", "2", "f")),
    (ClassLabel("T", ("1", "f")), ("1", "f", "D2")),
    (ClassLabel("T", ("1", "S2")), ("1", "S2", "P1")),
    (ClassLabel("T", ("S1", "S2")), ("S1", "S2", "3")),
    (ClassLabel("T", ("2", "S1")), ("2", "S1", "P2")),
    (ClassLabel("T", ("2", "f")), ("2", "f", "D1")),
    (ClassLabel("X", ("1", "D2")), ("1", "D2", "theta_D1")),
    (ClassLabel("X", ("f", "D2")), ("f", "D2", "theta_P1")),
    (ClassLabel("X", ("1", "P1")), ("1", "P1", "theta_3")),
    (ClassLabel("X", ("S2", "P1")), ("S2", "P1", "theta_D2")),
    (ClassLabel("X", ("S1", "3")), ("S1", "3", "theta_P1")),
    (ClassLabel("X", ("S2", "3")), ("S2", "3", "theta_P2")),
    (ClassLabel("X", ("2", "P2")), ("2", "P2", "theta_3")),
    (ClassLabel("X", ("S1", "P2")), ("S1", "P2", "theta_D1")),
    (ClassLabel("X", ("2", "D1")), ("2", "D1", "theta_D2")),
    (ClassLabel("X", ("f", "D1")), ("f", "D1", "theta_P2")),
    (ClassLabel("Q", ("1", "P2")), ("1", "theta_D1", "P2", "theta_3")),
    (ClassLabel("Q", ("S1", "D2")), ("S1", "theta_D1", "D2", "theta_P1")),
    (ClassLabel("Q", ("f", "3")), ("f", "theta_P1", "3", "theta_P2")),
    (ClassLabel("Q", ("S2", "D1")), ("S2", "theta_P2", "D1", "theta_D2")),
    (ClassLabel("Q", ("2", "P1")), ("2", "theta_3", "P1", "theta_D2")),
)

ALL_LABELS: tuple[ClassLabel, ...] = tuple(label for label, _ in POLYGON_CORNERS)

_POW3 = 3 ** np.arange(len(KD_PAIRS))


def _pattern_code(pattern: SignPattern) -> int:
    return int(sum((t + 1) * p for t, p in zip(pattern, _POW3)))


def polygon_centroid(corners: tuple[str, ...], system: PathSystem) -> RayState:
    """Interior representative: normalized mean of sign-aligned corner rays.

    Corner signs are aligned greedily against the running sum, which is
    unambiguous because no two corners of one polygon are orthogonal.
    """
    named = canonical_states(system)
    vectors = [named[c].ray.vector for c in corners]
    acc = vectors[0].copy()
    for v in vectors[1:]:
        acc += -v if float(acc @ v) < 0 else v
    from .hilbert import normalize

    return normalize(acc)


@dataclass(frozen=True)
class SubclassTable:
    """Strict sign pattern of every sub-class interior."""

    labels: tuple[ClassLabel, ...]
    patterns: tuple[SignPattern, ...]

    def label_for(self, pattern: SignPattern) -> ClassLabel | None:
        return self._by_pattern().get(pattern)

    def pattern_for(self, label: ClassLabel) -> SignPattern:
        try:
            return self.patterns[self.labels.index(label)]
        except ValueError:
            raise KeyError(str(label)) from None

    @lru_cache(maxsize=None)
    def _by_pattern(self) -> dict[SignPattern, ClassLabel]:
        return dict(zip(self.patterns, self.labels))

    @lru_cache(maxsize=None)
    def code_lookup(self) -> np.ndarray:
        """Dense base-3 code table mapping strict patterns to label indices."""
        lut = np.full(3 ** len(KD_PAIRS), -1, dtype=np.int16)
        for i, pattern in enumerate(self.patterns):
            lut[_pattern_code(pattern)] = i
        return lut


def build_subclass_table(system: PathSystem | None = None) -> SubclassTable:
    """Compute the 31 interior sign patterns from the polygon corners.

    Raises TableInconsistencyError if any centroid sits too close to a
    boundary, violates its class negativity signature, or if two
    polygons produce the same pattern.
    """
    if system is None:
        system = default_system()
    return _build_table_cached(system)


@lru_cache(maxsize=4)
def _build_table_cached(system: PathSystem) -> SubclassTable:
    labels = []
    patterns: list[SignPattern] = []
    for label, corners in POLYGON_CORNERS:
        centroid = polygon_centroid(corners, system)
        profile = kd_profile(centroid, system)
        if min(abs(v) for v in profile.values) <= 1e-6:
            raise TableInconsistencyError(
                f"centroid of {label} is not strictly interior"
            )
        pattern = sign_pattern(profile, tol=1e-6)
        inner_neg = sum(1 for t in pattern[:5] if t < 0)
        outer_neg = sum(1 for t in pattern[5:] if t < 0)
        if (inner_neg, outer_neg) != NEGATIVITY_SIGNATURE[label.cls]:
            raise TableInconsistencyError(
                f"{label} centroid has negativity counts ({inner_neg},{outer_neg})"
            )
        labels.append(label)
        patterns.append(pattern)
    if len(set(patterns)) != len(patterns):
        raise TableInconsistencyError("duplicate interior sign patterns")
    return SubclassTable(labels=tuple(labels), patterns=tuple(patterns))


@dataclass(frozen=True)
class ClassificationResult:
    """Sign pattern of a state and every sub-class consistent with it."""

    state: RayState
    pattern: SignPattern
    labels: frozenset[ClassLabel]

    @property
    def is_boundary(self) -> bool:
        return 0 in self.pattern

    def to_json(self) -> dict:
        return {
            "state": [self.state.c1 + 0.0, self.state.c2 + 0.0, self.state.c3 + 0.0],
            "pattern": pattern_string(self.pattern),
            "labels": sorted(str(l) for l in self.labels),
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _expansions(pattern: SignPattern) -> list[SignPattern]:
    zeros = [i for i, t in enumerate(pattern) if t == 0]
    out = []
    for mask in range(1 << len(zeros)):
        p = list(pattern)
        for j, idx in enumerate(zeros):
            p[idx] = 1 if mask & (1 << j) else -1
        out.append(tuple(p))
    return out


def classify(
    psi: RayState,
    system: PathSystem | None = None,
    tol: float = DEFAULT_TOL,
) -> ClassificationResult:
    """Classify a ray by its quasi-probability sign pattern.

    Interior states resolve to a single sub-class.  Values within
    ``tol`` of zero are treated as boundary entries and expanded both
    ways, collecting every consistent sub-class.
    """
    if system is None:
        system = default_system()
    table = build_subclass_table(system)
    profile = kd_profile(psi, system)
    pattern = sign_pattern(profile, tol)
    found = set()
    for candidate in _expansions(pattern):
        label = table.label_for(candidate)
        if label is not None:
            found.add(label)
    if not found:
        raise UnknownPatternError(
            f"pattern {pattern_string(pattern)} matches no sub-class"
        )
    return ClassificationResult(state=psi, pattern=pattern, labels=frozenset(found))


def classify_batch(
    vectors: np.ndarray,
    system: PathSystem | None = None,
    tol: float = DEFAULT_TOL,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized strict classification of many unit vectors.

    Returns (boundary_mask, label_index) arrays; label_index is -1 where
    the pattern has zeros (boundary) and otherwise indexes ALL_LABELS.
    Raises UnknownPatternError if any strict pattern is unknown.
    """
    if system is None:
        system = default_system()
    table = build_subclass_table(system)
    values = profile_values_batch(vectors, system)
    trits = np.where(np.abs(values) <= tol, 0, np.sign(values)).astype(np.int64)
    boundary = np.any(trits == 0, axis=1)
    codes = ((trits + 1) * _POW3).sum(axis=1)
    idx = table.code_lookup()[codes]
    idx[boundary] = -1
    if np.any((idx < 0) & ~boundary):
        raise UnknownPatternError("strict pattern outside the sub-class table")
    return boundary, idx


MIRROR_PATHS = {
    "1": "2", "2": "1", "3": "3", "S1": "S2", "S2": "S1",
    "D1": "D2", "D2": "D1", "P1": "P2", "P2": "P1", "f": "f",
}


def mirror_label(label: ClassLabel) -> ClassLabel:
    """Image of a sub-class under the swap of input paths 1 and 2.

    The swap fixes path 3, exchanges partner paths on each side, and
    maps every polygon onto a polygon, so labels permute.
    """
    if not label.params:
        return label
    mirrored = tuple(MIRROR_PATHS[p] for p in label.params)
    for candidate, _ in POLYGON_CORNERS:
        if candidate.cls == label.cls and set(candidate.params) == set(mirrored):
            return candidate
    raise UnknownPatternError(f"no mirror image for {label}")
