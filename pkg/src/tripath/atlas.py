"""Hemisphere atlas of the sub-class regions.

The c1 >= 0 hemisphere is mapped orthographically to the unit disk with
chart coordinates (u, v) = (c2, c3).  Each pixel center inside the disk
lifts to a ray, is classified, and painted with its sub-class color;
pixels whose sign pattern touches zero are boundary marked.  Raster
output is binary PPM, vector output is standalone SVG showing the ten
zero-probability circles and the twenty named states.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .classify import (
    ALL_LABELS,
    DEFAULT_TOL,
    ClassLabel,
    classify,
    classify_batch,
)
from .errors import UnsupportedFormatError
from .hilbert import circle_points, hemisphere_project
from .interferometer import PATH_NAMES, PathSystem, default_system, probabilities
from .kd import KD_PAIRS, inequality_sum, kd_profile
from .states import BASIS_ORDER, N_STATE_ORDER, THETA_ORDER, canonical_states, joint_basis

# Label index values below zero mark non-region pixels.
BOUNDARY = -1
EXTERIOR = -2


@dataclass(frozen=True, eq=False)
class AtlasGrid:
    """Per-pixel sub-class indices over the chart square [-1, 1]^2.

    Row 0 is the top of the image (v = +1); u grows to the right.
    ``labels[iy, ix]`` indexes ALL_LABELS, or BOUNDARY / EXTERIOR.
    """

    resolution: int
    tol: float
    labels: np.ndarray

    def pixel_center(self, ix: int, iy: int) -> tuple[float, float]:
        u = (ix + 0.5) * 2.0 / self.resolution - 1.0
        v = 1.0 - (iy + 0.5) * 2.0 / self.resolution
        return u, v

    def nearest_pixel(self, u: float, v: float) -> tuple[int, int]:
        ix = int(np.clip(round((u + 1.0) * self.resolution / 2.0 - 0.5), 0, self.resolution - 1))
        iy = int(np.clip(round((1.0 - v) * self.resolution / 2.0 - 0.5), 0, self.resolution - 1))
        return ix, iy

    def label_counts(self) -> dict[ClassLabel, int]:
        out = {}
        for i, label in enumerate(ALL_LABELS):
            n = int(np.count_nonzero(self.labels == i))
            if n:
                out[label] = n
        return out


def lift(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Chart coordinates to hemisphere unit vectors, stacked as rows."""
    c1 = np.sqrt(np.clip(1.0 - u * u - v * v, 0.0, None))
    return np.stack([c1, u, v], axis=-1)


def sample_atlas(
    resolution: int,
    tol: float = DEFAULT_TOL,
    system: PathSystem | None = None,
) -> AtlasGrid:
    """Classify every pixel of a resolution x resolution chart."""
    if resolution < 16:
        raise ValueError("atlas resolution must be at least 16")
    if system is None:
        system = default_system()
    centers = (np.arange(resolution) + 0.5) * 2.0 / resolution - 1.0
    u = np.tile(centers, resolution)
    v = np.repeat(-centers, resolution)  # row 0 at v = +1
    inside = u * u + v * v <= 1.0
    labels = np.full(resolution * resolution, EXTERIOR, dtype=np.int16)
    if np.any(inside):
        rays = lift(u[inside], v[inside])
        boundary, idx = classify_batch(rays, system, tol)
        region = np.where(boundary, np.int16(BOUNDARY), idx.astype(np.int16))
        labels[inside] = region
    return AtlasGrid(
        resolution=resolution,
        tol=tol,
        labels=labels.reshape(resolution, resolution),
    )


@lru_cache(maxsize=1)
def palette() -> dict[str, tuple[int, int, int]]:
    """Sub-class fill colors from the packaged config file."""
    text = resources.files("tripath").joinpath("data/palette.txt").read_text()
    out: dict[str, tuple[int, int, int]] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0] if raw.lstrip().startswith("#") else raw
        if not line.strip():
            continue
        name, hexcolor = line.rsplit("#", 1)
        h = hexcolor.strip()
        out[name.strip()] = (int(h[0:2], 16), int(h[2:4], 16), int(h[4:6], 16))
    missing = [str(l) for l in ALL_LABELS if str(l) not in out]
    if missing:
        raise UnsupportedFormatError(f"palette misses sub-classes: {missing}")
    return out


def render(
    grid: AtlasGrid | None, fmt: str = "raster", system: PathSystem | None = None
) -> bytes | str:
    """Render the chart; ``raster`` gives PPM bytes, ``vector`` SVG text.

    Raster output needs a sampled grid.  Vector output draws the region
    boundaries analytically and only needs the path system.
    """
    if fmt == "raster":
        if grid is None:
            raise ValueError("raster rendering needs a sampled grid")
        return _render_ppm(grid)
    if fmt == "vector":
        return _render_svg(system or default_system())
    raise UnsupportedFormatError(f"unknown atlas format {fmt!r}")


def _render_ppm(grid: AtlasGrid) -> bytes:
    colors = palette()
    table = np.zeros((len(ALL_LABELS) + 2, 3), dtype=np.uint8)
    table[EXTERIOR] = (255, 255, 255)
    table[BOUNDARY] = (0, 0, 0)
    for i, label in enumerate(ALL_LABELS):
        table[i] = colors[str(label)]
    image = table[grid.labels]
    header = f"P6\n{grid.resolution} {grid.resolution}\n255\n".encode("ascii")
    return header + image.tobytes()


_SVG_SAMPLES = 720


def _svg_coord(u: float, v: float) -> tuple[float, float]:
    return round(u, 5), round(-v, 5)  # SVG y axis points down


def _render_svg(system: PathSystem) -> str:
    named = canonical_states(system)
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.15 -1.15 2.3 2.3" '
        'width="720" height="720">',
        '<rect x="-1.15" y="-1.15" width="2.3" height="2.3" fill="white"/>',
        '<circle cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="0.006"/>',
    ]
    for name in PATH_NAMES:
        points = circle_points(system.ray(name), _SVG_SAMPLES)
        coords = []
        for p in points:
            # The projected circle is centrally symmetric, so skipping the
            # hemisphere flip keeps the polyline continuous.
            x, y = _svg_coord(p[1], p[2])
            coords.append(f"{x},{y}")
        parts.append(
            f'<polyline points="{" ".join(coords)}" fill="none" '
            f'stroke="#666666" stroke-width="0.004">'
            f"<title>P({name}) = 0</title></polyline>"
        )
    for name, state in named.items():
        point = hemisphere_project(state.ray)
        x, y = _svg_coord(point.u, point.v)
        parts.append(f'<circle cx="{x}" cy="{y}" r="0.012" fill="#d62728"/>')
        parts.append(
            f'<text x="{x + 0.018}" y="{y - 0.012}" font-size="0.045" '
            f'font-family="sans-serif" fill="black">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _csv_doc(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def export_canonical_tables(system: PathSystem | None = None) -> dict[str, str]:
    """Reference CSV tables for the named states and the joint basis.

    Returns documents keyed ``probabilities``, ``kd_values``,
    ``inequality`` and ``labels``.
    """
    if system is None:
        system = default_system()
    named = canonical_states(system)
    order = list(PATH_NAMES) + list(N_STATE_ORDER) + list(THETA_ORDER)
    rows = [(name, named[name].ray) for name in order]
    rows += [(b.name, b.ray) for b in joint_basis(system)]

    prob_rows = []
    kd_rows = []
    ineq_rows = []
    label_rows = []
    for name, ray in rows:
        probs = probabilities(ray, system)
        prob_rows.append([name] + [repr(probs[p]) for p in PATH_NAMES])
        profile = kd_profile(ray, system)
        kd_rows.append([name] + [repr(v) for v in profile.values])
        s = inequality_sum(ray, system)
        ineq_rows.append([name, repr(s), repr(max(0.0, 1.0 - s))])
        result = classify(ray, system)
        label_rows.append([name, ";".join(sorted(str(l) for l in result.labels))])
    return {
        "probabilities": _csv_doc(["state"] + [f"P({p})" for p in PATH_NAMES], prob_rows),
        "kd_values": _csv_doc(["state"] + [p.label for p in KD_PAIRS], kd_rows),
        "inequality": _csv_doc(["state", "inner_sum", "violation"], ineq_rows),
        "labels": _csv_doc(["state", "labels"], label_rows),
    }
