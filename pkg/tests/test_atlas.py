import csv
import hashlib
import io
from collections import deque

import numpy as np
import pytest

from tripath import atlas, classify
from tripath.classify import ClassLabel
from tripath.errors import UnsupportedFormatError
from tripath.hilbert import normalize

GOLDEN_PPM_64_SHA256 = "648ad8f54e87204648e9bcf4c4f58d9b28a36f57f347090609a43842114cd220"


@pytest.fixture(scope="module")
def grid(system):
    return atlas.sample_atlas(256, system=system)


def test_lift_produces_front_hemisphere():
    u = np.array([0.0, 0.3, -0.5])
    v = np.array([0.0, 0.4, 0.5])
    rays = atlas.lift(u, v)
    assert np.allclose(np.linalg.norm(rays, axis=1), 1.0, atol=1e-12)
    assert (rays[:, 0] >= 0).all()
    assert np.allclose(rays[:, 1], u) and np.allclose(rays[:, 2], v)


def test_resolution_floor(system):
    with pytest.raises(ValueError):
        atlas.sample_atlas(8, system=system)


def test_grid_marks_exterior(grid):
    res = grid.resolution
    assert grid.labels.shape == (res, res)
    assert grid.labels[0, 0] == atlas.EXTERIOR
    assert grid.labels[0, res - 1] == atlas.EXTERIOR
    assert grid.labels[res - 1, 0] == atlas.EXTERIOR
    interior = grid.labels[res // 2, res // 2]
    assert interior >= 0 or interior == atlas.BOUNDARY


def test_center_pixel_is_path_1(system):
    # odd resolution puts a pixel center exactly at the chart origin
    g = atlas.sample_atlas(127, system=system)
    iy = ix = 127 // 2
    u, v = g.pixel_center(ix, iy)
    assert u == pytest.approx(0.0, abs=1e-12) and v == pytest.approx(0.0, abs=1e-12)
    # |1> sits on several zero circles at once
    assert g.labels[iy, ix] == atlas.BOUNDARY


def test_pixel_roundtrip(grid):
    for ix, iy in ((0, 0), (13, 200), (255, 7)):
        u, v = grid.pixel_center(ix, iy)
        assert grid.nearest_pixel(u, v) == (ix, iy)


def test_all_labels_present_at_256(grid):
    assert len(grid.label_counts()) == 31


def test_n_region_is_connected(grid):
    n_index = classify.ALL_LABELS.index(ClassLabel("N"))
    mask = grid.labels == n_index
    assert mask.any()
    seen = np.zeros_like(mask)
    ys, xs = np.nonzero(mask)
    queue = deque([(int(ys[0]), int(xs[0]))])
    seen[ys[0], xs[0]] = True
    while queue:
        y, x = queue.popleft()
        for dy, dx in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ny, nx = y + dy, x + dx
            if 0 <= ny < mask.shape[0] and 0 <= nx < mask.shape[1]:
                if mask[ny, nx] and not seen[ny, nx]:
                    seen[ny, nx] = True
                    queue.append((ny, nx))
    assert (seen == mask).all()


def test_palette_covers_all_labels():
    colors = atlas.palette()
    assert len(colors) >= 31
    for label in classify.ALL_LABELS:
        rgb = colors[str(label)]
        assert all(0 <= c <= 255 for c in rgb)
    assert len({colors[str(l)] for l in classify.ALL_LABELS}) == 31


def test_raster_output_shape(grid):
    ppm = atlas.render(grid, "raster")
    header = f"P6\n{grid.resolution} {grid.resolution}\n255\n".encode()
    assert ppm.startswith(header)
    assert len(ppm) == len(header) + 3 * grid.resolution**2


def test_raster_determinism_and_golden(system):
    a = atlas.render(atlas.sample_atlas(64, system=system), "raster")
    b = atlas.render(atlas.sample_atlas(64, system=system), "raster")
    assert a == b
    assert hashlib.sha256(a).hexdigest() == GOLDEN_PPM_64_SHA256


def test_vector_output(system):
    svg = atlas.render(None, "vector", system)
    assert svg.lstrip().startswith("<svg")
    assert svg.count("<polyline") == 10
    assert svg.count("<text") == 20
    assert "N_2" in svg and "theta_3" in svg


def test_render_format_errors(grid):
    with pytest.raises(UnsupportedFormatError):
        atlas.render(grid, "png")
    with pytest.raises(ValueError):
        atlas.render(None, "raster")


def test_mirror_correspondence_on_pixel_pairs(system, grid, rng):
    res = grid.resolution
    checked = 0
    while checked < 200:
        ix = int(rng.integers(0, res))
        iy = int(rng.integers(0, res))
        idx = int(grid.labels[iy, ix])
        if idx < 0:
            continue
        u, v = grid.pixel_center(ix, iy)
        c1 = float(np.sqrt(max(0.0, 1.0 - u * u - v * v)))
        mirrored = normalize([u, c1, v])  # swap of the first two amplitudes
        result = classify.classify(mirrored, system)
        want = classify.mirror_label(classify.ALL_LABELS[idx])
        assert want in result.labels
        if not result.is_boundary:
            assert result.labels == frozenset({want})
        checked += 1


def test_canonical_tables_shape(system):
    docs = atlas.export_canonical_tables(system)
    assert set(docs) == {"probabilities", "kd_values", "inequality", "labels"}
    for doc in docs.values():
        assert "\r\n" in doc  # RFC 4180 line endings
        rows = list(csv.reader(io.StringIO(doc)))
        assert len(rows) == 24  # header + 10 paths + 5 + 5 + 3 basis states


def test_canonical_tables_content(system):
    docs = atlas.export_canonical_tables(system)

    rows = {r[0]: r[1:] for r in list(csv.reader(io.StringIO(docs["probabilities"])))[1:]}
    assert float(rows["1"][0]) == pytest.approx(1.0, abs=1e-12)
    assert float(rows["N_f"][5]) == pytest.approx(1 / 9, abs=1e-12)  # P(f)

    rows = {r[0]: r[1:] for r in list(csv.reader(io.StringIO(docs["inequality"])))[1:]}
    assert float(rows["N_1"][0]) == pytest.approx(9 / 11, abs=1e-12)
    assert float(rows["N_1"][1]) == pytest.approx(2 / 11, abs=1e-12)
    assert float(rows["theta_3"][1]) == 0.0

    rows = {r[0]: r[1:] for r in list(csv.reader(io.StringIO(docs["labels"])))[1:]}
    assert rows["N_2"][0] == "B(1,S2);N;V(1);V(S2)"
    assert rows["Q(S2,D1)"][0] == "Q(S2,D1)"

    rows = {r[0]: r[1:] for r in list(csv.reader(io.StringIO(docs["kd_values"])))[1:]}
    assert float(rows["theta_3"][9]) == pytest.approx(-1 / 8, abs=1e-12)  # rho(S1,S2)


def test_header_order_of_kd_table(system):
    docs = atlas.export_canonical_tables(system)
    header = next(csv.reader(io.StringIO(docs["kd_values"])))
    assert header[0] == "state"
    assert header[1:] == [
        "rho(1,P2)", "rho(2,P1)", "rho(f,3)", "rho(S1,D2)", "rho(S2,D1)",
        "rho(1,f)", "rho(1,S2)", "rho(2,f)", "rho(2,S1)", "rho(S1,S2)",
    ]
