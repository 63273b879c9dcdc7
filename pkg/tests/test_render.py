import hashlib
import itertools
from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest

from jumptile.errors import InvalidRaster, PointBudgetExceeded
from jumptile.params import companion, digit_set, mat_mul, mat_vec, validate_params
from jumptile.render import (
    BACKGROUND,
    BLANK,
    FOREGROUND,
    RasterImage,
    attractor_bbox,
    attractor_points,
    iter_attractor_chunks,
    map_cell_pixel,
    map_cells,
    render_attractor,
    render_parameter_map,
)
from jumptile.sequences import tilde_bounds


def exact_cloud(params, depth):
    """Multiset of exact truncated expansions, enumerated digit tuple by tuple."""
    inv = companion(params).inverse
    powers, power = [], ((F(1), F(0)), (F(0), F(1)))
    for _ in range(depth):
        power = mat_mul(power, inv)
        powers.append(mat_vec(power, (F(1), F(0))))
    out = Counter()
    for word in itertools.product(digit_set(params).digits, repeat=depth):
        x = sum(d * col[0] for d, col in zip(word, powers))
        y = sum(d * col[1] for d, col in zip(word, powers))
        out[(x, y)] += 1
    return out


def test_depth_one():
    params = validate_params(1, 4, 0)
    pts = attractor_points(params, 1)
    inv = np.linalg.inv(companion(params).as_float())
    expected = np.array([inv @ np.array([d, 0.0]) for d in (0, 1, 2, 4)])
    assert np.allclose(pts, expected)


@pytest.mark.parametrize("depth", [1, 3, 5])
def test_origin_always_present(depth):
    pts = attractor_points(validate_params(2, 4, 1), depth)
    assert np.any(np.all(pts == 0, axis=1))


@pytest.mark.parametrize("pqm,depth", [((4, 6, 0), 4), ((1, 3, 0), 6), ((4, -6, 1), 3)])
def test_cardinality(pqm, depth):
    params = validate_params(*pqm)
    assert len(attractor_points(params, depth)) == abs(params.q) ** depth
    assert sum(len(c) for c in iter_attractor_chunks(params, depth)) == abs(params.q) ** depth


@pytest.mark.parametrize("pqm,depth", [((3, 4, 0), 3), ((2, 3, 1), 4), ((1, -3, 0), 4)])
def test_subdivision_is_deepening(pqm, depth):
    params = validate_params(*pqm)
    inv = companion(params).inverse
    shallow, deep = exact_cloud(params, depth), exact_cloud(params, depth + 1)
    mapped = Counter()
    for (x, y), n in shallow.items():
        for d in digit_set(params).digits:
            mapped[mat_vec(inv, (x + d, y))] += n
    assert mapped == deep


@pytest.mark.parametrize("pqm,depth", [((3, 4, 0), 4), ((2, -4, 2), 3)])
def test_float_cloud_matches_exact(pqm, depth):
    params = validate_params(*pqm)
    exact = sorted((float(x), float(y)) for (x, y), n in exact_cloud(params, depth).items() for _ in range(n))
    got = sorted(map(tuple, attractor_points(params, depth)))
    assert np.allclose(np.array(got), np.array(exact), atol=1e-12)


def test_chunks_match_full_enumeration():
    params = validate_params(4, 6, 0)
    full = np.sort(attractor_points(params, 8), axis=0)
    streamed = np.sort(np.concatenate(list(iter_attractor_chunks(params, 8))), axis=0)
    assert np.allclose(full, streamed, atol=1e-12)


def test_depth_ten_cloud_inside_coefficient_box():
    params = validate_params(4, 6, 0)
    box = tilde_bounds(params)
    gx, gy = float(params.max_digit * box.alpha_tilde_ub), float(params.max_digit * box.beta_tilde_ub)
    lo, hi = np.full(2, np.inf), np.full(2, -np.inf)
    count = 0
    for chunk in iter_attractor_chunks(params, 10):
        lo = np.minimum(lo, chunk.min(axis=0))
        hi = np.maximum(hi, chunk.max(axis=0))
        count += len(chunk)
    assert count == 6**10
    assert -gx <= lo[0] and hi[0] <= gx and -gy <= lo[1] and hi[1] <= gy
    assert np.allclose([lo[0], hi[0], lo[1], hi[1]], attractor_bbox(params, 10), atol=1e-9)


def test_point_budget():
    with pytest.raises(PointBudgetExceeded):
        attractor_points(validate_params(4, 6, 0), 9)
    with pytest.raises(PointBudgetExceeded):
        render_attractor(validate_params(4, 6, 0), 12, 64, 64)


def test_render_deterministic():
    params = validate_params(4, 6, 0)
    a = render_attractor(params, 9, 512, 512).to_ppm()
    b = render_attractor(params, 9, 512, 512).to_ppm()
    assert hashlib.sha256(a).digest() == hashlib.sha256(b).digest()


def test_render_4_5_nonempty():
    image = render_attractor(validate_params(4, 5, 0), 9, 512, 512)
    assert (image.pixels < 255).sum() > 1000


@pytest.mark.parametrize("w,h", [(0, 10), (10, 0)])
def test_zero_size_rejected(w, h):
    with pytest.raises(InvalidRaster):
        render_attractor(validate_params(4, 6, 0), 3, w, h)
    with pytest.raises(InvalidRaster):
        RasterImage(w, h, np.zeros((h, w), dtype=np.uint8), (0, 1, 0, 1))


def test_degenerate_bbox_rejected():
    with pytest.raises(InvalidRaster):
        RasterImage(2, 2, np.zeros((2, 2), dtype=np.uint8), (0, 0, 0, 1))


def test_headers():
    image = RasterImage(3, 2, np.arange(6, dtype=np.uint8).reshape(2, 3), (0, 1, 0, 1))
    ppm, pgm = image.to_ppm(), image.to_pgm()
    assert ppm.startswith(b"P6\n3\n2\n255\n") and len(ppm) == len(b"P6\n3\n2\n255\n") + 18
    assert pgm == b"P5\n3\n2\n255\n" + bytes(range(6))


def test_save_picks_format(tmp_path):
    image = RasterImage(1, 1, np.zeros((1, 1), dtype=np.uint8), (0, 1, 0, 1))
    image.save(tmp_path / "a.pgm")
    image.save(tmp_path / "a.ppm")
    assert (tmp_path / "a.pgm").read_bytes()[:2] == b"P5"
    assert (tmp_path / "a.ppm").read_bytes()[:2] == b"P6"


def test_parameter_map_m0():
    image = render_parameter_map((-10, 10), (-10, 10), 0, 4)
    assert (image.width, image.height) == (84, 84)
    cells = map_cells((-10, 10), (-10, 10), 0)
    sporadic = {(1, -3), (-1, -3), (2, 3), (-2, 3), (3, 3), (-3, 3), (4, 4), (-4, 4)}
    connected = {pq for pq, v in cells.items() if v == "connected"}
    assert connected == {pq for pq, v in cells.items() if v != "blank" and (2 * abs(pq[0]) == abs(pq[1] + 2) or pq in sporadic)}
    assert sporadic <= connected
    for (p, q), verdict in cells.items():
        expected = {"connected": FOREGROUND, "disconnected": BACKGROUND, "blank": BLANK}[verdict]
        assert map_cell_pixel(image, p, q) == expected


def test_parameter_map_positive_jump_has_no_foreground():
    image = render_parameter_map((-10, 10), (-10, 10), 2, 3)
    assert not (image.pixels == FOREGROUND).any()
    assert (image.pixels == BACKGROUND).any()


def test_parameter_map_empty_range():
    with pytest.raises(InvalidRaster):
        render_parameter_map((1, 0), (-3, 3), 0, 4)
