"""Rasterize attractors and the (p, q) classification map.

Plane coordinates are coordinates w.r.t. {v, Av}, i.e. the companion matrix
acting on R^2 with v = (1, 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .classify import classify_theorem
from .errors import InvalidRaster, JumptileError, PointBudgetExceeded
from .params import FractalParams, companion, digit_set, validate_params
from .sequences import alpha_beta

# points held in memory at once by attractor_points
DEFAULT_POINT_BUDGET = 5_000_000
# points streamed through the binning step by render_attractor
DEFAULT_RENDER_BUDGET = 50_000_000
_CHUNK_POINTS = 1 << 18

FOREGROUND = 0
BACKGROUND = 190
BLANK = 255


@dataclass(frozen=True, eq=False)
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray
    bbox: tuple[float, float, float, float]

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise InvalidRaster(f"image must have positive size, got {self.width}x{self.height}")
        if self.pixels.shape[:2] != (self.height, self.width):
            raise InvalidRaster(f"pixel grid {self.pixels.shape} does not match {self.width}x{self.height}")
        xmin, xmax, ymin, ymax = self.bbox
        if not (xmax > xmin and ymax > ymin):
            raise InvalidRaster(f"degenerate bounding box {self.bbox}")

    def _header(self, magic: str) -> bytes:
        return f"{magic}\n{self.width}\n{self.height}\n255\n".encode("ascii")

    def to_pgm(self) -> bytes:
        grey = self.pixels if self.pixels.ndim == 2 else self.pixels.mean(axis=2).astype(np.uint8)
        return self._header("P5") + np.ascontiguousarray(grey, dtype=np.uint8).tobytes()

    def to_ppm(self) -> bytes:
        rgb = self.pixels if self.pixels.ndim == 3 else np.repeat(self.pixels[:, :, None], 3, axis=2)
        return self._header("P6") + np.ascontiguousarray(rgb, dtype=np.uint8).tobytes()

    def save(self, path) -> bytes:
        """Write P5 for a .pgm suffix, P6 otherwise; returns the bytes written."""
        path = Path(path)
        data = self.to_pgm() if path.suffix.lower() == ".pgm" else self.to_ppm()
        path.write_bytes(data)
        return data


def _level(points: np.ndarray, digits, inv: np.ndarray) -> np.ndarray:
    # x -> M^{-1}(x + d e1) for every digit d
    shifted = points[None, :, :] + np.array([[d, 0.0] for d in digits])[:, None, :]
    return (shifted.reshape(-1, 2)) @ inv.T


def attractor_points(
    params: FractalParams, depth: int, budget: int = DEFAULT_POINT_BUDGET
) -> np.ndarray:
    """All |D|^depth truncated expansions sum_{i<=depth} M^{-i} d_i e1, shape (N, 2)."""
    if depth < 1:
        raise ValueError("depth must be positive")
    digits = digit_set(params).digits
    total = len(digits) ** depth
    if total > budget:
        raise PointBudgetExceeded(f"{total} points exceed the budget of {budget}")
    inv = np.linalg.inv(companion(params).as_float())
    points = np.zeros((1, 2))
    for _ in range(depth):
        points = _level(points, digits, inv)
    return points


def iter_attractor_chunks(params: FractalParams, depth: int) -> Iterator[np.ndarray]:
    """The same point multiset as attractor_points, streamed in bounded chunks.

    Points split as prefix + M^{-k} * suffix; each prefix point yields a chunk.
    """
    digits = digit_set(params).digits
    n = len(digits)
    tail_depth = 0
    while tail_depth < depth and n ** (tail_depth + 1) <= _CHUNK_POINTS:
        tail_depth += 1
    tail_depth = max(tail_depth, 1)
    head_depth = depth - tail_depth
    tail = attractor_points(params, tail_depth, budget=_CHUNK_POINTS * n)
    if head_depth == 0:
        yield tail
        return
    inv = np.linalg.inv(companion(params).as_float())
    scaled_tail = tail @ np.linalg.matrix_power(inv, head_depth).T
    heads = attractor_points(params, head_depth, budget=10**9)
    for head in heads:
        yield scaled_tail + head


def attractor_bbox(params: FractalParams, depth: int) -> tuple[float, float, float, float]:
    """Exact extremes of the depth-truncated cloud, coordinate by coordinate.

    Digits are nonnegative, so each coordinate is maximized by taking the top
    digit where the coefficient is positive and 0 elsewhere.
    """
    top = params.max_digit
    if depth >= 2:
        seq = alpha_beta(params, depth)
        alphas = [float(a) for a in seq.alphas]
        betas = [float(b) for b in seq.betas]
    else:
        alphas, betas = [-params.p / params.q], [-1 / params.q]
    xmax = top * sum(a for a in alphas if a > 0)
    xmin = top * sum(a for a in alphas if a < 0)
    ymax = top * sum(b for b in betas if b > 0)
    ymin = top * sum(b for b in betas if b < 0)
    return xmin, xmax, ymin, ymax


def _frame(bbox, margin: float = 0.02) -> tuple[float, float, float, float]:
    # axes scaled independently: an affine image, so connectedness is preserved
    xmin, xmax, ymin, ymax = bbox
    px = margin * (xmax - xmin) or 0.5
    py = margin * (ymax - ymin) or 0.5
    return xmin - px, xmax + px, ymin - py, ymax + py


def render_attractor(
    params: FractalParams,
    depth: int,
    width: int,
    height: int,
    budget: int = DEFAULT_RENDER_BUDGET,
) -> RasterImage:
    """Greyscale density image of the depth-truncated attractor (dark = dense)."""
    if width <= 0 or height <= 0:
        raise InvalidRaster(f"image must have positive size, got {width}x{height}")
    if depth < 1:
        raise ValueError("depth must be positive")
    total = len(digit_set(params).digits) ** depth
    if total > budget:
        raise PointBudgetExceeded(f"{total} points exceed the render budget of {budget}")
    bbox = _frame(attractor_bbox(params, depth))
    xmin, xmax, ymin, ymax = bbox
    counts = np.zeros(width * height, dtype=np.int64)
    for chunk in iter_attractor_chunks(params, depth):
        col = np.floor((chunk[:, 0] - xmin) / (xmax - xmin) * width).astype(np.int64)
        row = np.floor((ymax - chunk[:, 1]) / (ymax - ymin) * height).astype(np.int64)
        np.clip(col, 0, width - 1, out=col)
        np.clip(row, 0, height - 1, out=row)
        counts += np.bincount(row * width + col, minlength=width * height)
    counts = counts.reshape(height, width)
    level = np.log1p(counts) / np.log1p(counts.max())
    # empty pixels white, any hit at least mid-grey
    shade = np.where(counts > 0, 160 - np.rint(160 * level), 255)
    return RasterImage(width, height, shade.astype(np.uint8), bbox)


def map_cells(p_range: tuple[int, int], q_range: tuple[int, int], m: int) -> dict[tuple[int, int], str]:
    """'connected' / 'disconnected' / 'blank' per (p, q) cell."""
    cells = {}
    for q in range(q_range[0], q_range[1] + 1):
        for p in range(p_range[0], p_range[1] + 1):
            try:
                verdict = classify_theorem(validate_params(p, q, m)).verdict.value
            except JumptileError:
                verdict = "blank"
            cells[(p, q)] = verdict
    return cells


def render_parameter_map(
    p_range: tuple[int, int], q_range: tuple[int, int], m: int, cell_pixels: int = 8
) -> RasterImage:
    """One square per (p, q); p grows to the right, q grows upward."""
    n_p = p_range[1] - p_range[0] + 1
    n_q = q_range[1] - q_range[0] + 1
    if n_p <= 0 or n_q <= 0 or cell_pixels <= 0:
        raise InvalidRaster("parameter map needs a nonempty range and positive cell size")
    shade = {"connected": FOREGROUND, "disconnected": BACKGROUND, "blank": BLANK}
    grid = np.full((n_q, n_p), BLANK, dtype=np.uint8)
    for (p, q), verdict in map_cells(p_range, q_range, m).items():
        grid[q_range[1] - q, p - p_range[0]] = shade[verdict]
    pixels = np.kron(grid, np.ones((cell_pixels, cell_pixels), dtype=np.uint8))
    bbox = (p_range[0] - 0.5, p_range[1] + 0.5, q_range[0] - 0.5, q_range[1] + 0.5)
    return RasterImage(n_p * cell_pixels, n_q * cell_pixels, pixels, bbox)


def map_cell_pixel(image: RasterImage, p: int, q: int) -> int:
    """Pixel value at the centre of the (p, q) cell."""
    xmin, xmax, ymin, ymax = image.bbox
    cell = image.width / (xmax - xmin)
    col = int((p - xmin) * cell)
    row = int((ymax - q) * cell)
    return int(image.pixels[row, col])
