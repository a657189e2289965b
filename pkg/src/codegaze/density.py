"""Gaze density grids over the stimulus plane and their red-to-green coloring."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_CELL_SIZE = 16
DEFAULT_SIGMA = 24.0
VISIBILITY_THRESHOLD = 0.05
OVERLAY_OPACITY = 0.6


@dataclass(frozen=True)
class GridConfig:
    cell_size: int = DEFAULT_CELL_SIZE
    sigma: float = DEFAULT_SIGMA
    width: int = 1920
    height: int = 1080

    def __post_init__(self):
        if self.cell_size < 1 or self.cell_size > min(self.width, self.height):
            raise ValueError(f"cell_size {self.cell_size} outside [1, min(width, height)]")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")

    @property
    def grid_width(self) -> int:
        return math.ceil(self.width / self.cell_size)

    @property
    def grid_height(self) -> int:
        return math.ceil(self.height / self.cell_size)


@dataclass(frozen=True)
class DensityGrid:
    config: GridConfig
    values: np.ndarray  # (grid_height, grid_width), max-normalized
    total_points: int


def _cell_index(v: float, cell: int, dim: int) -> int:
    # points on a cell boundary belong to the lower-index cell
    i = math.ceil(v / cell) - 1
    return min(max(i, 0), dim - 1)


def bin_points(points, config: GridConfig) -> np.ndarray:
    """Count fused gaze coordinates per grid cell (no smoothing, no scaling)."""
    counts = np.zeros((config.grid_height, config.grid_width), dtype=np.float64)
    for p in points:
        x, y = p.fused if hasattr(p, "fused") else p
        col = _cell_index(x, config.cell_size, config.grid_width)
        row = _cell_index(y, config.cell_size, config.grid_height)
        counts[row, col] += 1.0
    return counts


def smooth(counts: np.ndarray, config: GridConfig) -> np.ndarray:
    """Spread counts with a Gaussian truncated at 3*sigma, conserving mass.

    Near the grid edge the clipped kernel is renormalized per source cell so
    no mass leaks off-grid.
    """
    if config.sigma <= 0:
        return counts.copy()
    cell = config.cell_size
    radius = math.ceil(3.0 * config.sigma / cell)
    offs = np.arange(-radius, radius + 1, dtype=np.float64) * cell
    g = np.exp(-(offs**2) / (2.0 * config.sigma**2))
    kernel = np.outer(g, g)
    kernel /= kernel.sum()

    gh, gw = counts.shape
    out = np.zeros_like(counts)
    for row, col in zip(*np.nonzero(counts)):
        r0, r1 = max(0, row - radius), min(gh, row + radius + 1)
        c0, c1 = max(0, col - radius), min(gw, col + radius + 1)
        k = kernel[r0 - row + radius : r1 - row + radius, c0 - col + radius : c1 - col + radius]
        out[r0:r1, c0:c1] += counts[row, col] * (k / k.sum())
    return out


def accumulate(points, config: GridConfig) -> DensityGrid:
    """Bin, smooth, and max-normalize gaze points into a density grid."""
    points = list(points)
    values = smooth(bin_points(points, config), config)
    peak = values.max() if values.size else 0.0
    if peak > 0:
        values = values / peak
    return DensityGrid(config=config, values=values, total_points=len(points))


def colorize(
    grid: DensityGrid,
    threshold: float = VISIBILITY_THRESHOLD,
    opacity: float = OVERLAY_OPACITY,
) -> np.ndarray:
    """RGBA overlay at plane resolution: red is dense, green is sparse.

    Cells below the visibility threshold come out fully transparent; the
    rest ramp green -> yellow -> red in hue at a fixed overlay opacity.
    Returns a (height, width, 4) uint8 array.
    """
    v = grid.values
    span = max(1.0 - threshold, 1e-9)
    norm = np.clip((v - threshold) / span, 0.0, 1.0)

    r = np.minimum(1.0, 2.0 * norm)
    g = np.minimum(1.0, 2.0 * (1.0 - norm))
    rgba = np.zeros(v.shape + (4,), dtype=np.uint8)
    rgba[..., 0] = np.round(r * 255).astype(np.uint8)
    rgba[..., 1] = np.round(g * 255).astype(np.uint8)
    rgba[..., 3] = np.where(v >= threshold, int(round(opacity * 255)), 0).astype(np.uint8)

    cell = grid.config.cell_size
    upscaled = np.repeat(np.repeat(rgba, cell, axis=0), cell, axis=1)
    return upscaled[: grid.config.height, : grid.config.width]
