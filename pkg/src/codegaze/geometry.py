"""Drawable polylines for scanpaths: linear, linear-closed, step, monotone.

The monotone mode is a Fritsch-Carlson cubic Hermite spline applied to each
coordinate separately against the knot index (gaze x is not monotone in
time, so interpolating y-over-x would be meaningless here). Tangents are
clamped so the curve never overshoots the local knot interval.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

MODES = ("linear", "linear_closed", "step", "monotone")

DEFAULT_SAMPLES_PER_SEGMENT = 16


def parse_mode(value: str) -> str:
    """Map API spellings ("linear-closed") onto internal mode names."""
    mode = value.strip().lower().replace("-", "_")
    if mode not in MODES:
        raise ValueError(f"unknown line mode {value!r}; expected one of {MODES}")
    return mode


@dataclass(frozen=True)
class Polyline:
    """Ordered vertices plus the indices where the original knots sit."""

    vertices: tuple[tuple[float, float], ...]
    knot_indices: tuple[int, ...]


def _tangents(values: list[float]) -> list[float]:
    """Monotonicity-preserving tangents for unit-spaced knots.

    Secant differences d[k]; interior tangent is zero across a sign change,
    otherwise the secant average clamped to 3*min(|d[k-1]|, |d[k]|), which
    keeps every span monotone between its knots.
    """
    n = len(values)
    d = [values[k + 1] - values[k] for k in range(n - 1)]
    m = [0.0] * n
    m[0] = d[0]
    m[n - 1] = d[n - 2]
    for k in range(1, n - 1):
        if d[k - 1] * d[k] <= 0.0:
            m[k] = 0.0
        else:
            avg = (d[k - 1] + d[k]) / 2.0
            limit = 3.0 * min(abs(d[k - 1]), abs(d[k]))
            m[k] = math.copysign(min(abs(avg), limit), avg)
    return m


def _hermite(p0: float, p1: float, m0: float, m1: float, t: float) -> float:
    # p0 + d*h01 form: exact at flat spans, error scales with the span height
    d = p1 - p0
    h01 = t * t * (3.0 - 2.0 * t)
    h10 = t * (1.0 - t) * (1.0 - t)
    h11 = t * t * (t - 1.0)
    return p0 + d * h01 + m0 * h10 + m1 * h11


def _monotone_vertices(
    knots: list[tuple[float, float]], samples_per_segment: int
) -> tuple[list[tuple[float, float]], list[int]]:
    n = len(knots)
    if n == 1:
        return [knots[0]], [0]
    xs = [p[0] for p in knots]
    ys = [p[1] for p in knots]
    if n == 2:
        mx = [xs[1] - xs[0]] * 2
        my = [ys[1] - ys[0]] * 2
    else:
        mx = _tangents(xs)
        my = _tangents(ys)

    s = samples_per_segment
    vertices: list[tuple[float, float]] = []
    for i in range(n - 1):
        vertices.append(knots[i])
        for j in range(1, s):
            t = j / s
            vertices.append(
                (
                    _hermite(xs[i], xs[i + 1], mx[i], mx[i + 1], t),
                    _hermite(ys[i], ys[i + 1], my[i], my[i + 1], t),
                )
            )
    vertices.append(knots[n - 1])
    return vertices, [i * s for i in range(n)]


def interpolate(knots, mode: str, samples_per_segment: int = DEFAULT_SAMPLES_PER_SEGMENT) -> Polyline:
    """Build the drawable polyline for a knot sequence under one line mode.

    `knots` is any iterable of (x, y) pairs (e.g. the fused coordinates of a
    ScanpathSeries). Knots always reappear bit-identically at the returned
    knot_indices.
    """
    pts = [(float(x), float(y)) for x, y in knots]
    if not pts:
        raise ValueError("cannot interpolate an empty series")
    if samples_per_segment < 1:
        raise ValueError("samples_per_segment must be >= 1")
    mode = parse_mode(mode)

    if mode == "linear":
        return Polyline(tuple(pts), tuple(range(len(pts))))
    if mode == "linear_closed":
        return Polyline(tuple(pts + [pts[0]]), tuple(range(len(pts))))
    if mode == "step":
        vertices = [pts[0]]
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            vertices.append((x2, y1))
            vertices.append((x2, y2))
        return Polyline(tuple(vertices), tuple(range(0, 2 * len(pts), 2)))
    vertices, knot_indices = _monotone_vertices(pts, samples_per_segment)
    return Polyline(tuple(vertices), tuple(knot_indices))


def series_polyline(series, mode: str, samples_per_segment: int = DEFAULT_SAMPLES_PER_SEGMENT) -> Polyline:
    """Interpolate the fused coordinates of a ScanpathSeries."""
    return interpolate([p.fused for p in series.points], mode, samples_per_segment)


def path_length(polyline: Polyline) -> float:
    """Total Euclidean length along the polyline, 0.0 for a single vertex."""
    total = 0.0
    for (x1, y1), (x2, y2) in zip(polyline.vertices, polyline.vertices[1:]):
        total += math.hypot(x2 - x1, y2 - y1)
    return total
