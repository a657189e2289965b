"""Line-function geometry: knot fidelity, step corners, monotone spline bounds."""
import math
import random

import numpy as np
import pytest

from codegaze.geometry import (
    MODES,
    Polyline,
    interpolate,
    parse_mode,
    path_length,
    series_polyline,
)


def random_knots(rng, n=None, quantize=True):
    n = n or rng.randrange(2, 14)
    pts = [(rng.uniform(0, 1920), rng.uniform(0, 1080)) for _ in range(n)]
    if quantize:
        pts = [(round(x, 2), round(y, 2)) for x, y in pts]
    return pts


def dense_eval(knots, points_per_span=1000):
    """Independent dense evaluation of the monotone spline, per coordinate.

    Recomputes tangents and the Hermite basis with numpy and returns one
    (points_per_span+1, 2) block per inter-knot span.
    """
    n = len(knots)
    xs = np.array([p[0] for p in knots])
    ys = np.array([p[1] for p in knots])

    def tangents(v):
        d = np.diff(v)
        m = np.empty(n)
        m[0], m[-1] = d[0], d[-1]
        for k in range(1, n - 1):
            if d[k - 1] * d[k] <= 0:
                m[k] = 0.0
            else:
                avg = (d[k - 1] + d[k]) / 2.0
                lim = 3.0 * min(abs(d[k - 1]), abs(d[k]))
                m[k] = math.copysign(min(abs(avg), lim), avg)
        return m

    if n == 2:
        mx = np.array([xs[1] - xs[0]] * 2)
        my = np.array([ys[1] - ys[0]] * 2)
    else:
        mx, my = tangents(xs), tangents(ys)

    # evaluated vertices cover [0, 1); the right knot is emitted exactly,
    # matching the interpolation contract (knots are never re-derived)
    t = np.arange(points_per_span) / points_per_span
    h01 = t * t * (3 - 2 * t)
    h10 = t * (1 - t) ** 2
    h11 = t * t * (t - 1)
    spans = []
    for i in range(n - 1):
        vx = xs[i] + (xs[i + 1] - xs[i]) * h01 + mx[i] * h10 + mx[i + 1] * h11
        vy = ys[i] + (ys[i + 1] - ys[i]) * h01 + my[i] * h10 + my[i + 1] * h11
        vx = np.append(vx, xs[i + 1])
        vy = np.append(vy, ys[i + 1])
        spans.append(np.column_stack([vx, vy]))
    return spans


def manhattan_length(knots):
    total = 0.0
    for (x1, y1), (x2, y2) in zip(knots, knots[1:]):
        total += abs(x2 - x1)
        total += abs(y2 - y1)
    return total


class TestBasicModes:
    def test_linear_identity(self):
        poly = interpolate([(0.0, 0.0), (2.0, 4.0)], "linear")
        assert poly.vertices == ((0.0, 0.0), (2.0, 4.0))
        assert poly.knot_indices == (0, 1)

    def test_step_corner(self):
        poly = interpolate([(0.0, 0.0), (2.0, 4.0)], "step")
        assert poly.vertices == ((0.0, 0.0), (2.0, 0.0), (2.0, 4.0))

    def test_linear_closed_appends_first(self):
        poly = interpolate([(1.0, 2.0), (3.0, 4.0), (5.0, 0.0)], "linear-closed")
        assert poly.vertices[-1] == poly.vertices[0]
        assert len(poly.vertices) == 4
        assert poly.knot_indices == (0, 1, 2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            interpolate([], "linear")

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            parse_mode("bezier")

    def test_single_knot_all_modes(self):
        for mode in MODES:
            poly = interpolate([(7.0, 8.0)], mode)
            assert poly.vertices[0] == (7.0, 8.0)
            assert poly.knot_indices == (0,)


class TestMonotone:
    def test_collinear_knots_stay_on_line(self):
        poly = interpolate([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)], "monotone", 64)
        for x, y in poly.vertices:
            assert abs(y - x) <= 1e-12

    def test_plateau_no_overshoot(self):
        knots = [(0.0, 0.0), (1.0, 10.0), (2.0, 10.0), (3.0, 0.0)]
        spans = dense_eval(knots)
        ally = np.concatenate([s[:, 1] for s in spans])
        assert ally.min() >= 0.0 and ally.max() <= 10.0
        assert np.all(np.diff(spans[0][:, 1]) >= 0)   # rising span
        assert np.all(np.diff(spans[2][:, 1]) <= 0)   # falling span

    def test_knots_bit_exact_every_mode(self):
        rng = random.Random(11)
        for _ in range(50):
            knots = random_knots(rng)
            for mode in MODES:
                poly = interpolate(knots, mode, 8)
                for k, idx in zip(knots, poly.knot_indices):
                    assert poly.vertices[idx] == k

    def test_no_overshoot_random(self):
        rng = random.Random(12)
        for _ in range(100):
            knots = random_knots(rng)
            for span_i, block in enumerate(dense_eval(knots)):
                for axis in (0, 1):
                    lo = min(knots[span_i][axis], knots[span_i + 1][axis])
                    hi = max(knots[span_i][axis], knots[span_i + 1][axis])
                    assert block[:, axis].min() >= lo
                    assert block[:, axis].max() <= hi

    def test_monotone_runs_preserved(self):
        rng = random.Random(13)
        for _ in range(100):
            knots = random_knots(rng)
            spans = dense_eval(knots, 200)
            for axis in (0, 1):
                vals = [p[axis] for p in knots]
                for i in range(len(vals) - 1):
                    seq = spans[i][:, axis]
                    if vals[i] <= vals[i + 1]:
                        assert np.all(np.diff(seq) >= 0)
                    else:
                        assert np.all(np.diff(seq) <= 0)

    def test_interpolate_matches_dense_oracle_values(self):
        rng = random.Random(14)
        knots = random_knots(rng, 9)
        poly = interpolate(knots, "monotone", 10)
        spans = dense_eval(knots, 10)
        for i, block in enumerate(spans):
            for j in range(10):
                got = poly.vertices[i * 10 + j]
                assert got[0] == pytest.approx(block[j, 0], abs=1e-9)
                assert got[1] == pytest.approx(block[j, 1], abs=1e-9)

    def test_vertex_count(self):
        knots = [(0.0, 0.0), (1.0, 5.0), (2.0, 3.0)]
        poly = interpolate(knots, "monotone", 16)
        assert len(poly.vertices) == 2 * 16 + 1
        assert poly.knot_indices == (0, 16, 32)


class TestPathLength:
    def test_three_four_five(self):
        assert path_length(interpolate([(0.0, 0.0), (3.0, 4.0)], "linear")) == 5.0

    def test_single_vertex_zero(self):
        assert path_length(Polyline(((1.0, 1.0),), (0,))) == 0.0

    def test_step_is_manhattan(self):
        knots = [(0.0, 0.0), (2.0, 4.0)]
        assert path_length(interpolate(knots, "step")) == manhattan_length(knots)
        assert path_length(interpolate(knots, "step")) == 6.0

    def test_step_manhattan_random(self):
        rng = random.Random(15)
        for _ in range(100):
            knots = random_knots(rng)
            assert path_length(interpolate(knots, "step")) == manhattan_length(knots)


class TestSeriesBridge:
    def test_series_polyline_uses_fused(self):
        class P:
            def __init__(self, xy):
                self.fused = xy

        class S:
            points = [P((0.0, 0.0)), P((2.0, 4.0))]

        poly = series_polyline(S(), "step")
        assert poly.vertices == ((0.0, 0.0), (2.0, 0.0), (2.0, 4.0))
