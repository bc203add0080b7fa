import math

import numpy as np
import pytest

from nevpick.blaschke import BlaschkeProduct, generate_sequence
from nevpick.contour import ContourEstimate, carleson_norm, level_contour, marching_squares, winding_number
from nevpick.errors import ContourOpen, GridTooCoarse


def test_circle_contour():
    c = level_contour(BlaschkeProduct([0.0]), 0.5, 2**9)
    assert len(c.polylines) == 1
    line = c.polylines[0]
    assert np.array_equal(line[0], line[-1])
    assert abs(c.length - math.pi) / math.pi < 0.01
    assert np.max(np.abs(np.abs(line) - 0.5)) < 1e-3
    assert c.enclosed.all()
    assert c.min_inside < 0.5


def test_two_zero_components():
    B = BlaschkeProduct([0.5, -0.5])
    assert len(level_contour(B, 0.1, 2**9).polylines) == 2
    assert len(level_contour(B, 0.9, 2**9).polylines) == 1


def test_points_on_contour_near_level(rng):
    B = BlaschkeProduct([0.3 + 0.2j, -0.6j, 0.7])
    c = level_contour(B, 0.3, 2**9)
    pts = np.concatenate(c.polylines)
    assert np.max(np.abs(np.abs(B(pts)) - 0.3)) < 0.01
    assert np.max(np.abs(pts)) < 1
    inside = pts * 0.0 + np.array(B.zeros.array[0])
    assert c.inside_mask(inside[:1]).all()


def test_grid_too_coarse():
    B = BlaschkeProduct([0.999])
    with pytest.raises(GridTooCoarse):
        level_contour(B, 0.1, 2**5)


def test_open_contour_detected():
    x = np.linspace(-1, 1, 9)
    F = np.add.outer(x, np.zeros(9))  # level set is a straight line through the grid
    with pytest.raises(ContourOpen):
        marching_squares(F, x)


def test_saddle_rule_is_deterministic():
    x = np.array([0.0, 1.0])
    F = np.array([[-1.0, 1.0], [1.0, -1.0]])
    with pytest.raises(ContourOpen):
        marching_squares(F, x)


def test_winding_number():
    t = np.linspace(0, 2 * np.pi, 200)
    circle = 0.5 * np.exp(1j * t)
    assert winding_number(circle, np.array([0.0, 0.9])) == pytest.approx([1.0, 0.0], abs=1e-9)


def test_carleson_norm_circle_and_empty():
    c = level_contour(BlaschkeProduct([0.0]), 0.5, 2**9)
    norm, hist = carleson_norm(c, 6, return_history=True)
    # the circle |z| = 1/2 only meets boxes of depth >= 1/2
    assert hist[0] == pytest.approx(c.length, rel=1e-12)
    assert hist[-1] == hist[1]
    empty = ContourEstimate([], 0.5, np.zeros(2), np.zeros((2, 2)), np.zeros((2, 2), bool))
    assert carleson_norm(empty) == 0.0
    with pytest.raises(ValueError):
        carleson_norm(c, 13)


def test_carleson_norm_refinement_stable():
    B = BlaschkeProduct(generate_sequence("exponential", 10, M=1))
    c = level_contour(B, 0.3, 2**9, require_enclosed=False)
    _, hist = carleson_norm(c, 10, return_history=True)
    assert hist[10] / hist[6] <= 2.0
    assert all(a <= b for a, b in zip(hist, hist[1:]))


def test_bad_arguments():
    B = BlaschkeProduct([0.0])
    with pytest.raises(ValueError):
        level_contour(B, 1.0)
    with pytest.raises(ValueError):
        level_contour(B, 0.5, 300)
