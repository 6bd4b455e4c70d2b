import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import Point, Polygon

from cagemip.geometry import (ConvexPolygon, Pose, clean_outline, decompose, is_simple, limit_assignment_set,
                              minimal_patterns, opposite_facet_pairs, point_in_polygon, points_strictly_inside,
                              positively_spans, triangulate, winding_number, wrap_angle)
from cagemip.scenarios import random_polygon_suite

SQUARE = [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)]
L_SHAPE = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
RECT = [(-1, -0.5), (1, -0.5), (1, 0.5), (-1, 0.5)]


def test_convex_polygon_rejects_bad_input():
    with pytest.raises(ValueError):
        ConvexPolygon(np.array([(0, 0), (1, 0)]))
    with pytest.raises(ValueError):
        ConvexPolygon(np.array(SQUARE[::-1]))
    with pytest.raises(ValueError):
        ConvexPolygon(np.array(L_SHAPE))


def test_convex_polygon_halfplanes_match_vertices():
    poly = ConvexPolygon(np.array(SQUARE, dtype=float))
    assert poly.area == pytest.approx(1.0)
    assert np.allclose(poly.centroid, 0.0)
    assert poly.contains((0.5, 0.0))
    assert not poly.contains((0.51, 0.0))
    assert poly.max_violation([(1.0, 0.0)])[0] == pytest.approx(0.5)


def test_from_points_accepts_clockwise():
    poly = ConvexPolygon.from_points(SQUARE[::-1])
    assert poly.area > 0


def test_wrap_angle_range():
    for a in np.linspace(-10, 10, 41):
        w = wrap_angle(a)
        assert -math.pi <= w < math.pi + 1e-12
        assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-12)


def test_clean_outline_drops_collinear_and_orients():
    out = clean_outline([(0, 0), (0, 1), (0.5, 1), (1, 1), (1, 0)])
    assert len(out) == 4
    assert Polygon(out).exterior.is_ccw


def test_is_simple_detects_bowtie():
    assert is_simple(SQUARE)
    assert not is_simple([(0, 0), (1, 1), (1, 0), (0, 1)])


@pytest.mark.parametrize("outline", [SQUARE, L_SHAPE, RECT])
def test_decomposition_covers_outline(outline):
    obj = decompose(outline)
    ref = Polygon(outline)
    pieces = [Polygon(p.vertices) for p in obj.pieces]
    assert sum(p.area for p in pieces) == pytest.approx(ref.area)
    from shapely.ops import unary_union
    assert unary_union(pieces).symmetric_difference(ref).area < 1e-9


def test_l_shape_needs_two_pieces_and_one_concave_vertex():
    obj = decompose(L_SHAPE)
    assert obj.n_pieces == 2
    assert len(obj.concave_vertices) == 1
    assert np.allclose(obj.concave_vertices[0].point, (1, 1))
    assert obj.piece_adjacency[0, 1] and obj.piece_adjacency[1, 0]


def test_triangulation_without_merge_gives_triangles():
    obj = triangulate(L_SHAPE)
    assert obj.n_pieces == len(L_SHAPE) - 2
    assert all(len(p) == 3 for p in obj.pieces)


def test_random_suite_decomposes_exactly():
    for obj in random_polygon_suite(3, 8, (5, 10)):
        ref = Polygon(obj.outline)
        assert ref.is_valid
        assert sum(p.area for p in obj.pieces) == pytest.approx(ref.area)


def test_opposite_facets_of_rectangle():
    obj = decompose(RECT)
    pairs = opposite_facet_pairs(obj)
    assert len(pairs) == 2
    for i, j in pairs:
        assert np.dot(obj.boundary_facets[i].normal, obj.boundary_facets[j].normal) == pytest.approx(-1)


def test_positive_spanning():
    e = np.eye(2)
    assert positively_spans([e[0], e[1], -e[0] - e[1]])
    assert not positively_spans([e[0], e[1], (e[0] + e[1]) / 2])
    assert not positively_spans([e[0], -e[0]])


def test_limit_patterns_for_square():
    obj = decompose(SQUARE)
    two = limit_assignment_set(obj, 2)
    assert len(two) == 2
    four = minimal_patterns(limit_assignment_set(obj, 4))
    assert four
    assert all(len(p.features) in (3, 4) for p in four)
    with pytest.raises(ValueError):
        limit_assignment_set(obj, 1)


def test_point_in_polygon_boundary_counts_inside():
    assert point_in_polygon((0.5, 0.0), SQUARE)
    assert point_in_polygon((0.0, 0.0), SQUARE)
    assert not point_in_polygon((0.6, 0.0), SQUARE)


def test_strict_inside_excludes_boundary():
    pts = np.array([(0.0, 0.0), (0.5, 0.0), (0.7, 0.0)])
    assert points_strictly_inside(pts, np.array(SQUARE, dtype=float)).tolist() == [True, False, False]


@settings(max_examples=200, deadline=None)
@given(st.floats(-2, 3), st.floats(-2, 3))
def test_point_location_agrees_with_shapely(x, y):
    ref = Polygon(L_SHAPE)
    pt = Point(x, y)
    if ref.exterior.distance(pt) < 1e-6:
        return
    expected = ref.contains(pt)
    assert point_in_polygon((x, y), L_SHAPE) == expected
    assert (winding_number((x, y), L_SHAPE) != 0) == expected
    assert bool(points_strictly_inside(np.array([[x, y]]), np.array(L_SHAPE, dtype=float))[0]) == expected


def test_pose_fields():
    q = Pose(1.0, 2.0, 0.5)
    assert (q.q_x, q.q_y, q.q_theta) == (1.0, 2.0, 0.5)
