import math

import numpy as np
import pytest
from shapely.geometry import Point, Polygon, box as shapely_box
from shapely.ops import unary_union

from cagemip.cspace import (Box, build_slice_geometry, default_box, make_slice_plan, partition_free_workspace,
                            posed_outline)
from cagemip.geometry import Pose, decompose

L_SHAPE = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]


def test_c_obstacle_matches_posed_object():
    obj = decompose(np.array(L_SHAPE, dtype=float) - 1.0)
    rng = np.random.default_rng(0)
    finger = np.array([0.3, -0.2])
    for theta in (-1.0, 0.0, 0.4, 2.5):
        geom = build_slice_geometry(obj, theta)
        for xy in rng.uniform(-2.5, 2.5, size=(200, 2)):
            body = Polygon(posed_outline(obj, Pose(xy[0], xy[1], theta)))
            if body.exterior.distance(Point(finger)) < 1e-6:
                continue
            in_obstacle = any(s.contains(xy - finger, tol=0.0) for s in geom.obstacle_shapes)
            assert in_obstacle == body.contains(Point(finger))


def test_slice_geometry_copies_topology():
    obj = decompose(L_SHAPE)
    geom = build_slice_geometry(obj, 0.3)
    assert len(geom.obstacle_shapes) == obj.n_pieces
    assert (geom.intra_adjacency == obj.piece_adjacency).all()
    for key, off in geom.witness_offsets.items():
        assert np.linalg.norm(off) == pytest.approx(np.linalg.norm(obj.adjacency_points[key]))


def test_free_partition_tiles_box_minus_object():
    obj = decompose(L_SHAPE)
    q = Pose(1.0, 1.0, 0.3)
    b = default_box(obj, q)
    part = partition_free_workspace(obj, q, b)
    body = Polygon(posed_outline(obj, q))
    free = shapely_box(b.x0, b.y0, b.x1, b.y1).difference(body)
    cells = [Polygon(r.vertices) for r in part.regions]
    assert sum(c.area for c in cells) == pytest.approx(free.area, rel=1e-9)
    assert unary_union(cells).symmetric_difference(free).area < 1e-9
    assert all(c.intersection(body).area < 1e-9 for c in cells)


def test_partition_rejects_small_box():
    obj = decompose(L_SHAPE)
    with pytest.raises(ValueError):
        partition_free_workspace(obj, Pose(1, 1, 0), Box(0, 0, 1, 1))


def test_default_box_size():
    obj = decompose([(0, 0), (1, 0), (1, 1), (0, 1)])
    b = default_box(obj, Pose(0, 0, 0))
    assert b.x1 - b.x0 == pytest.approx(4 * math.sqrt(2))
    assert b.contains((0, 0)) and not b.contains((10, 0))


def test_uniform_plan_places_q():
    q = Pose(0, 0, 0.0)
    plan = make_slice_plan(q, 9)
    assert plan.size == 9
    assert plan.thetas[plan.index_of_q] == 0.0
    assert plan.spacing(0) == pytest.approx(math.pi / 8)
    assert plan.adjacent_pairs()[-1] == (7, 8)
    with pytest.raises(IndexError):
        plan.spacing(8)


def test_periodic_plan_wraps():
    plan = make_slice_plan(Pose(0, 0, 0.1), 8, lo=0.0, periodic=True)
    assert plan.periodic
    assert (7, 0) in plan.adjacent_pairs()
    assert sum(plan.spacing(s) for s in range(plan.size)) == pytest.approx(2 * math.pi)
    assert 0.1 in plan.thetas


def test_facet_aware_plan_is_sorted():
    obj = decompose(L_SHAPE)
    plan = make_slice_plan(Pose(0, 0, 0.0), 9, mode="facet-aware", obj=obj)
    assert plan.size == 9
    assert np.all(np.diff(plan.thetas) > 0)


@pytest.mark.parametrize("kwargs", [dict(count=2), dict(count=9, mode="bogus"), dict(count=9, lo=0.5)])
def test_plan_errors(kwargs):
    with pytest.raises(ValueError):
        make_slice_plan(Pose(0, 0, 0.0), **kwargs)
