import math

import numpy as np
import pytest
from shapely.geometry import Point, Polygon

from cagemip.cspace import posed_outline
from cagemip.geometry import Pose, decompose
from cagemip.verifier import GridCSpace, verify_cage

SQUARE = decompose([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])
Q = Pose(0.0, 0.0, 0.0)


def cross(d):
    return [(d, 0.0), (0.0, d), (-d, 0.0), (0.0, -d)]


@pytest.mark.parametrize("d", [0.55, 0.65, 0.69])
def test_square_in_four_fingers_matches_analytic_extent(d):
    # the centred square turns until an edge reaches a finger: d cos(phi) = 1/2
    rep = verify_cage(SQUARE, Q, cross(d))
    assert rep.caged
    limit = math.acos(0.5 / d)
    lo, hi = rep.theta_extent
    assert hi == pytest.approx(-lo)
    assert limit - 2 * rep.theta_step <= hi <= limit + 1e-9


def test_wide_fingers_let_the_square_out():
    # past d = sqrt(2)/2 the square turns 45 degrees and slips between two fingers
    rep = verify_cage(SQUARE, Q, cross(0.75))
    assert not rep.caged
    assert rep.verdict == "escapes"


def test_missing_finger_escapes():
    rep = verify_cage(SQUARE, Q, cross(0.55)[:3])
    assert rep.verdict == "escapes"


def test_finger_inside_object_blocks_q():
    rep = verify_cage(SQUARE, Q, [(0.0, 0.0)] + cross(0.55)[1:])
    assert rep.verdict == "q-blocked"
    assert not rep.q_free and not rep.caged


def test_report_fields_and_brackets():
    rep = verify_cage(SQUARE, Q, cross(0.6), resolution=SQUARE.diameter / 50, theta_step=math.radians(3))
    assert rep.resolution == pytest.approx(SQUARE.diameter / 50)
    assert rep.theta_step == pytest.approx(math.radians(3))
    assert rep.n_layers == 120
    assert rep.component_size > 1
    assert rep.brackets(-0.2, 0.2)
    assert not rep.brackets(-1.0, 1.0)
    assert rep.within(-0.5, 0.5, 0.1)
    assert not rep.full_rotation


def test_grid_layer_matches_direct_penetration_test():
    fingers = np.array(cross(0.6))
    grid = GridCSpace(SQUARE.outline, Q, fingers, resolution=0.1, theta_step=math.radians(30),
                      half_extent=1.5, tol=1e-9)
    k = 1
    theta = grid.layer_theta(k)
    layer = grid.blocked(k)
    for i, x in enumerate(grid.xs):
        for j, y in enumerate(grid.ys):
            body = Polygon(posed_outline(SQUARE, Pose(x, y, theta)))
            inside = any(body.contains(Point(f)) and body.exterior.distance(Point(f)) > 1e-9 for f in fingers)
            assert layer[i, j] == inside
