import math

import numpy as np
import pytest
from shapely.geometry import Polygon

from cagemip.cage import CageOptions, CageProblem, assemble_mip1, synthesize
from cagemip.cspace import make_slice_plan
from cagemip.geometry import Pose, decompose
from cagemip.milp import emit_model
from cagemip.scenarios import ScenarioConstraint, make_wall, random_polygon_suite, wall_above
from cagemip.verifier import verify_cage

SQUARE = decompose([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])
Q = Pose(0.0, 0.0, 0.0)


def gripper(pair, opening):
    return ScenarioConstraint("gripper-pair", {"pair": pair, "opening": opening})


def square_problem(scenarios, **kw):
    return CageProblem(SQUARE, Q, 4, make_slice_plan(Q, 9), scenarios=scenarios, **kw)


def test_wide_gripper_squeezes_the_square():
    res = synthesize(square_problem([gripper((0, 2), (0.4, 1.2))]), "highs", 120)
    assert res.status == "feasible"
    f = res.certificate.fingers
    assert f[0, 1] == pytest.approx(f[2, 1], abs=1e-6)
    assert 0.4 - 1e-6 <= f[2, 0] - f[0, 0] <= 1.2 + 1e-6
    assert verify_cage(SQUARE, Q, f, theta_step=math.radians(2)).caged


def test_narrow_gripper_cannot_straddle_the_square():
    res = synthesize(square_problem([gripper((0, 2), (0.1, 0.3))]), "highs", 120)
    assert res.status == "infeasible"
    assert res.certificate is None


def test_two_grippers_emit_both_level_rows():
    prob = square_problem([gripper((0, 1), (0.4, 1.2)), gripper((2, 3), (0.4, 1.2))])
    model, _ = assemble_mip1(prob)
    names = [c.name for c in model.constraints]
    assert "gripper[0,1].level" in names and "gripper[2,3].level" in names
    text = emit_model(model)
    eq_rows = [ln for ln in text.splitlines() if ln.startswith(" c") and " = 0" in ln]
    assert len(eq_rows) >= 2


@pytest.mark.parametrize("params", [{"pair": (1, 1), "opening": (0.1, 0.2)},
                                    {"pair": (0, 1), "opening": (0.5, 0.2)}])
def test_gripper_validation(params):
    with pytest.raises(ValueError):
        ScenarioConstraint("gripper-pair", params)


def test_unknown_kind():
    with pytest.raises(ValueError):
        ScenarioConstraint("teleport", {})


def test_make_wall_spacing():
    pts = np.array(make_wall(((0.0, 1.0), (2.0, 1.0)), 5))
    assert np.allclose(np.diff(pts[:, 0]), 0.5)
    assert make_wall(((0.0, 0.0), (2.0, 4.0)), 1) == [(1.0, 2.0)]
    with pytest.raises(ValueError):
        make_wall(((0, 0), (1, 0)), 0)


def test_wall_above_geometry():
    rect = decompose([(-1, -0.5), (1, -0.5), (1, 0.5), (-1, 0.5)])
    wall = wall_above(rect, count=5, span_factor=2.0, clearance=0.0, first=2)
    pts = wall.fixed_fingers()
    assert sorted(pts) == [2, 3, 4, 5, 6]
    xs = [pts[k][0] for k in sorted(pts)]
    assert xs[0] == pytest.approx(-2.0) and xs[-1] == pytest.approx(2.0)
    assert all(pts[k][1] == pytest.approx(0.5) for k in pts)


def test_wall_must_match_fixed_fingers():
    wall = wall_above(SQUARE, count=3, first=0)
    prob = square_problem([wall])
    with pytest.raises(ValueError):
        assemble_mip1(prob)


def test_workspace_box_rows():
    box = ScenarioConstraint("finger-workspace-box", {"fingers": [0, 1], "box": (-1, -1, 0, 0)})
    model, _ = assemble_mip1(square_problem([box], options=CageOptions(caged_range=(4, 4))))
    assert sum(c.name.startswith("box[") for c in model.constraints) == 8
    with pytest.raises(ValueError):
        ScenarioConstraint("finger-workspace-box", {"fingers": [0], "box": (1, 0, 0, 1)})


def test_linear_cost_sets_objective():
    cost = ScenarioConstraint("linear-cost", {"finger_weights": {0: (1.0, 0.0)}, "caged_weight": -1.0})
    model, vars = assemble_mip1(square_problem([cost]))
    assert model.objective is not None
    assert model.objective.terms[vars.p[0][0].index] == 1.0
    assert model.objective.terms[vars.theta[0].index] == -1.0


def test_random_suite_is_reproducible():
    a = random_polygon_suite(7, 20)
    b = random_polygon_suite(7, 20)
    assert len(a) == 20
    for x, y in zip(a, b):
        assert np.array_equal(x.outline, y.outline)
    c = random_polygon_suite(8, 20)
    assert any(not np.array_equal(x.outline, y.outline) for x, y in zip(a, c))


def test_random_suite_vertex_range_and_validity():
    tris = random_polygon_suite(1, 5, (3, 3))
    assert all(len(o.outline) == 3 and o.n_pieces == 1 for o in tris)
    for obj in random_polygon_suite(2, 10, (5, 10)):
        assert 5 <= len(obj.outline) <= 10
        assert Polygon(obj.outline).is_valid
        assert sum(p.area for p in obj.pieces) == pytest.approx(obj.area)
    with pytest.raises(ValueError):
        random_polygon_suite(1, 0)
    with pytest.raises(ValueError):
        random_polygon_suite(1, 3, (2, 5))
