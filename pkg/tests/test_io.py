import json
import math

import numpy as np
import pytest

from cagemip.cage import CageProblem, synthesize
from cagemip.cspace import make_slice_plan
from cagemip.geometry import Pose, decompose
from cagemip.io import (FileFormatError, binary_assignment, load_certificate, load_problem, problem_from_dict,
                        problem_to_dict, save_certificate, save_problem)
from cagemip.scenarios import ScenarioConstraint

SQUARE = [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)]
Q = Pose(0.0, 0.0, 0.0)


def _problem(**kw):
    return CageProblem(decompose(SQUARE), Q, 4, make_slice_plan(Q, 9), **kw)


def test_problem_round_trip(tmp_path):
    grip = ScenarioConstraint("gripper-pair", {"pair": (0, 2), "opening": (0.4, 1.2)})
    prob = _problem(scenarios=[grip])
    path = tmp_path / "p.problem"
    save_problem(prob, path)
    back = load_problem(path)
    assert np.allclose(back.obj.outline, prob.obj.outline)
    assert back.n_fingers == 4
    assert np.allclose(back.slice_plan.thetas, prob.slice_plan.thetas)
    assert [s.kind for s in back.scenarios] == ["gripper-pair"]
    assert problem_to_dict(back) == problem_to_dict(prob)


def test_saved_problem_is_stable(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    save_problem(_problem(), a)
    save_problem(load_problem(a), b)
    assert a.read_bytes() == b.read_bytes()


def _write(tmp_path, text):
    path = tmp_path / "bad.problem"
    path.write_text(text)
    return path


def test_invalid_json_reports_line(tmp_path):
    path = _write(tmp_path, '{\n  "schema": "cagemip.problem/1",\n  "fingers": 4,,\n}\n')
    with pytest.raises(FileFormatError) as err:
        load_problem(path)
    assert err.value.line == 3
    assert str(err.value).startswith(f"{path}:3:")


def test_wrong_schema(tmp_path):
    path = _write(tmp_path, '{\n  "schema": "something/else"\n}\n')
    with pytest.raises(FileFormatError, match="expected schema"):
        load_problem(path)


@pytest.mark.parametrize("field, value, line", [
    ("fingers", 1, 5),
    ("q", [0, 0], 4),
    ("outline", [[0, 0], [1, 0]], 3),
])
def test_bad_field_points_at_its_line(tmp_path, field, value, line):
    doc = {"schema": "cagemip.problem/1", "outline": SQUARE, "q": [0, 0, 0], "fingers": 4}
    doc[field] = value
    text = "{\n" + ",\n".join(f'  "{k}": {json.dumps(v)}' for k, v in doc.items()) + "\n}\n"
    with pytest.raises(FileFormatError) as err:
        load_problem(_write(tmp_path, text))
    assert err.value.line == line


def test_missing_field():
    with pytest.raises(FileFormatError, match="missing required field 'fingers'"):
        problem_from_dict({"schema": "cagemip.problem/1", "outline": SQUARE, "q": [0, 0, 0]})


def test_certificate_round_trip(tmp_path):
    prob = _problem()
    res = synthesize(prob, "highs", 120)
    assert res.status == "feasible"
    path = tmp_path / "c.cert"
    save_certificate(res.certificate, prob.obj, path, binary_assignment(res.model, res.solution))
    cert, obj, assignment = load_certificate(path)
    assert np.allclose(cert.fingers, res.certificate.fingers)
    assert cert.caged == res.certificate.caged
    assert cert.loop == res.certificate.loop
    assert np.allclose(cert.thetas, res.certificate.thetas)
    assert math.isclose(cert.q.q_theta, 0.0)
    assert np.allclose(obj.outline, prob.obj.outline)
    assert set(assignment.values()) <= {0, 1}
    assert len(assignment) == sum(v.kind != "C" for v in res.model.variables)


def test_certificate_with_mismatched_lengths(tmp_path):
    doc = {"schema": "cagemip.certificate/1", "outline": SQUARE, "q": [0, 0, 0], "fingers": [[1, 0], [0, 1]],
           "slices": [-10, 0, 10], "caged": [False, True], "loop": [[0], [0]]}
    path = tmp_path / "c.cert"
    path.write_text(json.dumps(doc, indent=2))
    with pytest.raises(FileFormatError, match="differ in length"):
        load_certificate(path)
