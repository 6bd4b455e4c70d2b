"""Problem and certificate files.

Both are JSON documents carrying a ``schema`` tag. Errors raise ``FileFormatError``
with the line number of the offending value when it can be located.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Any

import numpy as np

from .cage import CageCertificate, CageOptions, CageProblem
from .cspace import Box, make_slice_plan
from .geometry import DecomposedObject, Pose, decompose
from .scenarios import ScenarioConstraint

PROBLEM_SCHEMA = "cagemip.problem/1"
CERTIFICATE_SCHEMA = "cagemip.certificate/1"


class FileFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        where = f"{path or '<input>'}:{line}: " if line else f"{path or '<input>'}: "
        super().__init__(where + message)
        self.line = line


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _load(text: str, schema: str, path: str | None) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"invalid JSON: {exc.msg}", exc.lineno, path) from None
    if not isinstance(doc, dict):
        raise FileFormatError("top level must be an object", 1, path)
    if doc.get("schema") != schema:
        raise FileFormatError(f"expected schema {schema!r}, found {doc.get('schema')!r}",
                              _line_of(text, "schema") or 1, path)
    return doc


def _need(doc: dict, key: str, text: str, path: str | None):
    if key not in doc:
        raise FileFormatError(f"missing required field {key!r}", None, path)
    return doc[key]


# -- problems ----------------------------------------------------------------------

def problem_from_dict(doc: dict, text: str = "", path: str | None = None) -> CageProblem:
    def fail(msg, key):
        raise FileFormatError(msg, _line_of(text, key), path)

    outline = _need(doc, "outline", text, path)
    try:
        obj = decompose(np.asarray(outline, dtype=float))
    except (ValueError, TypeError) as exc:
        fail(f"bad outline: {exc}", "outline")
    q = _need(doc, "q", text, path)
    if not (isinstance(q, list) and len(q) == 3):
        fail("q must be [x, y, theta_degrees]", "q")
    pose = Pose(float(q[0]), float(q[1]), math.radians(float(q[2])))
    n = _need(doc, "fingers", text, path)
    if not isinstance(n, int) or n < 2:
        fail("fingers must be an integer >= 2", "fingers")
    sl = doc.get("slices", {})
    try:
        plan = make_slice_plan(pose, int(sl.get("count", 9)), math.radians(sl.get("lo", -90.0)),
                               math.radians(sl.get("hi", 90.0)), sl.get("mode", "uniform"), obj,
                               bool(sl.get("periodic", False)))
    except ValueError as exc:
        fail(f"bad slice plan: {exc}", "slices")
    scenarios = []
    fixed = {int(k): tuple(map(float, v)) for k, v in doc.get("fixed_fingers", {}).items()}
    for sc in doc.get("scenarios", []):
        try:
            s = ScenarioConstraint(sc["kind"], {k: v for k, v in sc.items() if k != "kind"})
        except (KeyError, ValueError, TypeError) as exc:
            fail(f"bad scenario: {exc}", "scenarios")
        fixed.update(s.fixed_fingers())
        scenarios.append(s)
    opts = doc.get("options", {})
    try:
        options = CageOptions(margin=float(opts.get("margin", 0.02)), cross_eps=float(opts.get("cross_eps", 1e-3)),
                              box_factor=float(opts.get("box_factor", 4.0)),
                              box=Box(*opts["box"]) if "box" in opts else None,
                              contact_justification=bool(opts.get("contact_justification", True)),
                              closure=bool(opts.get("closure", True)))
        return CageProblem(obj, pose, n, plan, fixed, scenarios, options)
    except (ValueError, TypeError) as exc:
        fail(str(exc), "fingers")


def problem_to_dict(problem: CageProblem) -> dict:
    plan = problem.slice_plan
    o = problem.options
    doc = {
        "schema": PROBLEM_SCHEMA,
        "outline": problem.obj.outline.tolist(),
        "q": [problem.q.q_x, problem.q.q_y, math.degrees(problem.q.q_theta)],
        "fingers": problem.n_fingers,
        "slices": {"count": plan.size, "lo": math.degrees(plan.thetas[0]), "hi": math.degrees(plan.thetas[-1]),
                   "periodic": plan.periodic},
        "fixed_fingers": {str(k): list(v) for k, v in sorted(problem.fixed_fingers.items())},
        "scenarios": [dict(kind=s.kind, **_plain(s.params)) for s in problem.scenarios],
        "options": {"margin": o.margin, "cross_eps": o.cross_eps, "box_factor": o.box_factor,
                    "contact_justification": o.contact_justification, "closure": o.closure},
    }
    if o.box is not None:
        doc["options"]["box"] = [o.box.x0, o.box.y0, o.box.x1, o.box.y1]
    return doc


def load_problem(path) -> CageProblem:
    text = Path(path).read_text()
    return problem_from_dict(_load(text, PROBLEM_SCHEMA, str(path)), text, str(path))


def save_problem(problem: CageProblem, path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(problem), indent=2) + "\n")


# -- certificates ------------------------------------------------------------------

def _plain(x: Any):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


def certificate_to_dict(cert: CageCertificate, obj: DecomposedObject, assignment=None) -> dict:
    """``assignment`` maps binary variable names to values; it is stored so no solver is needed later."""
    return {
        "schema": CERTIFICATE_SCHEMA,
        "outline": obj.outline.tolist(),
        "q": [cert.q.q_x, cert.q.q_y, math.degrees(cert.q.q_theta)],
        "fingers": _plain(cert.fingers),
        "fixed": list(cert.fixed),
        "slices": [math.degrees(t) for t in cert.thetas],
        "caged": list(cert.caged),
        "loop": _plain(cert.loop),
        "contacts": _plain(cert.contacts),
        "witnesses": {str(s): _plain(w) for s, w in sorted(cert.witnesses.items())},
        "complexity": cert.complexity,
        "solver": cert.solver,
        "solve_time": round(cert.solve_time, 3),
        "assignment": dict(sorted((assignment or {}).items())),
    }


def certificate_from_dict(doc: dict, text: str = "", path: str | None = None):
    """Returns (certificate, object, assignment)."""
    try:
        obj = decompose(np.asarray(doc["outline"], dtype=float))
        q = Pose(float(doc["q"][0]), float(doc["q"][1]), math.radians(float(doc["q"][2])))
        fingers = np.asarray(doc["fingers"], dtype=float).reshape(-1, 2)
        thetas = [math.radians(float(t)) for t in doc["slices"]]
        caged = [bool(c) for c in doc["caged"]]
        if len(caged) != len(thetas):
            raise ValueError("caged flags and slices differ in length")
        loop = [[int(v) for v in chain] for chain in doc["loop"]]
        if len(loop) != len(fingers):
            raise ValueError("loop must list one piece chain per finger")
        cert = CageCertificate(q, fingers, [int(k) for k in doc.get("fixed", [])], thetas, caged, loop,
                               {k: [tuple(p) for p in v] for k, v in doc.get("contacts", {}).items()},
                               {int(k): np.asarray(v, dtype=float) for k, v in doc.get("witnesses", {}).items()},
                               int(doc.get("complexity", 0)), str(doc.get("solver", "")),
                               float(doc.get("solve_time", 0.0)))
    except KeyError as exc:
        raise FileFormatError(f"missing required field {exc.args[0]!r}", None, path) from None
    except (ValueError, TypeError, IndexError) as exc:
        key = next((k for k in ("fingers", "slices", "caged", "loop", "outline", "q") if k in str(exc)), "fingers")
        raise FileFormatError(str(exc), _line_of(text, key), path) from None
    return cert, obj, dict(doc.get("assignment", {}))


def save_certificate(cert: CageCertificate, obj: DecomposedObject, path, assignment=None) -> None:
    Path(path).write_text(json.dumps(certificate_to_dict(cert, obj, assignment), indent=2) + "\n")


def load_certificate(path):
    text = Path(path).read_text()
    return certificate_from_dict(_load(text, CERTIFICATE_SCHEMA, str(path)), text, str(path))


def binary_assignment(model, solution) -> dict[str, int]:
    return {v.name: int(round(solution.values[v.index])) for v in model.variables if v.kind != "C"}


__all__ = ["FileFormatError", "PROBLEM_SCHEMA", "CERTIFICATE_SCHEMA", "problem_from_dict", "problem_to_dict",
           "load_problem", "save_problem", "certificate_to_dict", "certificate_from_dict", "save_certificate",
           "load_certificate", "binary_assignment"]
