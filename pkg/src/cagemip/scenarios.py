"""Task constraints layered on the caging program, and instance generators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .geometry import DecomposedObject, decompose, is_simple
from .milp import Expr, MilpModel, lin_sum

KINDS = ("gripper-pair", "fixed-finger-wall", "finger-workspace-box", "linear-cost")


@dataclass
class ScenarioConstraint:
    """One task constraint. ``params`` depends on ``kind``:

    * gripper-pair: ``pair`` (a, b), ``opening`` (min, max), optional ``axis`` angle in radians
    * fixed-finger-wall: ``span`` ((x0, y0), (x1, y1)), ``count``, ``first`` finger index
    * finger-workspace-box: ``fingers`` list, ``box`` (x0, y0, x1, y1)
    * linear-cost: ``finger_weights`` {finger: (wx, wy)}, ``caged_weight`` (reward per caged slice)
    """

    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        p = self.params
        if self.kind == "gripper-pair":
            a, b = p["pair"]
            lo, hi = p["opening"]
            if a == b:
                raise ValueError("gripper pair needs two distinct fingers")
            if lo > hi:
                raise ValueError(f"gripper opening min {lo} exceeds max {hi}")
        elif self.kind == "fixed-finger-wall":
            if int(p["count"]) < 1:
                raise ValueError("wall needs at least one finger")
        elif self.kind == "finger-workspace-box":
            x0, y0, x1, y1 = p["box"]
            if x0 > x1 or y0 > y1:
                raise ValueError("empty finger box")

    def fixed_fingers(self) -> dict[int, tuple[float, float]]:
        if self.kind != "fixed-finger-wall":
            return {}
        first = int(self.params.get("first", 0))
        pts = make_wall(self.params["span"], int(self.params["count"]))
        return {first + k: pt for k, pt in enumerate(pts)}

    def apply(self, model: MilpModel, vars, problem) -> None:
        p = self.params
        if self.kind == "gripper-pair":
            apply_gripper_kinematics(model, vars, tuple(p["pair"]), tuple(p["opening"]),
                                     float(p.get("axis", 0.0)))
        elif self.kind == "fixed-finger-wall":
            for k, pt in self.fixed_fingers().items():
                if problem.fixed_fingers.get(k) is None or not np.allclose(problem.fixed_fingers[k], pt):
                    raise ValueError(f"wall finger {k} is not fixed at {pt}")
        elif self.kind == "finger-workspace-box":
            x0, y0, x1, y1 = p["box"]
            for n in p["fingers"]:
                px, py = vars.p[n]
                model.add_constraint(px, ">=", x0, f"box[{n}].x0")
                model.add_constraint(px, "<=", x1, f"box[{n}].x1")
                model.add_constraint(py, ">=", y0, f"box[{n}].y0")
                model.add_constraint(py, "<=", y1, f"box[{n}].y1")
        else:
            obj = Expr()
            for n, (wx, wy) in p.get("finger_weights", {}).items():
                px, py = vars.p[int(n)]
                obj = obj + Expr.of(px) * wx + Expr.of(py) * wy
            reward = float(p.get("caged_weight", 0.0))
            if reward:
                obj = obj + lin_sum(vars.theta) * reward
            model.objective = obj if model.objective is None else model.objective + obj


def apply_gripper_kinematics(model: MilpModel, vars, pair: tuple[int, int], opening: tuple[float, float],
                             axis: float = 0.0) -> None:
    """Two fingers of one parallel gripper: level along the axis normal, opening within bounds."""
    a, b = pair
    lo, hi = opening
    if a == b:
        raise ValueError("gripper pair needs two distinct fingers")
    if lo > hi:
        raise ValueError(f"gripper opening min {lo} exceeds max {hi}")
    u = np.array([math.cos(axis), math.sin(axis)])
    w = np.array([-u[1], u[0]])
    d = (Expr.of(vars.p[b][0]) - vars.p[a][0], Expr.of(vars.p[b][1]) - vars.p[a][1])
    along = d[0] * u[0] + d[1] * u[1]
    across = d[0] * w[0] + d[1] * w[1]
    tag = f"gripper[{a},{b}]"
    model.add_constraint(across, "==", 0.0, tag + ".level")
    model.add_constraint(along, ">=", lo, tag + ".min")
    model.add_constraint(along, "<=", hi, tag + ".max")


def make_wall(span, count: int) -> list[tuple[float, float]]:
    """``count`` evenly spaced points from one end of ``span`` to the other (the midpoint for one)."""
    if count < 1:
        raise ValueError("wall needs at least one finger")
    a = np.asarray(span[0], dtype=float)
    b = np.asarray(span[1], dtype=float)
    if count == 1:
        return [tuple(float(v) for v in (a + b) / 2)]
    return [tuple(float(v) for v in a + (b - a) * k / (count - 1)) for k in range(count)]


def wall_above(obj: DecomposedObject, count: int = 5, span_factor: float = 2.0, clearance: float = 0.05,
               first: int = 0) -> ScenarioConstraint:
    """Wall segment centred over the object, ``span_factor`` times its width, ``clearance`` diameters up."""
    xs, ys = obj.outline[:, 0], obj.outline[:, 1]
    width = float(xs.max() - xs.min())
    cx = float(xs.max() + xs.min()) / 2
    y = float(ys.max()) + clearance * obj.diameter
    half = span_factor * width / 2
    return ScenarioConstraint("fixed-finger-wall", {"span": ((cx - half, y), (cx + half, y)), "count": count,
                                                    "first": first})


def random_star_polygon(rng: np.random.Generator, n_vertices: int, r_range=(0.5, 1.0)) -> np.ndarray:
    """Simple polygon star-shaped around the origin: sorted random angles, random radii."""
    while True:
        ang = np.sort(rng.uniform(0.0, 2 * math.pi, n_vertices))
        gaps = np.diff(np.append(ang, ang[0] + 2 * math.pi))
        if gaps.max() >= 0.9 * math.pi or gaps.min() < 0.1:
            continue
        rad = rng.uniform(*r_range, n_vertices)
        pts = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
        if is_simple(pts):
            return pts


def random_polygon_suite(seed: int, count: int, vertex_range=(5, 10)) -> list[DecomposedObject]:
    if count < 1:
        raise ValueError("count must be at least 1")
    lo, hi = vertex_range
    if not 3 <= lo <= hi:
        raise ValueError("vertex range must satisfy 3 <= min <= max")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(lo, hi + 1))
        try:
            obj = decompose(random_star_polygon(rng, n))
        except ValueError:
            continue
        if len(obj.outline) < lo:
            continue
        out.append(obj)
    return out
