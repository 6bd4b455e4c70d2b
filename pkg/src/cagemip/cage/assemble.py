"""Builds the complete caging program for a problem."""

from __future__ import annotations

from ..milp import MilpModel
from .encoders import (BuildContext, check_fixed_fingers, encode_boundary_variation, encode_closure,
                       encode_enclosing, encode_limit, encode_loop, encode_loop_structure,
                       encode_nonpenetration, make_context)
from .problem import CageProblem, CageVariables


def _declare(model: MilpModel, problem: CageProblem) -> CageVariables:
    box = problem.box
    m = problem.obj.n_pieces
    adj = problem.obj.piece_adjacency
    p = []
    for n in range(problem.n_fingers):
        px = model.add_var(f"p[{n}].x", box.x0, box.x1)
        py = model.add_var(f"p[{n}].y", box.y0, box.y1)
        if n in problem.fixed_fingers:
            fx, fy = problem.fixed_fingers[n]
            if not box.contains((fx, fy)):
                raise ValueError(f"fixed finger {n} lies outside the workspace box")
            model.fix(px, fx)
            model.fix(py, fy)
        p.append((px, py))
    H = [{(i, j): model.add_binary(f"H[{n}][{i},{j}]") for i in range(m) for j in range(m)}
         for n in range(problem.n_fingers)]
    G = [{(i, k): model.add_binary(f"G[{n}][{i},{k}]") for i in range(m) for k in range(m) if i != k and adj[i, k]}
         for n in range(problem.n_fingers)]
    theta = [model.add_binary(f"Theta[{s}]") for s in range(problem.slice_plan.size)]
    if problem.options.caged_range is not None:
        lo, hi = problem.options.caged_range
        if not lo <= problem.slice_plan.index_of_q <= hi:
            raise ValueError("caged range must contain the q slice")
        for s, v in enumerate(theta):
            model.fix(v, 0.0 if lo <= s <= hi else 1.0)
    return CageVariables(p, H, G, theta)


def assemble_mip1(problem: CageProblem, name: str = "cage") -> tuple[MilpModel, CageVariables]:
    """Return the model and variable handles; any feasible point encodes a cage certificate."""
    blocked = check_fixed_fingers(problem)
    model = MilpModel(name)
    vars = _declare(model, problem)
    for s in blocked:
        # the object cannot sit at q_xy on this slice, so the slice is not caged
        model.add_constraint(vars.theta[s], "==", 1.0, f"fixed-penetration[{s}]")
    ctx = make_context(problem)
    plan = problem.slice_plan
    encode_loop_structure(model, vars, ctx)
    encode_limit(model, vars, ctx)
    for s in range(plan.size):
        encode_loop(model, vars, ctx, s)
    encode_enclosing(model, vars, ctx)
    for s in range(plan.size):
        if not plan.periodic and s in (0, plan.size - 1):
            continue
        encode_nonpenetration(model, vars, ctx, s)
    encode_closure(model, vars, ctx)
    for s, s_next in plan.adjacent_pairs():
        encode_boundary_variation(model, vars, ctx, s, s_next)
    for sc in problem.scenarios:
        sc.apply(model, vars, problem)
    vars.context = ctx
    return model, vars


__all__ = ["assemble_mip1", "BuildContext"]
