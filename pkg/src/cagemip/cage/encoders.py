"""Constraint encoders for the caging program.

Frames: a finger ``p`` and a C-space point ``c`` (object translation) satisfy
``c in p + S_i(theta)`` with ``S_i(theta) = -R(theta) piece_i``; the encoders
only ever produce halfplane rows that are linear in ``(c, p)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ..cspace import FreeWorkspacePartition, SliceGeometry, build_slice_geometry, partition_free_workspace
from ..geometry import (ConcaveVertex, ConvexPolygon, Pose, minimal_patterns, limit_assignment_set,
                        points_strictly_inside, rotation)
from ..milp import Expr, MilpModel, add_implication, add_implied_equality, add_xor_parity, lin_sum
from .problem import CageProblem, CageVariables

ROT_MINUS_90 = rotation(-math.pi / 2)


@dataclass
class BuildContext:
    problem: CageProblem
    geoms: list[SliceGeometry]
    partitions: dict[int, FreeWorkspacePartition] = field(default_factory=dict)
    cspace_bounds: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    object_bounds: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    @property
    def plan(self):
        return self.problem.slice_plan

    @property
    def q_index(self) -> int:
        return self.plan.index_of_q

    def side(self, s: int) -> str:
        return "up" if s > self.q_index else "down" if s < self.q_index else "q"

    def loop_gate(self, vars: CageVariables, s: int) -> Expr:
        """1 on slices where the loop must exist: caged slices and the closing slices."""
        qi = self.q_index
        if s == qi:
            return Expr(None, 1.0)
        prev = s - 1 if s > qi else s + 1
        return 1 - vars.theta[prev]

    def closing(self, vars: CageVariables, s: int) -> Expr | None:
        """1 on the first uncaged slice of a side."""
        qi = self.q_index
        if s == qi:
            return None
        prev = s - 1 if s > qi else s + 1
        return vars.theta[s] - vars.theta[prev]

    def transition(self, vars: CageVariables, s: int, side: str) -> Expr | None:
        """1 when ``s`` is the last caged slice on ``side``."""
        nxt = s + 1 if side == "up" else s - 1
        if not 0 <= nxt < self.plan.size:
            return None
        if (side == "up" and s < self.q_index) or (side == "down" and s > self.q_index):
            return None
        return vars.theta[nxt] - vars.theta[s]


def never(model: MilpModel, *gates) -> bool:
    """True when some gate is fixed at zero by the variable bounds."""
    return any(model.bounds_of(g)[1] < 0.5 for g in gates)


def make_context(problem: CageProblem) -> BuildContext:
    obj = problem.obj
    geoms = [build_slice_geometry(obj, t) for t in problem.slice_plan.thetas]
    box = problem.box
    reach = float(np.linalg.norm(obj.outline, axis=1).max()) + 1e-6
    cs = (box.x0 - reach, box.y0 - reach, box.x1 + reach, box.y1 + reach)
    ob = (float(obj.outline[:, 0].min()), float(obj.outline[:, 1].min()),
          float(obj.outline[:, 0].max()), float(obj.outline[:, 1].max()))
    return BuildContext(problem, geoms, cspace_bounds=cs, object_bounds=ob)


def add_point(model: MilpModel, name: str, bounds) -> tuple:
    x0, y0, x1, y1 = bounds
    return model.add_var(name + ".x", x0, x1), model.add_var(name + ".y", y0, y1)


def add_in_shape(model: MilpModel, gate, point, base, shape: ConvexPolygon, shrink: np.ndarray,
                 name: str) -> None:
    """``gate => point - base`` lies in ``shape`` pulled in by ``shrink`` per edge."""
    px, py = point
    bx, by = base if base is not None else (0.0, 0.0)
    for k in range(len(shape)):
        a = shape.normals[k]
        lhs = Expr.of(px) * a[0] + Expr.of(py) * a[1] - Expr.of(bx) * a[0] - Expr.of(by) * a[1]
        add_implication(model, gate, lhs, shape.offsets[k] - shrink[k], f"{name}.h{k}")


def _shrink(shape: ConvexPolygon, margin: float, mask: np.ndarray | None = None) -> np.ndarray:
    if mask is None:
        return np.full(len(shape), margin)
    return np.where(mask, margin, 0.0)


def _affine(point, matrix: np.ndarray, offset=(0.0, 0.0)):
    """Expressions for ``matrix @ point + offset``; point entries may be Vars or Exprs."""
    x, y = Expr.of(point[0]), Expr.of(point[1])
    return (x * matrix[0, 0] + y * matrix[0, 1] + offset[0],
            x * matrix[1, 0] + y * matrix[1, 1] + offset[1])


# -- loop existence ----------------------------------------------------------------

def encode_loop_structure(model: MilpModel, vars: CageVariables, ctx: BuildContext) -> None:
    """Slice-independent part: one edge per finger pair, in/out balance inside each C-obstacle."""
    n_f = vars.n_fingers
    m = ctx.problem.obj.n_pieces
    adjacency = ctx.problem.obj.piece_adjacency
    tree = int(adjacency.sum()) // 2 == m - 1
    for n in range(n_f):
        model.add_constraint(lin_sum(vars.H[n].values()), "==", 1.0, f"H[{n}].one")
        order = None
        if not tree:
            order = [model.add_var(f"ord[{n},{i}]", 0.0, float(m - 1)) for i in range(m)]
        for piece in range(m):
            inbound = vars.entry_indicator(n, piece) + lin_sum(v for (_, k), v in vars.G[n].items() if k == piece)
            outbound = vars.exit_indicator(n, piece) + lin_sum(v for (k, _), v in vars.G[n].items() if k == piece)
            model.add_constraint(inbound - outbound, "==", 0.0, f"flow[{n},{piece}]")
            model.add_constraint(inbound, "<=", 1.0, f"indeg[{n},{piece}]")
        for (i, k), g in vars.G[n].items():
            if i < k:
                model.add_constraint(g + vars.G[n][(k, i)], "<=", 1.0, f"G[{n}].back[{i},{k}]")
            if order is not None:
                model.add_constraint(order[k] - order[i] - m * g, ">=", 1.0 - m, f"G[{n}].mtz[{i},{k}]")
    prob = ctx.problem
    if prob.options.symmetry_breaking and not prob.fixed_fingers and not prob.scenarios:
        # every cyclic relabelling of a cage is a cage: let finger 0 be a lowest one
        for n in range(1, n_f):
            model.add_constraint(vars.p[0][1] - vars.p[n][1], "<=", 0.0, f"sym[{n}]")
    if n_f == 2:
        for (i, j), h in vars.H[0].items():
            model.add_constraint(h + vars.H[1][(j, i)], "<=", 1.0, f"H.twofinger[{i},{j}]")


def encode_loop(model: MilpModel, vars: CageVariables, ctx: BuildContext, s: int) -> None:
    """Witness ``r_n`` in both intersecting pieces of obstacles ``n`` and ``n+1`` on slice ``s``."""
    geom = ctx.geoms[s]
    gate_s = ctx.loop_gate(vars, s)
    if never(model, gate_s):
        return
    margin = ctx.problem.margin
    n_f = vars.n_fingers
    for n in range(n_f):
        r = add_point(model, f"r[{n},{s}]", ctx.cspace_bounds)
        vars.witness[(n, s)] = r
        nxt = (n + 1) % n_f
        for piece, shape in enumerate(geom.obstacle_shapes):
            add_in_shape(model, [vars.exit_indicator(n, piece), gate_s], r, vars.p[n], shape,
                         _shrink(shape, margin), f"link[{n},{s}].out{piece}")
            add_in_shape(model, [vars.entry_indicator(nxt, piece), gate_s], r, vars.p[nxt], shape,
                         _shrink(shape, margin), f"link[{n},{s}].in{piece}")


# -- configuration enclosing ------------------------------------------------------------

def encode_enclosing(model: MilpModel, vars: CageVariables, ctx: BuildContext) -> None:
    """Odd number of upward-ray crossings from ``q`` through the loop polyline on the q slice."""
    s = ctx.q_index
    geom = ctx.geoms[s]
    q = ctx.problem.q
    qx, qy = q.q_x, q.q_y
    eps = ctx.problem.cross_eps
    n_f = vars.n_fingers
    m = ctx.problem.obj.n_pieces
    bits = []
    for n in range(n_f):
        prev = (n - 1) % n_f
        for piece in range(m):
            e = add_point(model, f"e[{n},{piece}]", ctx.cspace_bounds)
            x = add_point(model, f"x[{n},{piece}]", ctx.cspace_bounds)
            vars.entry[(n, piece)] = e
            vars.exit[(n, piece)] = x
            r_in = vars.witness[(prev, s)]
            r_out = vars.witness[(n, s)]
            gate_in = vars.entry_indicator(n, piece)
            gate_out = vars.exit_indicator(n, piece)
            for c in range(2):
                add_implied_equality(model, gate_in, e[c], r_in[c], f"ent[{n},{piece}].{c}")
                add_implied_equality(model, gate_out, x[c], r_out[c], f"ext[{n},{piece}].{c}")
            for (i, k), g in vars.G[n].items():
                w_ik = geom.witness_offsets[(i, k)]
                if k == piece:
                    for c in range(2):
                        add_implied_equality(model, g, e[c], Expr.of(vars.p[n][c]) + w_ik[c],
                                             f"entG[{n},{i},{k}].{c}")
                if i == piece:
                    for c in range(2):
                        add_implied_equality(model, g, x[c], Expr.of(vars.p[n][c]) + w_ik[c],
                                             f"extG[{n},{i},{k}].{c}")
            f = {k: model.add_binary(f"F[{n},{piece}].{k}") for k in ("1a", "1b", "2", "3", "4", "5")}
            vars.F[(n, piece)] = f
            model.add_constraint(lin_sum(f.values()), "==", 1.0, f"F[{n},{piece}].one")
            model.add_constraint(f["5"] + vars.on_loop(n, piece), "==", 1.0, f"F[{n},{piece}].off")
            ex, ey = e
            xx, xy = x
            tag = f"F[{n},{piece}]"
            # below the segment, strictly inside its x-span (either direction)
            for key, left, right in (("1a", ex, xx), ("1b", xx, ex)):
                add_implication(model, f[key], Expr.of(left) + eps, qx, f"{tag}.{key}.l")
                add_implication(model, f[key], qx + eps, right, f"{tag}.{key}.r")
                add_implication(model, f[key], qy + eps, ey, f"{tag}.{key}.ye")
                add_implication(model, f[key], qy + eps, xy, f"{tag}.{key}.yx")
            add_implication(model, f["2"], Expr.of(ey) + eps, qy, f"{tag}.2e")
            add_implication(model, f["2"], Expr.of(xy) + eps, qy, f"{tag}.2x")
            add_implication(model, f["3"], qx + eps, ex, f"{tag}.3e")
            add_implication(model, f["3"], qx + eps, xx, f"{tag}.3x")
            add_implication(model, f["4"], Expr.of(ex) + eps, qx, f"{tag}.4e")
            add_implication(model, f["4"], Expr.of(xx) + eps, qx, f"{tag}.4x")
            bits += [f["1a"], f["1b"]]
    vars.parity = add_xor_parity(model, bits, "parity")
    model.add_constraint(vars.parity, "==", 1.0, "parity.odd")


# -- non-penetration ------------------------------------------------------------------

def encode_nonpenetration(model: MilpModel, vars: CageVariables, ctx: BuildContext, s: int) -> None:
    """Each free finger sits in one free-workspace cell of the object posed at ``(q_x, q_y, theta_s)``."""
    if never(model, 1 - vars.theta[s]):
        return
    q = ctx.problem.q
    pose = Pose(q.q_x, q.q_y, ctx.plan.thetas[s])
    part = ctx.partitions.get(s) or partition_free_workspace(ctx.problem.obj, pose, ctx.problem.box)
    ctx.partitions[s] = part
    vars.n_regions[s] = part.n_regions
    theta_s = vars.theta[s]
    for n in ctx.problem.free_fingers:
        cells = []
        for r, cell in enumerate(part.regions):
            b = model.add_binary(f"R[{s},{n},{r}]")
            vars.region[(s, n, r)] = b
            cells.append(b)
            add_in_shape(model, b, vars.p[n], None, cell, np.zeros(len(cell)), f"cell[{s},{n},{r}]")
        model.add_constraint(lin_sum(cells) + theta_s, ">=", 1.0, f"cell[{s},{n}].some")
        model.add_constraint(lin_sum(cells), "<=", 1.0, f"cell[{s},{n}].one")


def check_fixed_fingers(problem: CageProblem) -> list[int]:
    """Slices on which some fixed finger penetrates the object; raises if that happens at ``q``."""
    from ..cspace import posed_outline

    q = problem.q
    blocked = []
    for s, t in enumerate(problem.slice_plan.thetas):
        outline = posed_outline(problem.obj, Pose(q.q_x, q.q_y, t))
        for k, pt in problem.fixed_fingers.items():
            if points_strictly_inside(np.array([pt], dtype=float), outline)[0]:
                if s == problem.slice_plan.index_of_q:
                    raise ValueError(f"fixed finger {k} penetrates the object at q")
                blocked.append(s)
                break
    return blocked


# -- limit orientations ---------------------------------------------------------------

def encode_limit(model: MilpModel, vars: CageVariables, ctx: BuildContext) -> None:
    """Monotone deactivation away from q, and contact patterns at every transition."""
    plan = ctx.plan
    qi = ctx.q_index
    th = vars.theta
    model.fix(th[qi], 0.0)
    for s in range(qi + 1, plan.size):
        model.add_constraint(th[s] - th[s - 1], ">=", 0.0, f"theta.mono[{s}]")
    for s in range(qi - 1, -1, -1):
        model.add_constraint(th[s] - th[s + 1], ">=", 0.0, f"theta.mono[{s}]")
    if not plan.periodic:
        model.fix(th[0], 1.0)
        model.fix(th[-1], 1.0)
    opts = ctx.problem.options
    if not opts.contact_justification:
        return
    obj = ctx.problem.obj
    patterns = minimal_patterns(limit_assignment_set(obj, vars.n_fingers, opts.angle_tol))
    vars.patterns = patterns
    if not patterns:
        # no contact pattern can end the interval: every slice stays caged
        for s in range(plan.size):
            model.add_constraint(th[s], "==", 0.0, f"theta.nolimit[{s}]")
        return
    feats = obj.features
    n_f = vars.n_fingers
    used = sorted({f for p in patterns for f in p.features})
    for side in ("up", "down"):
        trans = {s: ctx.transition(vars, s, side) for s in range(plan.size)}
        trans = {s: t for s, t in trans.items() if t is not None and not never(model, t)}
        sel = [model.add_binary(f"sigma[{side},{k}]") for k in range(len(patterns))]
        for k, v in enumerate(sel):
            vars.pattern_select[(side, k)] = v
        model.add_constraint(lin_sum(sel) - lin_sum(trans.values()), ">=", 0.0, f"sigma[{side}].need")
        for s, tau in trans.items():
            _ensure_contacts(model, vars, ctx, s, used, feats)
            for k, pat in enumerate(patterns):
                for f in pat.features:
                    covered = lin_sum(vars.contact[(s, n, f)] for n in range(n_f))
                    model.add_constraint(covered - sel[k] - tau, ">=", -1.0, f"T[{s}].{side}.pat{k}.f{f}")


def _ensure_contacts(model, vars, ctx, s, used, feats) -> None:
    if s in vars.contact_pose:
        return
    qc = add_point(model, f"qc[{s}]", ctx.cspace_bounds)
    vars.contact_pose[s] = qc
    rot = rotation(ctx.plan.thetas[s])
    for n in range(vars.n_fingers):
        ts = []
        for f in used:
            t_bin = model.add_binary(f"T[{s},{n},{f}]")
            vars.contact[(s, n, f)] = t_bin
            ts.append(t_bin)
            feat = feats[f]
            if isinstance(feat, ConcaveVertex):
                target = (Expr.of(qc[0]) + float(rot[0] @ feat.point), Expr.of(qc[1]) + float(rot[1] @ feat.point))
            else:
                t = model.add_var(f"t[{s},{n},{f}]", 0.0, 1.0)
                vars.contact_t[(s, n, f)] = t
                v0 = rot @ feat.start
                d = rot @ (feat.end - feat.start)
                target = (Expr.of(qc[0]) + Expr.of(t) * d[0] + v0[0], Expr.of(qc[1]) + Expr.of(t) * d[1] + v0[1])
            for c in range(2):
                add_implied_equality(model, t_bin, vars.p[n][c], target[c], f"T[{s},{n},{f}].{c}")
        model.add_constraint(lin_sum(ts), "<=", 1.0, f"T[{s},{n}].one")


# -- closing slices ------------------------------------------------------------------------

def finger_triangles(n_f: int) -> list[tuple[int, ...]]:
    if n_f == 2:
        return [(0, 1)]
    return list(itertools.combinations(range(n_f), 3))


def encode_closure(model: MilpModel, vars: CageVariables, ctx: BuildContext) -> None:
    """On the first uncaged slice of each side the loop must be contractible inside the obstacles.

    A triangulation of the finger cycle is chosen per side; every triangle
    carries a point lying in the entry and exit pieces of its three fingers.
    Sliding junctions onto these points and collapsing ears contracts the
    loop, so the enclosed region holds no free configuration.
    """
    if not ctx.problem.options.closure:
        return
    plan = ctx.plan
    n_f = vars.n_fingers
    margin = ctx.problem.margin
    tris = finger_triangles(n_f)
    for side in ("up", "down"):
        slices = [s for s in range(plan.size) if ctx.side(s) == side]
        if not slices:
            continue
        tvar = {}
        for tri in tris:
            tvar[tri] = model.add_binary(f"tri[{side},{tri}]") if n_f > 3 else None
            vars.triangles[(side, tri)] = tvar[tri]
            vars.closure_points[(side, tri)] = add_point(model, f"z[{side},{tri}]", ctx.cspace_bounds)
        if n_f > 3:
            _triangulation_rows(model, tvar, n_f, side)
        for s in slices:
            closing = ctx.closing(vars, s)
            if never(model, closing):
                continue
            geom = ctx.geoms[s]
            for tri in tris:
                z = vars.closure_points[(side, tri)]
                gates = [closing] + ([tvar[tri]] if tvar[tri] is not None else [])
                for a in tri:
                    for piece, shape in enumerate(geom.obstacle_shapes):
                        shrink = _shrink(shape, margin, geom.boundary_masks[piece])
                        for role, ind in (("in", vars.entry_indicator(a, piece)),
                                          ("out", vars.exit_indicator(a, piece))):
                            add_in_shape(model, gates + [ind], z, vars.p[a], shape, shrink,
                                         f"close[{side},{s},{tri}].{a}.{role}{piece}")


def _triangulation_rows(model: MilpModel, tvar: dict, n_f: int, side: str) -> None:
    sides = {tuple(sorted((a, (a + 1) % n_f))) for a in range(n_f)}
    chords = [c for c in itertools.combinations(range(n_f), 2) if c not in sides]
    for e in sorted(sides):
        model.add_constraint(lin_sum(v for t, v in tvar.items() if set(e) <= set(t)), "==", 1.0,
                             f"tri[{side}].side{e}")
    chord_var = {}
    for e in chords:
        cv = model.add_binary(f"chord[{side},{e}]")
        chord_var[e] = cv
        model.add_constraint(lin_sum(v for t, v in tvar.items() if set(e) <= set(t)) - 2 * cv, "==", 0.0,
                             f"tri[{side}].chord{e}")
    for (a, c), (b, d) in itertools.combinations(chords, 2):
        if a < b < c < d or b < a < d < c:
            model.add_constraint(chord_var[(a, c)] + chord_var[(b, d)], "<=", 1.0, f"tri[{side}].cross")
    model.add_constraint(lin_sum(tvar.values()), "==", float(n_f - 2), f"tri[{side}].count")


# -- continuous boundary variation --------------------------------------------------------

def arc_apex_matrix(delta: float) -> np.ndarray:
    """Maps the radius vector at the first slice to the tangent apex offset (identity plus tangent kick)."""
    if not 0 < delta < math.pi / 2:
        raise ValueError("slice spacing must lie in (0, pi/2)")
    return np.eye(2) + math.tan(delta / 2) * ROT_MINUS_90


def encode_boundary_variation(model: MilpModel, vars: CageVariables, ctx: BuildContext, s: int, s_next: int) -> None:
    """Keep each junction inside both pieces while rotating from slice ``s`` to ``s_next``.

    The junction is a point ``u`` fixed in the frame of the next finger's
    entry piece; seen from the previous finger's exit piece it sweeps the arc
    ``u + R(-theta) (p_n - p_{n+1})``, enclosed by the triangle of its two
    end points and the tangent apex.
    """
    plan = ctx.plan
    obj = ctx.problem.obj
    margin = ctx.problem.margin
    delta = plan.spacing(s)
    th0 = plan.thetas[s]
    th1 = th0 + delta
    apex = arc_apex_matrix(delta)
    qi = ctx.q_index
    if s_next == 0 and s == plan.size - 1:
        gate = [1 - vars.theta[s], 1 - vars.theta[0]]
    elif s >= qi:
        gate = [1 - vars.theta[s]]
    else:
        gate = [1 - vars.theta[s_next]]
    if never(model, *gate):
        return
    rot0 = rotation(-th0)
    rot1 = rotation(-th1)
    n_f = vars.n_fingers
    for n in range(n_f):
        nxt = (n + 1) % n_f
        u = add_point(model, f"u[{n},{s}]", ctx.object_bounds)
        vars.junction[(n, s)] = u
        d = (Expr.of(vars.p[n][0]) - vars.p[nxt][0], Expr.of(vars.p[n][1]) - vars.p[nxt][1])
        a_pt = _add(u, _affine(d, rot0))
        b_pt = _add(u, _affine(d, rot1))
        v_pt = _add(u, _affine(d, apex @ rot0))
        for piece, poly in enumerate(obj.pieces):
            shrink = _shrink(poly, margin)
            add_in_shape(model, gate + [vars.entry_indicator(nxt, piece)], u, None, poly, shrink,
                         f"junction[{n},{s}].{piece}")
            for tag, pt in (("a", a_pt), ("b", b_pt), ("v", v_pt)):
                add_in_shape(model, gate + [vars.exit_indicator(n, piece)], pt, None, poly, shrink,
                             f"arc[{n},{s}].{piece}{tag}")


def _add(u, off):
    return (Expr.of(u[0]) + off[0], Expr.of(u[1]) + off[1])
