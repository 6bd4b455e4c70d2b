"""Turning a solver point into a checked cage certificate."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..cspace import build_slice_geometry, posed_outline
from ..geometry import Pose, points_strictly_inside
from ..milp import FEAS_TOL, MilpModel
from .problem import CageProblem, CageVariables


class CertificateError(ValueError):
    """The solver point does not describe a well-formed cage."""


@dataclass
class CageCertificate:
    q: Pose
    fingers: np.ndarray                  # (N, 2)
    fixed: list[int]
    thetas: list[float]
    caged: list[bool]                    # per slice, True where the loop must exist
    loop: list[list[int]]                # per finger: piece chain from entry piece to exit piece
    contacts: dict[str, list[tuple[int, int]]] = field(default_factory=dict)   # side -> (finger, feature)
    witnesses: dict[int, np.ndarray] = field(default_factory=dict)            # slice -> (N, 2)
    complexity: int = 0
    solver: str = ""
    solve_time: float = 0.0

    @property
    def n_fingers(self) -> int:
        return len(self.fingers)

    @property
    def theta_interval(self) -> tuple[float, float]:
        idx = [s for s, c in enumerate(self.caged) if c]
        return self.thetas[idx[0]], self.thetas[idx[-1]]


def _round(x: float) -> int:
    return int(round(float(x)))


def _chain(vars: CageVariables, sol_x: np.ndarray, n: int) -> list[int]:
    n_f = vars.n_fingers
    ins = [j for (_, j), v in vars.H[(n - 1) % n_f].items() if _round(sol_x[v.index])]
    outs = [i for (i, _), v in vars.H[n].items() if _round(sol_x[v.index])]
    if len(ins) != 1 or len(outs) != 1:
        raise CertificateError(f"finger {n}: expected one entry and one exit piece")
    step = {i: k for (i, k), v in vars.G[n].items() if _round(sol_x[v.index])}
    chain = [ins[0]]
    while chain[-1] != outs[0]:
        nxt = step.get(chain[-1])
        if nxt is None or nxt in chain:
            raise CertificateError(f"finger {n}: internal path does not reach the exit piece")
        chain.append(nxt)
    if len(step) != len(chain) - 1:
        raise CertificateError(f"finger {n}: stray internal edges")
    return chain


def decode_certificate(model: MilpModel, vars: CageVariables, solution, problem: CageProblem,
                       tol: float = FEAS_TOL) -> CageCertificate:
    """Re-check the point against every row and rebuild the loop; raise on any inconsistency."""
    if not solution.feasible:
        raise CertificateError(f"no certificate for status {solution.status}")
    x = np.asarray(solution.values, dtype=float)
    problems = model.check(x, tol)
    if problems:
        raise CertificateError("solution violates the model: " + "; ".join(problems[:5]))
    fingers = np.array([[x[a.index], x[b.index]] for a, b in vars.p])
    thetas = list(problem.slice_plan.thetas)
    theta_bits = [_round(x[v.index]) for v in vars.theta]
    qi = problem.slice_plan.index_of_q
    if theta_bits[qi] != 0:
        raise CertificateError("the q slice is not caged")
    loop = [_chain(vars, x, n) for n in range(vars.n_fingers)]
    caged = [b == 0 for b in theta_bits]
    q = problem.q
    # fingers never penetrate the object at q on the caged slices
    for s, c in enumerate(caged):
        if not c:
            continue
        outline = posed_outline(problem.obj, Pose(q.q_x, q.q_y, thetas[s]))
        if points_strictly_inside(fingers, outline, 1e-6 * problem.obj.diameter).any():
            raise CertificateError(f"a finger penetrates the object on caged slice {s}")
    witnesses = {}
    for s in range(len(thetas)):
        if (0, s) in vars.witness:
            witnesses[s] = np.array([[x[vars.witness[(n, s)][0].index], x[vars.witness[(n, s)][1].index]]
                                     for n in range(vars.n_fingers)])
    # witnesses lie in the chosen obstacles on every caged slice
    for s, c in enumerate(caged):
        if not c:
            continue
        geom = build_slice_geometry(problem.obj, thetas[s])
        for n in range(vars.n_fingers):
            nxt = (n + 1) % vars.n_fingers
            r = witnesses[s][n]
            for finger, piece in ((n, loop[n][-1]), (nxt, loop[nxt][0])):
                if geom.obstacle_shapes[piece].max_violation(r - fingers[finger])[0] > tol:
                    raise CertificateError(f"witness {n} on slice {s} is outside obstacle {finger}/{piece}")
    contacts = {}
    for (s, n, f), v in vars.contact.items():
        if _round(x[v.index]):
            contacts.setdefault("slice%d" % s, []).append((n, f))
    complexity = problem.obj.n_pieces * problem.obj.n_facets * max(vars.n_regions.values(), default=1)
    return CageCertificate(q, fingers, sorted(problem.fixed_fingers), thetas, caged, loop, contacts,
                           witnesses, complexity, solution.adapter, solution.solve_time)
