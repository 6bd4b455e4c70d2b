"""Problem description and the variable families of the caging program."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..cspace import Box, SlicePlan, default_box
from ..geometry import DEFAULT_ANGLE_TOL, DecomposedObject, Pose
from ..milp import Expr, Var


@dataclass
class CageOptions:
    """Tunables; lengths are fractions of the object diameter."""

    margin: float = 0.02
    cross_eps: float = 1e-3
    box_factor: float = 4.0
    box: Box | None = None
    angle_tol: float = DEFAULT_ANGLE_TOL
    contact_justification: bool = True
    symmetry_breaking: bool = False
    closure: bool = True           # require the hole to vanish on the first uncaged slice of each side
    caged_range: tuple[int, int] | None = None   # fix the caged slices to [lo, hi] (indices)


@dataclass
class CageProblem:
    obj: DecomposedObject
    q: Pose
    n_fingers: int
    slice_plan: SlicePlan
    fixed_fingers: dict[int, tuple[float, float]] = field(default_factory=dict)
    scenarios: list[Any] = field(default_factory=list)
    options: CageOptions = field(default_factory=CageOptions)

    def __post_init__(self):
        if self.n_fingers < 2:
            raise ValueError("need at least two fingers")
        for k in self.fixed_fingers:
            if not 0 <= k < self.n_fingers:
                raise ValueError(f"fixed finger index {k} out of range")
        plan = self.slice_plan
        if abs(plan.thetas[plan.index_of_q] - self.q.q_theta) > 1e-9 and not plan.periodic:
            raise ValueError("slice plan must contain q_theta")
        if not plan.periodic and not 0 < plan.index_of_q < plan.size - 1:
            raise ValueError("q_theta slice must be interior to a non-periodic plan")
        for s, _ in plan.adjacent_pairs():
            if plan.spacing(s) >= math.pi / 2:
                raise ValueError("adjacent slices must be closer than 90 degrees")

    @property
    def free_fingers(self) -> list[int]:
        return [n for n in range(self.n_fingers) if n not in self.fixed_fingers]

    @property
    def box(self) -> Box:
        return self.options.box or default_box(self.obj, self.q, self.options.box_factor)

    @property
    def margin(self) -> float:
        return self.options.margin * self.obj.diameter

    @property
    def cross_eps(self) -> float:
        return self.options.cross_eps * self.obj.diameter


Point = tuple[Var, Var]


@dataclass
class CageVariables:
    """Handles to every variable family of the caging program."""

    p: list[Point]
    H: list[dict[tuple[int, int], Var]]
    G: list[dict[tuple[int, int], Var]]
    theta: list[Var]
    witness: dict[tuple[int, int], Point] = field(default_factory=dict)            # (n, s)
    region: dict[tuple[int, int, int], Var] = field(default_factory=dict)          # (s, n, r)
    junction: dict[tuple[int, int], Point] = field(default_factory=dict)           # (n, pair start s)
    entry: dict[tuple[int, int], Point] = field(default_factory=dict)              # (n, m) on q slice
    exit: dict[tuple[int, int], Point] = field(default_factory=dict)
    F: dict[tuple[int, int], dict[str, Var]] = field(default_factory=dict)
    parity: Var | None = None
    contact: dict[tuple[int, int, int], Var] = field(default_factory=dict)         # T: (s, n, f)
    contact_t: dict[tuple[int, int, int], Var] = field(default_factory=dict)
    contact_pose: dict[int, Point] = field(default_factory=dict)
    pattern_select: dict[tuple[str, int], Var] = field(default_factory=dict)
    triangles: dict[tuple[str, tuple[int, ...]], Var] = field(default_factory=dict)
    closure_points: dict[tuple[str, tuple[int, ...]], Point] = field(default_factory=dict)
    patterns: list[Any] = field(default_factory=list)
    n_regions: dict[int, int] = field(default_factory=dict)
    context: Any = None

    @property
    def n_fingers(self) -> int:
        return len(self.p)

    def exit_indicator(self, n: int, m: int) -> Expr:
        """1 when piece ``m`` of finger ``n`` carries the edge to finger ``n+1``."""
        return Expr({v.index: 1.0 for (i, _), v in self.H[n].items() if i == m})

    def entry_indicator(self, n: int, m: int) -> Expr:
        prev = self.H[(n - 1) % self.n_fingers]
        return Expr({v.index: 1.0 for (_, j), v in prev.items() if j == m})

    def on_loop(self, n: int, m: int) -> Expr:
        e = self.entry_indicator(n, m)
        for (_, k), v in self.G[n].items():
            if k == m:
                e = e + v
        return e
