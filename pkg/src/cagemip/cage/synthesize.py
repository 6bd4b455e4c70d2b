"""Build, solve and decode in one call.

Two strategies are offered. ``monolithic`` leaves every orientation bit free
in a single program. ``sweep`` enumerates the caged interval explicitly,
narrowest first, fixing the orientation bits of each candidate so that all
gates depending on them become constants; the union of the candidates is the
same feasible set, so "all candidates infeasible" is a proof of infeasibility.
"""

from __future__ import annotations

import dataclasses
import logging
import time
from dataclasses import dataclass, field

from ..milp import MilpModel, Solution, solve
from .assemble import assemble_mip1
from .certificate import CageCertificate, CertificateError, decode_certificate
from .problem import CageProblem, CageVariables

log = logging.getLogger(__name__)

STRATEGIES = ("sweep", "monolithic")


@dataclass
class SynthesisResult:
    status: str                      # feasible | infeasible | timeout | error
    certificate: CageCertificate | None
    solution: Solution
    model: MilpModel
    variables: CageVariables
    attempts: list[tuple[tuple[int, int] | None, str, float]] = field(default_factory=list)

    @property
    def solve_time(self) -> float:
        return sum(t for _, _, t in self.attempts)


def candidate_ranges(problem: CageProblem) -> list[tuple[int, int]]:
    """Caged slice intervals around the q slice, narrowest first, ties broken towards q."""
    plan = problem.slice_plan
    if plan.periodic:
        raise ValueError("the sweep strategy needs a non-periodic slice plan")
    qi = plan.index_of_q
    cands = [(lo, hi) for lo in range(1, qi + 1) for hi in range(qi, plan.size - 1)]
    return sorted(cands, key=lambda r: (r[1] - r[0], max(qi - r[0], r[1] - qi), r[0]))


def _solve_one(problem: CageProblem, adapter, timeout: float):
    model, vars = assemble_mip1(problem)
    log.info("model %s: %d columns (%d binary), %d rows", model.name, len(model.variables),
             model.n_binaries, len(model.constraints))
    return model, vars, solve(model, adapter, timeout)


def _result(problem, model, vars, sol, attempts) -> SynthesisResult:
    cert = None
    status = sol.status
    if sol.feasible:
        try:
            cert = decode_certificate(model, vars, sol, problem)
        except CertificateError as exc:
            sol.diagnostics.append(str(exc))
            status = "error"
    return SynthesisResult(status, cert, sol, model, vars, attempts)


def synthesize(problem: CageProblem, adapter="highs", timeout: float = 300.0,
               strategy: str = "sweep") -> SynthesisResult:
    """Search for a cage; ``timeout`` bounds the total solver time."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if strategy == "monolithic" or problem.slice_plan.periodic or problem.options.caged_range is not None:
        model, vars, sol = _solve_one(problem, adapter, timeout)
        return _result(problem, model, vars, sol, [(problem.options.caged_range, sol.status, sol.solve_time)])
    start = time.monotonic()
    attempts = []
    timed_out = False
    last = None
    for rng in candidate_ranges(problem):
        left = timeout - (time.monotonic() - start)
        if left <= 0:
            timed_out = True
            break
        sub = dataclasses.replace(problem, options=dataclasses.replace(problem.options, caged_range=rng))
        model, vars, sol = _solve_one(sub, adapter, left)
        attempts.append((rng, sol.status, sol.solve_time))
        last = (sub, model, vars, sol)
        if sol.status in ("feasible", "error"):
            return _result(sub, model, vars, sol, attempts)
        if sol.status == "timeout":
            timed_out = True
            break
    if last is None:
        model, vars = assemble_mip1(problem)
        adapter_name = str(adapter)
    else:
        _, model, vars, sol = last
        adapter_name = sol.adapter
    status = "timeout" if timed_out else "infeasible"
    final = Solution(status, None, sum(a[2] for a in attempts),
                     f"{len(attempts)} caged intervals tried", adapter_name)
    return SynthesisResult(status, None, final, model, vars, attempts)
