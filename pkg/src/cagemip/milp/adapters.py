"""Solver adapters and the ``solve`` entry point.

Three adapters share one contract, ``run(model, timeout) -> Solution``:

* ``CbcAdapter`` shells out to a CBC executable through LP/solution files.
* ``HighsAdapter`` calls HiGHS in-process through ``scipy.optimize.milp``.
* ``BranchAndBoundAdapter`` is a small depth-first branch and bound over LP
  relaxations, meant for models with few binaries (tests, CI).
"""

from __future__ import annotations

import logging
import math
import os
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp
from scipy.sparse import csr_matrix

from .lpformat import emit_model, parse_cbc_solution
from .model import FEAS_TOL, INT_TOL, MilpModel

log = logging.getLogger(__name__)

STATUSES = ("feasible", "infeasible", "timeout", "error")


@dataclass
class Solution:
    status: str
    values: np.ndarray | None = None
    solve_time: float = 0.0
    message: str = ""
    adapter: str = ""
    diagnostics: list[str] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def value(self, item) -> float:
        from .model import Expr

        return Expr.of(item).value(self.values)


def _sparse(model: MilpModel):
    c, rows, cols, vals, rlo, rhi, integrality, xlo, xhi = model.matrix_form()
    a = csr_matrix((vals, (rows, cols)), shape=(len(model.constraints), len(model.variables)))
    return c, a, rlo, rhi, integrality, xlo, xhi


class HighsAdapter:
    name = "highs"

    def __init__(self, mip_rel_gap: float = 1.0, presolve: bool = True):
        self.mip_rel_gap = mip_rel_gap
        self.presolve = presolve

    def run(self, model: MilpModel, timeout: float) -> Solution:
        c, a, rlo, rhi, integrality, xlo, xhi = _sparse(model)
        cons = [LinearConstraint(a, rlo, rhi)] if a.shape[0] else []
        opts = {"time_limit": float(timeout), "presolve": self.presolve, "disp": False}
        if model.objective is None:
            opts["mip_rel_gap"] = self.mip_rel_gap
        res = milp(c, constraints=cons, integrality=integrality, bounds=Bounds(xlo, xhi), options=opts)
        if res.status == 0:
            return Solution("feasible", np.asarray(res.x), message=res.message)
        if res.status == 2:
            return Solution("infeasible", message=res.message)
        if res.status == 1:
            if res.x is not None:
                return Solution("feasible", np.asarray(res.x), message=res.message)
            return Solution("timeout", message=res.message)
        return Solution("error", message=f"highs status {res.status}: {res.message}")


def find_cbc() -> str | None:
    """Locate a CBC binary: $CAGEMIP_CBC, then PATH, then the copy bundled with PuLP."""
    env = os.environ.get("CAGEMIP_CBC")
    if env:
        return env
    found = shutil.which("cbc")
    if found:
        return found
    try:
        import importlib.util

        spec = importlib.util.find_spec("pulp")
    except (ImportError, ValueError):
        spec = None
    if spec and spec.origin:
        import platform

        arch = {"x86_64": "i64", "AMD64": "i64", "aarch64": "arm64", "arm64": "arm64"}.get(platform.machine(), "i64")
        osname = {"linux": "linux", "darwin": "osx", "win32": "win"}.get(os.sys.platform, "linux")
        cand = Path(spec.origin).parent / "solverdir" / "cbc" / osname / arch / "cbc"
        if cand.exists():
            return str(cand)
    return None


KILL_GRACE = 5.0


class CbcAdapter:
    """External CBC process.

    ``args`` is a template; ``{model}``, ``{solution}`` and ``{timeout}`` are
    substituted. Exit code 0 with a solution file whose first line starts with
    Optimal/Infeasible/Stopped is a normal run; anything else is reported as
    an error status, never as infeasible.
    """

    name = "cbc"
    default_args = ("{model}", "sec", "{timeout}", "ratio", "1", "solve", "solu", "{solution}")

    def __init__(self, executable: str | None = None, args: Sequence[str] | None = None,
                 keep_files: str | None = None):
        self.executable = executable or find_cbc()
        self.args = tuple(args) if args else self.default_args
        self.keep_files = keep_files

    def run(self, model: MilpModel, timeout: float) -> Solution:
        if not self.executable:
            return Solution("error", message="no CBC executable found (set CAGEMIP_CBC)")
        with tempfile.TemporaryDirectory(prefix="cagemip-") as tmp:
            work = Path(self.keep_files) if self.keep_files else Path(tmp)
            work.mkdir(parents=True, exist_ok=True)
            lp = work / "model.lp"
            sol = work / "model.sol"
            lp.write_text(emit_model(model))
            subs = {"model": str(lp), "solution": str(sol), "timeout": f"{timeout:g}"}
            cmd = [self.executable] + [a.format(**subs) for a in self.args]
            try:
                # cbc checks its own limit only between nodes; the hard kill follows shortly after
                proc = subprocess.run(cmd, capture_output=True, text=True, timeout=timeout + KILL_GRACE)
            except subprocess.TimeoutExpired:
                return Solution("timeout", message="cbc process exceeded wall-clock limit")
            except OSError as exc:
                return Solution("error", message=f"cannot run cbc: {exc}")
            if proc.returncode != 0 or not sol.exists():
                tail = (proc.stdout + proc.stderr)[-2000:]
                return Solution("error", message=f"cbc exit {proc.returncode}", diagnostics=[tail])
            status, x = parse_cbc_solution(sol.read_text(), len(model.variables))
            if status == "error":
                return Solution("error", message="unparseable cbc solution file",
                                diagnostics=[sol.read_text()[:2000]])
            return Solution(status, x, message=sol.read_text().splitlines()[0])


class BranchAndBoundAdapter:
    """Depth-first branch and bound on LP relaxations (HiGHS LP via linprog)."""

    name = "bnb"

    def __init__(self, max_binaries: int = 40):
        self.max_binaries = max_binaries

    def run(self, model: MilpModel, timeout: float) -> Solution:
        nb = model.n_binaries
        if nb > self.max_binaries:
            return Solution("error", message=f"{nb} binaries exceeds branch-and-bound limit {self.max_binaries}")
        if any(v.kind == "I" for v in model.variables):
            return Solution("error", message="general integers not supported by branch and bound")
        c, a, rlo, rhi, integrality, xlo, xhi = _sparse(model)
        eq = np.isfinite(rlo) & np.isfinite(rhi) & (rlo == rhi)
        ub_rows = ~eq
        a_dense = a.toarray() if a.shape[0] else np.zeros((0, len(c)))
        a_ub = np.vstack([a_dense[ub_rows & np.isfinite(rhi)], -a_dense[ub_rows & np.isfinite(rlo)]])
        b_ub = np.concatenate([rhi[ub_rows & np.isfinite(rhi)], -rlo[ub_rows & np.isfinite(rlo)]])
        a_eq, b_eq = a_dense[eq], rlo[eq]
        binaries = np.flatnonzero(integrality)
        start = time.monotonic()
        best_x, best_obj = None, math.inf
        has_obj = model.objective is not None
        stack = [(xlo.copy(), xhi.copy())]
        while stack:
            if time.monotonic() - start > timeout:
                if best_x is not None:
                    return Solution("feasible", best_x, message="time limit, incumbent returned")
                return Solution("timeout", message="branch and bound time limit")
            lo, hi = stack.pop()
            res = linprog(c, A_ub=a_ub if len(b_ub) else None, b_ub=b_ub if len(b_ub) else None,
                          A_eq=a_eq if len(b_eq) else None, b_eq=b_eq if len(b_eq) else None,
                          bounds=list(zip(lo, hi)), method="highs")
            if res.status == 2:
                continue
            if res.status != 0:
                return Solution("error", message=f"LP relaxation failed: {res.message}")
            if res.fun >= best_obj - 1e-9:
                continue
            x = res.x
            frac = np.abs(x[binaries] - np.round(x[binaries]))
            if frac.size == 0 or frac.max() <= INT_TOL:
                x = x.copy()
                x[binaries] = np.round(x[binaries])
                best_x, best_obj = x, res.fun
                if not has_obj:
                    break
                continue
            k = binaries[int(np.argmax(frac))]
            down_hi = hi.copy()
            down_hi[k] = 0.0
            up_lo = lo.copy()
            up_lo[k] = 1.0
            # explore the rounding direction first
            if x[k] >= 0.5:
                stack.append((lo, down_hi))
                stack.append((up_lo, hi))
            else:
                stack.append((up_lo, hi))
                stack.append((lo, down_hi))
        if best_x is None:
            return Solution("infeasible", message="search tree exhausted")
        return Solution("feasible", best_x)


ADAPTERS = {"cbc": CbcAdapter, "highs": HighsAdapter, "bnb": BranchAndBoundAdapter}


def make_adapter(name_or_adapter="highs"):
    if not isinstance(name_or_adapter, str):
        return name_or_adapter
    try:
        return ADAPTERS[name_or_adapter]()
    except KeyError:
        raise ValueError(f"unknown solver adapter {name_or_adapter!r}; choose from {sorted(ADAPTERS)}") from None


def solve(model: MilpModel, adapter="highs", timeout: float = 300.0) -> Solution:
    """Run an adapter and re-check any claimed solution against every row."""
    adapter = make_adapter(adapter)
    t0 = time.monotonic()
    try:
        sol = adapter.run(model, timeout)
    except Exception as exc:  # adapter crash must never look like infeasibility
        log.exception("adapter %s failed", getattr(adapter, "name", adapter))
        sol = Solution("error", message=f"adapter failure: {exc}")
    sol.solve_time = time.monotonic() - t0
    sol.adapter = getattr(adapter, "name", type(adapter).__name__)
    if sol.status == "feasible":
        x = np.asarray(sol.values, dtype=float)
        bins = [v.index for v in model.variables if v.kind != "C"]
        snapped = x.copy()
        close = np.abs(x[bins] - np.round(x[bins])) <= INT_TOL
        snapped[np.array(bins, dtype=int)[close]] = np.round(x[bins])[close]
        problems = model.check(snapped, FEAS_TOL)
        if problems:
            sol = Solution("error", x, sol.solve_time, "solution failed internal re-check",
                           sol.adapter, problems[:20])
        else:
            sol.values = snapped
    return sol
