"""CPLEX-LP text writer and CBC solution-file reader.

Columns are written as ``x<index>`` and rows as ``c<index>`` so the output is
independent of user-facing names and byte-stable for identical models.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .model import MilpModel

PRUNE = 1e-12


def _num(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _terms(terms) -> str:
    parts = []
    for i, c in terms:
        if abs(c) <= PRUNE:
            continue
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign} {_num(abs(c))} x{i}")
    if not parts:
        return "0 x0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[1:]


def emit_model(model: MilpModel) -> str:
    out = [f"\\ cagemip LP v1: {model.name}",
           f"\\ {len(model.variables)} columns, {len(model.constraints)} rows"]
    if not model.variables:
        return "\n".join(out + ["End", ""])
    obj = sorted((model.objective.terms.items() if model.objective else []))
    out.append("Minimize")
    out.append(" obj: " + (_terms(obj) if obj else "0 x0"))
    out.append("Subject To")
    ops = {"<=": "<=", ">=": ">=", "==": "="}
    for r, con in enumerate(model.constraints):
        out.append(f" c{r}: {_terms(con.terms)} {ops[con.sense]} {_num(con.rhs)}")
    out.append("Bounds")
    for v in model.variables:
        if v.is_binary and not v.lo == v.hi:
            continue
        lo = "-inf" if not math.isfinite(v.lo) else _num(v.lo)
        hi = "+inf" if not math.isfinite(v.hi) else _num(v.hi)
        if v.lo == v.hi:
            out.append(f" x{v.index} = {lo}")
        else:
            out.append(f" {lo} <= x{v.index} <= {hi}")
    ints = [f"x{v.index}" for v in model.variables if v.kind == "I"]
    bins = [f"x{v.index}" for v in model.variables if v.kind == "B"]
    if ints:
        out.append("Generals")
        out.extend(" " + " ".join(ints[k:k + 10]) for k in range(0, len(ints), 10))
    if bins:
        out.append("Binaries")
        out.extend(" " + " ".join(bins[k:k + 10]) for k in range(0, len(bins), 10))
    out.append("End")
    return "\n".join(out) + "\n"


_ROW = re.compile(r"^\s*(\*\*)?\s*(\d+)\s+(\S+)\s+(\S+)")


def parse_cbc_solution(text: str, n_vars: int) -> tuple[str, np.ndarray | None]:
    """Parse a CBC ``solu`` file.

    The first line starts with the status word (``Optimal``, ``Infeasible``,
    ``Stopped``, ``Integer infeasible`` ...); later lines are
    ``<seq> <name> <value> <reduced cost>``. Returns (status, values) with
    status one of feasible, infeasible, timeout, error.
    """
    lines = text.strip().splitlines()
    if not lines:
        return "error", None
    head = lines[0].strip().lower()
    if head.startswith("optimal"):
        status = "feasible"
    elif "infeasible" in head:
        return "infeasible", None
    elif head.startswith("stopped"):
        stuck = "no integer" in head or "no feasible" in head or "objective value" not in head
        status = "timeout" if stuck else "feasible"
    else:
        return "error", None
    if status == "timeout":
        return status, None
    # columns absent from the file are zero
    x = np.zeros(n_vars)
    for line in lines[1:]:
        m = _ROW.match(line)
        if not m:
            continue
        name = m.group(3)
        if name.startswith("x") and name[1:].isdigit():
            x[int(name[1:])] = float(m.group(4))
    return status, x
