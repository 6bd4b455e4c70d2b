"""Solver-agnostic mixed-integer linear model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

FEAS_TOL = 1e-6
INT_TOL = 1e-6
BIG_M_SLACK = 1.1


class ModelError(ValueError):
    pass


class Var:
    __slots__ = ("index", "name", "kind", "lo", "hi")

    def __init__(self, index: int, name: str, kind: str, lo: float, hi: float):
        self.index = index
        self.name = name
        self.kind = kind
        self.lo = lo
        self.hi = hi

    @property
    def is_binary(self) -> bool:
        return self.kind == "B"

    def expr(self) -> "Expr":
        return Expr({self.index: 1.0})

    def __add__(self, other):
        return self.expr() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self.expr() - other

    def __rsub__(self, other):
        return -self.expr() + other

    def __mul__(self, k):
        return self.expr() * k

    __rmul__ = __mul__

    def __neg__(self):
        return self.expr() * -1.0

    def __repr__(self):
        return f"Var({self.name})"


class Expr:
    """Affine expression ``sum(coef * var) + const``."""

    __slots__ = ("terms", "const")

    def __init__(self, terms: dict[int, float] | None = None, const: float = 0.0):
        self.terms = dict(terms) if terms else {}
        self.const = float(const)

    @staticmethod
    def of(x) -> "Expr":
        if isinstance(x, Expr):
            return x
        if isinstance(x, Var):
            return x.expr()
        return Expr(None, float(x))

    def copy(self) -> "Expr":
        return Expr(self.terms, self.const)

    def __add__(self, other):
        o = Expr.of(other)
        out = self.copy()
        for k, v in o.terms.items():
            out.terms[k] = out.terms.get(k, 0.0) + v
        out.const += o.const
        return out

    __radd__ = __add__

    def __sub__(self, other):
        return self + Expr.of(other) * -1.0

    def __rsub__(self, other):
        return Expr.of(other) - self

    def __mul__(self, k):
        k = float(k)
        return Expr({i: c * k for i, c in self.terms.items()}, self.const * k)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def value(self, x: np.ndarray) -> float:
        return self.const + sum(c * x[i] for i, c in self.terms.items())

    def __repr__(self):
        return f"Expr({self.terms}, {self.const})"


def lin_sum(items: Iterable) -> Expr:
    out = Expr()
    for it in items:
        e = Expr.of(it)
        for k, v in e.terms.items():
            out.terms[k] = out.terms.get(k, 0.0) + v
        out.const += e.const
    return out


@dataclass
class Constraint:
    terms: tuple[tuple[int, float], ...]
    sense: str  # "<=", ">=", "=="
    rhs: float
    name: str = ""
    big_m: float | None = None

    def activity(self, x: np.ndarray) -> float:
        return sum(c * x[i] for i, c in self.terms)

    def violation(self, x: np.ndarray) -> float:
        a = self.activity(x)
        if self.sense == "<=":
            return max(0.0, a - self.rhs)
        if self.sense == ">=":
            return max(0.0, self.rhs - a)
        return abs(a - self.rhs)


Gate = Union[Var, Expr, Sequence[Union[Var, Expr]]]


@dataclass
class MilpModel:
    name: str = "model"
    variables: list[Var] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: Expr | None = None

    # -- construction -------------------------------------------------------------
    def add_var(self, name: str, lo: float, hi: float, kind: str = "C") -> Var:
        if kind not in ("C", "B", "I"):
            raise ModelError(f"unknown variable kind {kind!r}")
        if kind == "B":
            lo, hi = 0.0, 1.0
        if lo > hi:
            raise ModelError(f"empty bounds for {name}")
        v = Var(len(self.variables), name, kind, float(lo), float(hi))
        self.variables.append(v)
        return v

    def add_binary(self, name: str) -> Var:
        return self.add_var(name, 0.0, 1.0, "B")

    def add_constraint(self, lhs, sense: str, rhs=0.0, name: str = "", big_m: float | None = None) -> int:
        if sense not in ("<=", ">=", "=="):
            raise ModelError(f"bad sense {sense!r}")
        e = Expr.of(lhs) - Expr.of(rhs)
        for i in e.terms:
            if i < 0 or i >= len(self.variables):
                raise ModelError(f"constraint {name!r} references unknown variable {i}")
        terms = tuple(sorted((i, c) for i, c in e.terms.items() if abs(c) > 1e-12))
        self.constraints.append(Constraint(terms, sense, -e.const, name, big_m))
        return len(self.constraints) - 1

    def fix(self, var: Var, value: float) -> None:
        var.lo = var.hi = float(value)

    # -- analysis -----------------------------------------------------------------
    def bounds_of(self, e) -> tuple[float, float]:
        """Interval-arithmetic range of an expression over the variable bounds."""
        e = Expr.of(e)
        lo = hi = e.const
        for i, c in e.terms.items():
            v = self.variables[i]
            if c > 0:
                lo += c * v.lo
                hi += c * v.hi
            else:
                lo += c * v.hi
                hi += c * v.lo
        return lo, hi

    @property
    def n_binaries(self) -> int:
        return sum(v.is_binary for v in self.variables)

    def check(self, x: np.ndarray, tol: float = FEAS_TOL) -> list[str]:
        """Independent re-evaluation of bounds, integrality and all rows."""
        problems = []
        for v in self.variables:
            val = x[v.index]
            if not math.isfinite(val):
                problems.append(f"{v.name} is not finite")
                continue
            if val < v.lo - tol or val > v.hi + tol:
                problems.append(f"{v.name}={val:g} outside [{v.lo:g}, {v.hi:g}]")
            if v.kind in ("B", "I") and abs(val - round(val)) > INT_TOL:
                problems.append(f"{v.name}={val:g} not integral")
        for k, c in enumerate(self.constraints):
            viol = c.violation(x)
            if viol > tol:
                problems.append(f"row {k} {c.name or ''} violated by {viol:.3g}")
        return problems

    def matrix_form(self):
        """Dense bounds and sparse row data: (c, rows, cols, vals, lo, hi, integrality, xlo, xhi)."""
        n = len(self.variables)
        c = np.zeros(n)
        if self.objective is not None:
            for i, v in self.objective.terms.items():
                c[i] = v
        rows, cols, vals = [], [], []
        rlo = np.empty(len(self.constraints))
        rhi = np.empty(len(self.constraints))
        for r, con in enumerate(self.constraints):
            for i, v in con.terms:
                rows.append(r)
                cols.append(i)
                vals.append(v)
            rlo[r] = con.rhs if con.sense in (">=", "==") else -np.inf
            rhi[r] = con.rhs if con.sense in ("<=", "==") else np.inf
        integrality = np.array([0 if v.kind == "C" else 1 for v in self.variables])
        xlo = np.array([v.lo for v in self.variables])
        xhi = np.array([v.hi for v in self.variables])
        return c, rows, cols, vals, rlo, rhi, integrality, xlo, xhi


def _gate_terms(gate: Gate) -> list[Expr]:
    if isinstance(gate, (Var, Expr)):
        gates = [gate]
    else:
        gates = list(gate)
    return [Expr.of(g) for g in gates]


def add_implication(model: MilpModel, gate: Gate, lhs, rhs=0.0, name: str = "") -> int | None:
    """Add ``gate => lhs <= rhs`` as ``lhs <= rhs + M * sum(1 - g)``.

    Each gate is a binary variable or an affine expression of binaries taking
    values in {0, 1}. ``M`` is 1.1 times the interval bound of ``lhs - rhs``.
    Returns None when the inequality holds for every in-bounds point.
    """
    e = Expr.of(lhs) - Expr.of(rhs)
    for i in e.terms:
        v = model.variables[i]
        if not (math.isfinite(v.lo) and math.isfinite(v.hi)):
            raise ModelError(f"implication on unbounded variable {v.name}")
    _, hi = model.bounds_of(e)
    if hi <= 0:
        return None
    live = []
    for g in _gate_terms(gate):
        g_lo, g_hi = model.bounds_of(g)
        if g_hi < 0.5:
            return None      # gate can never fire
        if g_lo < 0.5:
            live.append(g)
    big_m = BIG_M_SLACK * hi
    slack = lin_sum(1 - g for g in live) * big_m
    return model.add_constraint(e - slack, "<=", 0.0, name=name, big_m=big_m)


def add_implied_equality(model: MilpModel, gate: Gate, lhs, rhs=0.0, name: str = "") -> None:
    add_implication(model, gate, lhs, rhs, name + "+")
    add_implication(model, gate, Expr.of(rhs), lhs, name + "-")


def add_xor(model: MilpModel, a, b, name: str = "xor") -> Var:
    z = model.add_binary(name)
    model.add_constraint(z - a + b, ">=", 0.0, name + ".1")
    model.add_constraint(z - b + a, ">=", 0.0, name + ".2")
    model.add_constraint(z - a - b, "<=", 0.0, name + ".3")
    model.add_constraint(z + a + b, "<=", 2.0, name + ".4")
    return z


def add_xor_parity(model: MilpModel, bits: Sequence, name: str = "parity") -> Var | Expr:
    """Parity of ``bits`` via a chain of pairwise XOR stages."""
    if not bits:
        raise ModelError("parity needs at least one bit")
    acc = bits[0]
    for k, b in enumerate(bits[1:]):
        acc = add_xor(model, acc, b, f"{name}[{k}]")
    if isinstance(acc, Var):
        return acc
    z = model.add_binary(name)
    model.add_constraint(z - acc, "==", 0.0, name + ".eq")
    return z
