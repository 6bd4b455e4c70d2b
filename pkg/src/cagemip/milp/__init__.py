from .adapters import (ADAPTERS, BranchAndBoundAdapter, CbcAdapter, HighsAdapter, Solution, find_cbc,
                       make_adapter, solve)
from .lpformat import emit_model, parse_cbc_solution
from .model import (BIG_M_SLACK, FEAS_TOL, INT_TOL, Constraint, Expr, MilpModel, ModelError, Var, add_implication, add_implied_equality, add_xor,
                    add_xor_parity, lin_sum)

__all__ = [
    "BIG_M_SLACK", "FEAS_TOL", "INT_TOL", "Constraint",
    "ADAPTERS", "BranchAndBoundAdapter", "CbcAdapter", "Expr", "HighsAdapter", "MilpModel", "ModelError",
    "Solution", "Var", "add_implication", "add_implied_equality", "add_xor", "add_xor_parity", "emit_model",
    "find_cbc", "lin_sum", "make_adapter", "parse_cbc_solution", "solve",
]
