"""Deletion to list homomorphism for skew decomposable bipartite targets."""
from .core import (
    BOTTOM,
    TOP,
    BipartiteTarget,
    DeletionSolution,
    DlhomInstance,
    UndirectedGraph,
    make_target,
    validate_instance,
    verify_solution,
)
from .fsfc import FsfcInstance, solve_fsfc
from .lhom import lhom_decide, solve_exact_oracle
from .pipeline import solve_dlhom
from .target import check_forbidden, evaluate_decomposition, skew_decompose

__all__ = [
    "BOTTOM",
    "TOP",
    "BipartiteTarget",
    "DeletionSolution",
    "DlhomInstance",
    "FsfcInstance",
    "UndirectedGraph",
    "check_forbidden",
    "evaluate_decomposition",
    "lhom_decide",
    "make_target",
    "skew_decompose",
    "solve_dlhom",
    "solve_exact_oracle",
    "solve_fsfc",
    "validate_instance",
    "verify_solution",
]
__version__ = "0.1.0"
