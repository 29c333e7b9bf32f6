"""Exact symbolic value iteration for MDPs with boolean and bounded
continuous state variables.

Value functions are piecewise polynomials held as hash-consed decision
diagrams; all arithmetic is exact rational, so Bellman backups, policy
queries and the structural convergence test never see rounding error.
"""

from .domlang import (
    DomainValidationError,
    ParseError,
    SourceSpan,
    builtin_domain_path,
    parse_case,
    parse_domain,
    parse_domain_file,
    serialize_domain,
)
from .model import Action, Cse, DCMDP, complete_action, validate
from .poly import (
    BoolDec,
    ConstantComparisonError,
    Decision,
    IneqDec,
    Polynomial,
    VarId,
    normalize_cmp,
    normalize_ineq,
)
from .prune import ConstraintSet, feasible, prune
from .sdp import IterStats, SolveResult, backup, regress, solve
from .xadd import ADD, MAX, MIN, MUL, SUB, CaseFormError, NodeRef, XaddStore

__version__ = "0.1.0"

__all__ = [
    "ADD", "MAX", "MIN", "MUL", "SUB",
    "Action", "BoolDec", "CaseFormError", "ConstantComparisonError",
    "ConstraintSet", "Cse", "DCMDP", "Decision", "DomainValidationError",
    "IneqDec", "IterStats", "NodeRef", "ParseError", "Polynomial",
    "SolveResult", "SourceSpan", "VarId", "XaddStore",
    "backup", "builtin_domain_path", "complete_action", "feasible",
    "normalize_cmp", "normalize_ineq", "parse_case", "parse_domain",
    "parse_domain_file", "prune", "regress", "serialize_domain", "solve",
    "validate",
]
