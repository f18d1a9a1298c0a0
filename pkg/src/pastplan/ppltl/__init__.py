"""Pure-past temporal formulas: syntax, semantics, and the step calculus."""

from .nodes import (
    FALSE,
    START,
    TRUE,
    And,
    Atom,
    Falsity,
    Formula,
    Historically,
    Implies,
    Not,
    Once,
    Or,
    Since,
    Start,
    Truth,
    WeakYesterday,
    Yesterday,
    atoms_of,
    children,
    expand,
    format_formula,
    formula_size,
    resugar,
)
from .parser import FormulaSyntaxError, parse_formula
from .semantics import (
    MissingSigmaKeyError,
    SigmaAssignment,
    State,
    Trace,
    eval_trace,
    initial_sigma,
    is_pnf,
    progress_trace,
    sigma_propositions,
    step_sigma,
    subformulas,
    to_pnf,
    tracked_formulas,
    val,
)

__all__ = [
    "And", "Atom", "FALSE", "Falsity", "Formula", "FormulaSyntaxError",
    "Historically", "Implies", "MissingSigmaKeyError", "Not", "Once", "Or",
    "START", "Since", "SigmaAssignment", "Start", "State", "TRUE", "Trace",
    "Truth", "WeakYesterday", "Yesterday", "atoms_of", "children",
    "eval_trace", "expand", "format_formula", "formula_size", "initial_sigma",
    "is_pnf", "parse_formula", "progress_trace", "resugar",
    "sigma_propositions", "step_sigma", "subformulas", "to_pnf",
    "tracked_formulas", "val",
]
