"""The PDDL subset: model, parser, printer, grounding, execution."""

from .grounding import (
    GAnd,
    GLit,
    GOr,
    GroundAction,
    GroundAxiom,
    GroundCondition,
    GroundedProblem,
    GroundingError,
    apply_axioms,
    eval_condition,
    ground,
)
from .model import (
    ActionSchema,
    AndCond,
    AtomCond,
    Condition,
    ConditionalEffect,
    DerivedPredicate,
    Domain,
    FALSE_COND,
    NotCond,
    OrCond,
    PddlError,
    PddlSyntaxError,
    PddlValidationError,
    Predicate,
    Problem,
    SUPPORTED_REQUIREMENTS,
    TRUE_COND,
    condition_atoms,
    ground_atom_key,
    validate_domain,
    validate_problem,
)
from .parser import parse_domain, parse_problem
from .printer import condition_text, print_domain, print_problem

__all__ = [
    "ActionSchema", "AndCond", "AtomCond", "Condition", "ConditionalEffect",
    "DerivedPredicate", "Domain", "FALSE_COND", "GAnd", "GLit", "GOr",
    "GroundAction", "GroundAxiom", "GroundCondition", "GroundedProblem",
    "GroundingError", "NotCond", "OrCond", "PddlError", "PddlSyntaxError",
    "PddlValidationError", "Predicate", "Problem", "SUPPORTED_REQUIREMENTS",
    "TRUE_COND", "apply_axioms", "condition_atoms", "condition_text",
    "eval_condition", "ground", "ground_atom_key", "parse_domain",
    "parse_problem", "print_domain", "print_problem", "validate_domain",
    "validate_problem",
]
