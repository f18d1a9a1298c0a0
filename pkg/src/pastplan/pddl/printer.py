"""Deterministic text output for domains and problems.

Printing then parsing gives back an equal model, and equal models print to
byte-identical text.
"""

from __future__ import annotations

from .model import (
    ActionSchema,
    AndCond,
    AtomCond,
    Condition,
    ConditionalEffect,
    Domain,
    NotCond,
    OrCond,
    Problem,
)


def _atom_text(atom: AtomCond) -> str:
    if atom.args:
        return "(%s %s)" % (atom.predicate, " ".join(atom.args))
    return "(%s)" % atom.predicate


def condition_text(cond: Condition) -> str:
    if isinstance(cond, AtomCond):
        return _atom_text(cond)
    if isinstance(cond, NotCond):
        return "(not %s)" % condition_text(cond.arg)
    if isinstance(cond, AndCond):
        if not cond.parts:
            return "(and)"
        return "(and %s)" % " ".join(condition_text(p) for p in cond.parts)
    if isinstance(cond, OrCond):
        if not cond.parts:
            return "(or)"
        return "(or %s)" % " ".join(condition_text(p) for p in cond.parts)
    raise TypeError("not a condition: %r" % (cond,))


def _typed_list_text(pairs) -> str:
    # Group consecutive entries of the same type: "?x ?y - block ?z - peg".
    chunks: list[str] = []
    pending: list[str] = []
    current_type: str | None = None
    for name, type_name in pairs:
        if current_type is None:
            current_type = type_name
        if type_name != current_type:
            chunks.append("%s - %s" % (" ".join(pending), current_type))
            pending = []
            current_type = type_name
        pending.append(name)
    if pending:
        chunks.append("%s - %s" % (" ".join(pending), current_type))
    return " ".join(chunks)


def _effect_item_text(eff: ConditionalEffect) -> list[str]:
    literals = [_atom_text(atom) for atom in eff.add]
    literals += ["(not %s)" % _atom_text(atom) for atom in eff.delete]
    if eff.condition is None:
        return literals
    if len(literals) == 1:
        body = literals[0]
    elif literals:
        body = "(and %s)" % " ".join(literals)
    else:
        body = "(and)"
    return ["(when %s %s)" % (condition_text(eff.condition), body)]


def _outcome_text(outcome) -> str:
    pieces: list[str] = []
    for eff in outcome:
        pieces.extend(_effect_item_text(eff))
    if len(pieces) == 1:
        return pieces[0]
    if not pieces:
        return "(and)"
    return "(and %s)" % " ".join(pieces)


def _action_text(action: ActionSchema) -> str:
    if len(action.outcomes) == 1:
        effect = _outcome_text(action.outcomes[0])
    else:
        effect = "(oneof %s)" % " ".join(_outcome_text(o) for o in action.outcomes)
    params = _typed_list_text(action.parameters) if action.parameters else ""
    return (
        "  (:action %s\n"
        "    :parameters (%s)\n"
        "    :precondition %s\n"
        "    :effect %s)"
        % (action.name, params, condition_text(action.precondition), effect)
    )


def print_domain(domain: Domain) -> str:
    lines = ["(define (domain %s)" % domain.name]
    if domain.requirements:
        lines.append("  (:requirements %s)" % " ".join(domain.requirements))
    if domain.types:
        lines.append("  (:types %s)" % _typed_list_text(domain.types))
    if domain.constants:
        lines.append("  (:constants %s)" % _typed_list_text(domain.constants))
    if domain.predicates:
        decls = []
        for p in domain.predicates:
            if p.parameters:
                decls.append("(%s %s)" % (p.name, _typed_list_text(p.parameters)))
            else:
                decls.append("(%s)" % p.name)
        lines.append("  (:predicates %s)" % " ".join(decls))
    for d in domain.derived:
        if d.parameters:
            head = "(%s %s)" % (d.name, _typed_list_text(d.parameters))
        else:
            head = "(%s)" % d.name
        lines.append("  (:derived %s %s)" % (head, condition_text(d.body)))
    for action in domain.actions:
        lines.append(_action_text(action))
    lines.append(")")
    return "\n".join(lines) + "\n"


def print_problem(problem: Problem) -> str:
    lines = [
        "(define (problem %s)" % problem.name,
        "  (:domain %s)" % problem.domain_name,
    ]
    if problem.objects:
        lines.append("  (:objects %s)" % _typed_list_text(problem.objects))
    if problem.init:
        lines.append("  (:init %s)" % " ".join(_atom_text(a) for a in problem.init))
    lines.append("  (:goal %s)" % condition_text(problem.goal))
    lines.append(")")
    return "\n".join(lines) + "\n"
