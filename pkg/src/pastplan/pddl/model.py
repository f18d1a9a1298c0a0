"""Data model for the supported PDDL subset.

The subset is STRIPS plus typing, negative preconditions, conditional
effects, ``oneof`` nondeterminism at the top of an effect, and derived
predicates.  Everything is immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass

SUPPORTED_REQUIREMENTS = (
    ":strips",
    ":typing",
    ":negative-preconditions",
    ":conditional-effects",
    ":derived-predicates",
    ":non-deterministic",
)


class PddlError(ValueError):
    pass


class PddlSyntaxError(PddlError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = "%s at line %d, column %d" % (message, line, column)
        super().__init__(message)


class PddlValidationError(PddlError):
    pass


# ------------------------------------------------------------- conditions

class Condition:
    __slots__ = ()


@dataclass(frozen=True)
class AtomCond(Condition):
    predicate: str
    args: tuple[str, ...] = ()


@dataclass(frozen=True)
class NotCond(Condition):
    arg: Condition


@dataclass(frozen=True)
class AndCond(Condition):
    parts: tuple[Condition, ...] = ()


@dataclass(frozen=True)
class OrCond(Condition):
    parts: tuple[Condition, ...] = ()


TRUE_COND = AndCond(())
FALSE_COND = OrCond(())


def condition_atoms(cond: Condition, positive_only: bool = False):
    """All atom conditions in ``cond``; optionally only those that must hold."""
    if isinstance(cond, AtomCond):
        yield cond
    elif isinstance(cond, NotCond):
        if not positive_only:
            yield from condition_atoms(cond.arg, positive_only)
    elif isinstance(cond, AndCond):
        for part in cond.parts:
            yield from condition_atoms(part, positive_only)
    elif isinstance(cond, OrCond):
        if not positive_only:
            for part in cond.parts:
                yield from condition_atoms(part, positive_only)


# ---------------------------------------------------------------- effects

@dataclass(frozen=True)
class ConditionalEffect:
    """One effect group: when ``condition`` holds, apply the adds and deletes.

    ``condition`` is None for unconditional groups.
    """

    condition: Condition | None
    add: tuple[AtomCond, ...] = ()
    delete: tuple[AtomCond, ...] = ()


Outcome = tuple[ConditionalEffect, ...]


@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameters: tuple[tuple[str, str], ...]  # (?var, type)
    precondition: Condition
    outcomes: tuple[Outcome, ...]

    @property
    def deterministic(self) -> bool:
        return len(self.outcomes) == 1


@dataclass(frozen=True)
class Predicate:
    name: str
    parameters: tuple[tuple[str, str], ...] = ()

    @property
    def arity(self) -> int:
        return len(self.parameters)


@dataclass(frozen=True)
class DerivedPredicate:
    name: str
    parameters: tuple[tuple[str, str], ...]
    body: Condition


@dataclass(frozen=True)
class Domain:
    name: str
    requirements: tuple[str, ...] = ()
    types: tuple[tuple[str, str], ...] = ()  # (type, parent)
    constants: tuple[tuple[str, str], ...] = ()  # (name, type)
    predicates: tuple[Predicate, ...] = ()
    derived: tuple[DerivedPredicate, ...] = ()
    actions: tuple[ActionSchema, ...] = ()

    def predicate_map(self) -> dict[str, int]:
        """Predicate name to arity, base and derived together."""
        table = {p.name: p.arity for p in self.predicates}
        for d in self.derived:
            table[d.name] = len(d.parameters)
        return table

    def type_parents(self) -> dict[str, str]:
        return dict(self.types)


@dataclass(frozen=True)
class Problem:
    name: str
    domain_name: str
    objects: tuple[tuple[str, str], ...] = ()  # (name, type)
    init: tuple[AtomCond, ...] = ()
    goal: Condition = TRUE_COND


def ground_atom_key(predicate: str, args: tuple[str, ...]) -> str:
    """Canonical textual name of a ground atom: predicate then arguments."""
    return " ".join((predicate,) + tuple(args))


def type_ancestors(type_name: str, parents: dict[str, str]) -> set[str]:
    """The type itself plus all its ancestors up to ``object``."""
    out = {type_name}
    cur = type_name
    seen = {cur}
    while cur != "object":
        cur = parents.get(cur, "object")
        if cur in seen:
            raise PddlValidationError("type hierarchy cycle involving %r" % cur)
        seen.add(cur)
        out.add(cur)
    return out


def validate_domain(domain: Domain) -> None:
    for req in domain.requirements:
        if req not in SUPPORTED_REQUIREMENTS:
            raise PddlValidationError("unsupported requirement %s" % req)
    parents = domain.type_parents()
    known_types = set(parents) | {p for _, p in domain.types} | {"object"}
    for t in known_types:
        type_ancestors(t, parents)

    names: set[str] = set()
    for p in domain.predicates:
        if p.name in names:
            raise PddlValidationError("duplicate predicate %r" % p.name)
        names.add(p.name)
        for _, t in p.parameters:
            if t not in known_types:
                raise PddlValidationError("unknown type %r in predicate %r" % (t, p.name))
    derived_names = set()
    for d in domain.derived:
        if d.name in names or d.name in derived_names:
            raise PddlValidationError("derived predicate %r clashes with another predicate" % d.name)
        derived_names.add(d.name)
        head_vars = {v for v, _ in d.parameters}
        for atom in condition_atoms(d.body):
            for arg in atom.args:
                if arg.startswith("?") and arg not in head_vars:
                    raise PddlValidationError(
                        "free variable %s in the body of derived predicate %r" % (arg, d.name))

    pred_arity = domain.predicate_map()
    constant_names = {n for n, _ in domain.constants}

    def check_atom(atom: AtomCond, bound_vars: set[str], where: str) -> None:
        if atom.predicate not in pred_arity:
            raise PddlValidationError("undeclared predicate %r in %s" % (atom.predicate, where))
        if len(atom.args) != pred_arity[atom.predicate]:
            raise PddlValidationError("arity mismatch for %r in %s" % (atom.predicate, where))
        for arg in atom.args:
            if arg.startswith("?"):
                if arg not in bound_vars:
                    raise PddlValidationError("unbound variable %s in %s" % (arg, where))
            elif arg not in constant_names:
                raise PddlValidationError("unknown constant %r in %s" % (arg, where))

    for d in domain.derived:
        head_vars = {v for v, _ in d.parameters}
        for atom in condition_atoms(d.body):
            check_atom(atom, head_vars, "derived predicate %r" % d.name)

    effect_predicates: set[str] = set()
    action_names: set[str] = set()
    for action in domain.actions:
        if action.name in action_names:
            raise PddlValidationError("duplicate action %r" % action.name)
        action_names.add(action.name)
        if not action.outcomes:
            raise PddlValidationError("action %r has no outcomes" % action.name)
        bound = {v for v, _ in action.parameters}
        for v, t in action.parameters:
            if t not in known_types:
                raise PddlValidationError("unknown type %r in action %r" % (t, action.name))
        for atom in condition_atoms(action.precondition):
            check_atom(atom, bound, "precondition of %r" % action.name)
        for outcome in action.outcomes:
            for eff in outcome:
                if eff.condition is not None:
                    for atom in condition_atoms(eff.condition):
                        check_atom(atom, bound, "effect condition of %r" % action.name)
                for atom in eff.add + eff.delete:
                    check_atom(atom, bound, "effect of %r" % action.name)
                    effect_predicates.add(atom.predicate)

    touched_derived = effect_predicates & derived_names
    if touched_derived:
        raise PddlValidationError(
            "derived predicates may not appear in effects: %s" % ", ".join(sorted(touched_derived)))


def validate_problem(problem: Problem, domain: Domain) -> None:
    if problem.domain_name != domain.name:
        raise PddlValidationError(
            "problem %r is for domain %r, not %r" % (problem.name, problem.domain_name, domain.name))
    parents = domain.type_parents()
    known_types = set(parents) | {p for _, p in domain.types} | {"object"}
    constant_names = {n for n, _ in domain.constants}
    object_types: dict[str, str] = dict(domain.constants)
    for name, t in problem.objects:
        if name in constant_names:
            raise PddlValidationError("object %r shadows a domain constant" % name)
        if name in object_types:
            raise PddlValidationError("duplicate object %r" % name)
        if t not in known_types:
            raise PddlValidationError("unknown type %r for object %r" % (t, name))
        object_types[name] = t

    pred_arity = domain.predicate_map()
    derived_names = {d.name for d in domain.derived}

    def check_ground(atom: AtomCond, where: str) -> None:
        if atom.predicate not in pred_arity:
            raise PddlValidationError("undeclared predicate %r in %s" % (atom.predicate, where))
        if len(atom.args) != pred_arity[atom.predicate]:
            raise PddlValidationError("arity mismatch for %r in %s" % (atom.predicate, where))
        for arg in atom.args:
            if arg.startswith("?"):
                raise PddlValidationError("variable %s not allowed in %s" % (arg, where))
            if arg not in object_types:
                raise PddlValidationError("unknown object %r in %s" % (arg, where))

    base_params = {p.name: p.parameters for p in domain.predicates}
    for atom in problem.init:
        check_ground(atom, "init")
        if atom.predicate in derived_names:
            raise PddlValidationError("derived predicate %r may not appear in init" % atom.predicate)
        for arg, (_, want) in zip(atom.args, base_params[atom.predicate]):
            if want not in type_ancestors(object_types[arg], parents):
                raise PddlValidationError(
                    "object %r has type %r, which is not a %r (init atom %r)"
                    % (arg, object_types[arg], want, atom.predicate))
    for atom in condition_atoms(problem.goal):
        check_ground(atom, "goal")
