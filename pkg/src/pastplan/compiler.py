"""Rewrites a problem with a past-time temporal goal into plain reachability.

For goal formula ``phi`` over ground atoms of the input problem:

* one fresh 0-ary fluent ``sig-<k>`` per tracked proposition, all false
  initially, remembers the previous step's truth of that proposition;
* one derived predicate ``val-<k>`` per subformula computes the
  subformula's current truth from the state and the ``sig`` fluents;
* every action outcome gains, per tracked proposition, the complementary
  pair ``(when (val-k) (sig-k))`` and ``(when (not (val-k)) (not (sig-k)))``,
  so each step overwrites the whole memory;
* the goal becomes the single derived atom for ``phi`` itself.

Indices ``<k>`` are the deterministic post-order positions produced by
``subformulas``; the mangling map records them for debugging and for
projecting solutions back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .pddl import (
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
    Predicate,
    Problem,
    TRUE_COND,
    validate_domain,
    validate_problem,
)
from .ppltl import (
    And,
    Atom,
    Falsity,
    Formula,
    Not,
    Or,
    Since,
    Truth,
    Yesterday,
    atoms_of,
    expand,
    format_formula,
    sigma_propositions,
    subformulas,
)
from .pddl.model import type_ancestors


class CompileError(ValueError):
    pass


@dataclass(frozen=True)
class ManglingEntry:
    id: str
    kind: str  # "sigma" or "val"
    formula: str  # canonical serialization


class ManglingMap:
    """Bijection between subformula serializations and fresh identifiers."""

    def __init__(self, entries: tuple[ManglingEntry, ...]):
        self.entries = entries
        self.val_ids = {e.formula: e.id for e in entries if e.kind == "val"}
        self.sigma_ids = {e.formula: e.id for e in entries if e.kind == "sigma"}
        self.id_set = frozenset(e.id for e in entries)
        if len(self.id_set) != len(entries):
            raise CompileError("mangling produced duplicate identifiers")

    def val_id(self, f: Formula) -> str:
        return self.val_ids[format_formula(f)]

    def sigma_id(self, key: str) -> str:
        return self.sigma_ids[key]

    def sigma_keys(self) -> tuple[str, ...]:
        return tuple(e.formula for e in self.entries if e.kind == "sigma")

    def to_json(self) -> str:
        payload = [{"id": e.id, "kind": e.kind, "formula": e.formula} for e in self.entries]
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ManglingMap":
        payload = json.loads(text)
        return cls(tuple(ManglingEntry(item["id"], item["kind"], item["formula"])
                         for item in payload))


@dataclass(frozen=True)
class CompiledProblem:
    domain: Domain
    problem: Problem
    mangling: ManglingMap


def _check_goal_atoms(domain: Domain, problem: Problem, phi: Formula) -> dict[str, str]:
    """Every goal atom must name a declared, well-typed ground atom."""
    pred_params: dict[str, tuple] = {p.name: p.parameters for p in domain.predicates}
    for d in domain.derived:
        pred_params[d.name] = d.parameters
    object_types = dict(domain.constants) | dict(problem.objects)
    parents = domain.type_parents()
    for name in sorted(atoms_of(phi)):
        words = name.split()
        if not words:
            raise CompileError("goal atom %r is empty" % name)
        pred, args = words[0], words[1:]
        if pred not in pred_params:
            raise CompileError("goal atom %r: predicate %r is not declared" % (name, pred))
        params = pred_params[pred]
        if len(args) != len(params):
            raise CompileError("goal atom %r: %r takes %d argument(s), got %d"
                               % (name, pred, len(params), len(args)))
        for arg, (_, want) in zip(args, params):
            if arg not in object_types:
                raise CompileError("goal atom %r: unknown object %r" % (name, arg))
            if want not in type_ancestors(object_types[arg], parents):
                raise CompileError("goal atom %r: object %r has type %r, not a %r"
                                   % (name, arg, object_types[arg], want))
    return object_types


def _atom_condition(name: str) -> AtomCond:
    words = name.split()
    return AtomCond(words[0], tuple(words[1:]))


def _val_body(f: Formula, val_id, sigma_id) -> Condition:
    """Derivation rule body for one subformula."""
    if isinstance(f, Truth):
        return TRUE_COND
    if isinstance(f, Falsity):
        return FALSE_COND
    if isinstance(f, Atom):
        return _atom_condition(f.name)
    if isinstance(f, Not):
        return NotCond(AtomCond(val_id(f.arg)))
    if isinstance(f, And):
        return AndCond((AtomCond(val_id(f.left)), AtomCond(val_id(f.right))))
    if isinstance(f, Or):
        return OrCond((AtomCond(val_id(f.left)), AtomCond(val_id(f.right))))
    if isinstance(f, Yesterday):
        return AtomCond(sigma_id(format_formula(f.arg)))
    if isinstance(f, Since):
        return OrCond((
            AtomCond(val_id(f.right)),
            AndCond((AtomCond(val_id(f.left)), AtomCond(sigma_id(format_formula(f))))),
        ))
    raise CompileError("unexpected connective after desugaring: %r" % (f,))


def fold_constants(axioms: tuple[DerivedPredicate, ...]) -> tuple[DerivedPredicate, ...]:
    """Inline constant-valued 0-ary derived predicates and simplify bodies.

    Semantics preserving; the axiom set itself is kept intact so heads stay
    addressable (only bodies change).
    """
    known: dict[str, bool] = {}
    current = list(axioms)
    changed = True
    while changed:
        changed = False
        folded = []
        for ax in current:
            body = _fold_condition(ax.body, known)
            if body != ax.body:
                changed = True
            if not ax.parameters:
                if body == TRUE_COND and known.get(ax.name) is not True:
                    known[ax.name] = True
                    changed = True
                elif body == FALSE_COND and known.get(ax.name) is not False:
                    known[ax.name] = False
                    changed = True
            folded.append(DerivedPredicate(ax.name, ax.parameters, body))
        current = folded
    return tuple(current)


def _fold_condition(cond: Condition, known: dict[str, bool]) -> Condition:
    if isinstance(cond, AtomCond):
        if not cond.args and cond.predicate in known:
            return TRUE_COND if known[cond.predicate] else FALSE_COND
        return cond
    if isinstance(cond, NotCond):
        inner = _fold_condition(cond.arg, known)
        if inner == TRUE_COND:
            return FALSE_COND
        if inner == FALSE_COND:
            return TRUE_COND
        if isinstance(inner, NotCond):
            return inner.arg
        return NotCond(inner)
    if isinstance(cond, AndCond):
        parts = []
        for part in cond.parts:
            part = _fold_condition(part, known)
            if part == FALSE_COND:
                return FALSE_COND
            if part != TRUE_COND:
                parts.append(part)
        if not parts:
            return TRUE_COND
        if len(parts) == 1:
            return parts[0]
        return AndCond(tuple(parts))
    if isinstance(cond, OrCond):
        parts = []
        for part in cond.parts:
            part = _fold_condition(part, known)
            if part == TRUE_COND:
                return TRUE_COND
            if part != FALSE_COND:
                parts.append(part)
        if not parts:
            return FALSE_COND
        if len(parts) == 1:
            return parts[0]
        return OrCond(tuple(parts))
    raise TypeError("not a condition: %r" % (cond,))


REQUIRED_FLAGS = (":derived-predicates", ":conditional-effects", ":negative-preconditions")


def compile_problem(domain: Domain, problem: Problem, phi: Formula) -> CompiledProblem:
    """Produce the reachability-goal version of ``(domain, problem, phi)``.

    The input problem's own goal is discarded; ``phi`` is the goal.
    """
    object_types = _check_goal_atoms(domain, problem, phi)

    core = expand(phi)
    subs = subformulas(core)
    position = {format_formula(g): k for k, g in enumerate(subs)}
    sigma_keys = sigma_propositions(core)

    entries = [ManglingEntry("val-%d" % k, "val", format_formula(g))
               for k, g in enumerate(subs)]
    entries += [ManglingEntry("sig-%d" % position[key], "sigma", key)
                for key in sigma_keys]
    mangling = ManglingMap(tuple(entries))

    taken = {p.name for p in domain.predicates} | {d.name for d in domain.derived}
    clash = mangling.id_set & taken
    if clash:
        raise CompileError("fresh names collide with declared predicates: %s"
                           % ", ".join(sorted(clash)))

    def val_id(f: Formula) -> str:
        return mangling.val_ids[format_formula(f)]

    def sigma_id(key: str) -> str:
        return mangling.sigma_ids[key]

    sigma_fluents = tuple(sigma_id(key) for key in sigma_keys)
    new_predicates = tuple(Predicate(sid, ()) for sid in sigma_fluents)
    new_axioms = tuple(DerivedPredicate(val_id(g), (), _val_body(g, val_id, sigma_id))
                       for g in subs)
    new_axioms = fold_constants(new_axioms)

    memory_updates = []
    for key in sigma_keys:
        watched = AtomCond(val_id_of_key(mangling, key))
        memory_updates.append(ConditionalEffect(watched, (AtomCond(sigma_id(key)),), ()))
        memory_updates.append(ConditionalEffect(NotCond(watched), (), (AtomCond(sigma_id(key)),)))
    memory_updates = tuple(memory_updates)

    new_actions = tuple(
        ActionSchema(a.name, a.parameters, a.precondition,
                     tuple(outcome + memory_updates for outcome in a.outcomes))
        for a in domain.actions
    )

    requirements = list(domain.requirements)
    for flag in REQUIRED_FLAGS:
        if flag not in requirements:
            requirements.append(flag)

    goal_objects = sorted({arg for name in atoms_of(phi) for arg in name.split()[1:]})
    already_constant = {n for n, _ in domain.constants}
    promoted = tuple((obj, object_types[obj]) for obj in goal_objects
                     if obj not in already_constant)

    new_domain = Domain(
        name=domain.name,
        requirements=tuple(requirements),
        types=domain.types,
        constants=domain.constants + promoted,
        predicates=domain.predicates + new_predicates,
        derived=domain.derived + new_axioms,
        actions=new_actions,
    )
    promoted_names = {n for n, _ in promoted}
    new_problem = Problem(
        name=problem.name,
        domain_name=problem.domain_name,
        objects=tuple((n, t) for n, t in problem.objects if n not in promoted_names),
        init=problem.init,
        goal=AtomCond(val_id(core)),
    )
    validate_domain(new_domain)
    validate_problem(new_problem, new_domain)
    return CompiledProblem(new_domain, new_problem, mangling)


def val_id_of_key(mangling: ManglingMap, key: str) -> str:
    """The val identifier watching the same formula a sigma key tracks."""
    return mangling.val_ids[key]
