"""Grounding and execution semantics.

States are integer bitmasks over the ground atom table: base atoms first,
then derived atoms.  Derived atoms are never stored in a base state; they
are recomputed by a stratified fixpoint and memoized per base state.

Action schemas are instantiated over distinct objects per parameter tuple
and pruned by a delete-relaxation reachability pass; axiom schemas are
instantiated over all type-consistent bindings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import (
    AndCond,
    AtomCond,
    Condition,
    Domain,
    NotCond,
    OrCond,
    PddlValidationError,
    Problem,
    ground_atom_key,
    type_ancestors,
)


# Ground conditions over bit indices.

class GroundCondition:
    __slots__ = ()


@dataclass(frozen=True)
class GLit(GroundCondition):
    bit: int
    positive: bool = True


@dataclass(frozen=True)
class GAnd(GroundCondition):
    parts: tuple[GroundCondition, ...]


@dataclass(frozen=True)
class GOr(GroundCondition):
    parts: tuple[GroundCondition, ...]


def eval_condition(cond: GroundCondition, mask: int) -> bool:
    if isinstance(cond, GLit):
        return bool(mask >> cond.bit & 1) == cond.positive
    if isinstance(cond, GAnd):
        return all(eval_condition(p, mask) for p in cond.parts)
    if isinstance(cond, GOr):
        return any(eval_condition(p, mask) for p in cond.parts)
    raise TypeError("not a ground condition: %r" % (cond,))


@dataclass(frozen=True)
class GroundEffect:
    condition: GroundCondition | None
    add_mask: int
    del_mask: int


@dataclass(frozen=True)
class GroundAction:
    name: str
    precondition: GroundCondition
    outcomes: tuple[tuple[GroundEffect, ...], ...]

    @property
    def deterministic(self) -> bool:
        return len(self.outcomes) == 1


@dataclass(frozen=True)
class GroundAxiom:
    head_bit: int
    body: GroundCondition


class GroundingError(PddlValidationError):
    pass


class GroundedProblem:
    """Propositional form of a domain/problem pair, ready for search."""

    def __init__(self, domain: Domain, problem: Problem,
                 atoms: tuple[str, ...], n_base: int,
                 index: dict[str, int],
                 actions: tuple[GroundAction, ...],
                 strata: tuple[tuple[GroundAxiom, ...], ...],
                 init_mask: int, goal: GroundCondition):
        self.domain = domain
        self.problem = problem
        self.atoms = atoms
        self.n_base = n_base
        self.index = index
        self.actions = actions
        self.action_by_name = {a.name: a for a in actions}
        self.strata = strata
        self.init_mask = init_mask
        self.goal = goal
        self._base_mask = (1 << n_base) - 1
        self._ext_cache: dict[int, int] = {}

    # ------------------------------------------------------------ states

    def extended(self, base_mask: int) -> int:
        """Base state plus all derived atoms, by stratified least fixpoint."""
        cached = self._ext_cache.get(base_mask)
        if cached is not None:
            return cached
        mask = apply_axioms(base_mask, self.strata)
        self._ext_cache[base_mask] = mask
        return mask

    def is_goal(self, base_mask: int) -> bool:
        return eval_condition(self.goal, self.extended(base_mask))

    def applicable(self, base_mask: int) -> list[GroundAction]:
        ext = self.extended(base_mask)
        return [a for a in self.actions if eval_condition(a.precondition, ext)]

    def apply(self, base_mask: int, action: GroundAction) -> list[int]:
        """One successor base state per outcome; effect conditions are read
        in the pre-action state, derived atoms included."""
        ext = self.extended(base_mask)
        if not eval_condition(action.precondition, ext):
            raise GroundingError("action %s is not applicable" % action.name)
        successors = []
        for outcome in action.outcomes:
            add, delete = 0, 0
            for eff in outcome:
                if eff.condition is None or eval_condition(eff.condition, ext):
                    add |= eff.add_mask
                    delete |= eff.del_mask
            successors.append((base_mask & ~delete) | add)
        return successors

    # ------------------------------------------------------------- views

    def atom_set(self, base_mask: int, include_derived: bool = True) -> frozenset[str]:
        mask = self.extended(base_mask) if include_derived else base_mask & self._base_mask
        return frozenset(self.atoms[i] for i in range(len(self.atoms)) if mask >> i & 1)

    def mask_of(self, atom_names) -> int:
        mask = 0
        for name in atom_names:
            try:
                bit = self.index[name]
            except KeyError:
                raise GroundingError("unknown ground atom %r" % name) from None
            if bit >= self.n_base:
                continue  # derived atoms are recomputed, never stored
            mask |= 1 << bit
        return mask


def apply_axioms(base_mask: int, strata) -> int:
    mask = base_mask
    for stratum in strata:
        changed = True
        while changed:
            changed = False
            for axiom in stratum:
                bit = 1 << axiom.head_bit
                if not mask & bit and eval_condition(axiom.body, mask):
                    mask |= bit
                    changed = True
    return mask


# ----------------------------------------------------------- instantiation

def _bindings(parameters, objects_by_type, distinct: bool):
    """All type-consistent assignments of objects to parameters."""
    pools = []
    for var, type_name in parameters:
        pool = objects_by_type.get(type_name, ())
        pools.append([(var, obj) for obj in pool])
    for combo in itertools.product(*pools):
        values = [obj for _, obj in combo]
        if distinct and len(set(values)) != len(values):
            continue
        yield dict(combo)


def _instantiate_condition(cond: Condition, binding, index) -> GroundCondition:
    if isinstance(cond, AtomCond):
        args = tuple(binding.get(a, a) for a in cond.args)
        key = ground_atom_key(cond.predicate, args)
        bit = index.get(key)
        if bit is None:
            return GOr(())  # type-inconsistent instance, statically false
        return GLit(bit)
    if isinstance(cond, NotCond):
        inner = _instantiate_condition(cond.arg, binding, index)
        if isinstance(inner, GLit):
            return GLit(inner.bit, not inner.positive)
        if inner == GOr(()):
            return GAnd(())
        raise GroundingError("negation must apply to atoms after parsing")
    if isinstance(cond, AndCond):
        return GAnd(tuple(_instantiate_condition(p, binding, index) for p in cond.parts))
    if isinstance(cond, OrCond):
        return GOr(tuple(_instantiate_condition(p, binding, index) for p in cond.parts))
    raise TypeError("not a condition: %r" % (cond,))


def _push_negations(cond: Condition, negate: bool = False) -> Condition:
    """Negation normal form so ground conditions only negate atoms."""
    if isinstance(cond, AtomCond):
        return NotCond(cond) if negate else cond
    if isinstance(cond, NotCond):
        return _push_negations(cond.arg, not negate)
    if isinstance(cond, AndCond):
        parts = tuple(_push_negations(p, negate) for p in cond.parts)
        return OrCond(parts) if negate else AndCond(parts)
    if isinstance(cond, OrCond):
        parts = tuple(_push_negations(p, negate) for p in cond.parts)
        return AndCond(parts) if negate else OrCond(parts)
    raise TypeError("not a condition: %r" % (cond,))


def _instantiate(cond: Condition, binding, index) -> GroundCondition:
    return _instantiate_condition(_push_negations(cond), binding, index)


def _ground_atoms_of(predicate_name, parameters, objects_by_type):
    pools = [objects_by_type.get(t, ()) for _, t in parameters]
    for combo in itertools.product(*pools):
        yield ground_atom_key(predicate_name, tuple(combo))


def _complementary(c1: Condition | None, c2: Condition | None) -> bool:
    if c1 is None or c2 is None:
        return False
    return c1 == _push_negations(NotCond(c2)) or c2 == _push_negations(NotCond(c1))


def ground(domain: Domain, problem: Problem) -> GroundedProblem:
    """Instantiate schemas, stratify axioms, and prune unreachable actions."""
    parents = domain.type_parents()
    objects = tuple(domain.constants) + tuple(problem.objects)

    objects_by_type: dict[str, list[str]] = {}
    for name, type_name in objects:
        for anc in type_ancestors(type_name, parents):
            objects_by_type.setdefault(anc, []).append(name)
    for pool in objects_by_type.values():
        pool.sort()

    atoms: list[str] = []
    index: dict[str, int] = {}
    for pred in domain.predicates:
        for key in _ground_atoms_of(pred.name, pred.parameters, objects_by_type):
            if key not in index:
                index[key] = len(atoms)
                atoms.append(key)
    n_base = len(atoms)
    for d in domain.derived:
        for key in _ground_atoms_of(d.name, d.parameters, objects_by_type):
            if key not in index:
                index[key] = len(atoms)
                atoms.append(key)

    strata_order = _stratify(domain)
    axioms_by_name: dict[str, list[GroundAxiom]] = {d.name: [] for d in domain.derived}
    for d in domain.derived:
        for binding in _bindings(d.parameters, objects_by_type, distinct=False):
            head_args = tuple(binding[v] for v, _ in d.parameters)
            head_bit = index[ground_atom_key(d.name, head_args)]
            body = _instantiate(d.body, binding, index)
            axioms_by_name[d.name].append(GroundAxiom(head_bit, body))
    strata = tuple(
        tuple(ax for name in level for ax in axioms_by_name[name])
        for level in strata_order
    )

    ground_actions: list[GroundAction] = []
    for schema in domain.actions:
        for binding in _bindings(schema.parameters, objects_by_type, distinct=True):
            args = tuple(binding[v] for v, _ in schema.parameters)
            name = "(%s)" % " ".join((schema.name,) + args) if args else "(%s)" % schema.name
            precondition = _instantiate(schema.precondition, binding, index)
            outcomes = []
            for outcome in schema.outcomes:
                ground_effects = []
                for eff in outcome:
                    cond = None if eff.condition is None else _instantiate(eff.condition, binding, index)
                    add = 0
                    for atom in eff.add:
                        key = ground_atom_key(atom.predicate,
                                              tuple(binding.get(a, a) for a in atom.args))
                        if key not in index:
                            raise GroundingError("effect of %s touches ill-typed atom %r" % (name, key))
                        add |= 1 << index[key]
                    delete = 0
                    for atom in eff.delete:
                        key = ground_atom_key(atom.predicate,
                                              tuple(binding.get(a, a) for a in atom.args))
                        if key not in index:
                            raise GroundingError("effect of %s touches ill-typed atom %r" % (name, key))
                        delete |= 1 << index[key]
                    ground_effects.append(GroundEffect(cond, add, delete))
                _check_outcome_conflicts(name, ground_effects)
                outcomes.append(tuple(ground_effects))
            ground_actions.append(GroundAction(name, precondition, tuple(outcomes)))

    ground_actions.sort(key=lambda a: a.name)
    init_mask = 0
    for atom in problem.init:
        init_mask |= 1 << index[ground_atom_key(atom.predicate, atom.args)]
    kept = _prune_unreachable(ground_actions, init_mask, n_base, len(atoms))
    goal = _instantiate(problem.goal, {}, index)
    return GroundedProblem(domain, problem, tuple(atoms), n_base, index,
                           tuple(kept), strata, init_mask, goal)


def _check_outcome_conflicts(name: str, effects: list[GroundEffect]) -> None:
    adders: dict[int, list[GroundCondition | None]] = {}
    deleters: dict[int, list[GroundCondition | None]] = {}
    for eff in effects:
        for store, mask in ((adders, eff.add_mask), (deleters, eff.del_mask)):
            bit = 0
            rest = mask
            while rest:
                if rest & 1:
                    store.setdefault(bit, []).append(eff.condition)
                rest >>= 1
                bit += 1
    for bit in adders.keys() & deleters.keys():
        for add_cond in adders[bit]:
            for del_cond in deleters[bit]:
                if not _g_complementary(add_cond, del_cond):
                    raise GroundingError(
                        "action %s both adds and deletes the same atom in one outcome" % name)


def _g_complementary(c1: GroundCondition | None, c2: GroundCondition | None) -> bool:
    if c1 is None or c2 is None:
        return False
    if isinstance(c1, GLit) and isinstance(c2, GLit):
        return c1.bit == c2.bit and c1.positive != c2.positive
    return _g_negate(c1) == c2 or _g_negate(c2) == c1


def _g_negate(cond: GroundCondition) -> GroundCondition:
    if isinstance(cond, GLit):
        return GLit(cond.bit, not cond.positive)
    if isinstance(cond, GAnd):
        return GOr(tuple(_g_negate(p) for p in cond.parts))
    if isinstance(cond, GOr):
        return GAnd(tuple(_g_negate(p) for p in cond.parts))
    raise TypeError


def _required_positive_base_bits(cond: GroundCondition, n_base: int) -> set[int]:
    """Base atoms that must be true in every model of the condition."""
    if isinstance(cond, GLit):
        if cond.positive and cond.bit < n_base:
            return {cond.bit}
        return set()
    if isinstance(cond, GAnd):
        out: set[int] = set()
        for p in cond.parts:
            out |= _required_positive_base_bits(p, n_base)
        return out
    return set()  # disjunctions are not required as a whole


def _prune_unreachable(actions, init_mask: int, n_base: int, n_atoms: int):
    """Delete-relaxation reachability: keep actions that can ever fire."""
    reachable = {i for i in range(n_base) if init_mask >> i & 1}
    required = {a.name: _required_positive_base_bits(a.precondition, n_base) for a in actions}
    adds: dict[str, set[int]] = {}
    for a in actions:
        bits: set[int] = set()
        for outcome in a.outcomes:
            for eff in outcome:
                mask = eff.add_mask
                bit = 0
                while mask:
                    if mask & 1:
                        bits.add(bit)
                    mask >>= 1
                    bit += 1
        adds[a.name] = bits
    fired: set[str] = set()
    changed = True
    while changed:
        changed = False
        for a in actions:
            if a.name in fired:
                continue
            if required[a.name] <= reachable:
                fired.add(a.name)
                new_bits = adds[a.name] - reachable
                if new_bits:
                    reachable |= new_bits
                changed = True
    return [a for a in actions if a.name in fired]


def _stratify(domain: Domain) -> tuple[tuple[str, ...], ...]:
    """Order derived predicates so negation only looks at lower strata."""
    derived_names = {d.name for d in domain.derived}
    if not derived_names:
        return ()

    pos_deps: dict[str, set[str]] = {name: set() for name in derived_names}
    neg_deps: dict[str, set[str]] = {name: set() for name in derived_names}

    def walk(cond: Condition, head: str, negated: bool) -> None:
        if isinstance(cond, AtomCond):
            if cond.predicate in derived_names:
                (neg_deps if negated else pos_deps)[head].add(cond.predicate)
        elif isinstance(cond, NotCond):
            walk(cond.arg, head, not negated)
        elif isinstance(cond, (AndCond, OrCond)):
            for part in cond.parts:
                walk(part, head, negated)

    for d in domain.derived:
        walk(d.body, d.name, False)

    level = {name: 0 for name in derived_names}
    for _ in range(len(derived_names) + 1):
        changed = False
        for head in derived_names:
            for dep in pos_deps[head]:
                if level[head] < level[dep]:
                    level[head] = level[dep]
                    changed = True
            for dep in neg_deps[head]:
                if level[head] < level[dep] + 1:
                    level[head] = level[dep] + 1
                    changed = True
        if not changed:
            break
    else:
        raise GroundingError("derived predicates are not stratifiable "
                             "(negation through a cycle)")

    # Positive cycles share a level; negative edges inside one level are bugs.
    for head in derived_names:
        for dep in neg_deps[head]:
            if level[head] == level[dep]:
                raise GroundingError("derived predicates are not stratifiable "
                                     "(negation through a cycle)")

    by_level: dict[int, list[str]] = {}
    for name, lvl in level.items():
        by_level.setdefault(lvl, []).append(name)
    return tuple(tuple(sorted(by_level[lvl])) for lvl in sorted(by_level))
