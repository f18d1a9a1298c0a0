"""Finite-trace semantics and the single-step evaluation calculus.

Two independent ways to decide whether a trace satisfies a formula live
here.  :func:`eval_trace` is the reference evaluator: a literal recursion
over (formula, position) straight from the satisfaction relation.
:func:`progress_trace` never looks at the past; it carries a boolean
assignment ``sigma`` over the tracked propositions (one per ``Y`` argument
and one per ``S`` subformula) and updates it state by state with
:func:`val`.  Both must always agree, and the test suite checks that they
do.
"""

from __future__ import annotations

from collections.abc import Sequence, Set
from functools import cache

from .nodes import (
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
    children,
    expand,
    format_formula,
)

State = Set[str]
Trace = Sequence[State]
SigmaAssignment = dict[str, bool]


class MissingSigmaKeyError(KeyError):
    """An assignment lacks a proposition the evaluation needs."""


def _check_trace(trace: Trace) -> None:
    if len(trace) == 0:
        raise ValueError("traces must be non-empty")


def _holds(f: Formula, trace: Trace, i: int) -> bool:
    if isinstance(f, Atom):
        return f.name in trace[i]
    if isinstance(f, Truth):
        return True
    if isinstance(f, Falsity):
        return False
    if isinstance(f, Start):
        return i == 0
    if isinstance(f, Not):
        return not _holds(f.arg, trace, i)
    if isinstance(f, And):
        return _holds(f.left, trace, i) and _holds(f.right, trace, i)
    if isinstance(f, Or):
        return _holds(f.left, trace, i) or _holds(f.right, trace, i)
    if isinstance(f, Implies):
        return (not _holds(f.left, trace, i)) or _holds(f.right, trace, i)
    if isinstance(f, Yesterday):
        return i >= 1 and _holds(f.arg, trace, i - 1)
    if isinstance(f, WeakYesterday):
        return i == 0 or _holds(f.arg, trace, i - 1)
    if isinstance(f, Once):
        return any(_holds(f.arg, trace, k) for k in range(i + 1))
    if isinstance(f, Historically):
        return all(_holds(f.arg, trace, k) for k in range(i + 1))
    if isinstance(f, Since):
        for k in range(i, -1, -1):
            if _holds(f.right, trace, k):
                if all(_holds(f.left, trace, j) for j in range(k + 1, i + 1)):
                    return True
        return False
    raise TypeError("not a formula node: %r" % (f,))


def eval_trace(f: Formula, trace: Trace) -> bool:
    """Truth of ``f`` at the last instant, by direct recursion on positions."""
    _check_trace(trace)
    return _holds(f, trace, len(trace) - 1)


@cache
def subformulas(f: Formula) -> tuple[Formula, ...]:
    """All subformulas of the desugared formula, post-order, deduplicated."""
    ordered: list[Formula] = []
    seen: set[str] = set()

    def walk(g: Formula) -> None:
        for c in children(g):
            walk(c)
        key = format_formula(g)
        if key not in seen:
            seen.add(key)
            ordered.append(g)

    walk(expand(f))
    return tuple(ordered)


@cache
def tracked_formulas(f: Formula) -> tuple[tuple[str, Formula], ...]:
    """The tracked propositions of ``f`` as (key, formula-to-reevaluate) pairs.

    One entry per ``Y`` subformula (keyed by its argument) and one per ``S``
    subformula (keyed by itself), deduplicated by the key, in subformula
    post-order.
    """
    ordered: list[tuple[str, Formula]] = []
    seen: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, Yesterday):
            key, tracked = format_formula(g.arg), g.arg
        elif isinstance(g, Since):
            key, tracked = format_formula(g), g
        else:
            continue
        if key not in seen:
            seen.add(key)
            ordered.append((key, tracked))
    return tuple(ordered)


def sigma_propositions(f: Formula) -> tuple[str, ...]:
    """Ordered keys of the tracked propositions of ``f``."""
    return tuple(key for key, _ in tracked_formulas(f))


def initial_sigma(f: Formula) -> SigmaAssignment:
    """The all-false assignment every run starts from."""
    return {key: False for key, _ in tracked_formulas(f)}


def _val(f: Formula, sigma: SigmaAssignment, state: State) -> bool:
    # f must be in the core basis (use expand() first).
    if isinstance(f, Atom):
        return f.name in state
    if isinstance(f, Truth):
        return True
    if isinstance(f, Falsity):
        return False
    if isinstance(f, Not):
        return not _val(f.arg, sigma, state)
    if isinstance(f, And):
        return _val(f.left, sigma, state) and _val(f.right, sigma, state)
    if isinstance(f, Or):
        return _val(f.left, sigma, state) or _val(f.right, sigma, state)
    if isinstance(f, Yesterday):
        key = format_formula(f.arg)
        try:
            return sigma[key]
        except KeyError:
            raise MissingSigmaKeyError(key) from None
    if isinstance(f, Since):
        if _val(f.right, sigma, state):
            return True
        if not _val(f.left, sigma, state):
            return False
        key = format_formula(f)
        try:
            return sigma[key]
        except KeyError:
            raise MissingSigmaKeyError(key) from None
    raise TypeError("val needs a core formula, got %r" % (f,))


def val(f: Formula, sigma: SigmaAssignment, state: State) -> bool:
    """Truth of ``f`` from the previous-step assignment and the current state.

    Atoms are read from ``state``; ``Y g`` reads the tracked value of ``g``;
    ``g1 S g2`` is ``val(g2) or (val(g1) and tracked value of g1 S g2)``;
    boolean connectives are evaluated pointwise.
    """
    return _val(expand(f), sigma, state)


def step_sigma(f: Formula, sigma_prev: SigmaAssignment, state: State) -> SigmaAssignment:
    """Advance the assignment one state: every key is re-evaluated via val."""
    return {key: _val(g, sigma_prev, state) for key, g in tracked_formulas(f)}


def progress_trace(f: Formula, trace: Trace) -> tuple[list[SigmaAssignment], bool]:
    """Run the step calculus over the whole trace.

    Returns the assignment history (one entry per trace state, starting with
    the all-false assignment) and the verdict computed from the last
    assignment and the last state, without ever revisiting earlier states.
    """
    _check_trace(trace)
    entries = tracked_formulas(f)
    core = expand(f)
    sigma: SigmaAssignment = {key: False for key, _ in entries}
    history = [dict(sigma)]
    for state in trace[:-1]:
        sigma = {key: _val(g, sigma, state) for key, g in entries}
        history.append(dict(sigma))
    return history, _val(core, sigma, trace[-1])


@cache
def to_pnf(f: Formula) -> Formula:
    """Rewrite so temporal operators occur only inside a previous-step scope.

    ``S``, ``O`` and ``H`` at the surface are unfolded one step, leaving the
    original operator frozen under ``Y``; the result is equivalent on every
    trace and at most a constant factor larger.
    """
    if isinstance(f, (Atom, Truth, Falsity, Start)):
        return f
    if isinstance(f, Not):
        return Not(to_pnf(f.arg))
    if isinstance(f, And):
        return And(to_pnf(f.left), to_pnf(f.right))
    if isinstance(f, Or):
        return Or(to_pnf(f.left), to_pnf(f.right))
    if isinstance(f, Implies):
        return Implies(to_pnf(f.left), to_pnf(f.right))
    if isinstance(f, (Yesterday, WeakYesterday)):
        return f
    if isinstance(f, Since):
        return Or(to_pnf(f.right), And(to_pnf(f.left), Yesterday(f)))
    if isinstance(f, Once):
        return Or(to_pnf(f.arg), Yesterday(f))
    if isinstance(f, Historically):
        # The weak operator is forced at the first instant: H g = !O!g
        # unrolls to g & WY(H g), never g & Y(H g).
        return And(to_pnf(f.arg), WeakYesterday(f))
    raise TypeError("not a formula node: %r" % (f,))


def is_pnf(f: Formula, under_y: bool = False) -> bool:
    """True when every S/O/H node sits inside some Y/WY scope."""
    if isinstance(f, (Since, Once, Historically)) and not under_y:
        return False
    if isinstance(f, (Yesterday, WeakYesterday)):
        return is_pnf(f.arg, True)
    return all(is_pnf(c, under_y) for c in children(f))
