"""Builders for common goal patterns and their brute-force semantic oracles.

Each pattern row produces one past-time formula.  ``oracle_check`` decides
the same property by quantifying over trace positions directly, so tests can
compare the two routes without sharing any evaluation code.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ppltl import (
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
    Trace,
    Truth,
    WeakYesterday,
    Yesterday,
    children,
    parse_formula,
)

#: Largest bound accepted for patterns that unroll nested Y/WY chains.
MAX_CHAIN = 32


class PatternError(ValueError):
    """Bad pattern name, arity, or bounds."""


@dataclass(frozen=True)
class PatternSpec:
    name: str
    args: tuple[Formula, ...] = ()
    bounds: tuple[int, ...] = ()

    def __post_init__(self):
        if self.name not in _ROWS:
            raise PatternError("unknown pattern %r" % self.name)
        row = _ROWS[self.name]
        if len(self.args) != row.n_args:
            raise PatternError("%s takes %d formula argument(s), got %d"
                               % (self.name, row.n_args, len(self.args)))
        if len(self.bounds) != row.n_bounds:
            raise PatternError("%s takes %d bound(s), got %d"
                               % (self.name, row.n_bounds, len(self.bounds)))
        for n in self.bounds:
            if n < 0:
                raise PatternError("bounds must be nonnegative")
            if n + 1 > MAX_CHAIN:
                raise PatternError("bound %d exceeds the chain cap %d" % (n, MAX_CHAIN))
        if self.name == "hold-during" and self.bounds[0] > self.bounds[1]:
            raise PatternError("hold-during requires n1 <= n2")
        for arg in self.args:
            if not _propositional(arg):
                raise PatternError("pattern arguments must be propositional, got %s" % arg)
        if row.atoms_only:
            for arg in self.args:
                if not isinstance(arg, Atom):
                    raise PatternError("%s takes atomic arguments, got %s" % (self.name, arg))


def _propositional(f: Formula) -> bool:
    if isinstance(f, (Yesterday, WeakYesterday, Since, Once, Historically)):
        return False
    if isinstance(f, Start):
        return False
    return all(_propositional(c) for c in children(f))


def _y_chain(f: Formula, n: int) -> Formula:
    for _ in range(n):
        f = Yesterday(f)
    return f


def _wy_chain(f: Formula, n: int) -> Formula:
    for _ in range(n):
        f = WeakYesterday(f)
    return f


def _or_all(parts: list[Formula]) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def _and_all(parts: list[Formula]) -> Formula:
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


# ------------------------------------------------------------- formula side

def _b_at_end(t):
    return t


def _b_always(t):
    return Historically(t)


def _b_sometime(t):
    return Once(t)


def _b_sometime_after(t1, t2):
    return Not(Since(Not(t2), And(t1, Not(t2))))


def _b_sometime_before(t1, t2):
    return Historically(Implies(Once(And(t1, Historically(Or(t1, Not(t2))))), Yesterday(t2)))


def _b_at_most_once(t):
    return Historically(Implies(t, WeakYesterday(Historically(Not(t)))))


def _b_hold_during(n1, n2, t):
    early = _or_all([And(t, _y_chain(START, i)) for i in range(n1 + 1)])
    within = _and_all([Historically(Or(t, _wy_chain(Yesterday(TRUE), i)))
                       for i in range(n1 + 1, n2 + 1)])
    return Or(early, within)


def _b_hold_after(n, t):
    return _or_all([And(t, _y_chain(START, i)) for i in range(n + 2)])


def _b_init(x):
    return Once(And(x, START))


def _b_existence(x):
    return Once(x)


def _b_absence(x):
    return Not(Once(x))


def _b_responded_existence(x, y):
    return Implies(Once(x), Once(y))


def _b_response(x, y):
    return Not(Since(Not(y), And(x, Not(y))))


def _b_precedence(x, y):
    return Or(Once(And(x, Historically(Or(x, Not(y))))), Historically(Not(y)))


def _b_succession(x, y):
    return And(_b_response(x, y), _b_precedence(x, y))


def _b_chain_precedence(x, y):
    return Historically(Implies(y, Yesterday(x)))


def _b_chain_succession(x, y):
    return And(And(Historically(Implies(Yesterday(x), y)), Not(x)),
               Historically(Implies(Yesterday(Not(x)), Not(y))))


def _b_not_co_existence(x, y):
    return Implies(Once(x), Not(Once(y)))


def _b_not_succession(x, y):
    return Historically(Implies(y, Not(Once(x))))


def _b_not_chain_succession(x, y):
    return Historically(Implies(y, Not(Yesterday(x))))


def _b_choice(x, y):
    return Or(Once(x), Once(y))


def _b_exclusive_choice(x, y):
    return And(Or(Once(x), Once(y)), Not(And(Once(x), Once(y))))


# -------------------------------------------------------------- oracle side

def _sat(f: Formula, state) -> bool:
    # Tiny propositional evaluator, deliberately separate from eval_trace.
    if isinstance(f, Atom):
        return f.name in state
    if isinstance(f, Truth):
        return True
    if isinstance(f, Falsity):
        return False
    if isinstance(f, Not):
        return not _sat(f.arg, state)
    if isinstance(f, And):
        return _sat(f.left, state) and _sat(f.right, state)
    if isinstance(f, Or):
        return _sat(f.left, state) or _sat(f.right, state)
    if isinstance(f, Implies):
        return (not _sat(f.left, state)) or _sat(f.right, state)
    raise PatternError("oracle arguments must be propositional")


def _o_at_end(t, tr):
    return _sat(t, tr[-1])


def _o_always(t, tr):
    return all(_sat(t, s) for s in tr)


def _o_sometime(t, tr):
    return any(_sat(t, s) for s in tr)


def _o_sometime_after(t1, t2, tr):
    n = len(tr)
    return all(not _sat(t1, tr[i]) or any(_sat(t2, tr[j]) for j in range(i, n))
               for i in range(n))


def _o_sometime_before(t1, t2, tr):
    return all(not _sat(t1, tr[i]) or any(_sat(t2, tr[j]) for j in range(i))
               for i in range(len(tr)))


def _o_at_most_once(t, tr):
    return sum(1 for s in tr if _sat(t, s)) <= 1


def _o_hold_during(n1, n2, t, tr):
    last = len(tr) - 1
    return all(_sat(t, tr[i]) for i in range(n1 + 1, min(n2, last) + 1))


def _o_hold_after(n, t, tr):
    last = len(tr) - 1
    return last <= n + 1 and _sat(t, tr[last])


def _o_init(x, tr):
    return _sat(x, tr[0])


def _o_existence(x, tr):
    return any(_sat(x, s) for s in tr)


def _o_absence(x, tr):
    return not any(_sat(x, s) for s in tr)


def _o_responded_existence(x, y, tr):
    return (not any(_sat(x, s) for s in tr)) or any(_sat(y, s) for s in tr)


def _o_response(x, y, tr):
    n = len(tr)
    return all(not _sat(x, tr[i]) or any(_sat(y, tr[j]) for j in range(i, n))
               for i in range(n))


def _o_precedence(x, y, tr):
    return all(not _sat(y, tr[i]) or any(_sat(x, tr[j]) for j in range(i + 1))
               for i in range(len(tr)))


def _o_succession(x, y, tr):
    return _o_response(x, y, tr) and _o_precedence(x, y, tr)


def _o_chain_precedence(x, y, tr):
    return all(not _sat(y, tr[i]) or (i >= 1 and _sat(x, tr[i - 1]))
               for i in range(len(tr)))


def _o_chain_succession(x, y, tr):
    n = len(tr)
    if _sat(x, tr[n - 1]):
        return False
    return all(_sat(x, tr[i]) == _sat(y, tr[i + 1]) for i in range(n - 1))


def _o_not_co_existence(x, y, tr):
    return not (any(_sat(x, s) for s in tr) and any(_sat(y, s) for s in tr))


def _o_not_succession(x, y, tr):
    return all(not _sat(y, tr[i]) or not any(_sat(x, tr[j]) for j in range(i + 1))
               for i in range(len(tr)))


def _o_not_chain_succession(x, y, tr):
    return all(not _sat(y, tr[i]) or not (i >= 1 and _sat(x, tr[i - 1]))
               for i in range(len(tr)))


def _o_choice(x, y, tr):
    return any(_sat(x, s) for s in tr) or any(_sat(y, s) for s in tr)


def _o_exclusive_choice(x, y, tr):
    has_x = any(_sat(x, s) for s in tr)
    has_y = any(_sat(y, s) for s in tr)
    return (has_x or has_y) and not (has_x and has_y)


# ------------------------------------------------------------------ registry

@dataclass(frozen=True)
class _Row:
    n_args: int
    n_bounds: int
    build: object
    oracle: object
    atoms_only: bool = False


_ROWS: dict[str, _Row] = {
    # State-trajectory modalities; arguments may be any propositional formula.
    "at-end": _Row(1, 0, _b_at_end, _o_at_end),
    "always": _Row(1, 0, _b_always, _o_always),
    "sometime": _Row(1, 0, _b_sometime, _o_sometime),
    "sometime-after": _Row(2, 0, _b_sometime_after, _o_sometime_after),
    "sometime-before": _Row(2, 0, _b_sometime_before, _o_sometime_before),
    "at-most-once": _Row(1, 0, _b_at_most_once, _o_at_most_once),
    "hold-during": _Row(1, 2, _b_hold_during, _o_hold_during),
    "hold-after": _Row(1, 1, _b_hold_after, _o_hold_after),
    # Process-constraint templates; arguments are atoms.
    "init": _Row(1, 0, _b_init, _o_init, atoms_only=True),
    "existence": _Row(1, 0, _b_existence, _o_existence, atoms_only=True),
    "absence": _Row(1, 0, _b_absence, _o_absence, atoms_only=True),
    "responded-existence": _Row(2, 0, _b_responded_existence, _o_responded_existence, atoms_only=True),
    "response": _Row(2, 0, _b_response, _o_response, atoms_only=True),
    "precedence": _Row(2, 0, _b_precedence, _o_precedence, atoms_only=True),
    "succession": _Row(2, 0, _b_succession, _o_succession, atoms_only=True),
    "chain-precedence": _Row(2, 0, _b_chain_precedence, _o_chain_precedence, atoms_only=True),
    "chain-succession": _Row(2, 0, _b_chain_succession, _o_chain_succession, atoms_only=True),
    "not-co-existence": _Row(2, 0, _b_not_co_existence, _o_not_co_existence, atoms_only=True),
    "not-succession": _Row(2, 0, _b_not_succession, _o_not_succession, atoms_only=True),
    "not-chain-succession": _Row(2, 0, _b_not_chain_succession, _o_not_chain_succession, atoms_only=True),
    "choice": _Row(2, 0, _b_choice, _o_choice, atoms_only=True),
    "exclusive-choice": _Row(2, 0, _b_exclusive_choice, _o_exclusive_choice, atoms_only=True),
}

PATTERN_NAMES = tuple(_ROWS)


def build_pattern(spec: PatternSpec) -> Formula:
    """The formula for a pattern row, bounds unrolled into Y/WY chains."""
    row = _ROWS[spec.name]
    return row.build(*spec.bounds, *spec.args)


def oracle_check(spec: PatternSpec, trace: Trace) -> bool:
    """Decide the pattern's property by quantifier unrolling over positions."""
    if len(trace) == 0:
        raise ValueError("traces must be non-empty")
    row = _ROWS[spec.name]
    return row.oracle(*spec.bounds, *spec.args, trace)


def parse_pattern(text: str) -> PatternSpec:
    """Parse ``name(arg, ...)`` strings; integer arguments become bounds."""
    text = text.strip()
    open_idx = text.find("(")
    if open_idx < 0 or not text.endswith(")"):
        raise PatternError("pattern must look like name(arg, ...): %r" % text)
    name = text[:open_idx].strip()
    body = text[open_idx + 1:-1]
    parts: list[str] = []
    depth = 0
    in_quote = False
    current = []
    for ch in body:
        if ch == '"':
            in_quote = not in_quote
            current.append(ch)
        elif ch == "(" and not in_quote:
            depth += 1
            current.append(ch)
        elif ch == ")" and not in_quote:
            depth -= 1
            current.append(ch)
        elif ch == "," and depth == 0 and not in_quote:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if current or parts:
        parts.append("".join(current))
    bounds: list[int] = []
    args: list[Formula] = []
    for part in parts:
        part = part.strip()
        if not part:
            raise PatternError("empty pattern argument in %r" % text)
        if part.lstrip("-").isdigit():
            if args:
                raise PatternError("bounds must precede formula arguments")
            bounds.append(int(part))
        else:
            args.append(parse_formula(part))
    return PatternSpec(name, tuple(args), tuple(bounds))
