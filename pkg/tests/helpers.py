"""Shared test utilities: formula/trace generators and search oracles."""

from __future__ import annotations

import itertools
import random
from collections import deque

from pastplan.ppltl import (
    FALSE,
    START,
    TRUE,
    And,
    Atom,
    Formula,
    Historically,
    Implies,
    Not,
    Once,
    Or,
    Since,
    WeakYesterday,
    Yesterday,
)

UNARY = (Not, Yesterday, WeakYesterday, Once, Historically)
BINARY = (And, Or, Implies, Since)


def random_formula(rng: random.Random, atoms: tuple[str, ...], depth: int) -> Formula:
    """Uniform-ish random formula of operator depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.25:
        leaf = rng.randrange(len(atoms) + 3)
        if leaf < len(atoms):
            return Atom(atoms[leaf])
        return (TRUE, FALSE, START)[leaf - len(atoms)]
    if rng.random() < 0.5:
        op = UNARY[rng.randrange(len(UNARY))]
        return op(random_formula(rng, atoms, depth - 1))
    op = BINARY[rng.randrange(len(BINARY))]
    return op(random_formula(rng, atoms, depth - 1),
              random_formula(rng, atoms, depth - 1))


def random_trace(rng: random.Random, atoms: tuple[str, ...], max_len: int) -> list[frozenset[str]]:
    length = rng.randint(1, max_len)
    return [frozenset(p for p in atoms if rng.random() < 0.5) for _ in range(length)]


def all_traces(atoms: tuple[str, ...], max_len: int):
    """Every trace over the given atoms with length 1..max_len."""
    states = [frozenset(s) for n in range(len(atoms) + 1)
              for s in itertools.combinations(atoms, n)]
    for length in range(1, max_len + 1):
        for combo in itertools.product(states, repeat=length):
            yield list(combo)


def enumerate_formulas(leaves: tuple[Formula, ...], unary, binary, depth: int) -> list[Formula]:
    """Every formula buildable from the leaves with operator depth <= depth."""
    by_depth = [list(leaves)]
    for _ in range(depth):
        prev = by_depth[-1]
        nxt = list(prev)
        for op in unary:
            nxt.extend(op(f) for f in prev)
        for op in binary:
            nxt.extend(op(f, g) for f in prev for g in prev)
        by_depth.append(nxt)
    out, seen = [], set()
    for f in by_depth[-1]:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def bfs_optimal_plan(gp, start_mask=None):
    """Breadth-first search oracle: optimal plan or None, independent of the planners."""
    start = gp.init_mask if start_mask is None else start_mask
    if gp.is_goal(start):
        return []
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for action in gp.applicable(state):
            for succ in gp.apply(state, action):
                if succ in parent:
                    continue
                parent[succ] = (state, action.name)
                if gp.is_goal(succ):
                    plan = []
                    cur = succ
                    while parent[cur] is not None:
                        prev, name = parent[cur]
                        plan.append(name)
                        cur = prev
                    plan.reverse()
                    return plan
                queue.append(succ)
    return None


def reachable_states(gp, cap: int = 10 ** 6) -> set[int]:
    """All states reachable from the initial state under any action."""
    seen = {gp.init_mask}
    queue = deque([gp.init_mask])
    while queue:
        state = queue.popleft()
        for action in gp.applicable(state):
            for succ in gp.apply(state, action):
                if succ not in seen:
                    if len(seen) >= cap:
                        raise RuntimeError("state cap exceeded")
                    seen.add(succ)
                    queue.append(succ)
    return seen
