"""Desk-scale planners: blind/h-add forward search and two policy solvers.

Everything is deterministic: ground actions are iterated in name order and
queues break ties by insertion, so node counts and solutions are
reproducible across runs.
"""

from __future__ import annotations

import heapq
import time
from collections import deque
from dataclasses import dataclass, field

from .pddl import GroundedProblem
from .pddl.grounding import GAnd, GLit

DEFAULT_NODE_CAP = 10 ** 6
DEFAULT_TIMEOUT_S = 60.0


class ResourceLimitError(RuntimeError):
    def __init__(self, kind: str, limit):
        self.kind = kind
        self.limit = limit
        super().__init__("%s limit exceeded (%s)" % (kind, limit))


class SolverError(ValueError):
    pass


@dataclass
class PlanResult:
    plan: list[str] | None  # ground action names; None when unsolvable
    expanded: int
    generated: int
    seconds: float
    optimal: bool

    @property
    def solved(self) -> bool:
        return self.plan is not None


@dataclass
class PolicyResult:
    policy: dict[int, str] | None  # base-state mask -> ground action name
    mode: str
    states_explored: int
    seconds: float

    @property
    def solved(self) -> bool:
        return self.policy is not None


@dataclass
class Limits:
    node_cap: int = DEFAULT_NODE_CAP
    timeout_s: float = DEFAULT_TIMEOUT_S
    _deadline: float = field(init=False, default=0.0)

    def start(self) -> None:
        self._deadline = time.monotonic() + self.timeout_s

    def check_time(self) -> None:
        if time.monotonic() > self._deadline:
            raise ResourceLimitError("time", self.timeout_s)

    def check_nodes(self, n: int) -> None:
        if n > self.node_cap:
            raise ResourceLimitError("node", self.node_cap)


# ----------------------------------------------------------------- classical

def solve_classical(gp: GroundedProblem, heuristic: str = "blind",
                    node_cap: int = DEFAULT_NODE_CAP,
                    timeout_s: float = DEFAULT_TIMEOUT_S) -> PlanResult:
    """Forward search with unit costs.

    ``blind`` is uniform-cost search and returns a shortest plan; ``hadd``
    uses the additive heuristic and is faster but not optimal.
    """
    for action in gp.actions:
        if not action.deterministic:
            raise SolverError("classical search needs a deterministic problem")
    if heuristic not in ("blind", "hadd"):
        raise SolverError("unknown heuristic %r" % heuristic)
    h = (lambda s: 0) if heuristic == "blind" else _hadd_heuristic(gp)

    limits = Limits(node_cap, timeout_s)
    limits.start()
    start = gp.init_mask
    t0 = time.monotonic()
    counter = 0
    open_heap: list[tuple[int, int, int]] = [(h(start), counter, start)]
    g_cost = {start: 0}
    parent: dict[int, tuple[int, str] | None] = {start: None}
    closed: set[int] = set()
    expanded = 0
    generated = 1

    while open_heap:
        f, _, state = heapq.heappop(open_heap)
        if state in closed:
            continue
        if gp.is_goal(state):
            plan = []
            cur = state
            while parent[cur] is not None:
                prev, name = parent[cur]
                plan.append(name)
                cur = prev
            plan.reverse()
            return PlanResult(plan, expanded, generated,
                              time.monotonic() - t0, heuristic == "blind")
        closed.add(state)
        expanded += 1
        limits.check_nodes(expanded)
        if expanded % 256 == 0:
            limits.check_time()
        base_g = g_cost[state]
        for action in gp.applicable(state):
            succ = gp.apply(state, action)[0]
            new_g = base_g + 1
            if succ in closed or g_cost.get(succ, new_g + 1) <= new_g:
                continue
            g_cost[succ] = new_g
            parent[succ] = (state, action.name)
            counter += 1
            generated += 1
            hv = h(succ)
            if hv >= _INF:
                continue
            heapq.heappush(open_heap, (new_g + hv, counter, succ))
    return PlanResult(None, expanded, generated, time.monotonic() - t0, True)


_INF = 10 ** 9


def _hadd_heuristic(gp: GroundedProblem):
    """Additive heuristic: cost of each goal atom under delete relaxation.

    Negative literals and disjunctions are treated as free, which keeps the
    estimate cheap; the mode is flagged non-optimal.
    """
    axioms = [ax for stratum in gp.strata for ax in stratum]

    def positive_bits(cond):
        if isinstance(cond, GLit):
            return [cond.bit] if cond.positive else []
        if isinstance(cond, GAnd):
            out = []
            for p in cond.parts:
                out.extend(positive_bits(p))
            return out
        return []

    action_pre = [(a, positive_bits(a.precondition)) for a in gp.actions]
    axiom_pre = [(ax, positive_bits(ax.body)) for ax in axioms]
    goal_bits = positive_bits(gp.goal)

    def h(state: int) -> int:
        cost: dict[int, int] = {}
        for i in range(len(gp.atoms)):
            if state >> i & 1:
                cost[i] = 0
        ext = gp.extended(state)
        for i in range(len(gp.atoms)):
            if ext >> i & 1:
                cost[i] = 0
        changed = True
        while changed:
            changed = False
            for ax, pre in axiom_pre:
                c = 0
                for bit in pre:
                    if bit not in cost:
                        c = None
                        break
                    c += cost[bit]
                if c is None:
                    continue
                if cost.get(ax.head_bit, _INF) > c:
                    cost[ax.head_bit] = c
                    changed = True
            for action, pre in action_pre:
                c = 1
                for bit in pre:
                    if bit not in cost:
                        c = None
                        break
                    c += cost[bit]
                if c is None:
                    continue
                for outcome in action.outcomes:
                    for eff in outcome:
                        mask = eff.add_mask
                        bit = 0
                        while mask:
                            if mask & 1 and cost.get(bit, _INF) > c:
                                cost[bit] = c
                                changed = True
                            mask >>= 1
                            bit += 1
        total = 0
        for bit in goal_bits:
            if bit not in cost:
                return _INF
            total += cost[bit]
        return total

    return h


# ---------------------------------------------------------------- state space

def explore(gp: GroundedProblem, node_cap: int = DEFAULT_NODE_CAP,
            timeout_s: float = DEFAULT_TIMEOUT_S) -> dict[int, list[tuple[str, tuple[int, ...]]]]:
    """Reachable states with their labelled successor lists."""
    limits = Limits(node_cap, timeout_s)
    limits.start()
    graph: dict[int, list[tuple[str, tuple[int, ...]]]] = {}
    queue = deque([gp.init_mask])
    seen = {gp.init_mask}
    while queue:
        state = queue.popleft()
        limits.check_nodes(len(graph) + 1)
        if len(graph) % 512 == 0:
            limits.check_time()
        edges = []
        for action in gp.applicable(state):
            succs = tuple(gp.apply(state, action))
            edges.append((action.name, succs))
            for succ in succs:
                if succ not in seen:
                    seen.add(succ)
                    queue.append(succ)
        graph[state] = edges
    return graph


# --------------------------------------------------------------- FOND strong

def solve_fond_strong(gp: GroundedProblem, node_cap: int = DEFAULT_NODE_CAP,
                      timeout_s: float = DEFAULT_TIMEOUT_S) -> PolicyResult:
    """Backward fixpoint over strong preimages.

    A state enters the winning set when some action sends every outcome
    into it, so every execution of the extracted policy reaches the goal in
    at most as many steps as there are states.
    """
    t0 = time.monotonic()
    graph = explore(gp, node_cap, timeout_s)
    goals = {s for s in graph if gp.is_goal(s)}
    chosen: dict[int, str] = {}
    winning = set(goals)
    changed = True
    while changed:
        changed = False
        for state in sorted(graph):
            if state in winning:
                continue
            for name, succs in graph[state]:
                if all(s in winning for s in succs):
                    winning.add(state)
                    chosen[state] = name
                    changed = True
                    break
    seconds = time.monotonic() - t0
    if gp.init_mask not in winning:
        return PolicyResult(None, "strong", len(graph), seconds)
    policy = _restrict_to_reachable(gp, graph, chosen, goals)
    return PolicyResult(policy, "strong", len(graph), seconds)


def solve_fond_strong_cyclic(gp: GroundedProblem, node_cap: int = DEFAULT_NODE_CAP,
                             timeout_s: float = DEFAULT_TIMEOUT_S) -> PolicyResult:
    """Elimination fixpoint for trial-and-error policies.

    Starting from every applicable state/action pair, alternately drop pairs
    that can step outside the candidate set and pairs whose state cannot
    reach the goal inside it, until stable.  The extracted policy picks, per
    state, the action on an optimistic shortest path, so every retained
    state keeps a path to the goal under the policy itself.
    """
    t0 = time.monotonic()
    graph = explore(gp, node_cap, timeout_s)
    goals = {s for s in graph if gp.is_goal(s)}
    pairs: dict[int, dict[str, tuple[int, ...]]] = {
        s: dict(graph[s]) for s in graph if s not in goals}

    while True:
        alive = goals | {s for s, acts in pairs.items() if acts}
        dropped = False
        for state in sorted(pairs):
            for name in sorted(pairs[state]):
                if any(succ not in alive for succ in pairs[state][name]):
                    del pairs[state][name]
                    dropped = True
        connected = set(goals)
        grew = True
        while grew:
            grew = False
            for state, acts in pairs.items():
                if state in connected:
                    continue
                for succs in acts.values():
                    if any(s in connected for s in succs):
                        connected.add(state)
                        grew = True
                        break
        for state in sorted(pairs):
            if state not in connected and pairs[state]:
                pairs[state].clear()
                dropped = True
        if not dropped:
            break

    seconds = time.monotonic() - t0
    if gp.init_mask not in goals and not pairs.get(gp.init_mask):
        return PolicyResult(None, "strong-cyclic", len(graph), seconds)

    distance = {s: 0 for s in goals}
    frontier = True
    while frontier:
        frontier = False
        for state in sorted(pairs):
            if not pairs[state]:
                continue
            best = min(
                (1 + min((distance[succ] for succ in succs if succ in distance),
                         default=_INF))
                for succs in pairs[state].values()
            )
            if best < distance.get(state, _INF):
                distance[state] = best
                frontier = True

    chosen: dict[int, str] = {}
    for state, acts in pairs.items():
        if not acts:
            continue
        best_name, best_d = None, _INF
        for name in sorted(acts):
            d = 1 + min((distance.get(succ, _INF) for succ in acts[name]), default=_INF)
            if d < best_d:
                best_name, best_d = name, d
        if best_name is not None and best_d < _INF:
            chosen[state] = best_name

    policy = _restrict_to_reachable(gp, graph, chosen, goals)
    return PolicyResult(policy, "strong-cyclic", len(graph), seconds)


def _restrict_to_reachable(gp: GroundedProblem, graph, chosen: dict[int, str],
                           goals: set[int]) -> dict[int, str]:
    """Keep only the policy entries reachable when following the policy."""
    policy: dict[int, str] = {}
    queue = deque([gp.init_mask])
    seen = {gp.init_mask}
    while queue:
        state = queue.popleft()
        if state in goals:
            continue
        name = chosen[state]
        policy[state] = name
        succs = dict(graph[state])[name]
        for succ in succs:
            if succ not in seen:
                seen.add(succ)
                queue.append(succ)
    return policy


# -------------------------------------------------------------------- output

def plan_text(plan: list[str]) -> str:
    return "".join(name + "\n" for name in plan)


def parse_plan_text(text: str) -> list[str]:
    plan = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith("(") and line.endswith(")"):
            line = line[1:-1]
        plan.append("(%s)" % " ".join(line.split()))
    return plan


def policy_to_json(gp: GroundedProblem, policy: dict[int, str]) -> str:
    import json

    rows = [{"state": sorted(gp.atom_set(state, include_derived=False)),
             "action": name}
            for state, name in sorted(policy.items())]
    return json.dumps(rows, indent=2) + "\n"


def policy_from_json(gp: GroundedProblem, text: str) -> dict[int, str]:
    import json

    policy = {}
    for row in json.loads(text):
        mask = gp.mask_of(row["state"])
        policy[mask] = row["action"]
    return policy
