"""Independent validation of plans and policies.

Every temporal verdict here is produced twice, by the direct trace
evaluator and by the step calculus, and the two must agree; a disagreement
is reported rather than hidden.  Policies over compiled problems can be
projected back into executors for the original problem that carry the
tracked-proposition memory themselves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .compiler import ManglingMap
from .pddl import GroundedProblem
from .planners import ResourceLimitError
from .ppltl import Formula, Trace, eval_trace, initial_sigma, progress_trace, step_sigma


class PlanReplayError(ValueError):
    def __init__(self, index: int, action: str, reason: str):
        self.index = index
        self.action = action
        super().__init__("plan step %d (%s): %s" % (index, action, reason))


class PolicyGapError(ValueError):
    def __init__(self, state):
        self.state = state
        super().__init__("policy is undefined on reached state {%s}" % ", ".join(sorted(state)))


@dataclass
class GoalCheck:
    verdict: bool
    direct: bool
    progressed: bool

    @property
    def agreement(self) -> bool:
        return self.direct == self.progressed


def check_goal(phi: Formula, trace: Trace) -> GoalCheck:
    """Evaluate the goal with both evaluators and report their agreement."""
    direct = eval_trace(phi, trace)
    progressed = progress_trace(phi, trace)[1]
    return GoalCheck(direct and progressed, direct, progressed)


def execute_plan(gp: GroundedProblem, plan: list[str]) -> list[frozenset[str]]:
    """Replay a plan from the initial state; returns the induced trace.

    Trace states contain base and derived atoms.  Raises
    :class:`PlanReplayError` at the first inapplicable or unknown action.
    """
    state = gp.init_mask
    trace = [gp.atom_set(state)]
    for i, name in enumerate(plan):
        action = gp.action_by_name.get(name)
        if action is None:
            raise PlanReplayError(i, name, "no such ground action")
        applicable = {a.name for a in gp.applicable(state)}
        if name not in applicable:
            raise PlanReplayError(i, name, "not applicable")
        successors = gp.apply(state, action)
        if len(successors) != 1:
            raise PlanReplayError(i, name, "nondeterministic action in a plan")
        state = successors[0]
        trace.append(gp.atom_set(state))
    return trace


def project_trace(trace: list[frozenset[str]], mangling: ManglingMap) -> list[frozenset[str]]:
    """Drop the compilation's bookkeeping atoms, keeping original fluents."""
    return [frozenset(a for a in state if a not in mangling.id_set) for state in trace]


class PolicyExecutor:
    """Plays a compiled-problem policy against original-problem histories.

    Feeding the history one state at a time, the executor maintains the
    tracked-proposition assignment itself, reconstructs the compiled state,
    and looks the action up in the policy.
    """

    def __init__(self, policy_atoms: dict[frozenset[str], str], phi: Formula,
                 mangling: ManglingMap, base_atoms: frozenset[str]):
        self._policy = policy_atoms
        self._phi = phi
        self._mangling = mangling
        self._base_atoms = base_atoms
        self.sigma = initial_sigma(phi)

    @classmethod
    def from_policy(cls, gp_compiled: GroundedProblem, policy: dict[int, str],
                    phi: Formula, mangling: ManglingMap,
                    gp_original: GroundedProblem) -> "PolicyExecutor":
        table = {gp_compiled.atom_set(state, include_derived=False): name
                 for state, name in policy.items()}
        base = frozenset(gp_original.atoms[:gp_original.n_base])
        return cls(table, phi, mangling, base)

    def compiled_state(self, state) -> frozenset[str]:
        base = frozenset(state) & self._base_atoms
        memory = frozenset(self._mangling.sigma_id(key)
                           for key, value in self.sigma.items() if value)
        return base | memory

    def advance(self, state) -> str:
        """Consume the next history state and return the action to play."""
        compiled = self.compiled_state(state)
        try:
            action = self._policy[compiled]
        except KeyError:
            raise PolicyGapError(compiled) from None
        self.sigma = step_sigma(self._phi, self.sigma, frozenset(state))
        return action

    def observe(self, state) -> None:
        """Consume a history state without asking for an action."""
        self.sigma = step_sigma(self._phi, self.sigma, frozenset(state))


def project_policy(policy: dict[int, str], gp_compiled: GroundedProblem,
                   phi: Formula, mangling: ManglingMap,
                   gp_original: GroundedProblem) -> PolicyExecutor:
    """Executor for the original problem that shadows the compiled policy."""
    return PolicyExecutor.from_policy(gp_compiled, policy, phi, mangling, gp_original)


@dataclass
class ExecutionReport:
    mode: str
    executions: int
    leaves: int
    states_visited: int
    max_depth: int
    all_leaves_goal: bool
    cycles: list[list[str]]
    verdict: bool
    agreement: bool
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "mode": self.mode,
            "executions": self.executions,
            "leaves": self.leaves,
            "states_visited": self.states_visited,
            "max_depth": self.max_depth,
            "all_leaves_goal": self.all_leaves_goal,
            "cycles": self.cycles,
            "verdict": self.verdict,
            "agreement": self.agreement,
            "failures": self.failures,
        }
        return json.dumps(payload, indent=2) + "\n"


def verify_plan(gp: GroundedProblem, plan: list[str], phi: Formula | None) -> ExecutionReport:
    """Replay one plan; with a temporal goal, check it with both evaluators."""
    failures: list[str] = []
    try:
        trace = execute_plan(gp, plan)
    except PlanReplayError as err:
        return ExecutionReport("classical", 1, 0, 0, 0, False, [], False, True,
                               [str(err)])
    if phi is None:
        verdict = gp.is_goal(_final_mask(gp, plan))
        agreement = True
        if not verdict:
            failures.append("final state does not satisfy the goal")
    else:
        check = check_goal(phi, trace)
        verdict = check.verdict
        agreement = check.agreement
        if not check.agreement:
            failures.append("direct and progressed verdicts disagree")
        elif not verdict:
            failures.append("trace does not satisfy the goal formula")
    return ExecutionReport("classical", 1, 1, len(trace), len(trace) - 1,
                           verdict, [], verdict, agreement, failures)


def _final_mask(gp: GroundedProblem, plan: list[str]) -> int:
    state = gp.init_mask
    for name in plan:
        state = gp.apply(state, gp.action_by_name[name])[0]
    return state


def verify_policy(policy: dict[int, str], gp_compiled: GroundedProblem,
                  phi: Formula, mangling: ManglingMap, mode: str,
                  state_cap: int = 10 ** 4, path_cap: int = 10 ** 5) -> ExecutionReport:
    """Exhaustively walk the policy's execution tree on the compiled problem.

    Strong mode demands an acyclic tree whose every leaf is a goal state;
    strong-cyclic mode allows cycles but demands every reachable state keeps
    a policy path to the goal.  Every enumerated leaf trace is projected
    onto the original fluents and checked with both goal evaluators.
    """
    if mode not in ("strong", "strong-cyclic"):
        raise ValueError("mode must be strong or strong-cyclic")
    failures: list[str] = []

    # Policy-reachable subgraph.
    edges: dict[int, tuple[int, ...]] = {}
    goals: set[int] = set()
    gaps: set[int] = set()
    stack = [gp_compiled.init_mask]
    seen = {gp_compiled.init_mask}
    while stack:
        state = stack.pop()
        if len(seen) > state_cap:
            raise ResourceLimitError("state", state_cap)
        if gp_compiled.is_goal(state):
            goals.add(state)
            continue
        name = policy.get(state)
        if name is None:
            gaps.add(state)
            continue
        action = gp_compiled.action_by_name.get(name)
        if action is None or not any(a.name == name for a in gp_compiled.applicable(state)):
            failures.append("policy action %s is not applicable in a reached state" % name)
            gaps.add(state)
            continue
        succs = tuple(gp_compiled.apply(state, action))
        edges[state] = succs
        for succ in succs:
            if succ not in seen:
                seen.add(succ)
                stack.append(succ)

    if gaps:
        failures.append("policy leaves %d reachable non-goal state(s) unhandled" % len(gaps))

    cycles = _cycle_states(edges)
    cycle_repr = [sorted(gp_compiled.atom_set(s, include_derived=False))
                  for s in sorted(cycles)]

    proper = _backward_reach(edges, goals)
    not_proper = [s for s in edges if s not in proper]
    if not_proper:
        failures.append("%d state(s) cannot reach the goal under the policy" % len(not_proper))

    # Enumerate execution paths (each state at most once per path); with an
    # acyclic policy this is exactly the set of executions.
    executions = 0
    leaves: set[int] = set()
    max_depth = 0
    depth_cap = 4 * max(len(seen), 1)
    agreement = True
    leaf_check_failures = 0

    path = [gp_compiled.init_mask]
    on_path = {gp_compiled.init_mask}

    def walk() -> None:
        nonlocal executions, max_depth, agreement, leaf_check_failures
        state = path[-1]
        max_depth = max(max_depth, len(path) - 1)
        if len(path) - 1 > depth_cap:
            raise ResourceLimitError("depth", depth_cap)
        if state in goals:
            executions += 1
            if executions > path_cap:
                raise ResourceLimitError("path", path_cap)
            leaves.add(state)
            trace = [gp_compiled.atom_set(s) for s in path]
            check = check_goal(phi, project_trace(trace, mangling))
            if not check.agreement:
                agreement = False
            if not check.verdict:
                leaf_check_failures += 1
            return
        if state in gaps:
            executions += 1
            return
        for succ in edges[state]:
            if succ in on_path:
                continue  # cycle; the graph pass accounts for it
            path.append(succ)
            on_path.add(succ)
            walk()
            on_path.discard(succ)
            path.pop()

    walk()
    if leaf_check_failures:
        failures.append("%d leaf trace(s) do not satisfy the goal formula"
                        % leaf_check_failures)
    if not agreement:
        failures.append("direct and progressed verdicts disagree")

    all_leaves_goal = not gaps and bool(leaves)
    verdict = not failures
    if mode == "strong" and cycles:
        verdict = False
        failures.append("policy admits infinite executions (cycle reachable)")
    report = ExecutionReport(mode, executions, len(leaves), len(seen), max_depth,
                             all_leaves_goal, cycle_repr, verdict, agreement, failures)
    return report


def _cycle_states(edges: dict[int, tuple[int, ...]]) -> set[int]:
    """States on some cycle of the policy graph (iterative Tarjan)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    result: set[int] = set()
    counter = 0

    for root in edges:
        if root in index:
            continue
        work = [(root, iter(edges.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in edges:
                    continue
                if succ not in index:
                    index[succ] = low[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(edges.get(succ, ()))))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1:
                    result.update(component)
                elif component and component[0] in edges.get(component[0], ()):
                    result.add(component[0])
    return result


def _backward_reach(edges: dict[int, tuple[int, ...]], goals: set[int]) -> set[int]:
    reached = set(goals)
    changed = True
    while changed:
        changed = False
        for state, succs in edges.items():
            if state not in reached and any(s in reached for s in succs):
                reached.add(state)
                changed = True
    return reached
