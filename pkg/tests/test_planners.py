"""Planner tests: classical search, strong and strong-cyclic policy solvers."""

import itertools

import pytest

from pastplan.benchmarks import gen_blocksworld
from pastplan.compiler import compile_problem
from pastplan.pddl import ground, parse_domain, parse_problem
from pastplan.planners import (
    ResourceLimitError,
    SolverError,
    explore,
    solve_classical,
    solve_fond_strong,
    solve_fond_strong_cyclic,
)
from pastplan.ppltl import parse_formula

from helpers import bfs_optimal_plan, reachable_states

MINI = """
(define (domain mini)
  (:requirements :strips)
  (:predicates (g) (p))
  (:action achieve
    :parameters ()
    :precondition (p)
    :effect (and (g) (not (p))))
)
"""
MINI_PROB = "(define (problem m) (:domain mini) (:init (p)) (:goal (g)))"

RETRY = """
(define (domain retry)
  (:requirements :strips :non-deterministic)
  (:predicates (done))
  (:action try
    :parameters ()
    :precondition (and)
    :effect (oneof (done) (and)))
)
"""
RETRY_PROB = "(define (problem r) (:domain retry) (:init) (:goal (done)))"

# Three states: fresh, broken, done.  The only way forward can break the
# device, and recovery returns to the start, so no strong solution exists.
RECOVER = """
(define (domain recover)
  (:requirements :strips :non-deterministic)
  (:predicates (fresh) (broken) (done))
  (:action act
    :parameters ()
    :precondition (fresh)
    :effect (oneof (and (done) (not (fresh))) (and (broken) (not (fresh)))))
  (:action recover
    :parameters ()
    :precondition (broken)
    :effect (and (fresh) (not (broken))))
)
"""
RECOVER_PROB = "(define (problem r) (:domain recover) (:init (fresh)) (:goal (done)))"

# Both outcomes make progress, so a strong solution exists.
TWO_STEP = """
(define (domain twostep)
  (:requirements :strips :non-deterministic)
  (:predicates (fresh) (almost) (done))
  (:action act
    :parameters ()
    :precondition (fresh)
    :effect (oneof (and (done) (not (fresh))) (and (almost) (not (fresh)))))
  (:action finish
    :parameters ()
    :precondition (almost)
    :effect (and (done) (not (almost))))
)
"""
TWO_STEP_PROB = "(define (problem t) (:domain twostep) (:init (fresh)) (:goal (done)))"


def grounded(domain_text, problem_text):
    d = parse_domain(domain_text)
    return ground(d, parse_problem(problem_text, d))


def compiled_blocksworld(n_blocks, n_seq, nondet=False):
    d, p, f = gen_blocksworld(n_blocks, n_seq, nondet)
    cp = compile_problem(d, p, f)
    return ground(cp.domain, cp.problem), ground(d, p), f, cp


# ----------------------------------------------------------------- classical

def test_one_step_compiled_goal():
    d = parse_domain(MINI)
    p = parse_problem(MINI_PROB, d)
    cp = compile_problem(d, p, parse_formula("O g"))
    gp = ground(cp.domain, cp.problem)
    result = solve_classical(gp)
    assert result.plan == ["(achieve)"]
    assert result.optimal


def test_contradictory_goal_is_unsolvable():
    d = parse_domain(MINI)
    p = parse_problem(MINI_PROB, d)
    cp = compile_problem(d, p, parse_formula("O g & H !g"))
    gp = ground(cp.domain, cp.problem)
    result = solve_classical(gp)
    assert result.plan is None
    # Cross-check: no reachable state satisfies the compiled goal.
    assert not any(gp.is_goal(s) for s in reachable_states(gp))


def test_four_block_sequence_plan_is_optimal():
    gp, _, _, _ = compiled_blocksworld(4, 3)
    result = solve_classical(gp)
    oracle = bfs_optimal_plan(gp)
    assert result.plan is not None
    assert len(result.plan) == len(oracle) == 4
    assert result.plan == ["(pick-up b2)", "(stack b2 b3)", "(pick-up b1)", "(stack b1 b2)"]


def test_hadd_solves_and_is_flagged_non_optimal():
    gp, _, _, _ = compiled_blocksworld(4, 3)
    result = solve_classical(gp, heuristic="hadd")
    assert result.plan is not None
    assert not result.optimal
    # Still a valid plan reaching the goal.
    state = gp.init_mask
    for name in result.plan:
        state = gp.apply(state, gp.action_by_name[name])[0]
    assert gp.is_goal(state)


def test_blind_plans_match_bfs_oracle_on_small_instances():
    for n_blocks, n_seq in [(2, 2), (3, 2), (3, 3)]:
        gp, _, _, _ = compiled_blocksworld(n_blocks, n_seq)
        result = solve_classical(gp)
        oracle = bfs_optimal_plan(gp)
        assert result.plan is not None and oracle is not None
        assert len(result.plan) == len(oracle)


def test_node_cap_raises():
    gp, _, _, _ = compiled_blocksworld(4, 3)
    with pytest.raises(ResourceLimitError):
        solve_classical(gp, node_cap=2)


def test_classical_refuses_nondeterministic_input():
    gp = grounded(RETRY, RETRY_PROB)
    with pytest.raises(SolverError):
        solve_classical(gp)


def test_deterministic_outputs_are_reproducible():
    gp, _, _, _ = compiled_blocksworld(4, 3)
    first = solve_classical(gp)
    second = solve_classical(gp)
    assert first.plan == second.plan
    assert first.expanded == second.expanded


# -------------------------------------------------------------- FOND: strong

def test_strong_on_deterministic_problem_matches_plan():
    d = parse_domain(MINI)
    p = parse_problem(MINI_PROB, d)
    gp = ground(d, p)
    result = solve_fond_strong(gp)
    assert result.solved
    assert list(result.policy.values()) == ["(achieve)"]


def test_retry_domain_has_no_strong_solution():
    gp = grounded(RETRY, RETRY_PROB)
    assert not solve_fond_strong(gp).solved


def test_recover_domain_strong_unsolvable_but_cyclic_solvable():
    gp = grounded(RECOVER, RECOVER_PROB)
    assert not solve_fond_strong(gp).solved
    cyclic = solve_fond_strong_cyclic(gp)
    assert cyclic.solved
    # The policy must act from the initial state and recover from breakage.
    names = set(cyclic.policy.values())
    assert names == {"(act)", "(recover)"}


def test_two_step_domain_has_strong_solution():
    gp = grounded(TWO_STEP, TWO_STEP_PROB)
    result = solve_fond_strong(gp)
    assert result.solved
    # Every execution terminates in the goal within |S| steps.
    for state, name in result.policy.items():
        assert name in {a.name for a in gp.applicable(state)}


def test_strong_solution_implies_strong_cyclic_solution():
    for domain_text, problem_text in [(TWO_STEP, TWO_STEP_PROB), (MINI, MINI_PROB)]:
        gp = grounded(domain_text, problem_text)
        if solve_fond_strong(gp).solved:
            assert solve_fond_strong_cyclic(gp).solved


# -------------------------------------------------------- FOND: strong-cyclic

def test_retry_until_success_policy():
    gp = grounded(RETRY, RETRY_PROB)
    result = solve_fond_strong_cyclic(gp)
    assert result.solved
    assert result.policy == {gp.init_mask: "(try)"}


def test_cyclic_policy_actions_always_applicable():
    gp, _, _, _ = compiled_blocksworld(3, 3, nondet=True)
    result = solve_fond_strong_cyclic(gp)
    assert result.solved
    for state, name in result.policy.items():
        assert name in {a.name for a in gp.applicable(state)}


def test_unsolvable_answers_cross_checked_by_reachability():
    d = parse_domain(MINI)
    p = parse_problem(MINI_PROB, d)
    cp = compile_problem(d, p, parse_formula("O g & H !g"))
    gp = ground(cp.domain, cp.problem)
    assert not solve_fond_strong(gp).solved
    assert not solve_fond_strong_cyclic(gp).solved
    assert not any(gp.is_goal(s) for s in reachable_states(gp))


# ------------------------------------------------- exhaustive policy oracle

def brute_force_policies(gp, cap=4096):
    """Every total policy over reachable non-goal states."""
    graph = explore(gp)
    states = sorted(s for s in graph if not gp.is_goal(s))
    choice_lists = []
    for s in states:
        names = [name for name, _ in graph[s]]
        if not names:
            return  # dead end state: no total policy exists
        choice_lists.append(names)
    count = 1
    for names in choice_lists:
        count *= len(names)
    assert count <= cap, "state space too large for brute force"
    for combo in itertools.product(*choice_lists):
        yield dict(zip(states, combo)), graph


def is_winning(gp, policy, graph, mode):
    """Execution-tree check of a candidate policy, independent of the solvers."""
    goals = {s for s in graph if gp.is_goal(s)}
    edges = {s: dict(graph[s])[policy[s]] for s in policy}
    # closure
    reachable = {gp.init_mask}
    frontier = [gp.init_mask]
    while frontier:
        s = frontier.pop()
        if s in goals:
            continue
        if s not in edges:
            return False
        for succ in edges[s]:
            if succ not in reachable:
                reachable.add(succ)
                frontier.append(succ)
    if mode == "strong":
        # no cycle reachable: every branch must terminate
        color = {}

        def dfs(s):
            if s in goals:
                return True
            if color.get(s) == 1:
                return False
            if color.get(s) == 2:
                return True
            color[s] = 1
            ok = all(dfs(t) for t in edges[s])
            color[s] = 2
            return ok

        return dfs(gp.init_mask)
    # strong-cyclic surrogate: every reachable state keeps a path to goal
    good = set(goals)
    changed = True
    while changed:
        changed = False
        for s in reachable - good:
            if s in edges and any(t in good for t in edges[s]):
                good.add(s)
                changed = True
    return reachable <= good | goals


@pytest.mark.parametrize("domain_text,problem_text", [
    (RETRY, RETRY_PROB), (RECOVER, RECOVER_PROB), (TWO_STEP, TWO_STEP_PROB)])
@pytest.mark.parametrize("mode", ["strong", "strong-cyclic"])
def test_solver_verdict_matches_policy_enumeration(domain_text, problem_text, mode):
    gp = grounded(domain_text, problem_text)
    solver = solve_fond_strong if mode == "strong" else solve_fond_strong_cyclic
    solver_says = solver(gp).solved
    any_winning = any(is_winning(gp, policy, graph, mode)
                      for policy, graph in brute_force_policies(gp))
    assert solver_says == any_winning


# ------------------------------------------- solver vs exhaustive trace check

def all_bounded_traces(gp, depth):
    """Every trace induced by an action sequence of length <= depth."""
    frontier = [(gp.init_mask, [gp.atom_set(s) for s in (gp.init_mask,)])]
    yield frontier[0][1]
    for _ in range(depth):
        nxt = []
        for state, trace in frontier:
            for action in gp.applicable(state):
                for succ in gp.apply(state, action):
                    extended = trace + [gp.atom_set(succ)]
                    yield extended
                    nxt.append((succ, extended))
        frontier = nxt


@pytest.mark.parametrize("goal_text,expect", [
    ("O g", True),
    ("O g & O p", True),
    ("O g & H !g", False),
    ("H !g", True),          # the empty plan already satisfies it
    ("Y (O g)", False),      # nothing is applicable after g here
    ("O (Y p)", True),
    ("start & O g", False),  # goal requires length 1 but g starts false
])
def test_compiled_solvability_matches_trace_enumeration(goal_text, expect):
    from pastplan.ppltl import eval_trace

    d = parse_domain(MINI)
    p = parse_problem(MINI_PROB, d)
    f = parse_formula(goal_text)
    cp = compile_problem(d, p, f)
    gp = ground(cp.domain, cp.problem)
    solver_says = solve_classical(gp).plan is not None
    oracle_says = any(eval_trace(f, trace)
                      for trace in all_bounded_traces(ground(d, p), 6))
    assert solver_says == oracle_says == expect
