"""Compilation tests: construction shape, constant folding, simulation."""

import random
import time

import pytest

from pastplan.benchmarks import gen_blocksworld
from pastplan.compiler import CompileError, compile_problem, fold_constants
from pastplan.pddl import (
    AndCond,
    AtomCond,
    DerivedPredicate,
    NotCond,
    OrCond,
    TRUE_COND,
    FALSE_COND,
    ground,
    parse_domain,
    parse_problem,
    print_domain,
    print_problem,
)
from pastplan.ppltl import (
    eval_trace,
    initial_sigma,
    parse_formula,
    progress_trace,
    sigma_propositions,
    step_sigma,
    subformulas,
)
from pastplan.validation import project_trace

MINI = """
(define (domain mini)
  (:requirements :strips)
  (:predicates (g) (p))
  (:action achieve
    :parameters ()
    :precondition (p)
    :effect (and (g) (not (p))))
  (:action undo
    :parameters ()
    :precondition (g)
    :effect (and (p) (not (g))))
)
"""
MINI_PROB = "(define (problem m) (:domain mini) (:init (p)) (:goal (g)))"


def mini():
    d = parse_domain(MINI)
    return d, parse_problem(MINI_PROB, d)


def test_compile_once_goal_shape():
    d, p = mini()
    cp = compile_problem(d, p, parse_formula("O g"))
    # one tracked proposition, three derivation rules, goal is the top rule
    assert len(cp.domain.predicates) == len(d.predicates) + 1
    assert len(cp.domain.derived) == 3
    assert cp.problem.goal == AtomCond("val-2")
    sig = [q.name for q in cp.domain.predicates if q.name.startswith("sig-")]
    assert sig == ["sig-2"]
    # the since-rule body folds the constant-true conjunct away
    by_name = {ax.name: ax for ax in cp.domain.derived}
    assert by_name["val-2"].body == OrCond((AtomCond("val-1"), AtomCond("sig-2")))
    # both polarities of the memory update are present in every outcome
    for action in cp.domain.actions:
        for outcome in action.outcomes:
            conds = [eff.condition for eff in outcome if eff.condition is not None]
            assert AtomCond("val-2") in conds
            assert NotCond(AtomCond("val-2")) in conds


def test_compile_bare_atom_goal():
    d, p = mini()
    cp = compile_problem(d, p, parse_formula("g"))
    assert len(cp.domain.predicates) == len(d.predicates)  # no new fluents
    assert len(cp.domain.derived) == 1
    assert cp.problem.goal == AtomCond("val-0")
    # actions carry no extra effects, so plans coincide with plain reachability
    assert cp.domain.actions == d.actions


def test_compile_blocksworld_sequence_counts():
    d, p, f = gen_blocksworld(3, 3)
    cp = compile_problem(d, p, f)
    assert len(subformulas(f)) == 7
    assert len(sigma_propositions(f)) == 2
    assert len(cp.domain.derived) == 7
    assert len(cp.domain.predicates) == len(d.predicates) + 2


def test_action_count_unchanged():
    d, p, f = gen_blocksworld(4, 3, nondet=True)
    cp = compile_problem(d, p, f)
    assert len(cp.domain.actions) == len(d.actions)
    for before, after in zip(d.actions, cp.domain.actions):
        assert before.name == after.name
        assert before.precondition == after.precondition
        assert len(before.outcomes) == len(after.outcomes)


def test_initial_state_preserved_and_sigma_false():
    d, p = mini()
    cp = compile_problem(d, p, parse_formula("O g"))
    assert cp.problem.init == p.init  # closed world: sig atoms are absent
    gp = ground(cp.domain, cp.problem)
    assert not any(a.startswith("sig-") for a in gp.atom_set(gp.init_mask))


def test_undeclared_goal_atom_is_named_in_error():
    d, p = mini()
    with pytest.raises(CompileError, match="nosuch"):
        compile_problem(d, p, parse_formula("O nosuch"))


def test_wrong_arity_goal_atom_rejected():
    d, p = mini()
    with pytest.raises(CompileError):
        compile_problem(d, p, parse_formula('"g extra"'))


def test_mangling_collision_detected():
    d = parse_domain(MINI.replace("(:predicates (g) (p))", "(:predicates (g) (p) (val-0))"))
    p = parse_problem(MINI_PROB, d)
    with pytest.raises(CompileError):
        compile_problem(d, p, parse_formula("O g"))


def test_mangling_map_round_trip():
    d, p, f = gen_blocksworld(3, 3)
    cp = compile_problem(d, p, f)
    from pastplan.compiler import ManglingMap
    again = ManglingMap.from_json(cp.mangling.to_json())
    assert again.entries == cp.mangling.entries


def test_compiled_output_files_parse_back():
    d, p, f = gen_blocksworld(3, 3)
    cp = compile_problem(d, p, f)
    d2 = parse_domain(print_domain(cp.domain))
    p2 = parse_problem(print_problem(cp.problem), d2)
    assert d2 == cp.domain
    assert p2 == cp.problem


def test_goal_objects_promoted_to_constants():
    d, p, f = gen_blocksworld(3, 2)
    cp = compile_problem(d, p, f)
    constant_names = {n for n, _ in cp.domain.constants}
    assert constant_names == {"b1", "b2"}
    assert {n for n, _ in cp.problem.objects} == {"b3"}


# ------------------------------------------------------------ fold_constants

def ax(name, body):
    return DerivedPredicate(name, (), body)


def test_fold_true_conjunct():
    folded = fold_constants((ax("t", TRUE_COND),
                             ax("x", AndCond((AtomCond("t"), AtomCond("q"))))))
    assert folded[1].body == AtomCond("q")


def test_fold_double_negation():
    folded = fold_constants((ax("x", NotCond(NotCond(AtomCond("q")))),))
    assert folded[0].body == AtomCond("q")


def test_fold_false_disjunct():
    folded = fold_constants((ax("f", FALSE_COND),
                             ax("x", OrCond((AtomCond("f"), AtomCond("q"))))))
    assert folded[1].body == AtomCond("q")


def test_fold_keeps_axiom_count():
    axioms = (ax("t", TRUE_COND), ax("u", AtomCond("t")), ax("v", NotCond(AtomCond("u"))))
    folded = fold_constants(axioms)
    assert len(folded) == len(axioms)
    assert folded[1].body == TRUE_COND
    assert folded[2].body == FALSE_COND


# -------------------------------------------------------- size bound sweep

def test_sequence_goal_compilation_is_linear_and_fast():
    sizes = []
    for n in range(2, 21):
        d, p, f = gen_blocksworld(n, n)
        t0 = time.monotonic()
        cp = compile_problem(d, p, f)
        elapsed = time.monotonic() - t0
        assert elapsed < 1.0
        n_sigma = len(sigma_propositions(f))
        n_sub = len(subformulas(f))
        assert len(cp.domain.predicates) - len(d.predicates) == n_sigma
        assert len(cp.domain.derived) == n_sub
        sizes.append((n, n_sigma, n_sub))
    # exact linear growth in the sequence length
    for n, n_sigma, n_sub in sizes:
        assert n_sigma == n - 1
        assert n_sub == 4 * n - 5


# ----------------------------------------------------- simulation invariant

def test_lockstep_simulation_matches_step_calculus():
    d, p, f = gen_blocksworld(3, 3)
    cp = compile_problem(d, p, f)
    gp_orig = ground(d, p)
    gp_comp = ground(cp.domain, cp.problem)
    sig_of = {key: cp.mangling.sigma_id(key) for key in cp.mangling.sigma_keys()}
    val_phi = cp.problem.goal.predicate

    rng = random.Random(42)
    for _ in range(30):
        orig = gp_orig.init_mask
        comp = gp_comp.init_mask
        sigma = initial_sigma(f)
        trace = [gp_orig.atom_set(orig)]
        for _step in range(8):
            actions = gp_orig.applicable(orig)
            if not actions:
                break
            action = actions[rng.randrange(len(actions))]
            orig = gp_orig.apply(orig, action)[0]
            comp = gp_comp.apply(comp, gp_comp.action_by_name[action.name])[0]
            sigma = step_sigma(f, sigma, trace[-1])
            trace.append(gp_orig.atom_set(orig))

            comp_atoms = gp_comp.atom_set(comp)
            # original fluents are untouched by the bookkeeping
            assert project_trace([comp_atoms], cp.mangling)[0] == trace[-1]
            # the memory fluents equal the step calculus assignment
            comp_sigs = {a for a in comp_atoms if a.startswith("sig-")}
            expected = {sig_of[key] for key, value in sigma.items() if value}
            assert comp_sigs == expected
            # the goal's derived atom tracks the progressed verdict
            history, verdict = progress_trace(f, trace)
            assert history[-1] == sigma
            assert (val_phi in comp_atoms) == verdict
            assert verdict == eval_trace(f, trace)


def test_goal_reached_iff_trace_satisfies_formula():
    d, p, f = gen_blocksworld(2, 2)
    cp = compile_problem(d, p, f)
    gp_orig = ground(d, p)
    gp_comp = ground(cp.domain, cp.problem)
    rng = random.Random(7)
    for _ in range(50):
        orig, comp = gp_orig.init_mask, gp_comp.init_mask
        trace = [gp_orig.atom_set(orig)]
        for _step in range(rng.randrange(1, 7)):
            actions = gp_orig.applicable(orig)
            if not actions:
                break
            action = actions[rng.randrange(len(actions))]
            orig = gp_orig.apply(orig, action)[0]
            comp = gp_comp.apply(comp, gp_comp.action_by_name[action.name])[0]
            trace.append(gp_orig.atom_set(orig))
        assert gp_comp.is_goal(comp) == eval_trace(f, trace)


def test_lockstep_simulation_on_random_formulas():
    # Any formula shape must compile to bookkeeping that tracks the step
    # calculus exactly, step by step, on random walks.
    from helpers import random_formula

    d = parse_domain(MINI)
    p = parse_problem(MINI_PROB, d)
    gp_orig = ground(d, p)
    rng = random.Random(99)
    tried = 0
    while tried < 40:
        f = random_formula(rng, ("g", "p"), 4)
        cp = compile_problem(d, p, f)
        gp_comp = ground(cp.domain, cp.problem)
        sig_of = {key: cp.mangling.sigma_id(key) for key in cp.mangling.sigma_keys()}
        val_phi = cp.problem.goal.predicate
        orig, comp = gp_orig.init_mask, gp_comp.init_mask
        trace = [gp_orig.atom_set(orig)]
        for _ in range(6):
            actions = gp_orig.applicable(orig)
            if not actions:
                break
            action = actions[rng.randrange(len(actions))]
            orig = gp_orig.apply(orig, action)[0]
            comp = gp_comp.apply(comp, gp_comp.action_by_name[action.name])[0]
            trace.append(gp_orig.atom_set(orig))
            comp_atoms = gp_comp.atom_set(comp)
            history, verdict = progress_trace(f, trace)
            expected_sigs = {sig_of[key] for key, value in history[-1].items() if value}
            assert {a for a in comp_atoms if a.startswith("sig-")} == expected_sigs, f
            assert (val_phi in comp_atoms) == verdict == eval_trace(f, trace), f
        tried += 1
