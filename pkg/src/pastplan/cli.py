"""Command-line interface.

Commands: ``compile``, ``solve``, ``validate``, ``eval``, ``bench``,
``report``.  Diagnostics go to stderr; results go to files or stdout.
Exit codes: 0 success, 1 parse or usage error, 2 compile error,
3 unsolvable, 4 resource limit, 5 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .benchmarks import FAMILIES, BenchmarkError, write_benchmark
from .compiler import CompileError, compile_problem
from .patterns import PatternError, build_pattern, parse_pattern
from .pddl import (
    PddlError,
    ground,
    parse_domain,
    parse_problem,
    print_domain,
    print_problem,
)
from .planners import (
    ResourceLimitError,
    SolverError,
    parse_plan_text,
    plan_text,
    policy_from_json,
    policy_to_json,
    solve_classical,
    solve_fond_strong,
    solve_fond_strong_cyclic,
)
from .ppltl import (
    Formula,
    FormulaSyntaxError,
    eval_trace,
    format_formula,
    parse_formula,
    progress_trace,
)
from .validation import PlanReplayError, verify_plan, verify_policy

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_COMPILE = 2
EXIT_UNSOLVABLE = 3
EXIT_RESOURCE = 4
EXIT_VALIDATION = 5


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _say(message: str) -> None:
    print(message, file=sys.stderr)


def build_parser() -> _Parser:
    parser = _Parser(prog="pastplan",
                     description="compile, solve, and validate planning problems "
                                 "with past-time temporal goals")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_goal_flags(p):
        p.add_argument("--goal", help="goal formula text")
        p.add_argument("--goal-file", type=Path, help="file containing the goal formula")
        p.add_argument("--pattern", help="goal pattern, e.g. 'response(a,b)'")

    def add_io_flags(p, problem_required=True):
        p.add_argument("--domain", type=Path, required=True)
        p.add_argument("--problem", type=Path, required=problem_required)
        p.add_argument("--out-dir", type=Path, default=Path("."))

    c = sub.add_parser("compile", help="rewrite a temporal goal into reachability")
    add_io_flags(c)
    add_goal_flags(c)
    c.add_argument("--name", help="output file stem (default: the problem name)")

    s = sub.add_parser("solve", help="plan, optionally compiling a temporal goal first")
    add_io_flags(s)
    add_goal_flags(s)
    s.add_argument("--mode", choices=("classical", "strong", "strong-cyclic"),
                   default="classical")
    s.add_argument("--heuristic", choices=("blind", "hadd"), default="blind")
    s.add_argument("--node-cap", type=int, default=10 ** 6)
    s.add_argument("--timeout-s", type=float, default=60.0)
    s.add_argument("--project", action="store_true",
                   help="also write the solution projected onto the original problem")

    v = sub.add_parser("validate", help="replay a solution and check the goal")
    add_io_flags(v)
    add_goal_flags(v)
    v.add_argument("--mode", choices=("classical", "strong", "strong-cyclic"),
                   default="classical")
    v.add_argument("--plan", type=Path, help="plan file (classical mode)")
    v.add_argument("--policy", type=Path, help="policy file (strong modes)")

    e = sub.add_parser("eval", help="evaluate formulas on a trace file")
    add_goal_flags(e)
    e.add_argument("--trace", type=Path, required=True,
                   help="JSON list of states, each a list of ground atoms")

    b = sub.add_parser("bench", help="generate a benchmark instance")
    b.add_argument("--family", choices=FAMILIES, required=True)
    b.add_argument("--size", type=int, required=True)
    b.add_argument("--goal-size", type=int)
    b.add_argument("--out-dir", type=Path, default=Path("."))

    r = sub.add_parser("report", help="write scaling/overhead tables and figures")
    r.add_argument("--out-dir", type=Path, default=Path("report"))
    r.add_argument("--max-size", type=int, default=20)

    return parser


def _load_goal(args) -> Formula | None:
    sources = [s for s in (args.goal, args.goal_file, args.pattern) if s is not None]
    if len(sources) > 1:
        raise UsageError("give exactly one of --goal, --goal-file, --pattern")
    if args.goal is not None:
        return parse_formula(args.goal)
    if args.goal_file is not None:
        return parse_formula(args.goal_file.read_text())
    if args.pattern is not None:
        return build_pattern(parse_pattern(args.pattern))
    return None


def _load_models(args):
    domain = parse_domain(args.domain.read_text())
    problem = parse_problem(args.problem.read_text(), domain)
    return domain, problem


def cmd_compile(args) -> int:
    domain, problem = _load_models(args)
    goal = _load_goal(args)
    if goal is None:
        raise UsageError("compile needs a goal (--goal, --goal-file, or --pattern)")
    compiled = compile_problem(domain, problem, goal)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    stem = args.name or problem.name
    paths = {
        "domain": args.out_dir / ("%s-compiled-domain.pddl" % stem),
        "problem": args.out_dir / ("%s-compiled-problem.pddl" % stem),
        "mangling": args.out_dir / ("%s-mangling.json" % stem),
    }
    paths["domain"].write_text(print_domain(compiled.domain))
    paths["problem"].write_text(print_problem(compiled.problem))
    paths["mangling"].write_text(compiled.mangling.to_json())
    for path in paths.values():
        _say("wrote %s" % path)
    return EXIT_OK


def cmd_solve(args) -> int:
    domain, problem = _load_models(args)
    goal = _load_goal(args)
    mangling = None
    if goal is not None:
        compiled = compile_problem(domain, problem, goal)
        gp = ground(compiled.domain, compiled.problem)
        mangling = compiled.mangling
    else:
        gp = ground(domain, problem)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    stem = problem.name

    if args.mode == "classical":
        result = solve_classical(gp, heuristic=args.heuristic,
                                 node_cap=args.node_cap, timeout_s=args.timeout_s)
        if result.plan is None:
            _say("unsolvable (expanded %d states)" % result.expanded)
            return EXIT_UNSOLVABLE
        plan_path = args.out_dir / ("%s.plan" % stem)
        plan_path.write_text(plan_text(result.plan))
        _say("wrote %s (%d step(s), %d expanded)"
             % (plan_path, len(result.plan), result.expanded))
        if args.project:
            projected = args.out_dir / ("%s-projected.plan" % stem)
            projected.write_text(plan_text(result.plan))
            _say("wrote %s" % projected)
        return EXIT_OK

    solver = solve_fond_strong if args.mode == "strong" else solve_fond_strong_cyclic
    result = solver(gp, node_cap=args.node_cap, timeout_s=args.timeout_s)
    if result.policy is None:
        _say("unsolvable in %s mode (%d states explored)"
             % (args.mode, result.states_explored))
        return EXIT_UNSOLVABLE
    policy_path = args.out_dir / ("%s-policy.json" % stem)
    policy_path.write_text(policy_to_json(gp, result.policy))
    _say("wrote %s (%d state(s))" % (policy_path, len(result.policy)))
    if args.project:
        if goal is None:
            raise UsageError("--project requires a temporal goal")
        rows = []
        for state, name in sorted(result.policy.items()):
            atoms = gp.atom_set(state, include_derived=False)
            original = sorted(a for a in atoms if a not in mangling.id_set)
            memory = {key: (mangling.sigma_id(key) in atoms)
                      for key in mangling.sigma_keys()}
            rows.append({"state": original, "memory": memory, "action": name})
        projected_path = args.out_dir / ("%s-projected-policy.json" % stem)
        projected_path.write_text(json.dumps(rows, indent=2) + "\n")
        _say("wrote %s" % projected_path)
    return EXIT_OK


def cmd_validate(args) -> int:
    domain, problem = _load_models(args)
    goal = _load_goal(args)
    gp_original = ground(domain, problem)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    report_path = args.out_dir / "report.json"

    if args.mode == "classical":
        if args.plan is None:
            raise UsageError("classical validation needs --plan")
        plan = parse_plan_text(args.plan.read_text())
        report = verify_plan(gp_original, plan, goal)
    else:
        if args.policy is None:
            raise UsageError("policy validation needs --policy")
        if goal is None:
            raise UsageError("policy validation needs a temporal goal")
        compiled = compile_problem(domain, problem, goal)
        gp_compiled = ground(compiled.domain, compiled.problem)
        policy = policy_from_json(gp_compiled, args.policy.read_text())
        report = verify_policy(policy, gp_compiled, goal, compiled.mangling, args.mode)
    report_path.write_text(report.to_json())
    _say("wrote %s" % report_path)
    if not report.verdict:
        for failure in report.failures:
            _say("validation failure: %s" % failure)
        return EXIT_VALIDATION
    _say("validation passed (%d execution(s))" % report.executions)
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.goal_file is not None:
        if args.goal is not None or args.pattern is not None:
            raise UsageError("give exactly one of --goal, --goal-file, --pattern")
        lines = [line.strip() for line in args.goal_file.read_text().splitlines()]
        formulas = [parse_formula(line) for line in lines
                    if line and not line.startswith(";")]
        if not formulas:
            raise UsageError("the formula file is empty")
    else:
        goal = _load_goal(args)
        if goal is None:
            raise UsageError("eval needs a formula (--goal, --goal-file, or --pattern)")
        formulas = [goal]
    payload = json.loads(args.trace.read_text())
    if not isinstance(payload, list) or not payload:
        raise UsageError("the trace file must be a non-empty JSON array of states")
    trace = [frozenset(state) for state in payload]
    status = EXIT_OK
    for formula in formulas:
        direct = eval_trace(formula, trace)
        progressed = progress_trace(formula, trace)[1]
        if direct != progressed:
            _say("evaluator disagreement on %s" % format_formula(formula))
            status = EXIT_VALIDATION
        print("true" if direct else "false")
    return status


def cmd_bench(args) -> int:
    paths = write_benchmark(args.out_dir, args.family, args.size, args.goal_size)
    for path in paths:
        _say("wrote %s" % path)
    return EXIT_OK


def cmd_report(args) -> int:
    from .reporting import run_report

    for path in run_report(args.out_dir, args.max_size):
        _say("wrote %s" % path)
    return EXIT_OK


_COMMANDS = {
    "compile": cmd_compile,
    "solve": cmd_solve,
    "validate": cmd_validate,
    "eval": cmd_eval,
    "bench": cmd_bench,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (UsageError, FileNotFoundError, FormulaSyntaxError, PddlError,
            PatternError, BenchmarkError, json.JSONDecodeError) as err:
        _say("error: %s" % err)
        return EXIT_PARSE
    except CompileError as err:
        _say("compile error: %s" % err)
        return EXIT_COMPILE
    except ResourceLimitError as err:
        _say("resource limit: %s" % err)
        return EXIT_RESOURCE
    except SolverError as err:
        _say("error: %s" % err)
        return EXIT_PARSE
    except PlanReplayError as err:
        _say("error: %s" % err)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
