"""Planning with pure-past temporal goals.

The package compiles a planning problem whose goal is a past-time temporal
formula into an ordinary problem with a reachability goal, solves the
result with built-in desk-scale planners, and validates solutions against
two independent evaluators of the temporal goal.
"""

from .benchmarks import (
    gen_blocksworld,
    gen_corridor,
    gen_elevator,
    gen_triangle_tireworld,
    write_benchmark,
)
from .compiler import CompiledProblem, CompileError, ManglingMap, compile_problem, fold_constants
from .patterns import PatternError, PatternSpec, build_pattern, oracle_check, parse_pattern
from .pddl import (
    Domain,
    GroundedProblem,
    Problem,
    ground,
    parse_domain,
    parse_problem,
    print_domain,
    print_problem,
)
from .planners import (
    PlanResult,
    PolicyResult,
    ResourceLimitError,
    solve_classical,
    solve_fond_strong,
    solve_fond_strong_cyclic,
)
from .ppltl import (
    Formula,
    eval_trace,
    format_formula,
    parse_formula,
    progress_trace,
    sigma_propositions,
    subformulas,
    to_pnf,
)
from .validation import (
    ExecutionReport,
    PolicyExecutor,
    check_goal,
    execute_plan,
    project_policy,
    verify_plan,
    verify_policy,
)

__version__ = "0.1.0"

__all__ = [
    "CompileError", "CompiledProblem", "Domain", "ExecutionReport", "Formula",
    "GroundedProblem", "ManglingMap", "PatternError", "PatternSpec",
    "PlanResult", "PolicyExecutor", "PolicyResult", "Problem",
    "ResourceLimitError", "build_pattern", "check_goal", "compile_problem",
    "eval_trace", "execute_plan", "fold_constants", "format_formula",
    "gen_blocksworld", "gen_corridor", "gen_elevator",
    "gen_triangle_tireworld", "ground", "oracle_check", "parse_domain",
    "parse_formula", "parse_pattern", "parse_problem", "print_domain",
    "print_problem", "progress_trace", "project_policy", "sigma_propositions",
    "solve_classical", "solve_fond_strong", "solve_fond_strong_cyclic",
    "subformulas", "to_pnf", "verify_plan", "verify_policy",
    "write_benchmark",
]
