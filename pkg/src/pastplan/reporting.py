"""Desk-scale measurement reports: CSV tables plus rendered figures.

Two studies are built in.  The scaling study compiles the tower-sequence
goal family at growing sizes and records the added fluent and rule counts
with compile times.  The overhead study solves small deterministic
instances twice, once against the problem's own goal and once against the
compiled sticky version of the same goal, and records plan lengths and
expanded-node counts.
"""

from __future__ import annotations

import csv
import time
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .benchmarks import gen_blocksworld, gen_corridor, gen_elevator
from .compiler import compile_problem
from .pddl import Domain, Problem, condition_atoms, ground, ground_atom_key
from .planners import solve_classical
from .ppltl import Formula, Once, sigma_propositions, subformulas
from .ppltl.nodes import And, Atom


def scaling_rows(n_max: int = 20) -> list[dict]:
    """Compiled-size growth for the tower-sequence goals, n = 2..n_max."""
    rows = []
    for n in range(2, n_max + 1):
        domain, problem, goal = gen_blocksworld(n, n)
        t0 = time.monotonic()
        compiled = compile_problem(domain, problem, goal)
        seconds = time.monotonic() - t0
        rows.append({
            "n": n,
            "sigma_fluents": len(compiled.domain.predicates) - len(domain.predicates),
            "val_rules": len(compiled.domain.derived) - len(domain.derived),
            "tracked": len(sigma_propositions(goal)),
            "subformulas": len(subformulas(goal)),
            "compile_seconds": round(seconds, 6),
        })
    return rows


def goal_as_formula(problem: Problem) -> Formula:
    """The problem's conjunctive goal wrapped as a sticky formula."""
    atoms = [Atom(ground_atom_key(a.predicate, a.args))
             for a in condition_atoms(problem.goal, positive_only=True)]
    if not atoms:
        raise ValueError("the problem goal has no positive atoms")
    conj: Formula = atoms[0]
    for atom in atoms[1:]:
        conj = And(conj, atom)
    return Once(conj)


def overhead_instances() -> list[tuple[str, Domain, Problem]]:
    instances = []
    for n in (2, 3, 4, 5):
        domain, problem, _ = gen_blocksworld(n, n)
        instances.append(("blocksworld-%d" % n, domain, problem))
    for n in (1, 2, 3, 4):
        domain, problem, _ = gen_elevator(n)
        instances.append(("elevator-%d" % n, domain, problem))
    for n in (6, 10):
        domain, problem, _ = gen_corridor(n)
        instances.append(("corridor-%d" % n, domain, problem))
    return instances


def overhead_rows(instances=None) -> list[dict]:
    """Original versus compiled search effort on the same reachability goal."""
    rows = []
    for name, domain, problem in instances or overhead_instances():
        gp = ground(domain, problem)
        original = solve_classical(gp)
        compiled = compile_problem(domain, problem, goal_as_formula(problem))
        gp2 = ground(compiled.domain, compiled.problem)
        wrapped = solve_classical(gp2)
        rows.append({
            "instance": name,
            "plan_length_original": len(original.plan),
            "plan_length_compiled": len(wrapped.plan),
            "expanded_original": original.expanded,
            "expanded_compiled": wrapped.expanded,
        })
    return rows


def write_csv(rows: list[dict], path: Path) -> None:
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def render_scaling_figure(rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = [r["n"] for r in rows]
    ax.plot(ns, [r["sigma_fluents"] for r in rows], marker="o", label="memory fluents")
    ax.plot(ns, [r["val_rules"] for r in rows], marker="s", label="derivation rules")
    ax.set_xlabel("sequence goal size n")
    ax.set_ylabel("count added by compilation")
    ax.set_title("Compiled size grows linearly with the goal")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_overhead_figure(rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [r["expanded_original"] for r in rows]
    ys = [r["expanded_compiled"] for r in rows]
    top = max(xs + ys + [1])
    ax.plot([1, top], [1, top], linestyle="--", color="gray", label="no overhead")
    ax.scatter(xs, ys)
    for r in rows:
        ax.annotate(r["instance"], (r["expanded_original"], r["expanded_compiled"]),
                    fontsize=7, xytext=(3, 3), textcoords="offset points")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("nodes expanded, original goal")
    ax.set_ylabel("nodes expanded, compiled goal")
    ax.set_title("Search effort with and without the compilation")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def run_report(out_dir: Path, n_max: int = 20) -> list[Path]:
    """Write scaling.csv/png and overhead.csv/png; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    scaling = scaling_rows(n_max)
    write_csv(scaling, out_dir / "scaling.csv")
    render_scaling_figure(scaling, out_dir / "scaling.png")
    written += [out_dir / "scaling.csv", out_dir / "scaling.png"]
    overhead = overhead_rows()
    write_csv(overhead, out_dir / "overhead.csv")
    render_overhead_figure(overhead, out_dir / "overhead.png")
    written += [out_dir / "overhead.csv", out_dir / "overhead.png"]
    return written
