"""Generators for the desk benchmark families.

Each generator returns ``(domain, problem, goal_formula)`` built directly
as model objects; ``write_benchmark`` renders them to files.  The problems
also carry an ordinary reachability goal so the same instances can be
solved with and without the temporal goal.
"""

from __future__ import annotations

from pathlib import Path

from .pddl import (
    ActionSchema,
    AndCond,
    AtomCond,
    ConditionalEffect,
    Domain,
    NotCond,
    Predicate,
    Problem,
    print_domain,
    print_problem,
)
from .ppltl import And, Atom, Formula, Once, Yesterday, format_formula

FAMILIES = ("blocksworld-det", "blocksworld-nondet", "elevator", "triangle-tireworld")


class BenchmarkError(ValueError):
    pass


def visit_sequence_formula(atom_names: list[str]) -> Formula:
    """Strict-sequence goal: atoms achieved in list order, earliest first."""
    if not atom_names:
        raise BenchmarkError("the visit sequence must be non-empty")
    formula = Once(Atom(atom_names[0]))
    for name in atom_names[1:]:
        formula = Once(And(Atom(name), Yesterday(formula)))
    return formula


def conjunction_formula(atom_names: list[str]) -> Formula:
    """Eventually-all goal: one sticky conjunct per atom."""
    if not atom_names:
        raise BenchmarkError("need at least one atom")
    formula: Formula = Once(Atom(atom_names[0]))
    for name in atom_names[1:]:
        formula = And(formula, Once(Atom(name)))
    return formula


# ---------------------------------------------------------------- blocksworld

def _blocksworld_domain(nondet: bool) -> Domain:
    def atom(pred, *args):
        return AtomCond(pred, tuple(args))

    def eff(add=(), delete=()):
        return ConditionalEffect(None, tuple(add), tuple(delete))

    pick_up = ActionSchema(
        "pick-up", (("?x", "object"),),
        AndCond((atom("clear", "?x"), atom("ontable", "?x"), atom("handempty"))),
        ((eff(add=[atom("holding", "?x")],
              delete=[atom("ontable", "?x"), atom("clear", "?x"), atom("handempty")]),),),
    )
    put_down = ActionSchema(
        "put-down", (("?x", "object"),),
        atom("holding", "?x"),
        ((eff(add=[atom("ontable", "?x"), atom("clear", "?x"), atom("handempty")],
              delete=[atom("holding", "?x")]),),),
    )
    stack_ok = eff(add=[atom("on", "?x", "?y"), atom("clear", "?x"), atom("handempty")],
                   delete=[atom("holding", "?x"), atom("clear", "?y")])
    # Nondeterministic variant: the held block may slip onto the table, in
    # which case the target block stays clear.
    stack_drop = eff(add=[atom("ontable", "?x"), atom("clear", "?x"), atom("handempty")],
                     delete=[atom("holding", "?x")])
    stack_outcomes = ((stack_ok,), (stack_drop,)) if nondet else ((stack_ok,),)
    stack = ActionSchema(
        "stack", (("?x", "object"), ("?y", "object")),
        AndCond((atom("holding", "?x"), atom("clear", "?y"))),
        stack_outcomes,
    )
    unstack = ActionSchema(
        "unstack", (("?x", "object"), ("?y", "object")),
        AndCond((atom("on", "?x", "?y"), atom("clear", "?x"), atom("handempty"))),
        ((eff(add=[atom("holding", "?x"), atom("clear", "?y")],
              delete=[atom("on", "?x", "?y"), atom("clear", "?x"), atom("handempty")]),),),
    )
    requirements = (":strips", ":non-deterministic") if nondet else (":strips",)
    return Domain(
        name="blocksworld-nondet" if nondet else "blocksworld",
        requirements=requirements,
        predicates=(
            Predicate("on", (("?x", "object"), ("?y", "object"))),
            Predicate("ontable", (("?x", "object"),)),
            Predicate("clear", (("?x", "object"),)),
            Predicate("handempty", ()),
            Predicate("holding", (("?x", "object"),)),
        ),
        actions=(pick_up, put_down, stack, unstack),
    )


def gen_blocksworld(n_blocks: int, n_seq: int, nondet: bool = False):
    """All blocks start on the table; the goal stacks a tower in strict order.

    The temporal goal asks for on(b1,b2) last and on(b_{n_seq-1},b_seq)
    first, so towers must grow from the bottom.
    """
    if n_blocks < 2:
        raise BenchmarkError("blocksworld needs at least 2 blocks")
    if not 2 <= n_seq <= n_blocks:
        raise BenchmarkError("sequence length must be between 2 and the block count")
    domain = _blocksworld_domain(nondet)
    blocks = ["b%d" % i for i in range(1, n_blocks + 1)]
    init = [AtomCond("ontable", (b,)) for b in blocks]
    init += [AtomCond("clear", (b,)) for b in blocks]
    init.append(AtomCond("handempty", ()))
    tower = [AtomCond("on", ("b%d" % i, "b%d" % (i + 1))) for i in range(1, n_seq)]
    problem = Problem(
        name="%s-%d-%d" % (domain.name, n_blocks, n_seq),
        domain_name=domain.name,
        objects=tuple((b, "object") for b in blocks),
        init=tuple(init),
        goal=AndCond(tuple(tower)) if len(tower) > 1 else tower[0],
    )
    pairs = ["on b%d b%d" % (i, i + 1) for i in range(n_seq - 1, 0, -1)]
    return domain, problem, visit_sequence_formula(pairs)


# ------------------------------------------------------------------- elevator

def gen_elevator(n_passengers: int):
    """Passengers wait at the ground floor; passenger i rides to floor 2i."""
    if n_passengers < 1:
        raise BenchmarkError("elevator needs at least one passenger")

    def atom(pred, *args):
        return AtomCond(pred, tuple(args))

    def eff(add=(), delete=()):
        return ConditionalEffect(None, tuple(add), tuple(delete))

    board = ActionSchema(
        "board", (("?f", "floor"), ("?p", "passenger")),
        AndCond((atom("lift-at", "?f"), atom("origin", "?p", "?f"))),
        ((eff(add=[atom("boarded", "?p")]),),),
    )
    depart = ActionSchema(
        "depart", (("?f", "floor"), ("?p", "passenger")),
        AndCond((atom("lift-at", "?f"), atom("destin", "?p", "?f"), atom("boarded", "?p"))),
        ((eff(add=[atom("served", "?p")], delete=[atom("boarded", "?p")]),),),
    )
    up = ActionSchema(
        "up", (("?f1", "floor"), ("?f2", "floor")),
        AndCond((atom("lift-at", "?f1"), atom("above", "?f1", "?f2"))),
        ((eff(add=[atom("lift-at", "?f2")], delete=[atom("lift-at", "?f1")]),),),
    )
    down = ActionSchema(
        "down", (("?f1", "floor"), ("?f2", "floor")),
        AndCond((atom("lift-at", "?f1"), atom("above", "?f2", "?f1"))),
        ((eff(add=[atom("lift-at", "?f2")], delete=[atom("lift-at", "?f1")]),),),
    )
    domain = Domain(
        name="elevator",
        requirements=(":strips", ":typing"),
        types=(("floor", "object"), ("passenger", "object")),
        predicates=(
            Predicate("origin", (("?p", "passenger"), ("?f", "floor"))),
            Predicate("destin", (("?p", "passenger"), ("?f", "floor"))),
            Predicate("above", (("?f1", "floor"), ("?f2", "floor"))),
            Predicate("boarded", (("?p", "passenger"),)),
            Predicate("served", (("?p", "passenger"),)),
            Predicate("lift-at", (("?f", "floor"),)),
        ),
        actions=(board, depart, up, down),
    )
    floors = ["f%d" % i for i in range(2 * n_passengers + 1)]
    passengers = ["p%d" % i for i in range(1, n_passengers + 1)]
    init = [AtomCond("lift-at", ("f0",))]
    init += [AtomCond("origin", (p, "f0")) for p in passengers]
    init += [AtomCond("destin", ("p%d" % i, "f%d" % (2 * i))) for i in range(1, n_passengers + 1)]
    init += [AtomCond("above", ("f%d" % i, "f%d" % j))
             for i in range(len(floors)) for j in range(i + 1, len(floors))]
    served = [AtomCond("served", (p,)) for p in passengers]
    problem = Problem(
        name="elevator-%d" % n_passengers,
        domain_name="elevator",
        objects=tuple((f, "floor") for f in floors) + tuple((p, "passenger") for p in passengers),
        init=tuple(init),
        goal=AndCond(tuple(served)) if len(served) > 1 else served[0],
    )
    return domain, problem, conjunction_formula(["served %s" % p for p in passengers])


# --------------------------------------------------------- triangle tireworld

def default_visit_path(side: int) -> list[str]:
    """Row-major walk over the triangle: l11, l21, l22, l31, ..."""
    return ["l%d%d" % (row, col) for row in range(1, side + 1) for col in range(1, row + 1)]


def gen_triangle_tireworld(side: int, m_visits: int, visit_sequence: list[str] | None = None):
    """Drive over a triangular map with flat-prone moves and local spares.

    The goal visits ``m_visits`` locations in order; by default the
    row-major path starting at l11.  Roads connect row neighbours and the
    two lower neighbours of each cell, in both directions.
    """
    if not 1 <= side <= 9:
        raise BenchmarkError("side must be between 1 and 9")
    locations = default_visit_path(side)
    if visit_sequence is None:
        visit_sequence = locations[:m_visits]
    if len(visit_sequence) != m_visits:
        raise BenchmarkError("visit sequence length must equal m_visits")
    if m_visits < 1 or m_visits > len(locations):
        raise BenchmarkError("m_visits must be between 1 and the location count")
    unknown = [loc for loc in visit_sequence if loc not in locations]
    if unknown:
        raise BenchmarkError("unknown locations in the visit sequence: %s" % ", ".join(unknown))

    def atom(pred, *args):
        return AtomCond(pred, tuple(args))

    def eff(add=(), delete=()):
        return ConditionalEffect(None, tuple(add), tuple(delete))

    move_ok = eff(add=[atom("vehicle-at", "?to")], delete=[atom("vehicle-at", "?from")])
    move_flat = eff(add=[atom("vehicle-at", "?to")],
                    delete=[atom("vehicle-at", "?from"), AtomCond("not-flat")])
    move = ActionSchema(
        "move", (("?from", "location"), ("?to", "location")),
        AndCond((atom("vehicle-at", "?from"), atom("road", "?from", "?to"), AtomCond("not-flat"))),
        ((move_ok,), (move_flat,)),
    )
    change_tire = ActionSchema(
        "change-tire", (("?loc", "location"),),
        AndCond((atom("vehicle-at", "?loc"), atom("spare-in", "?loc"),
                 NotCond(AtomCond("not-flat")))),
        ((eff(add=[AtomCond("not-flat")], delete=[atom("spare-in", "?loc")]),),),
    )
    domain = Domain(
        name="triangle-tireworld",
        requirements=(":strips", ":typing", ":negative-preconditions", ":non-deterministic"),
        types=(("location", "object"),),
        predicates=(
            Predicate("vehicle-at", (("?loc", "location"),)),
            Predicate("spare-in", (("?loc", "location"),)),
            Predicate("road", (("?from", "location"), ("?to", "location"))),
            Predicate("not-flat", ()),
        ),
        actions=(move, change_tire),
    )

    roads: set[tuple[str, str]] = set()

    def connect(a: str, b: str) -> None:
        roads.add((a, b))
        roads.add((b, a))

    for row in range(1, side + 1):
        for col in range(1, row + 1):
            here = "l%d%d" % (row, col)
            if col < row:
                connect(here, "l%d%d" % (row, col + 1))
            if row < side:
                connect(here, "l%d%d" % (row + 1, col))
                connect(here, "l%d%d" % (row + 1, col + 1))

    init = [AtomCond("vehicle-at", ("l11",)), AtomCond("not-flat", ())]
    init += [AtomCond("spare-in", (loc,)) for loc in locations]
    init += [AtomCond("road", pair) for pair in sorted(roads)]
    problem = Problem(
        name="triangle-tireworld-%d-%d" % (side, m_visits),
        domain_name="triangle-tireworld",
        objects=tuple((loc, "location") for loc in locations),
        init=tuple(init),
        goal=AtomCond("vehicle-at", (visit_sequence[-1],)),
    )
    goal = visit_sequence_formula(["vehicle-at %s" % loc for loc in visit_sequence])
    return domain, problem, goal


# ------------------------------------------------------------------- corridor

def gen_corridor(n_cells: int):
    """A deterministic chain domain used for overhead comparisons."""
    if n_cells < 2:
        raise BenchmarkError("corridor needs at least 2 cells")
    move = ActionSchema(
        "step", (("?from", "object"), ("?to", "object")),
        AndCond((AtomCond("at", ("?from",)), AtomCond("adj", ("?from", "?to")))),
        ((ConditionalEffect(None, (AtomCond("at", ("?to",)),), (AtomCond("at", ("?from",)),)),),),
    )
    domain = Domain(
        name="corridor",
        requirements=(":strips",),
        predicates=(Predicate("at", (("?c", "object"),)),
                    Predicate("adj", (("?a", "object"), ("?b", "object")))),
        actions=(move,),
    )
    cells = ["c%d" % i for i in range(1, n_cells + 1)]
    init = [AtomCond("at", ("c1",))]
    for a, b in zip(cells, cells[1:]):
        init.append(AtomCond("adj", (a, b)))
        init.append(AtomCond("adj", (b, a)))
    problem = Problem(
        name="corridor-%d" % n_cells,
        domain_name="corridor",
        objects=tuple((c, "object") for c in cells),
        init=tuple(init),
        goal=AtomCond("at", (cells[-1],)),
    )
    return domain, problem, Once(Atom("at %s" % cells[-1]))


# ------------------------------------------------------------------ file I/O

def generate(family: str, size: int, goal_size: int | None = None,
             visit_sequence: list[str] | None = None):
    if family == "blocksworld-det":
        return gen_blocksworld(size, goal_size if goal_size is not None else min(size, 3))
    if family == "blocksworld-nondet":
        return gen_blocksworld(size, goal_size if goal_size is not None else min(size, 3),
                               nondet=True)
    if family == "elevator":
        return gen_elevator(size)
    if family == "triangle-tireworld":
        return gen_triangle_tireworld(size, goal_size if goal_size is not None else size,
                                      visit_sequence)
    raise BenchmarkError("unknown family %r (one of %s)" % (family, ", ".join(FAMILIES)))


def benchmark_stem(family: str, size: int, goal_size: int | None = None) -> str:
    if family == "elevator" or goal_size is None:
        return "%s-%d" % (family, size)
    return "%s-%d-%d" % (family, size, goal_size)


def write_benchmark(out_dir: Path, family: str, size: int,
                    goal_size: int | None = None,
                    visit_sequence: list[str] | None = None) -> list[Path]:
    """Write ``<stem>-domain.pddl``, ``<stem>-problem.pddl``, ``<stem>.ppltl``."""
    domain, problem, goal = generate(family, size, goal_size, visit_sequence)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = benchmark_stem(family, size, goal_size)
    header = ";; generated %s instance; nondeterministic outcomes, when present,\n" \
             ";; are listed success first.\n" % family
    paths = [out_dir / ("%s-domain.pddl" % stem),
             out_dir / ("%s-problem.pddl" % stem),
             out_dir / ("%s.ppltl" % stem)]
    paths[0].write_text(header + print_domain(domain))
    paths[1].write_text(print_problem(problem))
    paths[2].write_text(format_formula(goal) + "\n")
    return paths
