"""AST for pure-past temporal formulas.

Nodes are frozen dataclasses, so formulas compare and hash structurally and
can be deduplicated by value.  The connectives kept after desugaring are
atoms, the boolean constants, negation, conjunction, disjunction, the
previous-step operator Y and the since operator S.  Everything else
(``O``, ``H``, ``WY``, ``start``, ``->``) is an abbreviation that
:func:`expand` rewrites into that basis; :func:`resugar` is its inverse on
canonical shapes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cache


class Formula:
    """Base class for all formula nodes."""

    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    """Ground atom, e.g. ``handempty`` or ``on b1 b2``."""

    name: str


@dataclass(frozen=True)
class Truth(Formula):
    pass


@dataclass(frozen=True)
class Falsity(Formula):
    pass


@dataclass(frozen=True)
class Start(Formula):
    """Holds only at the first instant; same as ``!(Y true)``."""

    pass


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Yesterday(Formula):
    arg: Formula


@dataclass(frozen=True)
class WeakYesterday(Formula):
    """Holds at the first instant or when the argument held just before."""

    arg: Formula


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Once(Formula):
    arg: Formula


@dataclass(frozen=True)
class Historically(Formula):
    arg: Formula


TRUE = Truth()
FALSE = Falsity()
START = Start()

#: Words the concrete syntax reserves; atoms with these names must be quoted.
RESERVED = {"true", "false", "start", "Y", "WY", "S", "O", "H"}

_BARE_ATOM = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*\Z")


def _atom_text(name: str) -> str:
    if _BARE_ATOM.match(name) and name not in RESERVED:
        return name
    return '"%s"' % name


@cache
def format_formula(f: Formula) -> str:
    """Canonical, fully parenthesized text; parsing it back yields ``f``."""
    if isinstance(f, Atom):
        return _atom_text(f.name)
    if isinstance(f, Truth):
        return "true"
    if isinstance(f, Falsity):
        return "false"
    if isinstance(f, Start):
        return "start"
    if isinstance(f, Not):
        return "(! %s)" % format_formula(f.arg)
    if isinstance(f, Yesterday):
        return "(Y %s)" % format_formula(f.arg)
    if isinstance(f, WeakYesterday):
        return "(WY %s)" % format_formula(f.arg)
    if isinstance(f, Once):
        return "(O %s)" % format_formula(f.arg)
    if isinstance(f, Historically):
        return "(H %s)" % format_formula(f.arg)
    if isinstance(f, And):
        return "(%s & %s)" % (format_formula(f.left), format_formula(f.right))
    if isinstance(f, Or):
        return "(%s | %s)" % (format_formula(f.left), format_formula(f.right))
    if isinstance(f, Implies):
        return "(%s -> %s)" % (format_formula(f.left), format_formula(f.right))
    if isinstance(f, Since):
        return "(%s S %s)" % (format_formula(f.left), format_formula(f.right))
    raise TypeError("not a formula node: %r" % (f,))


@cache
def expand(f: Formula) -> Formula:
    """Rewrite abbreviations into the core basis {atom, constants, !, &, |, Y, S}."""
    if isinstance(f, (Atom, Truth, Falsity)):
        return f
    if isinstance(f, Start):
        return Not(Yesterday(TRUE))
    if isinstance(f, Not):
        return Not(expand(f.arg))
    if isinstance(f, And):
        return And(expand(f.left), expand(f.right))
    if isinstance(f, Or):
        return Or(expand(f.left), expand(f.right))
    if isinstance(f, Implies):
        return Or(Not(expand(f.left)), expand(f.right))
    if isinstance(f, Yesterday):
        return Yesterday(expand(f.arg))
    if isinstance(f, WeakYesterday):
        return Not(Yesterday(Not(expand(f.arg))))
    if isinstance(f, Since):
        return Since(expand(f.left), expand(f.right))
    if isinstance(f, Once):
        return Since(TRUE, expand(f.arg))
    if isinstance(f, Historically):
        return Not(Since(TRUE, Not(expand(f.arg))))
    raise TypeError("not a formula node: %r" % (f,))


@cache
def resugar(f: Formula) -> Formula:
    """Reintroduce abbreviations bottom-up; inverse of :func:`expand` on its image."""
    if isinstance(f, (Atom, Truth, Falsity, Start)):
        return f
    if isinstance(f, Since):
        left, right = resugar(f.left), resugar(f.right)
        if isinstance(left, Truth):
            return Once(right)
        return Since(left, right)
    if isinstance(f, Not):
        arg = resugar(f.arg)
        if isinstance(arg, Yesterday) and isinstance(arg.arg, Truth):
            return START
        if isinstance(arg, Yesterday) and isinstance(arg.arg, Not):
            return WeakYesterday(arg.arg.arg)
        if isinstance(arg, Once) and isinstance(arg.arg, Not):
            return Historically(arg.arg.arg)
        return Not(arg)
    if isinstance(f, Or):
        left, right = resugar(f.left), resugar(f.right)
        if isinstance(left, Not):
            return Implies(left.arg, right)
        return Or(left, right)
    if isinstance(f, And):
        return And(resugar(f.left), resugar(f.right))
    if isinstance(f, Implies):
        return Implies(resugar(f.left), resugar(f.right))
    if isinstance(f, Yesterday):
        return Yesterday(resugar(f.arg))
    if isinstance(f, WeakYesterday):
        return WeakYesterday(resugar(f.arg))
    if isinstance(f, Once):
        return Once(resugar(f.arg))
    if isinstance(f, Historically):
        return Historically(resugar(f.arg))
    raise TypeError("not a formula node: %r" % (f,))


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Atom, Truth, Falsity, Start)):
        return ()
    if isinstance(f, (Not, Yesterday, WeakYesterday, Once, Historically)):
        return (f.arg,)
    return (f.left, f.right)


def formula_size(f: Formula) -> int:
    """Number of nodes in the syntax tree."""
    return 1 + sum(formula_size(c) for c in children(f))


def atoms_of(f: Formula) -> frozenset[str]:
    """Names of all atoms occurring in the formula."""
    if isinstance(f, Atom):
        return frozenset((f.name,))
    out: set[str] = set()
    for c in children(f):
        out.update(atoms_of(c))
    return frozenset(out)
