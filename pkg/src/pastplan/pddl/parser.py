"""S-expression reader and domain/problem builders.

Identifiers are lowercased (the language is case-insensitive) and ``;``
starts a comment.  Unsupported requirement flags and sections fail loudly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ActionSchema,
    AndCond,
    AtomCond,
    Condition,
    ConditionalEffect,
    DerivedPredicate,
    Domain,
    NotCond,
    OrCond,
    PddlSyntaxError,
    Predicate,
    Problem,
    TRUE_COND,
    validate_domain,
    validate_problem,
)


@dataclass(frozen=True)
class _Sym:
    text: str
    line: int
    column: int


def _tokenize(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            i += 1
            col += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield _Sym(ch, line, col)
            i += 1
            col += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            yield _Sym(text[i:j].lower(), line, col)
            col += j - i
            i = j


def _read(text: str) -> list:
    stack: list[list] = [[]]
    last = _Sym("", 1, 1)
    for tok in _tokenize(text):
        last = tok
        if tok.text == "(":
            new: list = []
            stack[-1].append((new, tok.line, tok.column))
            stack.append(new)
        elif tok.text == ")":
            if len(stack) == 1:
                raise PddlSyntaxError("unbalanced ')'", tok.line, tok.column)
            stack.pop()
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise PddlSyntaxError("missing ')'", last.line, last.column)
    return stack[0]


def _is_list(node) -> bool:
    return isinstance(node, tuple)


def _items(node) -> list:
    return node[0]


def _pos(node) -> tuple[int, int]:
    if _is_list(node):
        return node[1], node[2]
    return node.line, node.column


def _sym_text(node, what: str) -> str:
    if _is_list(node):
        line, col = _pos(node)
        raise PddlSyntaxError("expected %s, found a list" % what, line, col)
    return node.text


def _parse_typed_list(nodes: list, what: str) -> tuple[tuple[str, str], ...]:
    """``a b - t c`` style lists; names without a type default to object."""
    out: list[tuple[str, str]] = []
    pending: list[str] = []
    i = 0
    while i < len(nodes):
        text = _sym_text(nodes[i], "a name in %s" % what)
        if text == "-":
            if i + 1 >= len(nodes):
                line, col = _pos(nodes[i])
                raise PddlSyntaxError("dangling '-' in %s" % what, line, col)
            type_name = _sym_text(nodes[i + 1], "a type in %s" % what)
            if not pending:
                line, col = _pos(nodes[i])
                raise PddlSyntaxError("'-' with no names before it in %s" % what, line, col)
            out.extend((name, type_name) for name in pending)
            pending = []
            i += 2
        else:
            pending.append(text)
            i += 1
    out.extend((name, "object") for name in pending)
    return tuple(out)


def _parse_atom(node, what: str) -> AtomCond:
    if not _is_list(node) or not _items(node):
        line, col = _pos(node)
        raise PddlSyntaxError("expected an atom in %s" % what, line, col)
    items = _items(node)
    name = _sym_text(items[0], "a predicate name")
    args = tuple(_sym_text(arg, "an argument of %s" % name) for arg in items[1:])
    return AtomCond(name, args)


def _parse_condition(node, what: str) -> Condition:
    if not _is_list(node):
        line, col = _pos(node)
        raise PddlSyntaxError("expected a condition in %s" % what, line, col)
    items = _items(node)
    if not items:
        return TRUE_COND
    head = _sym_text(items[0], "a connective or predicate")
    if head == "and":
        return AndCond(tuple(_parse_condition(n, what) for n in items[1:]))
    if head == "or":
        return OrCond(tuple(_parse_condition(n, what) for n in items[1:]))
    if head == "not":
        if len(items) != 2:
            line, col = _pos(node)
            raise PddlSyntaxError("'not' takes exactly one condition", line, col)
        return NotCond(_parse_condition(items[1], what))
    if head in ("when", "oneof", "forall", "exists", "imply"):
        line, col = _pos(node)
        raise PddlSyntaxError("%r is not allowed inside a condition" % head, line, col)
    return _parse_atom(node, what)


def _parse_effect_literals(node, action: str) -> tuple[tuple[AtomCond, ...], tuple[AtomCond, ...]]:
    adds: list[AtomCond] = []
    deletes: list[AtomCond] = []

    def one(n):
        items = _items(n) if _is_list(n) else None
        if items and not _is_list(items[0]) and items[0].text == "not":
            if len(items) != 2:
                line, col = _pos(n)
                raise PddlSyntaxError("'not' takes exactly one atom in an effect", line, col)
            deletes.append(_parse_atom(items[1], "an effect of %s" % action))
        else:
            adds.append(_parse_atom(n, "an effect of %s" % action))

    items = _items(node) if _is_list(node) else None
    if items and not _is_list(items[0]) and items[0].text == "and":
        for n in items[1:]:
            one(n)
    else:
        one(node)
    return tuple(adds), tuple(deletes)


def _parse_outcome(node, action: str) -> tuple[ConditionalEffect, ...]:
    """One deterministic effect: conjunction of literals and when-groups."""
    effects: list[ConditionalEffect] = []
    plain_add: list[AtomCond] = []
    plain_del: list[AtomCond] = []

    def piece(n):
        items = _items(n) if _is_list(n) else None
        head = None
        if items and not _is_list(items[0]):
            head = items[0].text
        if head == "when":
            if len(items) != 3:
                line, col = _pos(n)
                raise PddlSyntaxError("'when' takes a condition and an effect", line, col)
            cond = _parse_condition(items[1], "a conditional effect of %s" % action)
            adds, deletes = _parse_effect_literals(items[2], action)
            effects.append(ConditionalEffect(cond, adds, deletes))
        elif head == "oneof":
            line, col = _pos(n)
            raise PddlSyntaxError("'oneof' is only allowed at the top of an effect", line, col)
        elif head == "and":
            for sub in items[1:]:
                piece(sub)
        else:
            adds, deletes = _parse_effect_literals(n, action)
            plain_add.extend(adds)
            plain_del.extend(deletes)

    piece(node)
    if plain_add or plain_del:
        effects.insert(0, ConditionalEffect(None, tuple(plain_add), tuple(plain_del)))
    return tuple(effects)


def _parse_effect(node, action: str) -> tuple[tuple[ConditionalEffect, ...], ...]:
    items = _items(node) if _is_list(node) else None
    if items and not _is_list(items[0]) and items[0].text == "oneof":
        if len(items) < 2:
            line, col = _pos(node)
            raise PddlSyntaxError("'oneof' needs at least one outcome", line, col)
        return tuple(_parse_outcome(n, action) for n in items[1:])
    return (_parse_outcome(node, action),)


def _section_name(node) -> str | None:
    if _is_list(node) and _items(node) and not _is_list(_items(node)[0]):
        return _items(node)[0].text
    return None


def parse_domain(text: str) -> Domain:
    """Parse and validate a domain file."""
    top = _read(text)
    if len(top) != 1 or not _is_list(top[0]):
        raise PddlSyntaxError("expected a single (define ...) form", 1, 1)
    items = _items(top[0])
    if not items or _sym_text(items[0], "define") != "define":
        line, col = _pos(top[0])
        raise PddlSyntaxError("expected (define (domain ...) ...)", line, col)
    header = items[1]
    if not (_is_list(header) and len(_items(header)) == 2
            and _sym_text(_items(header)[0], "domain") == "domain"):
        line, col = _pos(header)
        raise PddlSyntaxError("expected (domain <name>)", line, col)
    name = _sym_text(_items(header)[1], "the domain name")

    requirements: tuple[str, ...] = ()
    types: tuple[tuple[str, str], ...] = ()
    constants: tuple[tuple[str, str], ...] = ()
    predicates: list[Predicate] = []
    derived: list[DerivedPredicate] = []
    actions: list[ActionSchema] = []

    for section in items[2:]:
        kind = _section_name(section)
        body = _items(section)[1:]
        line, col = _pos(section)
        if kind == ":requirements":
            requirements = tuple(_sym_text(n, "a requirement flag") for n in body)
        elif kind == ":types":
            types = _parse_typed_list(body, ":types")
        elif kind == ":constants":
            constants = _parse_typed_list(body, ":constants")
        elif kind == ":predicates":
            for p in body:
                atom = _parse_atom(p, ":predicates")
                params = _parse_typed_list(list(_items(p)[1:]), "predicate %s" % atom.predicate)
                predicates.append(Predicate(atom.predicate, params))
        elif kind == ":derived":
            if len(body) != 2:
                raise PddlSyntaxError("(:derived <head> <body>) expected", line, col)
            head = _parse_atom(body[0], ":derived")
            params = _parse_typed_list(list(_items(body[0])[1:]), "derived %s" % head.predicate)
            derived.append(DerivedPredicate(head.predicate, params,
                                            _parse_condition(body[1], "derived %s" % head.predicate)))
        elif kind == ":action":
            actions.append(_parse_action(body, line, col))
        else:
            raise PddlSyntaxError("unsupported section %r" % kind, line, col)

    domain = Domain(name=name, requirements=requirements, types=types,
                    constants=constants, predicates=tuple(predicates),
                    derived=tuple(derived), actions=tuple(actions))
    validate_domain(domain)
    return domain


def _parse_action(body: list, line: int, col: int) -> ActionSchema:
    if not body:
        raise PddlSyntaxError("action needs a name", line, col)
    name = _sym_text(body[0], "an action name")
    parameters: tuple[tuple[str, str], ...] = ()
    precondition: Condition = TRUE_COND
    outcomes = None
    i = 1
    while i < len(body):
        key = _sym_text(body[i], "an action keyword")
        if i + 1 >= len(body):
            raise PddlSyntaxError("missing value for %s in action %s" % (key, name), line, col)
        value = body[i + 1]
        if key == ":parameters":
            if not _is_list(value):
                raise PddlSyntaxError(":parameters needs a list", line, col)
            parameters = _parse_typed_list(_items(value), "parameters of %s" % name)
            for v, _ in parameters:
                if not v.startswith("?"):
                    raise PddlSyntaxError("parameter %r of %s must start with '?'" % (v, name),
                                          line, col)
        elif key == ":precondition":
            precondition = _parse_condition(value, "precondition of %s" % name)
        elif key == ":effect":
            outcomes = _parse_effect(value, name)
        else:
            raise PddlSyntaxError("unsupported action keyword %r" % key, line, col)
        i += 2
    if outcomes is None:
        raise PddlSyntaxError("action %s has no :effect" % name, line, col)
    return ActionSchema(name, parameters, precondition, outcomes)


def parse_problem(text: str, domain: Domain) -> Problem:
    """Parse and validate a problem file against its domain."""
    top = _read(text)
    if len(top) != 1 or not _is_list(top[0]):
        raise PddlSyntaxError("expected a single (define ...) form", 1, 1)
    items = _items(top[0])
    if not items or _sym_text(items[0], "define") != "define":
        line, col = _pos(top[0])
        raise PddlSyntaxError("expected (define (problem ...) ...)", line, col)
    header = items[1]
    if not (_is_list(header) and len(_items(header)) == 2
            and _sym_text(_items(header)[0], "problem") == "problem"):
        line, col = _pos(header)
        raise PddlSyntaxError("expected (problem <name>)", line, col)
    name = _sym_text(_items(header)[1], "the problem name")

    domain_name = None
    objects: tuple[tuple[str, str], ...] = ()
    init: list[AtomCond] = []
    goal: Condition | None = None

    for section in items[2:]:
        kind = _section_name(section)
        body = _items(section)[1:]
        line, col = _pos(section)
        if kind == ":domain":
            domain_name = _sym_text(body[0], "the domain name")
        elif kind == ":objects":
            objects = _parse_typed_list(body, ":objects")
        elif kind == ":init":
            init = [_parse_atom(n, ":init") for n in body]
        elif kind == ":goal":
            if len(body) != 1:
                raise PddlSyntaxError("(:goal <condition>) expected", line, col)
            goal = _parse_condition(body[0], ":goal")
        else:
            raise PddlSyntaxError("unsupported section %r" % kind, line, col)

    if domain_name is None:
        raise PddlSyntaxError("problem %s has no (:domain ...)" % name, 1, 1)
    if goal is None:
        raise PddlSyntaxError("problem %s has no (:goal ...)" % name, 1, 1)
    problem = Problem(name=name, domain_name=domain_name, objects=objects,
                      init=tuple(init), goal=goal)
    validate_problem(problem, domain)
    return problem
