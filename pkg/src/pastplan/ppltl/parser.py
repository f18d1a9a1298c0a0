"""Recursive-descent parser for the formula concrete syntax.

Precedence, loosest to tightest: ``->`` (right assoc), ``|``, ``&``, ``S``
(right assoc), unary operators, primaries.  Atoms are bare identifiers or
double-quoted strings such as ``"on b1 b2"`` naming ground atoms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .nodes import (
    FALSE,
    START,
    TRUE,
    And,
    Atom,
    Formula,
    Historically,
    Implies,
    Not,
    Once,
    Or,
    Since,
    WeakYesterday,
    Yesterday,
)


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text, with position and expectations."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = expected
        detail = "%s at line %d, column %d" % (message, line, column)
        if expected:
            detail += " (expected %s)" % ", ".join(expected)
        super().__init__(detail)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


_KEYWORDS = {"true": "TRUE", "false": "FALSE", "start": "START",
             "Y": "Y", "WY": "WY", "O": "O", "H": "H", "S": "S"}


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if ch == "(":
            tokens.append(_Token("LPAREN", "(", start_line, start_col))
            i += 1
            col += 1
        elif ch == ")":
            tokens.append(_Token("RPAREN", ")", start_line, start_col))
            i += 1
            col += 1
        elif ch == "!":
            tokens.append(_Token("NOT", "!", start_line, start_col))
            i += 1
            col += 1
        elif ch == "&":
            tokens.append(_Token("AND", "&", start_line, start_col))
            i += 1
            col += 1
        elif ch == "|":
            tokens.append(_Token("OR", "|", start_line, start_col))
            i += 1
            col += 1
        elif ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(_Token("IMPLIES", "->", start_line, start_col))
            i += 2
            col += 2
        elif ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise FormulaSyntaxError("unterminated quoted atom", start_line, start_col)
                j += 1
            if j >= n:
                raise FormulaSyntaxError("unterminated quoted atom", start_line, start_col)
            tokens.append(_Token("QUOTED", text[i + 1:j], start_line, start_col))
            col += j + 1 - i
            i = j + 1
        elif _is_ident_start(ch):
            j = i + 1
            while j < n:
                if _is_ident_char(text[j]):
                    j += 1
                elif text[j] == "-" and j + 1 < n and _is_ident_char(text[j + 1]):
                    j += 2
                else:
                    break
            word = text[i:j]
            kind = _KEYWORDS.get(word, "IDENT")
            tokens.append(_Token(kind, word, start_line, start_col))
            col += j - i
            i = j
        else:
            raise FormulaSyntaxError("unexpected character %r" % ch, start_line, start_col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


_PRIMARY_EXPECTED = ("atom", "true", "false", "start", "'('", "'!'", "'Y'", "'WY'", "'O'", "'H'")


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, label: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise FormulaSyntaxError("unexpected %r" % (tok.text or "end of input"),
                                     tok.line, tok.column, (label,))
        return self.advance()

    def formula(self) -> Formula:
        left = self.disjunct()
        if self.peek().kind == "IMPLIES":
            self.advance()
            return Implies(left, self.formula())
        return left

    def disjunct(self) -> Formula:
        left = self.conjunct()
        while self.peek().kind == "OR":
            self.advance()
            left = Or(left, self.conjunct())
        return left

    def conjunct(self) -> Formula:
        left = self.since()
        while self.peek().kind == "AND":
            self.advance()
            left = And(left, self.since())
        return left

    def since(self) -> Formula:
        left = self.unary()
        if self.peek().kind == "S":
            self.advance()
            return Since(left, self.since())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "NOT":
            self.advance()
            return Not(self.unary())
        if tok.kind == "Y":
            self.advance()
            return Yesterday(self.unary())
        if tok.kind == "WY":
            self.advance()
            return WeakYesterday(self.unary())
        if tok.kind == "O":
            self.advance()
            return Once(self.unary())
        if tok.kind == "H":
            self.advance()
            return Historically(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "TRUE":
            self.advance()
            return TRUE
        if tok.kind == "FALSE":
            self.advance()
            return FALSE
        if tok.kind == "START":
            self.advance()
            return START
        if tok.kind in ("IDENT", "QUOTED"):
            self.advance()
            return Atom(tok.text)
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.formula()
            self.expect("RPAREN", "')'")
            return inner
        raise FormulaSyntaxError("unexpected %r" % (tok.text or "end of input"),
                                 tok.line, tok.column, _PRIMARY_EXPECTED)


def parse_formula(text: str) -> Formula:
    """Parse formula text into an AST; raises :class:`FormulaSyntaxError`."""
    parser = _Parser(_tokenize(text))
    result = parser.formula()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise FormulaSyntaxError("trailing input %r" % tok.text, tok.line, tok.column,
                                 ("end of input",))
    return result
