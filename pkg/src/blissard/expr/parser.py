"""Recursive-descent parser for the expression language.

Precedence, loosest first: ``+ -``, ``* /``, unary minus, ``^`` (right
associative). Integer literals become exact ``Fraction`` values; anything
with a decimal point or exponent becomes a ``float``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from ..errors import ExprSyntaxError
from .nodes import (
    BINARY_BY_SYMBOL,
    Branch,
    Call,
    Const,
    Expr,
    Neg,
    Num,
    Piecewise,
    Sum,
    Var,
)

# name -> arity
FUNCTIONS: dict[str, int] = {
    "sin": 1,
    "cos": 1,
    "tan": 1,
    "sec": 1,
    "log": 1,
    "exp": 1,
    "atan": 1,
    "abs": 1,
    "sqrt": 1,
    "re": 1,
    "im": 1,
    "cis": 1,
    "fact": 1,
    "harmonic": 1,
    "bernoulli": 1,
    "beta": 2,
    "binom": 2,
    "bernpoly": 2,
    "acoef": 2,
}
CONSTANTS = {"pi"}
SPECIAL = {"sum", "piecewise", "inf", "bisum", "quotient"}
RESERVED = set(FUNCTIONS) | CONSTANTS | SPECIAL


class Token(NamedTuple):
    kind: str  # NUM, NAME, OP, END
    text: str
    offset: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d+)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\.\.|[-+*/^()\[\],;:=])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos), text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind.upper(), m.group(), pos))
        pos = m.end()
    tokens.append(Token("END", "", len(text)))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


@dataclass(frozen=True)
class SeriesForm:
    """Parsed right-hand side of a catalog ``series =`` line."""

    kind: str  # "sum", "bisum" or "quotient"
    var: str = ""
    start: Union[Expr, None] = None
    term: Union[Expr, None] = None
    parts: tuple["SeriesForm", ...] = ()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers -------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, expected: str, tok: Token | None = None) -> ExprSyntaxError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "END" else repr(tok.text)
        return ExprSyntaxError(f"expected {expected}, found {found}", _byte_offset(self.text, tok.offset), self.text)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("OP", "NAME") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            raise self.error(repr(text))
        return tok

    def expect_name(self) -> str:
        tok = self.tok
        if tok.kind != "NAME" or tok.text in RESERVED:
            raise self.error("a variable name")
        self.i += 1
        return tok.text

    def finish(self) -> None:
        if self.tok.kind != "END":
            raise self.error("end of input")

    # -- grammar -------------------------------------------------------
    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BINARY_BY_SYMBOL[op](node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "OP" and self.tok.text in ("*", "/"):
            op = self.tok.text
            self.i += 1
            node = BINARY_BY_SYMBOL[op](node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.accept("^"):
            return BINARY_BY_SYMBOL["^"](base, self.unary())
        return base

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "NUM":
            self.i += 1
            if re.fullmatch(r"\d+", tok.text):
                return Num(Fraction(int(tok.text)))
            return Num(float(tok.text))
        if tok.kind == "NAME":
            return self.named()
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise self.error("a number, name or '('")

    def named(self) -> Expr:
        tok = self.tok
        name = tok.text
        self.i += 1
        if name in CONSTANTS:
            return Const(name)
        if name == "piecewise":
            return self.piecewise()
        if name == "sum":
            return self.finite_sum()
        if name in FUNCTIONS:
            self.expect("(")
            args = [self.expr()]
            while self.accept(","):
                args.append(self.expr())
            close = self.tok
            self.expect(")")
            if len(args) != FUNCTIONS[name]:
                raise ExprSyntaxError(
                    f"{name} takes {FUNCTIONS[name]} argument(s), got {len(args)}",
                    _byte_offset(self.text, close.offset),
                    self.text,
                )
            return Call(name, tuple(args))
        if name in SPECIAL:
            raise self.error("an expression", tok)
        if self.tok.kind == "OP" and self.tok.text == "(":
            raise ExprSyntaxError(f"unknown function {name!r}", _byte_offset(self.text, tok.offset), self.text)
        return Var(name)

    def finite_sum(self) -> Sum:
        self.expect("(")
        var = self.expect_name()
        self.expect("=")
        lower = self.expr()
        self.expect("..")
        if self.tok.kind == "NAME" and self.tok.text == "inf":
            raise ExprSyntaxError(
                "infinite sums are only allowed on a series line",
                _byte_offset(self.text, self.tok.offset),
                self.text,
            )
        upper = self.expr()
        self.expect(",")
        body = self.expr()
        self.expect(")")
        return Sum(var, lower, upper, body)

    def piecewise(self) -> Piecewise:
        self.expect("(")
        branches = [self.branch()]
        while self.accept(";"):
            branches.append(self.branch())
        self.expect(")")
        return Piecewise(tuple(branches))

    def branch(self) -> Branch:
        if self.accept("("):
            lower_closed = False
        elif self.accept("["):
            lower_closed = True
        else:
            raise self.error("'(' or '[' opening a branch interval")
        lower = self.expr()
        self.expect(",")
        upper = self.expr()
        if self.accept(")"):
            upper_closed = False
        elif self.accept("]"):
            upper_closed = True
        else:
            raise self.error("')' or ']' closing a branch interval")
        self.expect(":")
        return Branch(lower, upper, lower_closed, upper_closed, self.expr())

    def series(self) -> SeriesForm:
        tok = self.tok
        if self.accept("sum"):
            self.expect("(")
            var = self.expect_name()
            self.expect("=")
            start = self.expr()
            self.expect("..")
            self.expect("inf")
            self.expect(",")
            term = self.expr()
            self.expect(")")
            return SeriesForm("sum", var, start, term)
        if self.accept("bisum"):
            self.expect("(")
            var = self.expect_name()
            self.expect(",")
            term = self.expr()
            self.expect(")")
            return SeriesForm("bisum", var, None, term)
        if self.accept("quotient"):
            self.expect("(")
            num = self.series()
            self.expect(",")
            den = self.series()
            self.expect(")")
            return SeriesForm("quotient", parts=(num, den))
        raise self.error("'sum', 'bisum' or 'quotient'", tok)


def parse(text: str) -> Expr:
    """Parse an expression; raises :class:`ExprSyntaxError` with a byte offset."""
    p = _Parser(text)
    node = p.expr()
    p.finish()
    return node


def parse_series(text: str) -> SeriesForm:
    p = _Parser(text)
    form = p.series()
    p.finish()
    return form
