"""Immutable expression tree."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar, Iterator, Union


class Expr:
    """Base class for every node. Nodes compare structurally."""

    def children(self) -> tuple["Expr", ...]:
        return ()

    def walk(self) -> Iterator["Expr"]:
        yield self
        for c in self.children():
            yield from c.walk()

    def __str__(self) -> str:
        from .printer import unparse

        return unparse(self)


@dataclass(frozen=True, eq=False)
class Num(Expr):
    """A literal. ``Fraction`` for integer literals, ``float`` for decimals."""

    value: Union[Fraction, float]

    def __eq__(self, other):
        return (
            isinstance(other, Num)
            and type(self.value) is type(other.value)
            and self.value == other.value
        )

    def __hash__(self):
        return hash((Num, type(self.value), self.value))

    def __repr__(self):
        return f"Num({self.value})"


@dataclass(frozen=True)
class Const(Expr):
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Neg({self.arg!r})"


@dataclass(frozen=True)
class Binary(Expr):
    left: Expr
    right: Expr
    symbol: ClassVar[str] = "?"

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Add(Binary):
    symbol = "+"


class Sub(Binary):
    symbol = "-"


class Mul(Binary):
    symbol = "*"


class Div(Binary):
    symbol = "/"


class Pow(Binary):
    symbol = "^"


BINARY_BY_SYMBOL: dict[str, type[Binary]] = {c.symbol: c for c in (Add, Sub, Mul, Div, Pow)}


@dataclass(frozen=True)
class Call(Expr):
    func: str
    args: tuple[Expr, ...]

    def children(self):
        return self.args

    def __repr__(self):
        return f"{self.func.capitalize()}({', '.join(map(repr, self.args))})"


@dataclass(frozen=True)
class Sum(Expr):
    """Finite sum ``sum(var = lower .. upper, body)`` with inclusive bounds."""

    var: str
    lower: Expr
    upper: Expr
    body: Expr

    def children(self):
        return (self.lower, self.upper, self.body)


@dataclass(frozen=True)
class Branch:
    lower: Expr
    upper: Expr
    lower_closed: bool
    upper_closed: bool
    body: Expr


@dataclass(frozen=True)
class Piecewise(Expr):
    """Branches selected by the real part of ``theta``."""

    branches: tuple[Branch, ...]
    var: str = "theta"

    def children(self):
        out: list[Expr] = []
        for b in self.branches:
            out.extend((b.lower, b.upper, b.body))
        return tuple(out)


def free_vars(e: Expr) -> set[str]:
    """Names a caller must bind before evaluating ``e``."""
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Sum):
        return free_vars(e.lower) | free_vars(e.upper) | (free_vars(e.body) - {e.var})
    if isinstance(e, Piecewise):
        names = {e.var}
        for c in e.children():
            names |= free_vars(c)
        return names
    names: set[str] = set()
    for c in e.children():
        names |= free_vars(c)
    return names
