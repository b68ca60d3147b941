"""Canonical text form. ``parse(unparse(e))`` rebuilds ``e`` for parsed trees."""

from __future__ import annotations

from fractions import Fraction

from .nodes import Add, Binary, Call, Const, Div, Expr, Mul, Neg, Num, Piecewise, Pow, Sub, Sum, Var

_ATOM = 5
_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Pow: 4}


def _prec(e: Expr) -> int:
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Num):
        v = e.value
        if v < 0 or (isinstance(v, Fraction) and v.denominator != 1):
            return 0
        return _ATOM
    return _PREC.get(type(e), _ATOM)


def _wrap(e: Expr, min_prec: int) -> str:
    s = unparse(e)
    return f"({s})" if _prec(e) < min_prec else s


def _num(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def unparse(e: Expr) -> str:
    if isinstance(e, Num):
        return _num(e.value)
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, 3)
    if isinstance(e, (Add, Sub)):
        return f"{_wrap(e.left, 1)} {e.symbol} {_wrap(e.right, 2)}"
    if isinstance(e, (Mul, Div)):
        return f"{_wrap(e.left, 2)}{e.symbol}{_wrap(e.right, 3)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.left, _ATOM)}^{_wrap(e.right, 3)}"
    if isinstance(e, Call):
        return f"{e.func}({', '.join(unparse(a) for a in e.args)})"
    if isinstance(e, Sum):
        return f"sum({e.var} = {unparse(e.lower)} .. {unparse(e.upper)}, {unparse(e.body)})"
    if isinstance(e, Piecewise):
        parts = []
        for b in e.branches:
            lo = "[" if b.lower_closed else "("
            hi = "]" if b.upper_closed else ")"
            parts.append(f"{lo}{unparse(b.lower)},{unparse(b.upper)}{hi}: {unparse(b.body)}")
        return f"piecewise({'; '.join(parts)})"
    if isinstance(e, Binary):
        raise TypeError(f"unknown operator node {type(e).__name__}")
    raise TypeError(f"cannot print {type(e).__name__}")
