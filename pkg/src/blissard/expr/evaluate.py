"""Numeric and exact evaluation of expression trees.

:func:`evaluate` works on complex doubles and broadcasts over numpy arrays,
so a series term can be evaluated for a whole block of indices at once.
Singular points (``log(0)``, ``1/0``) come back as ``inf``/``nan`` rather
than raising.

:func:`evaluate_series` treats one variable as the formal variable of a
:class:`~blissard.exact.TruncatedSeries` and everything else as exact
rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Mapping

import numpy as np
from scipy import special

from .. import exact
from ..errors import EvaluationError
from .nodes import Add, Branch, Call, Const, Div, Expr, Mul, Neg, Num, Piecewise, Pow, Sub, Sum, Var

__all__ = ["evaluate", "evaluate_series"]


# ---------------------------------------------------------------- numeric


def _is_real(x) -> bool:
    return not np.iscomplexobj(x)


def _scalar_int(x, what: str) -> int:
    a = np.asarray(x)
    if a.ndim != 0:
        raise EvaluationError(f"{what} must be a scalar")
    v = complex(a)
    if v.imag != 0 or not math.isfinite(v.real) or v.real != round(v.real):
        raise EvaluationError(f"{what} must be an integer, got {v}")
    return int(round(v.real))


def _real_arg(x, fname: str):
    if not _is_real(x):
        if np.any(np.imag(x) != 0):
            raise EvaluationError(f"{fname} is only defined for real arguments")
        x = np.real(x)
    return x


def _pow(b, x):
    if _is_real(b) and _is_real(x):
        bf = np.asarray(b, dtype=float)
        xf = np.asarray(x, dtype=float)
        if np.all(bf >= 0) or np.all(xf == np.round(xf)):
            return np.power(bf, xf)
    return np.power(np.asarray(b, dtype=complex), x)


def _cis(t):
    if _is_real(t):
        return np.cos(t) + 1j * np.sin(t)
    return np.exp(1j * t)


@lru_cache(maxsize=8)
def _harmonic_table(n_max: int) -> np.ndarray:
    return np.concatenate(([0.0], np.cumsum(1.0 / np.arange(1, n_max + 1))))


def _harmonic(n):
    n = _real_arg(n, "harmonic")
    a = np.asarray(n, dtype=float)
    if np.any(a < 0) or np.any(a != np.round(a)):
        raise EvaluationError("harmonic needs non-negative integers")
    top = int(a.max()) if a.size else 0
    if top <= 10_000_000:
        size = max(1024, 1 << top.bit_length())
        return _harmonic_table(size)[a.astype(np.int64)]
    return special.digamma(a + 1) + np.euler_gamma


def _bernoulli(n):
    return float(exact.bernoulli_number(_scalar_int(n, "bernoulli index")))


def _bernpoly(n, x):
    k = _scalar_int(n, "bernpoly degree")
    if k < 0:
        raise EvaluationError("bernpoly degree must be >= 0")
    coeffs = [float(comb(k, j) * exact.bernoulli_number(j)) for j in range(k + 1)]
    # coeffs[j] multiplies x^(k-j): highest power first, as np.polyval wants
    return np.polyval(coeffs, x)


def _acoef(n, k):
    return float(exact._a_sum(_scalar_int(n, "acoef n"), _scalar_int(k, "acoef k")))


_UNARY = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sec": lambda x: 1.0 / np.cos(x),
    "log": np.emath.log,
    "exp": np.exp,
    "atan": np.arctan,
    "abs": np.abs,
    "sqrt": np.emath.sqrt,
    "re": np.real,
    "im": np.imag,
    "cis": _cis,
    "fact": lambda x: special.gamma(_real_arg(x, "fact") + 1.0),
    "harmonic": _harmonic,
    "bernoulli": _bernoulli,
}
_BINARY_FUNCS = {
    "beta": lambda a, b: special.beta(_real_arg(a, "beta"), _real_arg(b, "beta")),
    "binom": lambda a, b: special.binom(_real_arg(a, "binom"), _real_arg(b, "binom")),
    "bernpoly": _bernpoly,
    "acoef": _acoef,
}


def _in_branch(t, lo, hi, b: Branch):
    above = t >= lo if b.lower_closed else t > lo
    below = t <= hi if b.upper_closed else t < hi
    return above & below


def _bound(e: Expr, ctx) -> float:
    v = complex(np.asarray(_eval(e, ctx)))
    return v.real


def _eval(e: Expr, ctx: Mapping):
    t = type(e)
    if t is Num:
        return float(e.value)
    if t is Var:
        try:
            v = ctx[e.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {e.name!r}") from None
        if isinstance(v, Fraction):
            return float(v)
        return v
    if t is Const:
        if e.name == "pi":
            return math.pi
        raise EvaluationError(f"unknown constant {e.name!r}")
    if t is Add:
        return _eval(e.left, ctx) + _eval(e.right, ctx)
    if t is Sub:
        return _eval(e.left, ctx) - _eval(e.right, ctx)
    if t is Mul:
        return _eval(e.left, ctx) * _eval(e.right, ctx)
    if t is Div:
        return np.true_divide(_eval(e.left, ctx), _eval(e.right, ctx))
    if t is Pow:
        return _pow(_eval(e.left, ctx), _eval(e.right, ctx))
    if t is Neg:
        return -_eval(e.arg, ctx)
    if t is Call:
        args = [_eval(a, ctx) for a in e.args]
        if e.func in _UNARY:
            return _UNARY[e.func](*args)
        if e.func in _BINARY_FUNCS:
            return _BINARY_FUNCS[e.func](*args)
        raise EvaluationError(f"unknown function {e.func!r}")
    if t is Sum:
        lo = _scalar_int(_eval(e.lower, ctx), "sum lower bound")
        hi = _scalar_int(_eval(e.upper, ctx), "sum upper bound")
        total = 0.0
        inner = dict(ctx)
        for j in range(lo, hi + 1):
            inner[e.var] = float(j)
            total = total + _eval(e.body, inner)
        return total
    if t is Piecewise:
        return _eval_piecewise(e, ctx)
    raise EvaluationError(f"cannot evaluate {t.__name__}")


def _eval_piecewise(e: Piecewise, ctx: Mapping):
    if e.var not in ctx:
        raise EvaluationError(f"unbound variable {e.var!r}")
    theta = np.real(np.asarray(ctx[e.var], dtype=complex))
    chosen = np.full(theta.shape, -1)
    for i, b in enumerate(e.branches):
        mask = _in_branch(theta, _bound(b.lower, ctx), _bound(b.upper, ctx), b) & (chosen < 0)
        chosen = np.where(mask, i, chosen)
    if np.any(chosen < 0):
        bad = theta[chosen < 0] if theta.ndim else theta
        raise EvaluationError(f"piecewise argument {float(np.ravel(bad)[0])!r} lies outside every branch")
    if theta.ndim == 0:
        return _eval(e.branches[int(chosen)].body, ctx)
    out = np.zeros(theta.shape, dtype=complex)
    for i in np.unique(chosen):
        out = np.where(chosen == i, _eval(e.branches[i].body, ctx), out)
    return out


def evaluate(e: Expr, ctx: Mapping | None = None):
    """Evaluate ``e`` under ``ctx`` (name -> number or numpy array).

    Scalars come back as ``complex``; array inputs give a complex array.
    """
    with np.errstate(all="ignore"):
        v = _eval(e, ctx or {})
    if isinstance(v, np.ndarray) and v.ndim > 0:
        return v.astype(complex, copy=False)
    return complex(v)


# ------------------------------------------------------------------ exact

_TS = exact.TruncatedSeries


def _fr(v, what: str) -> Fraction:
    if isinstance(v, _TS):
        raise EvaluationError(f"{what} must not depend on the series variable")
    return v


def _int_of(v, what: str) -> int:
    v = _fr(v, what)
    if v.denominator != 1:
        raise EvaluationError(f"{what} must be an integer, got {v}")
    return int(v)


def _promote(a, b):
    if isinstance(a, _TS) and isinstance(b, _TS):
        n = min(a.order, b.order)
        return a.truncate(n), b.truncate(n)
    if isinstance(a, _TS):
        return a, _TS.constant(b, a.order)
    return _TS.constant(a, b.order), b


def _div_exact(a, b):
    if not isinstance(a, _TS) and not isinstance(b, _TS):
        if b == 0:
            raise EvaluationError("exact division by zero")
        return a / b
    if not isinstance(b, _TS):
        return a / b
    a, b = _promote(a, b)
    v = b.valuation()
    if v >= b.order:
        raise EvaluationError("division by a series that vanishes to working order")
    if v:
        try:
            a = a.shift_down(v)
        except ZeroDivisionError:
            raise EvaluationError(f"numerator is not divisible by x^{v}") from None
        b = b.shift_down(v)
    return a / b


def _pow_exact(b, x):
    k = _int_of(x, "exact exponent")
    if not isinstance(b, _TS):
        if b == 0 and k < 0:
            raise EvaluationError("exact division by zero")
        return b**k
    v = b.valuation()
    if k > 0 and v > 0 and v * k >= b.order:
        return _TS((), b.order)
    if k < 0 and v > 0:
        raise EvaluationError("negative power of a series without constant term")
    return b**k


def _exact_call(name: str, args):
    if name in ("fact", "harmonic", "bernoulli", "abs", "binom", "beta", "acoef"):
        vals = [_fr(a, name) for a in args]
        if name == "fact":
            return Fraction(factorial(_int_of(vals[0], "fact argument")))
        if name == "harmonic":
            return exact.harmonic(_int_of(vals[0], "harmonic argument"))
        if name == "bernoulli":
            return exact.bernoulli_number(_int_of(vals[0], "bernoulli index"))
        if name == "abs":
            return abs(vals[0])
        if name == "acoef":
            return exact._a_sum(_int_of(vals[0], "acoef n"), _int_of(vals[1], "acoef k"))
        if name == "binom":
            top, k = vals[0], _int_of(vals[1], "binom k")
            if k < 0:
                return Fraction(0)
            out = Fraction(1)
            for i in range(k):
                out = out * (top - i) / (i + 1)
            return out
        a, b = _int_of(vals[0], "beta a"), _int_of(vals[1], "beta b")
        if a < 1 or b < 1:
            raise EvaluationError("exact beta needs positive integers")
        return Fraction(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))
    if name == "bernpoly":
        k = _int_of(args[0], "bernpoly degree")
        x = args[1]
        total = Fraction(0)
        for j in range(k + 1):
            total = _add_exact(total, _mul_exact(comb(k, j) * exact.bernoulli_number(j), _pow_exact(x, Fraction(k - j))))
        return total
    (a,) = args
    if not isinstance(a, _TS):
        known = {("sin", 0): 0, ("cos", 0): 1, ("tan", 0): 0, ("sec", 0): 1, ("exp", 0): 1, ("log", 1): 0}
        if (name, a) in known:
            return Fraction(known[(name, a)])
        raise EvaluationError(f"{name}({a}) is not rational")
    if name == "log":
        c0 = a[0] if a.order else Fraction(1)
        if c0 != 1:
            raise EvaluationError(f"log needs constant term 1, got {c0}")
        return a.log()
    if name == "exp":
        return a.exp()
    if name in ("sin", "cos", "tan", "sec"):
        s, c = a.sin_cos()
        return {"sin": s, "cos": c, "tan": s / c if s.order else s, "sec": 1 / c if c.order else c}[name]
    raise EvaluationError(f"{name} is not supported in exact series evaluation")


def _add_exact(a, b):
    if isinstance(a, _TS) or isinstance(b, _TS):
        a, b = _promote(a, b)
    return a + b


def _mul_exact(a, b):
    if isinstance(a, _TS) and isinstance(b, _TS):
        a, b = _promote(a, b)
    return a * b


def _exact(e: Expr, var: str, order: int, ctx: Mapping):
    t = type(e)
    if t is Num:
        if isinstance(e.value, float):
            raise EvaluationError(f"decimal literal {e.value!r} in an exact context")
        return e.value
    if t is Var:
        if e.name == var:
            return _TS.variable(order)
        try:
            return Fraction(ctx[e.name])
        except KeyError:
            raise EvaluationError(f"unbound variable {e.name!r}") from None
        except TypeError:
            raise EvaluationError(f"variable {e.name!r} is not an exact rational") from None
    if t is Const:
        raise EvaluationError(f"constant {e.name} is not rational")
    if t is Neg:
        return -_exact(e.arg, var, order, ctx)
    if t in (Add, Sub, Mul, Div, Pow):
        a = _exact(e.left, var, order, ctx)
        b = _exact(e.right, var, order, ctx)
        if t is Add:
            return _add_exact(a, b)
        if t is Sub:
            return _add_exact(a, -b)
        if t is Mul:
            return _mul_exact(a, b)
        if t is Div:
            return _div_exact(a, b)
        return _pow_exact(a, b)
    if t is Call:
        return _exact_call(e.func, [_exact(a, var, order, ctx) for a in e.args])
    if t is Sum:
        lo = _int_of(_exact(e.lower, var, order, ctx), "sum lower bound")
        hi = _int_of(_exact(e.upper, var, order, ctx), "sum upper bound")
        inner = dict(ctx)
        total = Fraction(0)
        for j in range(lo, hi + 1):
            inner[e.var] = Fraction(j)
            total = _add_exact(total, _exact(e.body, var, order, inner))
        return total
    raise EvaluationError(f"{t.__name__} is not supported in exact series evaluation")


def evaluate_series(e: Expr, var: str = "x", order: int = exact.DEFAULT_ORDER, ctx: Mapping | None = None, slack: int = 8):
    """Exact Maclaurin coefficients of ``e`` in ``var`` up to ``var^(order-1)``.

    Works at ``order + slack`` internally so that cancelling a power of
    ``var`` in a quotient such as ``x/sin(x)`` does not eat into the
    requested precision.
    """
    v = _exact(e, var, order + slack, ctx or {})
    if not isinstance(v, _TS):
        return _TS.constant(v, order)
    if v.order < order:
        raise EvaluationError(f"only {v.order} coefficients survive, {order} requested")
    return v.truncate(order)
