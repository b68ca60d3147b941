"""Exact rational quantities and truncated power series.

Everything here works over :class:`fractions.Fraction`, exported as
``Rational``. Bernoulli numbers use the convention ``B_1 = -1/2``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Rational as _RationalABC
from typing import Iterable

from .errors import DomainError

Rational = Fraction

DEFAULT_ORDER = 16

__all__ = [
    "Rational",
    "DEFAULT_ORDER",
    "harmonic",
    "bernoulli_number",
    "bernoulli_poly",
    "a_coeff",
    "lemma1_lhs",
    "lemma1_rhs",
    "tail_coeff",
    "TruncatedSeries",
    "ts_mul",
    "ts_div",
    "ts_log",
    "ts_exp",
    "ts_derivative",
    "ts_integrate",
]


def _as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def harmonic(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n, with H_0 = 0."""
    if n < 0:
        raise DomainError("harmonic number needs n >= 0")
    total = Fraction(0)
    for k in range(1, n + 1):
        total += Fraction(1, k)
    return total


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    table = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, k) * table[k] for k in range(m))
        table.append(-s / (m + 1))
    return tuple(table)


def bernoulli_number(n: int) -> Fraction:
    """B_n from sum_{k=0}^{n} C(n+1, k) B_k = 0, so B_1 = -1/2."""
    if n < 0:
        raise DomainError("Bernoulli index must be >= 0")
    # Grow the cache in steps so repeated calls stay cheap.
    size = max(32, 1 << (n.bit_length()))
    return _bernoulli_table(size)[n]


def bernoulli_poly(n: int, x) -> Fraction:
    """B_n(x) = sum_k C(n, k) B_k x^(n-k)."""
    if n < 0:
        raise DomainError("Bernoulli index must be >= 0")
    x = _as_rational(x)
    total = Fraction(0)
    for k in range(n + 1):
        total += comb(n, k) * bernoulli_number(k) * x ** (n - k)
    return total


def _a_sum(n: int, k: int) -> Fraction:
    return sum(
        (Fraction((-1) ** (k - j) * comb(n, j - 1), k - j + 1) for j in range(1, k + 1)),
        Fraction(0),
    )


def a_coeff(n: int, k: int) -> Fraction:
    """Head coefficient A_{n,k} of (1+x)^n log(1+x), for 1 <= k <= n.

    The first index is the exponent n, matching ``Akn(k, n)`` in the
    original GP script.
    """
    if n < 1 or not 1 <= k <= n:
        raise DomainError(f"A_{{n,k}} needs 1 <= k <= n, got n={n}, k={k}")
    return _a_sum(n, k)


def _check_m(m) -> Fraction:
    m = _as_rational(m)
    if m <= 0:
        raise DomainError(f"m must be positive, got {m}")
    return m


def lemma1_lhs(n: int, m) -> Fraction:
    """sum_{k=0}^{n} (-1)^k C(n, k) / (m + k)."""
    if n < 0:
        raise DomainError("n must be >= 0")
    m = _check_m(m)
    return sum((Fraction((-1) ** k * comb(n, k)) / (m + k) for k in range(n + 1)), Fraction(0))


def lemma1_rhs(n: int, m) -> Fraction:
    """n! / prod_{k=0}^{n} (m + k), built as a running product."""
    if n < 0:
        raise DomainError("n must be >= 0")
    m = _check_m(m)
    value = 1 / m
    for k in range(1, n + 1):
        value *= k / (m + k)
    return value


def tail_coeff(n: int, k: int) -> Fraction:
    """(-1)^(k-1) (k-1)! n! / (n+k)!, the coefficient of x^(n+k) in (1+x)^n log(1+x)."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if k < 1:
        raise DomainError("tail index k starts at 1")
    t = Fraction(1, n + 1)
    for i in range(1, k):
        t = -t * i / (n + i + 1)
    return t


class TruncatedSeries:
    """Power series in x with exact coefficients, known up to x^(order-1)."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable = (), order: int = DEFAULT_ORDER):
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = [_as_rational(c) for c in coeffs][:order]
        cs.extend([Fraction(0)] * (order - len(cs)))
        self._coeffs = tuple(cs)

    @classmethod
    def constant(cls, c, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls([c], order)

    @classmethod
    def variable(cls, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls([0, 1], order)

    @property
    def order(self) -> int:
        return len(self._coeffs)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def __getitem__(self, i: int) -> Fraction:
        if not 0 <= i < self.order:
            raise IndexError(f"coefficient {i} is beyond order {self.order}")
        return self._coeffs[i]

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        terms = [f"{c}*x^{i}" for i, c in enumerate(self._coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"TruncatedSeries({body}, order={self.order})"

    def _same_order(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._same_order(other)
            return other
        return TruncatedSeries.constant(_as_rational(other), self.order)

    def __add__(self, other):
        other = self._coerce(other)
        return TruncatedSeries((a + b for a, b in zip(self._coeffs, other._coeffs)), self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries((-a for a in self._coeffs), self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = _as_rational(other)
            return TruncatedSeries((c * a for a in self._coeffs), self.order)
        self._same_order(other)
        n = self.order
        a, b = self._coeffs, other._coeffs
        out = [Fraction(0)] * n
        for i, ai in enumerate(a):
            if ai:
                for j in range(n - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = _as_rational(other)
            if c == 0:
                raise ZeroDivisionError("division of a series by zero")
            return self * (1 / c)
        self._same_order(other)
        b = other._coeffs
        if self.order and b[0] == 0:
            raise ZeroDivisionError("divisor series has zero constant term")
        n = self.order
        q: list[Fraction] = []
        for i in range(n):
            s = self._coeffs[i] - sum((q[j] * b[i - j] for j in range(i)), Fraction(0))
            q.append(s / b[0])
        return TruncatedSeries(q, n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or isinstance(k, bool):
            raise TypeError("series powers must be integers")
        if k < 0:
            return TruncatedSeries.constant(1, self.order) / (self ** (-k))
        result = TruncatedSeries.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self._coeffs[:order], order)

    def valuation(self) -> int:
        """Index of the first nonzero coefficient, or ``order`` if all vanish."""
        for i, c in enumerate(self._coeffs):
            if c:
                return i
        return self.order

    def shift_down(self, v: int) -> "TruncatedSeries":
        """Divide by x^v. The first v coefficients must be zero; order drops by v."""
        if any(self._coeffs[:v]):
            raise ZeroDivisionError(f"series is not divisible by x^{v}")
        return TruncatedSeries(self._coeffs[v:], self.order - v)

    def derivative(self) -> "TruncatedSeries":
        if self.order == 0:
            return self
        return TruncatedSeries((i * c for i, c in enumerate(self._coeffs) if i), self.order - 1)

    def integrate(self) -> "TruncatedSeries":
        """Antiderivative with zero constant term; order grows by one."""
        return TruncatedSeries(
            [Fraction(0)] + [c / (i + 1) for i, c in enumerate(self._coeffs)], self.order + 1
        )

    def log(self) -> "TruncatedSeries":
        if self.order == 0:
            return self
        if self._coeffs[0] != 1:
            raise DomainError("log needs a series with constant term 1")
        if self.order == 1:
            return TruncatedSeries([0], 1)
        return (self.derivative() / self.truncate(self.order - 1)).integrate()

    def exp(self) -> "TruncatedSeries":
        if self.order and self._coeffs[0] != 0:
            raise DomainError("exp needs a series with zero constant term")
        # e' = a' e solved coefficient by coefficient
        n = self.order
        da = [i * c for i, c in enumerate(self._coeffs)]
        e = [Fraction(1)] + [Fraction(0)] * (n - 1)
        for i in range(1, n):
            e[i] = sum((da[j] * e[i - j] for j in range(1, i + 1)), Fraction(0)) / i
        return TruncatedSeries(e, n)

    def sin_cos(self) -> tuple["TruncatedSeries", "TruncatedSeries"]:
        if self.order and self._coeffs[0] != 0:
            raise DomainError("sin/cos need a series with zero constant term")
        n = self.order
        da = [i * c for i, c in enumerate(self._coeffs)]
        s = [Fraction(0)] * n
        c = [Fraction(1)] + [Fraction(0)] * (n - 1)
        for i in range(1, n):
            s[i] = sum((da[j] * c[i - j] for j in range(1, i + 1)), Fraction(0)) / i
            c[i] = -sum((da[j] * s[i - j] for j in range(1, i + 1)), Fraction(0)) / i
        return TruncatedSeries(s, n), TruncatedSeries(c, n)


def ts_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def ts_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a / b


def ts_log(a: TruncatedSeries) -> TruncatedSeries:
    return a.log()


def ts_exp(a: TruncatedSeries) -> TruncatedSeries:
    return a.exp()


def ts_derivative(a: TruncatedSeries) -> TruncatedSeries:
    return a.derivative()


def ts_integrate(a: TruncatedSeries) -> TruncatedSeries:
    return a.integrate()

