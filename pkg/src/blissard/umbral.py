"""Representative (umbral) notation as formal polynomials in a symbol R.

A polynomial is a finite sum of terms ``c * R^e`` with rational exponents.
After expansion, every power ``R^e`` is lowered to the sequence value
``R_e = 1/e``. That lowering, :func:`u_eval`, is linear but not
multiplicative, which is the whole point of the notation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, EvaluationError
from .exact import _as_rational, lemma1_lhs, lemma1_rhs

__all__ = [
    "UmbralPoly",
    "R",
    "u_mul",
    "u_pow",
    "u_eval",
    "verify_lemma1_induction",
]


def _normalize(pairs: Iterable[tuple]) -> tuple[tuple[Fraction, Fraction], ...]:
    acc: dict[Fraction, Fraction] = {}
    for c, e in pairs:
        c, e = _as_rational(c), _as_rational(e)
        acc[e] = acc.get(e, Fraction(0)) + c
    return tuple((c, e) for e, c in sorted(acc.items()) if c != 0)


@dataclass(frozen=True, init=False)
class UmbralPoly:
    """Immutable sum of ``coeff * R**exponent`` terms, sorted by exponent."""

    terms: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, terms: Iterable[tuple] = ()):
        object.__setattr__(self, "terms", _normalize(terms))

    @classmethod
    def const(cls, c=1) -> "UmbralPoly":
        return cls([(c, 0)])

    def __add__(self, other):
        other = _lift(other)
        return UmbralPoly(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return UmbralPoly((-c, e) for c, e in self.terms)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        return u_mul(self, _lift(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return u_pow(self, n)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, e in self.terms:
            if e == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"R^{e}")
            else:
                parts.append(f"{c}*R^{e}")
        return " + ".join(parts)


def _lift(x) -> UmbralPoly:
    if isinstance(x, UmbralPoly):
        return x
    return UmbralPoly.const(x)


def R(e=1) -> UmbralPoly:
    """The monomial R^e."""
    return UmbralPoly([(1, e)])


def u_mul(a: UmbralPoly, b: UmbralPoly) -> UmbralPoly:
    return UmbralPoly((ca * cb, ea + eb) for ca, ea in a.terms for cb, eb in b.terms)


def u_pow(a: UmbralPoly, n: int) -> UmbralPoly:
    if n < 0:
        raise DomainError("umbral powers must be non-negative")
    result = UmbralPoly.const(1)
    for _ in range(n):
        result = u_mul(result, a)
    return result


def u_eval(a: UmbralPoly) -> Fraction:
    """Lower R^e to 1/e (e > 0) and R^0 to 1, then sum."""
    total = Fraction(0)
    for c, e in a.terms:
        if e < 0:
            raise EvaluationError(f"cannot lower R^{e}: negative exponent")
        total += c if e == 0 else c / e
    return total


def verify_lemma1_induction(n_max: int, m_values: Sequence) -> bool:
    """Replay the induction proof of the alternating binomial sum exactly.

    For every m and n <= n_max this checks the base case, the recursion
    ``R^m (1-R)^(n+1) = R^m (1-R)^n - R^(m+1) (1-R)^n`` after lowering,
    the matching recursion on the closed form, and agreement of the
    lowered umbral expression with both sides of the identity.
    """
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    one_minus_r = UmbralPoly.const(1) - R(1)
    for m in m_values:
        m = _as_rational(m)
        if m <= 0:
            raise DomainError(f"m must be positive, got {m}")
        powers = [u_pow(one_minus_r, n) for n in range(n_max + 2)]

        def lowered(shift: Fraction, n: int) -> Fraction:
            return u_eval(u_mul(R(m + shift), powers[n]))

        if lowered(Fraction(0), 0) != lemma1_rhs(0, m):
            return False
        for n in range(n_max + 1):
            value = lowered(Fraction(0), n)
            if value != lemma1_lhs(n, m) or value != lemma1_rhs(n, m):
                return False
            if n == n_max:
                break
            step = lowered(Fraction(0), n + 1)
            if step != value - lowered(Fraction(1), n):
                return False
            # 1/m - 1/(m+n+1) = (n+1)/(m(m+n+1)) folds the product up one level
            if lemma1_rhs(n, m) - lemma1_rhs(n, m + 1) != lemma1_rhs(n + 1, m):
                return False
            if u_eval(R(m) - R(m + n + 1)) != Fraction(n + 1) / (m * (m + n + 1)):
                return False
            if step != lemma1_rhs(n + 1, m):
                return False
    return True
