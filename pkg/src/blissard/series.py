"""Numeric summation engines for trigonometric series.

Four ways to sum a :class:`SeriesSpec` at a given ``theta``:

* :func:`partial_sum` / :func:`direct_sum` - plain truncation, the latter
  with Richardson extrapolation over doubling term counts;
* :func:`abel_sum` - radial (Abel) summation at radii ``1 - 2**-j``,
  extrapolated to ``r = 1``;
* :func:`euler_sum` - Euler's transform of an alternating tail;
* :func:`bilateral_sum` - symmetric sums over all integers.

``error_bound`` on every result is a heuristic, never a guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .errors import ConvergenceError, SeriesError
from .expr import Expr, evaluate

__all__ = [
    "BILATERAL",
    "SeriesSpec",
    "SumEstimate",
    "partial_sum",
    "direct_sum",
    "abel_sum",
    "euler_sum",
    "bilateral_sum",
    "aitken",
    "iterated_aitken",
    "richardson",
]

BILATERAL = "bilateral"

# Hard ceiling on the number of terms held in memory for one sum.
MAX_TERMS = 1 << 22


@dataclass(frozen=True)
class SeriesSpec:
    """``sum_{index_var >= start} term`` or, with ``start=BILATERAL``, over all integers."""

    term: Expr
    index_var: str = "n"
    start: Union[int, str] = 1
    parameters: Mapping[str, object] = field(default_factory=dict)

    @property
    def bilateral(self) -> bool:
        return self.start == BILATERAL

    def bind(self, **params) -> "SeriesSpec":
        merged = dict(self.parameters)
        merged.update(params)
        return SeriesSpec(self.term, self.index_var, self.start, merged)

    def evaluator(self, theta) -> Callable[[np.ndarray], np.ndarray]:
        """Vectorised ``idx -> term(idx, theta)``; raises on non-finite values."""
        ctx = {k: (float(v) if not isinstance(v, complex) else v) for k, v in self.parameters.items()}
        ctx["theta"] = theta
        var, term = self.index_var, self.term

        def f(idx: np.ndarray) -> np.ndarray:
            ctx[var] = idx.astype(float)
            values = np.broadcast_to(evaluate(term, ctx), idx.shape).astype(complex)
            bad = ~np.isfinite(values)
            if bad.any():
                raise SeriesError("non-finite term", int(idx[np.argmax(bad)]))
            return values

        return f


@dataclass(frozen=True)
class SumEstimate:
    value: complex
    error_bound: float
    terms_used: int
    method: str

    def __post_init__(self):
        if self.terms_used < 1:
            raise ValueError("terms_used must be >= 1")
        if not self.error_bound >= 0:
            raise ValueError("error_bound must be non-negative")


# --------------------------------------------------------- accelerators


def aitken(seq: Sequence[complex]) -> list[complex]:
    """One pass of Aitken's delta-squared process."""
    out = []
    for i in range(len(seq) - 2):
        d1 = seq[i + 1] - seq[i]
        d2 = seq[i + 2] - seq[i + 1]
        den = d2 - d1
        if abs(den) <= 1e-300 or abs(den) <= 1e-15 * max(abs(d1), abs(d2)):
            out.append(seq[i + 2])
        else:
            out.append(seq[i + 2] - d2 * d2 / den)
    return out


def iterated_aitken(seq: Sequence[complex], depth: int = 4) -> complex:
    cur = list(seq)
    for _ in range(depth):
        if len(cur) < 3:
            break
        cur = aitken(cur)
    return cur[-1]


def richardson(seq: Sequence[complex], ratio: float = 2.0) -> complex:
    """Extrapolate values sampled at steps h, h/ratio, h/ratio^2, ... to h = 0."""
    col = list(seq)
    level = 1
    while len(col) > 1:
        f = ratio**level
        col = [(f * col[i + 1] - col[i]) / (f - 1) for i in range(len(col) - 1)]
        level += 1
    return col[0]


# -------------------------------------------------------------- engines


def _check_finite_theta(theta) -> None:
    if not np.isfinite(theta):
        raise SeriesError(f"theta must be finite, got {theta}")


def partial_sum(s: SeriesSpec, theta: float, n_terms: int) -> SumEstimate:
    """Sum of the first ``n_terms`` terms; error bound is the last term's size."""
    if n_terms < 1:
        raise SeriesError("n_terms must be >= 1")
    if s.bilateral:
        raise SeriesError("use bilateral_sum for a bilateral series")
    _check_finite_theta(theta)
    idx = np.arange(s.start, s.start + n_terms)
    values = s.evaluator(theta)(idx)
    return SumEstimate(complex(values.sum()), float(abs(values[-1])), n_terms, "direct")


def direct_sum(s: SeriesSpec, theta: float, n_terms: int = 100_000, levels: int = 4) -> SumEstimate:
    """Partial sum of ``n_terms`` terms with a Richardson tail correction.

    Partial sums at ``n_terms / 2**i`` (i = 0..levels) are extrapolated as a
    sequence in ``1/N``. This removes the slow ``1/N`` tail of series like
    ``sum 1/n^2`` and is harmless when the tail is already negligible. For
    fewer than ``64 * 2**levels`` terms the plain partial sum is returned.
    """
    if n_terms < 1:
        raise SeriesError("n_terms must be >= 1")
    if s.bilateral:
        raise SeriesError("use bilateral_sum for a bilateral series")
    _check_finite_theta(theta)
    idx = np.arange(s.start, s.start + n_terms)
    values = s.evaluator(theta)(idx)
    if n_terms < 64 << levels:
        return SumEstimate(complex(values.sum()), float(abs(values[-1])), n_terms, "direct")
    cums = np.cumsum(values)
    sums = [complex(cums[(n_terms >> i) - 1]) for i in range(levels, -1, -1)]
    best = richardson(sums)
    prev = richardson(sums[:-1])
    return SumEstimate(best, float(abs(best - prev)), n_terms, "direct")


def _abel_core(
    block: Callable[[np.ndarray], np.ndarray],
    start: int,
    tol: float,
    accelerator: str,
    j_max: int,
    max_terms: int,
) -> tuple[complex, float, int]:
    j_first = 3
    thr = tol * 2.0**-10
    terms = np.empty(0, dtype=complex)
    g: list[complex] = []
    prev_est = None
    for j in range(j_first, j_max + 1):
        cap = 1 << (j + 5)
        if cap > max_terms:
            break
        if terms.size < cap:
            terms = np.concatenate([terms, block(np.arange(start + terms.size, start + cap))])
        n = np.arange(start, start + cap, dtype=float)
        log_r = math.log1p(-(2.0**-j))
        weighted = terms[:cap] * np.exp(n * log_r)
        g.append(complex(weighted.sum()))
        if accelerator == "richardson":
            est = richardson(g[-6:])
        elif accelerator == "aitken":
            est = iterated_aitken(g, depth=min(4, (len(g) - 1) // 2))
        else:
            raise ValueError(f"unknown accelerator {accelerator!r}")
        tail_small = abs(weighted[-1]) < thr
        if prev_est is not None and j >= 6 and tail_small:
            diff = abs(est - prev_est)
            if diff < tol / 4:
                return est, diff, cap
        prev_est = est
    raise ConvergenceError(f"Abel summation did not stabilise by radius 1 - 2^-{j}")


def abel_sum(
    s: SeriesSpec,
    theta: float,
    tol: float,
    accelerator: str = "richardson",
    j_max: int = 24,
    max_terms: int = MAX_TERMS,
) -> SumEstimate:
    """Abel sum: ``lim_{r -> 1-} sum term(n) r^n``.

    The damped sums at ``r_j = 1 - 2**-j`` form a sequence whose error is a
    power series in ``2**-j``; it is extrapolated to ``r = 1`` by Richardson
    (default) or iterated Aitken. Each inner sum runs to ``2**(j+5)``
    terms, where ``r^n`` has fallen below ``e^-32``. Stops when successive
    extrapolants differ by less than ``tol / 4``.
    """
    if tol <= 0:
        raise SeriesError("tol must be positive")
    if s.bilateral:
        raise SeriesError("use bilateral_sum for a bilateral series")
    _check_finite_theta(theta)
    value, err, used = _abel_core(s.evaluator(theta), s.start, tol, accelerator, j_max, max_terms)
    return SumEstimate(value, err, used, "abel")


def _is_negligible(v: np.ndarray, scale: float) -> np.ndarray:
    # Rounding leaves sin(n*pi) at ~1e-16 rather than 0, hence the absolute floor.
    return np.abs(v) <= max(1e-13 * scale, 1e-14)


def euler_sum(
    s: SeriesSpec,
    theta: float,
    tol: float,
    head: int = 16,
    depth: int = 64,
) -> SumEstimate:
    """Euler transform for a series whose real parts alternate in sign.

    The first ``head`` terms are added directly and double as the
    alternation check. The tail ``sum (-1)^j b_j`` becomes
    ``sum (-1)^p (Delta^p b)_0 / 2^(p+1)`` with differences up to ``depth``.
    A head containing numerically zero terms falls back to
    :func:`direct_sum`.
    """
    if tol <= 0:
        raise SeriesError("tol must be positive")
    if s.bilateral:
        raise SeriesError("use bilateral_sum for a bilateral series")
    _check_finite_theta(theta)
    f = s.evaluator(theta)
    values = f(np.arange(s.start, s.start + head + depth + 1))
    first = values[:head].real
    scale = float(np.max(np.abs(values[:head]))) or 1.0
    if np.any(_is_negligible(first, scale)):
        est = direct_sum(s, theta)
        return SumEstimate(est.value, est.error_bound, est.terms_used, "direct")
    signs = np.sign(first)
    if np.any(signs[1:] == signs[:-1]):
        k = int(np.argmax(signs[1:] == signs[:-1])) + 1
        raise SeriesError("terms do not alternate in sign", s.start + k)

    total = complex(values[:head].sum())
    tail = values[head:]
    b = tail * np.where(np.arange(tail.size) % 2 == 0, 1.0, -1.0)
    for p in range(depth + 1):
        contrib = b[0] / 2.0 ** (p + 1)
        if p % 2:
            contrib = -contrib
        total += contrib
        if p > 0 and abs(contrib) < tol / 4:
            return SumEstimate(complex(total), float(abs(contrib)), head + p + 1, "euler")
        b = np.diff(b)
    raise ConvergenceError(f"Euler transform did not converge within depth {depth}")


def bilateral_sum(
    s: SeriesSpec,
    theta: float,
    a: float,
    n_pairs: int = MAX_TERMS,
    tol: float = 1e-9,
    accelerate: bool = True,
) -> SumEstimate:
    """Symmetric sum over all integers: term(0) + sum_{n>=1} [term(n) + term(-n)].

    ``a`` is bound as the series parameter ``a``. Without acceleration the
    first ``n_pairs`` pairs are added left to right. With it, the paired
    series is Abel-summed and extrapolated, using at most ``n_pairs`` pairs
    per radius.
    """
    if n_pairs < 1:
        raise SeriesError("n_pairs must be >= 1")
    if float(a) == round(float(a)):
        raise SeriesError(f"integer a = {a} puts a pole on the summation range", int(round(float(a))))
    _check_finite_theta(theta)
    f = s.bind(a=float(a)).evaluator(theta)
    t0 = complex(f(np.array([0]))[0])

    def paired(idx: np.ndarray) -> np.ndarray:
        return f(idx) + f(-idx)

    if not accelerate:
        seq = np.concatenate(([t0], paired(np.arange(1, n_pairs + 1))))
        total = complex(np.cumsum(seq)[-1])
        return SumEstimate(total, float(abs(seq[-1])), 2 * n_pairs + 1, "bilateral_direct")
    value, err, used = _abel_core(paired, 1, tol, "richardson", 24, n_pairs)
    return SumEstimate(t0 + value, err, 2 * used + 1, "bilateral_abel")
