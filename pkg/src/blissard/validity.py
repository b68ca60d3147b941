"""Where does a closed form stop matching its series?

Two tools: a heuristic rule predicting the half-width of the interval of
validity from the shape of the general term, and an empirical scanner that
sums the series on a grid and reports where the error changes side of a
threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from .catalog.model import Identity
from .catalog.verify import sum_series
from .errors import BlissardError
from .expr import Expr, evaluate

__all__ = ["HeuristicTerm", "RangeScan", "heuristic_range", "scan_breakpoints", "theta_grid"]

Number = Union[Fraction, int, float]


@dataclass(frozen=True)
class HeuristicTerm:
    """General term ``(+-1)^k cos^m((p + k r) theta) / (p + k r)^n_exp``."""

    p: Number
    r: Number
    m: int
    n_exp: Number
    alternating: bool

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("r must be positive")
        if not self.p > 0:
            raise ValueError("p must be positive")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("m must be a positive integer")
        if not self.n_exp > 0:
            raise ValueError("n_exp must be positive")


def heuristic_range(t: HeuristicTerm) -> tuple[float, bool]:
    """Half-width of the predicted range ``|theta| < w`` and whether endpoints count.

    ``w = 2 pi / (m r)`` for a term of constant sign, ``pi / (m r)`` when the
    signs alternate. Endpoints are taken as included.
    """
    base = math.pi if t.alternating else 2 * math.pi
    return base / (t.m * float(t.r)), True


@dataclass(frozen=True)
class RangeScan:
    grid: tuple[float, ...]
    errors: tuple[float, ...]
    breakpoints: tuple[float, ...]
    threshold: float
    failed: tuple[float, ...] = ()

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if not set(self.breakpoints) <= set(self.grid):
            raise ValueError("breakpoints must be grid points")


def theta_grid(theta_min: float, theta_max: float, step: float) -> list[float]:
    """``theta_min, theta_min + step, ...`` up to ``theta_max`` inclusive."""
    if not step > 0:
        raise ValueError("step must be positive")
    if not theta_min < theta_max:
        raise ValueError("theta_min must be below theta_max")
    count = int(math.floor((theta_max - theta_min) / step + 1e-9)) + 1
    return [theta_min + i * step for i in range(count)]


def scan_breakpoints(
    ident: Identity,
    theta_min: float,
    theta_max: float,
    step: float,
    threshold: float,
    params: Optional[Mapping] = None,
    closed: Optional[Expr] = None,
    method: Optional[str] = None,
    tol: Optional[float] = None,
) -> RangeScan:
    """Error ``|series - closed|`` on a grid, and where it crosses ``threshold``.

    A breakpoint is the first grid point on the far side of a crossing, in
    either direction, so the ends of a valid interval show up as a pair.
    ``closed`` replaces the identity's own closed form, which lets a single
    branch of a piecewise formula be scanned on its own. Points where the
    engine or closed form fails count as errors above threshold and are
    listed in ``failed``.
    """
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    if ident.method == "exact_coeffs":
        raise ValueError("exact_coeffs entries have no theta dependence")
    if params is None:
        sets = ident.param_sets()
        if len(sets) > 1:
            raise ValueError(f"{ident.id} has parameters; pass params to pick one combination")
        params = sets[0] if sets else {}
    params = dict(params)
    closed = ident.closed if closed is None else closed
    method = method or ident.method
    # The engine tolerance stays well under the threshold being tested.
    tol = tol if tol is not None else min(ident.tol, threshold / 10)

    grid = theta_grid(theta_min, theta_max, step)
    errors, failed = [], []
    for theta in grid:
        try:
            ctx = dict(params)
            ctx["theta"] = theta
            target = evaluate(closed, ctx)
            est = sum_series(ident.series, theta, method, tol, ident.terms, params)
            err = abs(est.value - target)
            if math.isnan(err):
                raise ValueError("nan")
        except (BlissardError, ValueError):
            err = math.inf
            failed.append(theta)
        errors.append(err)

    above = [e > threshold for e in errors]
    breaks = [grid[i] for i in range(1, len(grid)) if above[i] != above[i - 1]]
    return RangeScan(tuple(grid), tuple(errors), tuple(breaks), threshold, tuple(failed))
