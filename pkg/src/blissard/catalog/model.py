"""Catalog records: domains, identities and verification reports."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

import numpy as np

from ..expr import Expr, evaluate
from ..series import SeriesSpec, SumEstimate

METHODS = ("direct", "abel", "euler", "bilateral", "exact_coeffs")
STATUSES = ("expected_pass", "known_discrepant")
DEFAULT_TOL = 1e-8
SAMPLE_COUNT = 25

ParamValue = Union[Fraction, float]


@dataclass(frozen=True)
class Domain:
    lower: Expr
    upper: Expr
    lower_closed: bool = False
    upper_closed: bool = False

    @property
    def bounds(self) -> tuple[float, float]:
        return evaluate(self.lower).real, evaluate(self.upper).real

    def contains(self, theta: float) -> bool:
        lo, hi = self.bounds
        above = theta >= lo if self.lower_closed else theta > lo
        below = theta <= hi if self.upper_closed else theta < hi
        return above and below

    def interior(self, count: int = SAMPLE_COUNT) -> list[float]:
        """``count`` evenly spaced points, kept width/1000 away from both ends."""
        lo, hi = self.bounds
        pad = (hi - lo) / 1000
        if count == 1:
            return [(lo + hi) / 2]
        return [float(t) for t in np.linspace(lo + pad, hi - pad, count)]

    def __str__(self) -> str:
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        return f"{left}{self.lower}, {self.upper}{right}"


@dataclass(frozen=True)
class QuotientSeries:
    """Ratio of two series, each summed on its own."""

    numerator: SeriesSpec
    denominator: SeriesSpec

    def bind(self, **params) -> "QuotientSeries":
        return QuotientSeries(self.numerator.bind(**params), self.denominator.bind(**params))


@dataclass(frozen=True)
class Identity:
    id: str
    series: Union[SeriesSpec, QuotientSeries]
    closed: Expr
    domain: Optional[Domain]
    method: str
    status: str
    parameters: Mapping[str, tuple[ParamValue, ...]] = field(default_factory=dict)
    ref: str = ""
    tol: float = DEFAULT_TOL
    terms: Optional[int] = None
    line: int = 0
    # Raw text of each expression-valued field, kept for round-trip checks.
    sources: Mapping[str, str] = field(default_factory=dict)

    @property
    def bilateral(self) -> bool:
        return isinstance(self.series, SeriesSpec) and self.series.bilateral

    def param_sets(self) -> list[dict[str, ParamValue]]:
        """Cartesian product of the declared parameter values, in declaration order."""
        names = list(self.parameters)
        return [dict(zip(names, combo)) for combo in itertools.product(*(self.parameters[n] for n in names))]

    def samples(self, count: int = SAMPLE_COUNT) -> list[float]:
        # Entries without a domain do not depend on theta; one point suffices.
        return self.domain.interior(count) if self.domain is not None else [0.0]


@dataclass(frozen=True)
class Sample:
    theta: float
    estimate: Optional[SumEstimate]
    closed_value: complex
    abs_error: float
    params: tuple[tuple[str, ParamValue], ...] = ()
    reason: Optional[str] = None

    def ok(self, tol: float) -> bool:
        return self.reason is None and self.abs_error <= tol


@dataclass(frozen=True)
class VerificationReport:
    identity_id: str
    samples: tuple[Sample, ...]
    tolerance: float

    def __post_init__(self):
        ordered = tuple(sorted(self.samples, key=lambda s: s.theta))
        object.__setattr__(self, "samples", ordered)

    @property
    def passed(self) -> bool:
        return bool(self.samples) and all(s.ok(self.tolerance) for s in self.samples)

    @property
    def max_error(self) -> float:
        return max((s.abs_error for s in self.samples), default=float("nan"))

    def failures(self) -> list[Sample]:
        return [s for s in self.samples if not s.ok(self.tolerance)]
