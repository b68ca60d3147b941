"""Compare series engines against closed forms."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from ..errors import BlissardError
from ..expr import evaluate, evaluate_series
from ..series import SeriesSpec, SumEstimate, abel_sum, bilateral_sum, direct_sum, euler_sum
from .loader import SERIES_VAR, default_catalog
from .model import Identity, QuotientSeries, Sample, VerificationReport

__all__ = [
    "sum_series",
    "verify",
    "verify_identity_I_II",
    "verify_identity_III_IV",
    "verify_pi_half_series",
    "pi_half_oracle",
    "verify_exact_coeffs",
    "exact_coeff_mismatch",
    "catalog_entry",
]

DIRECT_TERMS = 100_000
# Engines run this much tighter than the comparison tolerance.
ENGINE_SLACK = 10.0


@lru_cache(maxsize=1)
def _default_index() -> dict[str, Identity]:
    return {ident.id: ident for ident in default_catalog()}


def catalog_entry(ident_id: str) -> Identity:
    """Look up an entry of the shipped catalog."""
    try:
        return _default_index()[ident_id]
    except KeyError:
        raise KeyError(f"no identity {ident_id!r} in the shipped catalog") from None


def _sum_one(spec: SeriesSpec, theta: float, method: str, tol: float, terms: Optional[int], params) -> SumEstimate:
    engine_tol = tol / ENGINE_SLACK
    if method == "bilateral":
        bound = spec.bind(**{k: v for k, v in params.items() if k != "a"})
        kwargs = {"n_pairs": terms} if terms else {}
        return bilateral_sum(bound, theta, float(params["a"]), tol=engine_tol, **kwargs)
    spec = spec.bind(**params)
    if method == "direct":
        return direct_sum(spec, theta, terms or DIRECT_TERMS)
    if method == "abel":
        return abel_sum(spec, theta, engine_tol)
    if method == "euler":
        return euler_sum(spec, theta, engine_tol)
    raise ValueError(f"method {method!r} does not sum numerically")


def sum_series(
    series,
    theta: float,
    method: str,
    tol: float,
    terms: Optional[int] = None,
    params: Optional[Mapping] = None,
) -> SumEstimate:
    """Sum a plain or quotient series with the named engine."""
    params = dict(params or {})
    if isinstance(series, QuotientSeries):
        num = _sum_one(series.numerator, theta, method, tol, terms, params)
        den = _sum_one(series.denominator, theta, method, tol, terms, params)
        value = num.value / den.value
        err = (num.error_bound + abs(value) * den.error_bound) / abs(den.value)
        return SumEstimate(value, err, num.terms_used + den.terms_used, num.method)
    return _sum_one(series, theta, method, tol, terms, params)


def _sample(ident: Identity, theta: float, tol: float, params: dict, method: str, terms) -> Sample:
    key = tuple(params.items())
    ctx = dict(params)
    ctx["theta"] = theta
    try:
        closed = complex(evaluate(ident.closed, ctx))
    except BlissardError as err:
        return Sample(theta, None, complex("nan"), math.inf, key, f"closed form: {err}")
    if not (math.isfinite(closed.real) and math.isfinite(closed.imag)):
        return Sample(theta, None, closed, math.inf, key, "closed form is not finite")
    try:
        est = sum_series(ident.series, theta, method, tol, terms, params)
    except BlissardError as err:
        return Sample(theta, None, closed, math.inf, key, str(err))
    err = abs(est.value - closed)
    if not math.isfinite(err):
        return Sample(theta, est, closed, math.inf, key, "series value is not finite")
    return Sample(theta, est, closed, err, key)


def verify(
    ident: Identity,
    thetas: Optional[Sequence[float]] = None,
    tol: Optional[float] = None,
    params: Optional[Mapping] = None,
    method: Optional[str] = None,
    terms: Optional[int] = None,
) -> VerificationReport:
    """Run ``ident``'s engine at each theta and compare with its closed form.

    ``params`` fixes the parameters; when omitted a parameterised identity
    is checked on every combination of its declared values. ``thetas``
    defaults to the interior samples of the domain. Engine failures become
    failed samples carrying the reason.
    """
    if ident.method == "exact_coeffs":
        raise ValueError(f"{ident.id} is checked with verify_exact_coeffs")
    tol = ident.tol if tol is None else tol
    method = method or ident.method
    terms = terms or ident.terms
    thetas = ident.samples() if thetas is None else list(thetas)
    param_sets = [dict(params)] if params is not None else ident.param_sets()
    samples = [_sample(ident, float(t), tol, p, method, terms) for p in param_sets for t in thetas]
    return VerificationReport(ident.id, tuple(samples), tol)


def verify_identity_I_II(m: int, n: int, thetas: Sequence[float], tol: float) -> VerificationReport:
    """Complex form of the ``x^m (1+x)^n log(1+x)`` identity, summed by Abel."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return verify(catalog_entry("I-II"), thetas, tol, {"m_p": m, "n_p": n})


def verify_identity_III_IV(
    m: int, n: int, thetas: Sequence[float], tol: float, reading: str = "corrected"
) -> VerificationReport:
    """Complex form of the ``x^m (1-x)^n log(1-x)`` identity.

    ``reading="printed"`` checks the right-hand side exactly as it was
    printed historically; that form is known to be wrong.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ident_id = {"corrected": "III-IV", "printed": "III-IV-printed"}[reading]
    return verify(catalog_entry(ident_id), thetas, tol, {"m_p": m, "n_p": n})


def pi_half_oracle(n: int) -> float:
    """``-Im`` of the ``I-II`` right-hand side at ``m = -n``, ``theta = pi/2``.

    The sign follows the convention ``sum (-1)^k ...``, so this equals
    minus the alternating series checked by :func:`verify_pi_half_series`.
    """
    ident = catalog_entry("I-II")
    return -evaluate(ident.closed, {"m_p": -n, "n_p": n, "theta": math.pi / 2}).imag


def verify_pi_half_series(n: int, tol: float) -> VerificationReport:
    """Euler-summed ``sum (-1)^(k-1) (2k-2)! n! / (n+2k-1)!`` against its closed form.

    The sample fails unless the closed form also matches the independent
    imaginary-part oracle to ``tol``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    report = verify(catalog_entry("pi2-alt"), [0.0], tol, {"n_p": n})
    s = report.samples[0]
    gap = abs(s.closed_value.real + pi_half_oracle(n))
    if s.reason is None and gap > tol:
        s = Sample(s.theta, s.estimate, s.closed_value, max(s.abs_error, gap), s.params, f"closed form is {gap:.3g} from the oracle")
    return VerificationReport(report.identity_id, (s,), tol)


def exact_coeff_mismatch(ident: Identity, order: int = 16) -> Optional[int]:
    """First power of ``x`` whose coefficients differ, or ``None`` when all agree."""
    if ident.method != "exact_coeffs":
        raise ValueError(f"{ident.id} is not an exact_coeffs entry")
    if order > 16:
        raise ValueError("order must be <= 16")
    closed = evaluate_series(ident.closed, SERIES_VAR, order)
    spec = ident.series
    total = None
    for k in range(spec.start, spec.start + order + 1):
        term = evaluate_series(spec.term, SERIES_VAR, order, {spec.index_var: k})
        total = term if total is None else total + term
    for i in range(order):
        if total[i] != closed[i]:
            return i
    return None


def verify_exact_coeffs(ident: Identity, order: int = 16) -> bool:
    return exact_coeff_mismatch(ident, order) is None
