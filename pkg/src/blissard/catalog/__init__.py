"""Identity catalog: data model, loader and verification driver."""

from __future__ import annotations

from .loader import constant_value, default_catalog, default_catalog_text, load_catalog, load_catalog_file
from .model import DEFAULT_TOL, METHODS, SAMPLE_COUNT, STATUSES, Domain, Identity, QuotientSeries, Sample, VerificationReport
from .verify import (
    catalog_entry,
    exact_coeff_mismatch,
    pi_half_oracle,
    sum_series,
    verify,
    verify_exact_coeffs,
    verify_identity_I_II,
    verify_identity_III_IV,
    verify_pi_half_series,
)

__all__ = [
    "DEFAULT_TOL",
    "METHODS",
    "SAMPLE_COUNT",
    "STATUSES",
    "Domain",
    "Identity",
    "QuotientSeries",
    "Sample",
    "VerificationReport",
    "catalog_entry",
    "constant_value",
    "default_catalog",
    "default_catalog_text",
    "exact_coeff_mismatch",
    "load_catalog",
    "load_catalog_file",
    "pi_half_oracle",
    "sum_series",
    "verify",
    "verify_exact_coeffs",
    "verify_identity_I_II",
    "verify_identity_III_IV",
    "verify_pi_half_series",
]
