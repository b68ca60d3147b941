from __future__ import annotations

import math
from fractions import Fraction

import pytest

from blissard.catalog import catalog_entry
from blissard.expr import parse
from blissard.validity import HeuristicTerm, RangeScan, heuristic_range, scan_breakpoints, theta_grid

PI = math.pi


@pytest.mark.parametrize(
    "row, term, expected",
    [
        ("E", HeuristicTerm(1, 2, 1, 1, False), PI),
        ("F", HeuristicTerm(1, 2, 1, 1, False), PI),
        ("G", HeuristicTerm(1, 2, 1, 1, True), PI / 2),
        ("H", HeuristicTerm(1, 2, 1, 1, True), PI / 2),
        ("N", HeuristicTerm(1, 1, 2, 4, True), PI / 2),
    ],
)
def test_heuristic_matches_table_widths(row, term, expected):
    width, endpoints = heuristic_range(term)
    assert width == expected
    assert endpoints
    lo, hi = catalog_entry(row).domain.bounds
    assert hi - lo == pytest.approx(2 * width if row in "GHN" else width, abs=1e-15)


def test_heuristic_rational_inputs():
    w, _ = heuristic_range(HeuristicTerm(Fraction(1, 2), Fraction(3, 2), 1, Fraction(1, 2), False))
    assert w == pytest.approx(4 * PI / 3)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(p=1, r=0, m=1, n_exp=1, alternating=False),
        dict(p=1, r=1, m=0, n_exp=1, alternating=False),
        dict(p=1, r=1, m=1.5, n_exp=1, alternating=False),
        dict(p=0, r=1, m=1, n_exp=1, alternating=False),
        dict(p=1, r=1, m=1, n_exp=0, alternating=False),
    ],
)
def test_heuristic_term_validation(kwargs):
    with pytest.raises(ValueError):
        HeuristicTerm(**kwargs)


def test_theta_grid():
    g = theta_grid(0.0, 1.0, 0.25)
    assert g == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert len(theta_grid(-2 * PI, 2 * PI, 0.02)) == 629
    with pytest.raises(ValueError):
        theta_grid(0, 1, 0)
    with pytest.raises(ValueError):
        theta_grid(1, 0, 0.1)


def test_range_scan_invariants():
    with pytest.raises(ValueError):
        RangeScan((0.0, 0.0), (1.0, 1.0), (), 1.0)
    with pytest.raises(ValueError):
        RangeScan((0.0, 1.0), (1.0, 1.0), (0.5,), 1.0)


def test_row_d_fails_beyond_pi():
    scan = scan_breakpoints(catalog_entry("D"), -2 * PI, 2 * PI, 0.02, 1e-6)
    assert len(scan.breakpoints) == 2
    low, high = scan.breakpoints
    assert abs(low + PI) < 0.04 and abs(high - PI) < 0.04
    inside = [e for t, e in zip(scan.grid, scan.errors) if abs(t) < PI - 0.1]
    outside = [e for t, e in zip(scan.grid, scan.errors) if abs(t) > PI + 0.1]
    assert max(inside) < 1e-6 and min(outside) > 1


def test_piecewise_cube_first_branch():
    ident = catalog_entry("piecewise-cube")
    first = ident.closed.branches[0].body
    scan = scan_breakpoints(ident, 0.0, 2 * PI, 0.02, 1e-6, closed=first)
    assert scan.breakpoints
    assert abs(scan.breakpoints[0] - PI / 2) <= 0.02


def test_piecewise_cube_middle_branch():
    ident = catalog_entry("piecewise-cube")
    middle = ident.closed.branches[1].body
    scan = scan_breakpoints(ident, 0.0, 2 * PI, 0.02, 1e-6, closed=middle)
    assert len(scan.breakpoints) == 2
    assert abs(scan.breakpoints[0] - PI / 2) <= 0.02
    assert abs(scan.breakpoints[1] - 3 * PI / 2) <= 0.02


def test_piecewise_cube_whole_closed_form_has_no_breaks():
    scan = scan_breakpoints(catalog_entry("piecewise-cube"), 0.0, 2 * PI, 0.02, 1e-6)
    assert scan.breakpoints == ()


def test_row_b_interior_has_no_breaks():
    scan = scan_breakpoints(catalog_entry("B"), 0.1, 2 * PI - 0.1, 0.05, 1e-7)
    assert scan.breakpoints == () and scan.failed == ()


def test_failed_points_are_recorded():
    # The closed form of row E is singular at 0 and the log diverges.
    scan = scan_breakpoints(catalog_entry("E"), 0.0, 0.5, 0.1, 1e-6)
    assert scan.failed == (0.0,)
    assert scan.errors[0] == math.inf
    assert scan.breakpoints == (0.1,)


def test_parameterised_scan_needs_params():
    with pytest.raises(ValueError, match="params"):
        scan_breakpoints(catalog_entry("I"), 0.0, 1.0, 0.1, 1e-6)
    scan = scan_breakpoints(catalog_entry("I"), 0.0, 1.0, 0.1, 1e-6, params={"k_p": 1})
    assert scan.breakpoints == ()


def test_scan_is_deterministic():
    a = scan_breakpoints(catalog_entry("C"), 2.5, 3.5, 0.05, 1e-6)
    b = scan_breakpoints(catalog_entry("C"), 2.5, 3.5, 0.05, 1e-6)
    assert a == b


def test_scan_with_replacement_closed_form():
    # Row B's closed form is wrong on (2 pi, 4 pi) but shifts by pi there.
    scan = scan_breakpoints(catalog_entry("B"), 6.5, 12.0, 0.25, 1e-6, closed=parse("(3*pi - theta)/2"))
    assert scan.breakpoints == ()


@pytest.mark.parametrize("row", ["G", "M"])
def test_verified_domain_scans_clean(row):
    ident = catalog_entry(row)
    lo, hi = ident.domain.bounds
    pad = (hi - lo) / 1000
    scan = scan_breakpoints(ident, lo + pad, hi - pad, 0.05, 10 * ident.tol)
    assert scan.breakpoints == ()
