"""Reader for the line-oriented catalog format.

An entry looks like::

    [identity B]
    series = sum(n = 1 .. inf, sin(n*theta)/n)
    closed = (pi - theta)/2
    domain = (0, 2*pi)
    method = abel
    status = expected_pass
    ref    = "imaginary part of -log(1 - e^(i theta))"

Optional keys: ``params = name in {v1, v2}`` (repeatable), ``tol = 1e-8``
and ``terms = N``. ``domain`` may be omitted when nothing depends on
``theta``; ``exact_coeffs`` entries are power series in ``x`` and take no
domain. ``#`` starts a comment outside quoted text.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from ..errors import BlissardError, CatalogError, EvaluationError, ExprSyntaxError
from ..expr import Expr, Piecewise, evaluate, evaluate_series, free_vars, parse, parse_series
from ..expr.parser import SeriesForm
from ..series import BILATERAL, SeriesSpec
from .model import DEFAULT_TOL, METHODS, STATUSES, Domain, Identity, QuotientSeries

__all__ = ["load_catalog", "load_catalog_file", "default_catalog", "default_catalog_text", "constant_value"]

_HEADER = re.compile(r"^\[identity\s+([A-Za-z0-9_\-+.]+)\s*\]$")
_KEY = re.compile(r"^([a-z_]+)\s*=\s*(.*)$")
_PARAM = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)\s+in\s+\{(.*)\}$")
_KEYS = {"series", "closed", "domain", "method", "status", "ref", "params", "tol", "terms"}
_REQUIRED = ("series", "closed", "method", "status")
SERIES_VAR = "x"  # variable of exact_coeffs power series


def _strip_comment(line: str) -> str:
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


def _split_top(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside any brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def constant_value(e: Expr):
    """Exact ``Fraction`` when ``e`` is rational, otherwise a ``float``."""
    if free_vars(e):
        raise EvaluationError(f"expected a constant, found variables {sorted(free_vars(e))}")
    try:
        return evaluate_series(e, order=1)[0]
    except EvaluationError:
        v = evaluate(e)
        if v.imag != 0 or not math.isfinite(v.real):
            raise EvaluationError(f"{e} is not a finite real constant") from None
        return v.real


class _Entry:
    def __init__(self, ident: str, line: int):
        self.id = ident
        self.line = line
        self.fields: dict[str, tuple[str, int]] = {}
        self.params: list[tuple[str, int]] = []

    def fail(self, message: str, line: Optional[int] = None) -> CatalogError:
        return CatalogError(message, self.id, line if line is not None else self.line)


def _split_entries(text: str) -> list[_Entry]:
    entries: list[_Entry] = []
    current: Optional[_Entry] = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            current = _Entry(m.group(1), ln)
            entries.append(current)
            continue
        if line.startswith("["):
            raise CatalogError(f"malformed entry header {line!r}", None, ln)
        if current is None:
            raise CatalogError("key outside any [identity ...] entry", None, ln)
        m = _KEY.match(line)
        if not m:
            raise current.fail(f"expected 'key = value', found {line!r}", ln)
        key, value = m.group(1), m.group(2).strip()
        if key not in _KEYS:
            raise current.fail(f"unknown key {key!r}", ln)
        if key == "params":
            current.params.append((value, ln))
        elif key in current.fields:
            raise current.fail(f"repeated key {key!r}", ln)
        else:
            current.fields[key] = (value, ln)
    return entries


def _parse_expr(entry: _Entry, key: str) -> Expr:
    text, ln = entry.fields[key]
    try:
        return parse(text)
    except ExprSyntaxError as err:
        raise entry.fail(f"{key}: {err}", ln) from None


def _parse_domain(entry: _Entry) -> Domain:
    text, ln = entry.fields["domain"]
    if len(text) < 2 or text[0] not in "([" or text[-1] not in ")]":
        raise entry.fail("domain must look like (lower, upper) with ( or [ endpoints", ln)
    parts = _split_top(text[1:-1])
    if len(parts) != 2:
        raise entry.fail("domain needs exactly two endpoints", ln)
    try:
        lower, upper = parse(parts[0]), parse(parts[1])
        dom = Domain(lower, upper, text[0] == "[", text[-1] == "]")
        lo, hi = dom.bounds
    except (ExprSyntaxError, EvaluationError) as err:
        raise entry.fail(f"domain: {err}", ln) from None
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise entry.fail("domain endpoints must be finite", ln)
    if not lo < hi:
        raise entry.fail(f"domain lower bound {lo} is not below upper bound {hi}", ln)
    return dom


def _parse_params(entry: _Entry) -> dict[str, tuple]:
    out: dict[str, tuple] = {}
    for text, ln in entry.params:
        m = _PARAM.match(text)
        if not m:
            raise entry.fail("params must look like 'name in {v1, v2, ...}'", ln)
        name = m.group(1)
        if name in out:
            raise entry.fail(f"parameter {name!r} declared twice", ln)
        values = []
        for piece in _split_top(m.group(2)):
            try:
                values.append(constant_value(parse(piece.strip())))
            except (ExprSyntaxError, EvaluationError) as err:
                raise entry.fail(f"parameter {name}: {err}", ln) from None
        if not values:
            raise entry.fail(f"parameter {name!r} has no values", ln)
        out[name] = tuple(values)
    return out


def _spec_of(form: SeriesForm, entry: _Entry, ln: int):
    if form.kind == "quotient":
        return QuotientSeries(_spec_of(form.parts[0], entry, ln), _spec_of(form.parts[1], entry, ln))
    if form.kind == "bisum":
        return SeriesSpec(form.term, form.var, BILATERAL)
    try:
        start = constant_value(form.start)
    except EvaluationError as err:
        raise entry.fail(f"series start: {err}", ln) from None
    if not isinstance(start, Fraction) or start.denominator != 1:
        raise entry.fail("series start must be an integer", ln)
    return SeriesSpec(form.term, form.var, int(start))


def _series_terms(series) -> list[SeriesSpec]:
    if isinstance(series, QuotientSeries):
        return [series.numerator, series.denominator]
    return [series]


def _check_piecewise(entry: _Entry, closed: Expr, param_sets: list[dict]) -> None:
    for node in closed.walk():
        if not isinstance(node, Piecewise):
            continue
        bs = node.branches
        for params in param_sets:
            ordered = sorted(bs, key=lambda b: evaluate(b.lower, params).real)
            if list(ordered) != list(bs):
                raise entry.fail("piecewise branches must be ordered by lower endpoint")
            for left, right in zip(bs, bs[1:]):
                hi = evaluate(left.upper, params).real
                lo = evaluate(right.lower, params).real
                if hi > lo + 1e-12:
                    raise entry.fail(f"piecewise branches overlap on ({lo}, {hi})")
                if abs(hi - lo) > 1e-12 or not (left.upper_closed and right.lower_closed):
                    continue
                ctx = dict(params)
                ctx[node.var] = hi
                a = evaluate(left.body, ctx)
                b = evaluate(right.body, ctx)
                if not abs(a - b) <= 1e-9 * max(1.0, abs(a)):
                    raise entry.fail(f"piecewise branches disagree at shared endpoint {hi}: {a} vs {b}")


def _build(entry: _Entry) -> Identity:
    for key in _REQUIRED:
        if key not in entry.fields:
            raise entry.fail(f"missing required key {key!r}")
    method, mln = entry.fields["method"]
    if method not in METHODS:
        raise entry.fail(f"unknown method {method!r}", mln)
    status, sln = entry.fields["status"]
    if status not in STATUSES:
        raise entry.fail(f"unknown status {status!r}", sln)

    stext, ln = entry.fields["series"]
    try:
        form = parse_series(stext)
    except ExprSyntaxError as err:
        raise entry.fail(f"series: {err}", ln) from None
    series = _spec_of(form, entry, ln)
    closed = _parse_expr(entry, "closed")
    params = _parse_params(entry)

    is_bilateral = isinstance(series, SeriesSpec) and series.bilateral
    if (method == "bilateral") != is_bilateral:
        raise entry.fail("method bilateral goes with a bisum series and only with one", mln)
    if isinstance(series, QuotientSeries) and method in ("euler", "exact_coeffs", "bilateral"):
        raise entry.fail(f"quotient series cannot use method {method}", mln)

    domain = _parse_domain(entry) if "domain" in entry.fields else None
    bound = {"theta"} | set(params)
    if method == "exact_coeffs":
        if domain is not None:
            raise entry.fail("exact_coeffs entries take no domain")
        bound = {SERIES_VAR} | set(params)
    if is_bilateral:
        bound.add("a")
        if "a" not in params:
            raise entry.fail("bilateral entries must declare parameter 'a'")
    used: set[str] = free_vars(closed)
    for spec in _series_terms(series):
        used |= free_vars(spec.term) - {spec.index_var}
    unknown = used - bound
    if unknown:
        raise entry.fail(f"undeclared parameter(s) {', '.join(sorted(unknown))}")
    unused = set(params) - used
    if unused:
        raise entry.fail(f"declared parameter(s) never used: {', '.join(sorted(unused))}")
    if domain is None and method != "exact_coeffs" and "theta" in used:
        raise entry.fail("an entry depending on theta needs a domain")

    tol = DEFAULT_TOL
    if "tol" in entry.fields:
        text, tln = entry.fields["tol"]
        try:
            tol = float(text)
        except ValueError:
            raise entry.fail(f"tol must be a number, found {text!r}", tln) from None
        if not tol > 0:
            raise entry.fail("tol must be positive", tln)
    terms = None
    if "terms" in entry.fields:
        text, tln = entry.fields["terms"]
        if not text.isdigit() or int(text) < 1:
            raise entry.fail(f"terms must be a positive integer, found {text!r}", tln)
        terms = int(text)

    ident = Identity(
        id=entry.id,
        series=series,
        closed=closed,
        domain=domain,
        method=method,
        status=status,
        parameters=params,
        ref=entry.fields.get("ref", ('""', 0))[0].strip('"'),
        tol=tol,
        terms=terms,
        line=entry.line,
        sources={k: v[0] for k, v in entry.fields.items() if k in ("series", "closed", "domain")},
    )
    if method != "exact_coeffs":
        try:
            _check_piecewise(entry, closed, ident.param_sets())
        except EvaluationError as err:
            raise entry.fail(f"closed: {err}") from None
    return ident


def load_catalog(text: str) -> list[Identity]:
    """Parse catalog text into identities, in file order."""
    seen: dict[str, int] = {}
    out = []
    for entry in _split_entries(text):
        if entry.id in seen:
            raise entry.fail(f"duplicate id (first defined on line {seen[entry.id]})")
        seen[entry.id] = entry.line
        try:
            out.append(_build(entry))
        except CatalogError:
            raise
        except BlissardError as err:
            raise entry.fail(str(err)) from None
    return out


def load_catalog_file(path) -> list[Identity]:
    return load_catalog(Path(path).read_text(encoding="utf-8"))


def default_catalog_text() -> str:
    return resources.files("blissard.catalog").joinpath("data/blissard.cat").read_text(encoding="utf-8")


def default_catalog() -> list[Identity]:
    return load_catalog(default_catalog_text())
