"""Command-line front end.

Commands: ``list``, ``verify ID``, ``scan ID``, ``lemmas`` and ``check-all``.
Exit status is 0 when every check passes, 1 when one fails and 2 for
usage or catalog errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import exact, umbral
from .catalog import (
    Identity,
    VerificationReport,
    constant_value,
    default_catalog,
    exact_coeff_mismatch,
    load_catalog_file,
    verify,
)
from .catalog.model import METHODS
from .errors import BlissardError
from .expr import evaluate, parse
from .validity import scan_breakpoints

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CSV_HEADER = [
    "identity",
    "params",
    "theta",
    "estimate_re",
    "estimate_im",
    "closed_re",
    "closed_im",
    "abs_error",
    "terms_used",
    "method",
]


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    identity_id: Optional[str] = None
    thetas: Optional[list[float]] = None
    grid: Optional[tuple[float, float, float]] = None
    terms: Optional[int] = None
    method: Optional[str] = None
    tol: Optional[float] = None
    out: Optional[str] = None
    catalog: Optional[str] = None
    max_n: int = 12
    params: dict = field(default_factory=dict)
    threshold: Optional[float] = None


# ------------------------------------------------------------------ parsing


def _number(text: str) -> float:
    """A float, or a constant expression such as ``pi/2``."""
    try:
        return float(text)
    except ValueError:
        pass
    try:
        v = evaluate(parse(text))
    except BlissardError as err:
        raise UsageError(f"not a number: {text!r} ({err})") from None
    if v.imag != 0:
        raise UsageError(f"not a real number: {text!r}")
    return v.real


def _grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("--grid takes min:max:step")
    lo, hi, step = (_number(p) for p in parts)
    if not lo < hi:
        raise UsageError("--grid needs min < max")
    if not step > 0:
        raise UsageError("--grid needs step > 0")
    return lo, hi, step


def _param(text: str) -> tuple[str, object]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise UsageError(f"--param takes name=value, got {text!r}")
    try:
        return name.strip(), constant_value(parse(value))
    except BlissardError as err:
        raise UsageError(f"--param {name}: {err}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", help="catalog file (default: $BLISSARD_CATALOG or the shipped catalog)")
    common.add_argument("--tol", type=float, help="absolute tolerance")
    common.add_argument("--terms", type=int, help="term cap for direct or bilateral summation")
    common.add_argument("--method", choices=[m for m in METHODS if m != "exact_coeffs"], help="override the summation engine")
    common.add_argument("--out", help="write a CSV of the samples to this path")

    p = argparse.ArgumentParser(prog="blissard", description="Check trigonometric series against their closed forms.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", parents=[common], help="list catalog identities")

    v = sub.add_parser("verify", parents=[common], help="verify one identity")
    v.add_argument("identity_id")
    v.add_argument("--theta", help="comma-separated theta values (default: 25 interior samples)")
    v.add_argument("--grid", help="min:max:step sample grid")
    v.add_argument("--param", action="append", default=[], help="fix a parameter, e.g. n_p=2 (repeatable)")

    s = sub.add_parser("scan", parents=[common], help="scan an identity for breakpoints")
    s.add_argument("identity_id")
    s.add_argument("--grid", required=True, help="min:max:step; use --grid=-6:6:0.02 for a negative min")
    s.add_argument("--param", action="append", default=[])
    s.add_argument("--threshold", type=float, help="error threshold (default: 10 x tolerance)")

    lm = sub.add_parser("lemmas", help="run the exact rational suites")
    lm.add_argument("--max-n", type=int, default=12)

    c = sub.add_parser("check-all", parents=[common], help="run every check in the catalog")
    c.add_argument("--max-n", type=int, default=12)
    return p


def parse_config(argv: Sequence[str]) -> CliConfig:
    ns = build_parser().parse_args(list(argv))
    cfg = CliConfig(command=ns.command)
    for name in ("identity_id", "terms", "method", "tol", "out", "catalog", "max_n", "threshold"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if getattr(ns, "theta", None):
        cfg.thetas = [_number(t) for t in ns.theta.split(",")]
    if getattr(ns, "grid", None):
        cfg.grid = _grid(ns.grid)
    if cfg.thetas is not None and cfg.grid is not None:
        raise UsageError("give --theta or --grid, not both")
    for text in getattr(ns, "param", []) or []:
        k, val = _param(text)
        cfg.params[k] = val
    if cfg.tol is not None and not cfg.tol > 0:
        raise UsageError("--tol must be positive")
    if cfg.terms is not None and cfg.terms < 1:
        raise UsageError("--terms must be >= 1")
    if cfg.max_n < 0:
        raise UsageError("--max-n must be >= 0")
    return cfg


# ------------------------------------------------------------------ output


def _fmt(x: float) -> str:
    return "%.17g" % x


def _fmt_params(params) -> str:
    return ";".join(f"{k}={v}" for k, v in params)


def report_rows(report: VerificationReport) -> list[list[str]]:
    rows = []
    for s in report.samples:
        est = s.estimate
        rows.append(
            [
                report.identity_id,
                _fmt_params(s.params),
                _fmt(s.theta),
                _fmt(est.value.real) if est else "nan",
                _fmt(est.value.imag) if est else "nan",
                _fmt(s.closed_value.real),
                _fmt(s.closed_value.imag),
                _fmt(s.abs_error),
                str(est.terms_used) if est else "0",
                est.method if est else "error",
            ]
        )
    return rows


def write_csv(path: str, rows: list[list[str]]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def check(ok: bool, msg: str, out=None) -> bool:
    print(("Passed: " if ok else "Failed: ") + msg, file=out)
    return ok


# ------------------------------------------------------------------ commands


def _load(cfg: CliConfig) -> list[Identity]:
    path = cfg.catalog or os.environ.get("BLISSARD_CATALOG")
    return load_catalog_file(path) if path else default_catalog()


def _find(catalog: list[Identity], ident_id: str) -> Identity:
    for ident in catalog:
        if ident.id == ident_id:
            return ident
    raise UsageError(f"unknown identity {ident_id!r}")


def _thetas(cfg: CliConfig, ident: Identity) -> Optional[list[float]]:
    if cfg.thetas is not None:
        return cfg.thetas
    if cfg.grid is not None:
        from .validity import theta_grid

        return theta_grid(*cfg.grid)
    return None


def cmd_list(cfg: CliConfig) -> int:
    for ident in _load(cfg):
        dom = str(ident.domain) if ident.domain is not None else "-"
        params = " ".join(f"{k}={{{', '.join(map(str, v))}}}" for k, v in ident.parameters.items())
        print(f"{ident.id:26s} {ident.method:12s} {ident.status:16s} {dom:22s} {params}")
    return EXIT_OK


def _exact_check(ident: Identity, order: int = 16) -> bool:
    bad = exact_coeff_mismatch(ident, order)
    return check(bad is None, f"{ident.id}: coefficients to order {order}" + ("" if bad is None else f" differ at x^{bad}"))


def cmd_verify(cfg: CliConfig) -> int:
    ident = _find(_load(cfg), cfg.identity_id)
    if ident.method == "exact_coeffs":
        return EXIT_OK if _exact_check(ident) else EXIT_FAIL
    unknown = set(cfg.params) - set(ident.parameters) - {"a"}
    if unknown:
        raise UsageError(f"{ident.id} has no parameter(s) {', '.join(sorted(unknown))}")
    params = None
    if cfg.params:
        missing = set(ident.parameters) - set(cfg.params)
        if missing:
            raise UsageError(f"also fix {', '.join(sorted(missing))}, or give no --param at all")
        params = cfg.params
    report = verify(ident, _thetas(cfg, ident), cfg.tol, params, cfg.method, cfg.terms)
    for s in report.samples:
        label = f"{ident.id} {_fmt_params(s.params)} theta={s.theta:.10g}".replace("  ", " ")
        if s.estimate is None:
            check(False, f"{label}: {s.reason}")
            continue
        check(
            s.ok(report.tolerance),
            f"{label} estimate={s.estimate.value.real:.10g}{s.estimate.value.imag:+.3g}i "
            f"closed={s.closed_value.real:.10g}{s.closed_value.imag:+.3g}i "
            f"error={s.abs_error:.3g} terms={s.estimate.terms_used} method={s.estimate.method}",
        )
    if cfg.out:
        write_csv(cfg.out, report_rows(report))
    note = " (expected: known discrepancy)" if ident.status == "known_discrepant" and not report.passed else ""
    check(report.passed, f"{ident.id}: {len(report.samples)} samples within {report.tolerance:g}{note}")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_scan(cfg: CliConfig) -> int:
    ident = _find(_load(cfg), cfg.identity_id)
    tol = cfg.tol if cfg.tol is not None else ident.tol
    threshold = cfg.threshold if cfg.threshold is not None else 10 * tol
    try:
        scan = scan_breakpoints(ident, *cfg.grid, threshold, params=cfg.params or None, method=cfg.method, tol=tol / 10)
    except ValueError as err:
        raise UsageError(str(err)) from None
    print(f"{ident.id}: {len(scan.grid)} grid points, threshold {threshold:g}")
    for b in scan.breakpoints:
        print(f"breakpoint theta={b:.10g}")
    if not scan.breakpoints:
        print("no breakpoints")
    if scan.failed:
        print(f"{len(scan.failed)} point(s) could not be summed")
    if cfg.out:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta", "abs_error", "above_threshold"])
        for t, e in zip(scan.grid, scan.errors):
            w.writerow([_fmt(t), _fmt(e), int(e > threshold)])
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    return EXIT_OK


_M_VALUES = [Fraction(k) for k in range(1, 11)] + [Fraction(1, 2), Fraction(3, 2), Fraction(7, 3)]


def run_lemmas(max_n: int = 12) -> bool:
    ok = True
    ok &= check(
        all(exact.lemma1_lhs(n, m) == exact.lemma1_rhs(n, m) for n in range(max_n + 1) for m in _M_VALUES),
        f"alternating binomial sum equals n!/prod(m+k), n <= {max_n}",
    )
    ok &= check(umbral.verify_lemma1_induction(max_n, _M_VALUES), f"umbral induction replay, n <= {max_n}")
    ok &= check(
        all(
            umbral.u_eval(umbral.u_mul(umbral.R(m), umbral.u_pow(umbral.UmbralPoly.const(1) - umbral.R(1), n)))
            == exact.lemma1_lhs(n, m)
            for n in range(max_n + 1)
            for m in _M_VALUES
        ),
        "umbral lowering of R^m (1-R)^n",
    )
    head = tail = True
    order = exact.DEFAULT_ORDER
    x1 = exact.TruncatedSeries([1, 1], order)
    log1p = x1.log()
    for n in range(0, 9):
        prod = (x1**n) * log1p
        head &= all(exact.a_coeff(n, k) == prod[k] for k in range(1, n + 1))
        tail &= all(exact.tail_coeff(n, k) == prod[n + k] for k in range(1, order - n))
    ok &= check(head, "head coefficients of (1+x)^n log(1+x), n <= 8")
    ok &= check(tail, "tail coefficients of (1+x)^n log(1+x), n <= 8")
    ok &= check(
        all(
            sum(math.comb(n + 1, k) * exact.bernoulli_number(k) for k in range(n + 1)) == 0
            for n in range(1, 31)
        ),
        "Bernoulli recurrence, n <= 30",
    )
    return bool(ok)


def cmd_lemmas(cfg: CliConfig) -> int:
    return EXIT_OK if run_lemmas(cfg.max_n) else EXIT_FAIL


def cmd_check_all(cfg: CliConfig) -> int:
    catalog = _load(cfg)
    ok = run_lemmas(cfg.max_n)
    rows: list[list[str]] = []
    discrepant = []
    for ident in catalog:
        if ident.method == "exact_coeffs":
            if ident.status == "expected_pass":
                ok &= _exact_check(ident)
            else:
                discrepant.append((ident, exact_coeff_mismatch(ident) is None))
            continue
        report = verify(ident, None, cfg.tol, None, cfg.method, cfg.terms)
        rows.extend(report_rows(report))
        if ident.status == "expected_pass":
            worst = report.failures()[0] if report.failures() else None
            detail = f"max error {report.max_error:.3g} over {len(report.samples)} samples"
            if worst is not None:
                detail += f"; first failure at theta={worst.theta:.6g} {_fmt_params(worst.params)} {worst.reason or ''}".rstrip()
            ok &= check(report.passed, f"{ident.id}: {detail} (tol {report.tolerance:g})")
        else:
            discrepant.append((ident, report.passed))
    print("Known discrepancies (each must fail verification):")
    for ident, passed in discrepant:
        ok &= check(not passed, f"{ident.id} fails as recorded")
    if cfg.out:
        write_csv(cfg.out, rows)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "list": cmd_list,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "lemmas": cmd_lemmas,
    "check-all": cmd_check_all,
}


def run(argv: Sequence[str]) -> int:
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.command](cfg)
    except SystemExit as exc:  # argparse reports usage errors this way
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (BlissardError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
