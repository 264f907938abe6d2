"""Command-line front end: polynomial tables, 6j tables, verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage error.
Precision default can be overridden with QRACAH_PRECISION_BITS.
"""

from __future__ import annotations

import json
import os
import sys
import warnings
from fractions import Fraction

import click

from .errors import InadmissibleParams, QRacahError, TriangleViolation
from .racah import AdmissibilityWarning, Family, RacahParams, evaluate, require_grid
from .scalar import exact_context, float_context, format_scalar
from .sixj import ROUTES, SixJ, sixj_value
from .verify import SUITES, run_suite

DEFAULT_Q = "7/10"
DEFAULT_TOL = "1e-25"


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"{text!r} is not a rational") from exc


def _default_bits() -> int:
    return int(os.environ.get("QRACAH_PRECISION_BITS", "128"))


def _make_context(backend: str, q: str, bits: int):
    if backend == "exact":
        return exact_context()
    return float_context(_parse_fraction(q), bits)


def _emit(payload: dict, fmt: str, columns: list[str]) -> None:
    if fmt == "json":
        click.echo(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        click.echo(",".join(columns))
        for row in payload["rows"]:
            click.echo(",".join(str(row[c]) for c in columns))


def _error_exit(exc: Exception, code: int = 2) -> None:
    click.echo(json.dumps({"error": type(exc).__name__, "message": str(exc)},
                          sort_keys=True), err=True)
    sys.exit(code)


@click.group()
def main():
    """q-Racah polynomials and 6j-symbols."""


@main.command()
@click.option("--family", type=click.Choice(["u", "utilde"]), default="u")
@click.option("--a", "a_", required=True)
@click.option("--b", "b_", required=True)
@click.option("--alpha", required=True)
@click.option("--beta", required=True)
@click.option("--nmax", type=int, required=True)
@click.option("--method", type=click.Choice(["explicit", "4f3", "4f3-sears", "ttrr"]),
              default="4f3")
@click.option("--backend", type=click.Choice(["exact", "float"]), default="exact")
@click.option("--q", default=DEFAULT_Q, show_default=True)
@click.option("--precision-bits", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def poly(family, a_, b_, alpha, beta, nmax, method, backend, q, precision_bits, fmt):
    """Table of (n, s, x(s), P_n(x(s))) over the orthogonality grid."""
    bits = precision_bits if precision_bits is not None else _default_bits()
    params = RacahParams(_parse_fraction(a_), _parse_fraction(b_),
                         _parse_fraction(alpha), _parse_fraction(beta),
                         Family(family))
    try:
        require_grid(params)
        violations = params.box_violations()
        if violations:
            raise InadmissibleParams("; ".join(violations))
        if nmax < 0 or nmax > int(params.N) - 1:
            raise InadmissibleParams(
                f"nmax must lie in 0..{int(params.N) - 1}")
        ctx = _make_context(backend, q, bits)
    except QRacahError as exc:
        _error_exit(exc)
    from .nulattice import shared_racah_lattice
    lat = shared_racah_lattice()
    rows = []
    for n in range(nmax + 1):
        for s in params.grid():
            rows.append({
                "n": n,
                "s": str(s),
                "x": format_scalar(ctx, lat.x(ctx, s)),
                "value": format_scalar(ctx, evaluate(ctx, params, n, s, method)),
            })
    meta = {"t": "q^(1/4)", "backend": backend, "family": family,
            "a": str(params.a), "b": str(params.b),
            "alpha": str(params.alpha), "beta": str(params.beta),
            "method": method}
    if backend == "float":
        meta["q"] = q
        meta["precision_bits"] = bits
    _emit({"meta": meta, "rows": rows}, fmt, ["n", "s", "x", "value"])


@main.command()
@click.argument("entries", nargs=-1, required=True)
@click.option("--route", type=click.Choice(list(ROUTES) + ["all"]), default="u")
@click.option("--q", default=DEFAULT_Q, show_default=True)
@click.option("--precision-bits", type=int, default=None)
@click.option("--lenient", is_flag=True, help="report per-row errors, exit 0")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def sixj(entries, route, q, precision_bits, lenient, fmt):
    """6j-symbol values; ENTRIES is one or more sextuples j1 j2 j12 j3 j j23."""
    bits = precision_bits if precision_bits is not None else _default_bits()
    if len(entries) % 6:
        raise click.UsageError("entries must come in groups of six")
    ctx = _make_context("float", q, bits)
    routes = list(ROUTES) if route == "all" else [route]
    rows = []
    failed = False
    for i in range(0, len(entries), 6):
        js = [_parse_fraction(x) for x in entries[i:i + 6]]
        row = {k: str(v) for k, v in
               zip(("j1", "j2", "j12", "j3", "j", "j23"), js)}
        try:
            sj = SixJ(*js).validate()
            for r in routes:
                row[f"value_{r}"] = format_scalar(ctx, sixj_value(ctx, sj, r))
            row["error"] = ""
        except (TriangleViolation, InadmissibleParams, QRacahError) as exc:
            failed = True
            for r in routes:
                row[f"value_{r}"] = ""
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    meta = {"q": q, "precision_bits": bits, "routes": routes}
    columns = ["j1", "j2", "j12", "j3", "j", "j23"] + \
        [f"value_{r}" for r in routes] + ["error"]
    _emit({"meta": meta, "rows": rows}, fmt, columns)
    if failed and not lenient:
        sys.exit(1)


@main.command()
@click.argument("suite", type=click.Choice(sorted(SUITES)))
@click.option("--q", default=DEFAULT_Q, show_default=True)
@click.option("--precision-bits", type=int, default=None)
@click.option("--tolerance", default=DEFAULT_TOL, show_default=True)
@click.option("--quick", is_flag=True, help="smaller parameter grid")
def verify(suite, q, precision_bits, tolerance, quick):
    """Run a verification suite and emit a JSON report (exit 1 on failure)."""
    bits = precision_bits if precision_bits is not None else _default_bits()
    tol = _parse_fraction(tolerance)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdmissibilityWarning)
        report = run_suite(suite, q=_parse_fraction(q), precision_bits=bits,
                           tolerance=tol, quick=quick)
    click.echo(json.dumps(report, sort_keys=True, indent=1))
    sys.exit(0 if report["passed"] else 1)


if __name__ == "__main__":
    main()
