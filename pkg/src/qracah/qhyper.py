"""Terminating basic hypergeometric series: r_phi_p, r_F_p, and the 6phi5 sum.

Two families of series are used:

* phi-variant, Gasper-Rahman parameters q^(a_i):
    sum_k  prod(a_i;q)_k / prod(b_j;q)_k * z^k/(q;q)_k * [(-1)^k q^(k(k-1)/2)]^(p-r+1)
* F-variant, symmetric-Pochhammer parameters a_i:
    sum_k  prod(a_i|q)_k / prod(b_j|q)_k * z^k/(1|q)_k * [kappa^(-k) q^(k(k-1)/4)]^(p-r+1)

Both are evaluated by forward accumulation of consecutive term ratios, never
by recomputing Pochhammers per term.  Only terminating series are in scope: at
least one numerator parameter must be q^(-n) (resp. -n) with n a nonnegative
integer.  Numerator parameters of the form -q^x (needed by the very-well-poised
6phi5) carry an explicit sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NonTerminating, PoleBeforeTermination, PoleInClosedForm
from .qarith import kappa, q_number, q_pochhammer
from .scalar import QContext, Rat, Scalar, _frac


@dataclass(frozen=True)
class SeriesParam:
    """One series parameter: sign * q^exponent (phi) or plain exponent (F)."""
    exponent: Fraction
    sign: int = 1


def _params(entries: Sequence) -> tuple[SeriesParam, ...]:
    out = []
    for p in entries:
        if isinstance(p, SeriesParam):
            out.append(SeriesParam(_frac(p.exponent), p.sign))
        else:
            out.append(SeriesParam(_frac(p)))
    return tuple(out)


@dataclass(frozen=True)
class BasicSeriesSpec:
    numerator: tuple[SeriesParam, ...]
    denominator: tuple[SeriesParam, ...]
    argument: object  # Scalar z
    variant: str      # "phi" | "F"

    def termination_index(self) -> int:
        """Smallest n >= 0 with a numerator parameter q^(-n) (resp. -n)."""
        best = None
        for p in self.numerator:
            if p.sign != 1:
                continue
            e = p.exponent
            if e <= 0 and e.denominator == 1:
                n = -int(e)
                best = n if best is None else min(best, n)
        if best is None:
            raise NonTerminating("no numerator parameter of the form q^(-n)")
        return best

    def check_no_premature_pole(self, n: int) -> None:
        for p in self.denominator:
            if p.sign != 1:
                continue
            e = p.exponent
            if e <= 0 and e.denominator == 1 and -int(e) < n:
                raise PoleBeforeTermination(
                    f"denominator parameter q^{e} vanishes before k={n}")


def series_spec(num, den, argument, variant) -> BasicSeriesSpec:
    if variant not in ("phi", "F"):
        raise ValueError(variant)
    return BasicSeriesSpec(_params(num), _params(den), argument, variant)


def eval_series(ctx: QContext, spec: BasicSeriesSpec,
                terms: int | None = None) -> Scalar:
    """Sum the terminating series (terms defaults to the termination index+1)."""
    n = spec.termination_index()
    spec.check_no_premature_pole(n)
    if terms is not None:
        n = min(n, terms - 1)
    r, p = len(spec.numerator), len(spec.denominator)
    excess = p - r + 1
    z = spec.argument

    total = ctx.one
    term = ctx.one
    if spec.variant == "phi":
        for k in range(n):
            for prm in spec.numerator:
                term = term * (ctx.one - ctx.integer(prm.sign) * ctx.qpow(prm.exponent + k))
            for prm in spec.denominator:
                term = term / (ctx.one - ctx.integer(prm.sign) * ctx.qpow(prm.exponent + k))
            term = term * z / (ctx.one - ctx.qpow(k + 1))
            if excess:
                term = term * (-ctx.qpow(k)) ** excess
            total = total + term
    else:
        kap = kappa(ctx)
        for k in range(n):
            for prm in spec.numerator:
                term = term * q_number(ctx, prm.exponent + k)
            for prm in spec.denominator:
                term = term / q_number(ctx, prm.exponent + k)
            term = term * z / q_number(ctx, k + 1)
            if excess:
                term = term * (ctx.qpow(Fraction(k, 2)) / kap) ** excess
            total = total + term
    return total


def eval_phi(ctx: QContext, num, den, z: Scalar,
             terms: int | None = None) -> Scalar:
    """Terminating r_phi_p with numerator/denominator exponent lists."""
    return eval_series(ctx, series_spec(num, den, z, "phi"), terms)


def eval_F(ctx: QContext, num, den, z: Scalar,
           terms: int | None = None) -> Scalar:
    """Terminating r_F_p with symmetric-Pochhammer parameter lists."""
    return eval_series(ctx, series_spec(num, den, z, "F"), terms)


def vwp_6phi5_closed(ctx: QContext, a: Rat, b: Rat, c: Rat, k: int) -> Scalar:
    """Closed form of the terminating very-well-poised 6phi5 sum.

    With parameters (q^a, q^(a/2+1), -q^(a/2+1), q^b, q^c, q^-k over
    q^(a/2), -q^(a/2), q^(a+1-b), q^(a+1-c), q^(a+k+1)) at z = q^(a+k+1-b-c)
    the sum telescopes to (q^(a+1), q^(a+1-b-c); q)_k / (q^(a+1-b), q^(a+1-c); q)_k.
    """
    a, b, c = _frac(a), _frac(b), _frac(c)
    den = q_pochhammer(ctx, a + 1 - b, k) * q_pochhammer(ctx, a + 1 - c, k)
    if ctx.is_zero(den):
        raise PoleInClosedForm(f"6phi5 closed form pole at a={a}, b={b}, c={c}, k={k}")
    return q_pochhammer(ctx, a + 1, k) * q_pochhammer(ctx, a + 1 - b - c, k) / den


def vwp_6phi5_series(ctx: QContext, a: Rat, b: Rat, c: Rat, k: int) -> Scalar:
    """Term-by-term verification mode of the same 6phi5."""
    a, b, c = _frac(a), _frac(b), _frac(c)
    half = a / 2
    num = [SeriesParam(a), SeriesParam(half + 1), SeriesParam(half + 1, -1),
           SeriesParam(b), SeriesParam(c), SeriesParam(Fraction(-k))]
    den = [SeriesParam(half), SeriesParam(half, -1),
           SeriesParam(a + 1 - b), SeriesParam(a + 1 - c),
           SeriesParam(a + k + 1)]
    z = ctx.qpow(a + k + 1 - b - c)
    return eval_series(ctx, series_spec(num, den, z, "phi"))
