"""Symmetric q-numbers, q-factorials, both q-Pochhammer flavours, gamma ratios.

These are the leaf functions of every formula in the package:

* [s]_q = (q^(s/2) - q^(-s/2)) / (q^(1/2) - q^(-1/2))           (symmetric form)
* [n]_q! = [1]_q [2]_q ... [n]_q
* (a; q)_k = prod_{m=0}^{k-1} (1 - q^(a+m))                      (basic flavour)
* (a| q)_k = prod_{m=0}^{k-1} [a+m]_q                            (symmetric flavour)
* gamma_tilde(a+k)/gamma_tilde(a), only ever as integer-offset ratios, which
  telescope to (a|q)_k products.  gamma_tilde is never evaluated standalone.

The two Pochhammer flavours are related by
    (a|q)_k = (-1)^k (q^a; q)_k kappa^(-k) q^(-k(k-1)/4 - k a/2),
with kappa = q^(1/2) - q^(-1/2); that identity is enforced in the tests.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .errors import (
    GammaProductUnbalanced,
    NegativeArgument,
    NonHalfIntegerExponent,
    PoleInRatio,
)
from .scalar import QContext, Rat, Scalar, _frac


def kappa(ctx: QContext) -> Scalar:
    """kappa_q = q^(1/2) - q^(-1/2)."""
    return ctx.qpow(Fraction(1, 2)) - ctx.qpow(Fraction(-1, 2))


def q_number(ctx: QContext, s: Rat) -> Scalar:
    """Symmetric q-number [s]_q.  Exact backend needs s in (1/2)Z."""
    s = _frac(s)
    hit = ctx._qnum_cache.get(s)
    if hit is not None:
        return hit
    if ctx.is_exact and (2 * s).denominator != 1:
        raise NonHalfIntegerExponent(f"[{s}]_q needs s in (1/2)Z on the exact backend")
    half = s / 2
    val = (ctx.qpow(half) - ctx.qpow(-half)) / kappa(ctx)
    ctx._qnum_cache[s] = val
    return val


def q_factorial(ctx: QContext, n: int) -> Scalar:
    if n < 0:
        raise NegativeArgument(f"[{n}]_q!")
    out = ctx.one
    for k in range(2, n + 1):
        out = out * q_number(ctx, k)
    return out


def q_pochhammer(ctx: QContext, a: Rat, k: int, sign: int = 1) -> Scalar:
    """(sign*q^a; q)_k = prod_{m=0}^{k-1} (1 - sign*q^(a+m))."""
    if k < 0:
        raise NegativeArgument("Pochhammer length k must be >= 0")
    a = _frac(a)
    out = ctx.one
    for m in range(k):
        out = out * (ctx.one - ctx.integer(sign) * ctx.qpow(a + m))
    return out


def q_pochhammer_nu(ctx: QContext, a: Rat, k: int) -> Scalar:
    """(a|q)_k = prod_{m=0}^{k-1} [a+m]_q."""
    if k < 0:
        raise NegativeArgument("Pochhammer length k must be >= 0")
    a = _frac(a)
    out = ctx.one
    for m in range(k):
        out = out * q_number(ctx, a + m)
    return out


def gamma_tilde_ratio(ctx: QContext, a: Rat, offset: int) -> Scalar:
    """gamma_tilde(a+offset)/gamma_tilde(a) for integer offset.

    Telescopes to (a|q)_offset for offset >= 0 and 1/(a+offset|q)_(-offset)
    otherwise; a vanishing q-number in the denominator is a pole.
    """
    a = _frac(a)
    if offset >= 0:
        return q_pochhammer_nu(ctx, a, offset)
    den = q_pochhammer_nu(ctx, a + offset, -offset)
    if ctx.is_zero(den):
        raise PoleInRatio(f"gamma ratio at a={a}, offset={offset}")
    return ctx.one / den


def gamma_tilde_product(ctx: QContext, num: Iterable[Rat],
                        den: Iterable[Rat] = ()) -> Scalar:
    """Reduce  prod gamma_tilde(num_i) / prod gamma_tilde(den_j)  to a Scalar.

    Arguments are grouped by their value mod 1.  Integer arguments anchor at
    gamma_tilde(1) = 1 and evaluate absolutely (gamma_tilde(m+1) = [m]_q!);
    every other class must have cancelling exponents, and its factors are
    telescoped against the minimal argument.  Either way the product reduces
    to a signed multiset of q-number factors.  A non-integer class whose
    exponents do not cancel is not a rational function of q
    (GammaProductUnbalanced).  Zero q-number factors are tracked with
    multiplicity: net negative -> pole, net positive -> exact zero.
    """
    exps: dict[Fraction, int] = {}
    for x in num:
        x = _frac(x)
        exps[x] = exps.get(x, 0) + 1
    for x in den:
        x = _frac(x)
        exps[x] = exps.get(x, 0) - 1

    classes: dict[Fraction, dict[Fraction, int]] = {}
    for x, e in exps.items():
        if e == 0:
            continue
        classes.setdefault(x % 1, {})[x] = e

    point_exp: dict[Fraction, int] = {}
    for cls, members in classes.items():
        if cls == 0:
            # gamma_tilde(x) = (1|q)_{x-1} for x >= 1, 1/(x|q)_{1-x} for x <= 0
            for x, e in members.items():
                xi = int(x)
                if xi >= 1:
                    for m in range(1, xi):
                        pt = Fraction(m)
                        point_exp[pt] = point_exp.get(pt, 0) + e
                else:
                    for m in range(xi, 1):
                        pt = Fraction(m)
                        point_exp[pt] = point_exp.get(pt, 0) - e
            continue
        if sum(members.values()) != 0:
            raise GammaProductUnbalanced(
                f"gamma factors in class {cls} do not cancel: {members}")
        ref = min(members)
        for x, e in members.items():
            steps = x - ref
            assert steps.denominator == 1
            for m in range(int(steps)):
                pt = ref + m
                point_exp[pt] = point_exp.get(pt, 0) + e

    zero_balance = point_exp.pop(Fraction(0), 0)
    if zero_balance < 0:
        raise PoleInRatio("gamma product has a pole ([0]_q in the denominator)")
    if zero_balance > 0:
        return ctx.zero

    out = ctx.one
    for pt, e in point_exp.items():
        if e == 0:
            continue
        out = out * q_number(ctx, pt) ** e
    return out
