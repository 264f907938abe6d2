"""Scalar backends: exact rational functions in t = q^(1/4), and mpmath floats.

Every quantity in the package is computed over one of two interchangeable
backends, selected by a ``QContext``:

* exact: elements of the field Q(t) with t = q^(1/4).  All half-integer
  parameters make every occurring q-power a power of t, so values are reduced
  rational functions with exact arithmetic.  q -> 1 limits are evaluations at
  t = 1 of the reduced form.
* float: arbitrary-precision binary floats (mpmath) at a fixed real q > 0,
  q != 1, with a per-context precision.

Contexts are immutable apart from internal memo caches; all operations are
pure functions of their inputs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Union

from mpmath.ctx_mp import MPContext
from sympy import QQ
from sympy.polys.fields import field

from .errors import (
    DenominatorVanishesAtUnity,
    DivisionByZero,
    NonHalfIntegerExponent,
)

Scalar = Any  # FracElement (exact) or mpf (float)
Rat = Union[int, Fraction]

# The shared coefficient field Q(t); FracElement arithmetic reduces eagerly
# (gcd cancellation + positive-leading-coefficient denominator).
_FIELD, T = field("t", QQ)


def _frac(x: Rat) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class QContext:
    """Arithmetic context: backend choice, q (float backend) and precision."""

    __slots__ = ("backend", "q", "precision_bits", "mp", "key", "_qpow_cache",
                 "_qnum_cache", "zero", "one")

    def __init__(self, backend: str, q: Rat | None = None,
                 precision_bits: int = 128):
        if backend not in ("exact", "float"):
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self.precision_bits = int(precision_bits)
        self._qpow_cache: dict[Fraction, Scalar] = {}
        self._qnum_cache: dict[Fraction, Scalar] = {}
        if backend == "exact":
            self.q = None
            self.mp = None
            self.zero = _FIELD.zero
            self.one = _FIELD.one
            self.key = ("exact",)
        else:
            if q is None:
                raise ValueError("float backend needs q")
            qf = _frac(q)
            if qf <= 0 or qf == 1:
                raise ValueError("float backend needs real q > 0, q != 1")
            if self.precision_bits < 64:
                raise ValueError("precision_bits must be >= 64")
            mp = MPContext()
            mp.prec = self.precision_bits
            self.mp = mp
            self.q = mp.mpf(qf.numerator) / mp.mpf(qf.denominator)
            self.zero = mp.mpf(0)
            self.one = mp.mpf(1)
            self.key = ("float", str(qf), self.precision_bits)

    def __repr__(self):
        if self.backend == "exact":
            return "QContext(exact)"
        return f"QContext(float, q={self.q}, bits={self.precision_bits})"

    @property
    def is_exact(self) -> bool:
        return self.backend == "exact"

    # -- constructors -------------------------------------------------------

    def integer(self, n: int) -> Scalar:
        if self.is_exact:
            return _FIELD.ground_new(QQ(int(n)))
        return self.mp.mpf(int(n))

    def rational(self, r: Rat) -> Scalar:
        r = _frac(r)
        if self.is_exact:
            return _FIELD.ground_new(QQ(r.numerator, r.denominator))
        return self.mp.mpf(r.numerator) / self.mp.mpf(r.denominator)

    def qpow(self, r: Rat) -> Scalar:
        """q**r for rational r (exact backend: requires r in (1/4)Z)."""
        r = _frac(r)
        hit = self._qpow_cache.get(r)
        if hit is not None:
            return hit
        if self.is_exact:
            e = 4 * r
            if e.denominator != 1:
                raise NonHalfIntegerExponent(
                    f"q^{r} is not an integer power of t=q^(1/4)")
            val = T ** int(e)
        else:
            mp = self.mp
            val = mp.power(self.q, mp.mpf(r.numerator) / mp.mpf(r.denominator))
        self._qpow_cache[r] = val
        return val

    # -- predicates and ops --------------------------------------------------

    def is_zero(self, x: Scalar) -> bool:
        return x == 0

    def divide(self, a: Scalar, b: Scalar) -> Scalar:
        if self.is_zero(b):
            raise DivisionByZero("scalar division by zero")
        return a / b

    def sqrt(self, x: Scalar) -> Scalar:
        if self.is_exact:
            raise TypeError("no square roots in the exact field; "
                            "work with squares and tracked signs")
        return self.mp.sqrt(x)

    def abs(self, x: Scalar) -> Scalar:
        if self.is_exact:
            raise TypeError("exact scalars are not ordered")
        return self.mp.fabs(x)


def exact_context() -> QContext:
    return QContext("exact")


def float_context(q: Rat, precision_bits: int = 128) -> QContext:
    return QContext("float", q=q, precision_bits=precision_bits)


# -- exact-backend helpers ----------------------------------------------------

def _qq_to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _poly_at_unity(p) -> Fraction:
    # sum of coefficients of a univariate PolyElement
    total = Fraction(0)
    for _, c in p.terms():
        total += _qq_to_fraction(c)
    return total


def exact_eval_at_unity(x: Scalar) -> Fraction:
    """The q -> 1 limit of a reduced element of Q(t): evaluate at t = 1.

    Reduction has already cancelled every common (t-1) factor, so a vanishing
    denominator at t=1 means the limit does not exist as a rational.
    """
    den = _poly_at_unity(x.denom)
    if den == 0:
        raise DenominatorVanishesAtUnity(str(x))
    return _poly_at_unity(x.numer) / den


def evaluate_exact(x: Scalar, fctx: QContext) -> Scalar:
    """Evaluate an exact scalar at t = q^(1/4) in a float context."""
    t = fctx.qpow(Fraction(1, 4))

    def poly_val(p):
        total = fctx.zero
        for (e,), c in p.terms():
            cf = _qq_to_fraction(c)
            total += fctx.rational(cf) * t ** e
        return total

    return poly_val(x.numer) / poly_val(x.denom)


def format_scalar(ctx: QContext, x: Scalar, digits: int | None = None) -> str:
    """Deterministic string form: Laurent-fraction in t (exact) or decimal."""
    if ctx.is_exact:
        return format_exact(x)
    d = digits if digits is not None else max(6, int(ctx.precision_bits * 0.3))
    return ctx.mp.nstr(x, d, strip_zeros=False)


def _format_poly(p) -> str:
    terms = sorted(p.terms(), key=lambda tc: -tc[0][0])
    if not terms:
        return "0"
    parts = []
    for (e,), c in terms:
        cf = _qq_to_fraction(c)
        sign = "-" if cf < 0 else "+"
        cf = abs(cf)
        if e == 0:
            body = str(cf)
        else:
            tpow = "t" if e == 1 else f"t^{e}"
            body = tpow if cf == 1 else f"{cf}*{tpow}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_exact(x: Scalar) -> str:
    num, den = x.numer, x.denom
    if den == x.field.ring.one:
        return _format_poly(num)
    return f"({_format_poly(num)})/({_format_poly(den)})"
