"""6j-symbols and Racah coefficients of the quantum algebra U_q(su(2)).

A symbol {j1 j2 j12; j3 j j23} is computed through three independent routes:

* "u": proportional to a u-family polynomial value,
      (-1)^(j1+j23+j) sqrt(rho(s) / ([2 j12+1]_q d_n^2)) u_n(x(s)),
  with s = j23, a = j3-j2, b = j2+j3+1, n = j12-j1+j2,
  alpha = j1-j2-j3+j, beta = j1-j2+j3-j;
* "utilde": the same with the second family,
      (-1)^(j12+j3+j) sqrt(rho~(s) / ([2 j12+1]_q d~_n^2)) u~_n(x(s)),
  n = j1+j2-j12;
* "explicit": a single sum over products of q-factorials (the image of the
  families' explicit representation under the substitution above).

Square roots force the value routes onto the float backend; exact statements
are made through sixj_squared (the square is a rational function of q) plus a
tracked sign.

Working assumptions on the entries (j1 >= j2, j3 >= j2, |j-j3| <= j1-j2,
|j-j1| <= j3-j2) make the admissible (j12, j23) region the full rectangle
[j1-j2, j1+j2] x [j3-j2, j2+j3] and the polynomial parameters nonnegative
integers.

Recurrence conventions: shifted symbols whose coefficient vanishes exactly
(a q-number factor with zero argument) contribute zero and are never
evaluated; any other out-of-range access raises TriangleViolation.  The
coefficient of the undisplaced symbol in the first differentiation recurrence
closes after the tau_n factor (the paper's Lambda *is* tau_n of the family),
and the til-route recurrences use the second family's Table sigma; see
sixj recurrence functions for the residual forms actually verified.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import (
    InadmissibleParams,
    NegativeUnderRadical,
    TriangleViolation,
)
from .qarith import gamma_tilde_product, q_factorial, q_number
from .racah import (
    Family,
    RacahParams,
    evaluate,
    rho_over_d2,
    tau_n_closed,
)
from .scalar import QContext, Rat, Scalar, _frac, evaluate_exact, exact_context

HALF = Fraction(1, 2)


def _is_half_integer(x: Fraction) -> bool:
    return (2 * x).denominator == 1


def _triangle(x: Fraction, y: Fraction, z: Fraction) -> bool:
    return (x + y + z).denominator == 1 and abs(x - y) <= z <= x + y


@dataclass(frozen=True)
class SixJ:
    j1: Fraction
    j2: Fraction
    j12: Fraction
    j3: Fraction
    j: Fraction
    j23: Fraction

    def __post_init__(self):
        for name in ("j1", "j2", "j12", "j3", "j", "j23"):
            v = _frac(getattr(self, name))
            object.__setattr__(self, name, v)
            if v < 0 or not _is_half_integer(v):
                raise InadmissibleParams(f"{name}={v} must be a nonnegative half-integer")

    def validate(self) -> "SixJ":
        """Triangle conditions plus the working assumptions on the entries."""
        for tri in ((self.j1, self.j2, self.j12), (self.j12, self.j3, self.j),
                    (self.j2, self.j3, self.j23), (self.j1, self.j, self.j23)):
            if not _triangle(*tri):
                raise TriangleViolation(f"triangle {tri} violated in {self}")
        if self.j1 < self.j2 or self.j3 < self.j2:
            raise InadmissibleParams("need j1 >= j2 and j3 >= j2")
        if abs(self.j - self.j3) > self.j1 - self.j2:
            raise InadmissibleParams("need |j-j3| <= j1-j2")
        if abs(self.j - self.j1) > self.j3 - self.j2:
            raise InadmissibleParams("need |j-j1| <= j3-j2")
        return self

    # -- polynomial dictionary ------------------------------------------------

    @property
    def alpha(self) -> Fraction:
        return self.j1 - self.j2 - self.j3 + self.j

    @property
    def beta(self) -> Fraction:
        return self.j1 - self.j2 + self.j3 - self.j

    def racah_params(self, family: Family) -> tuple[RacahParams, int]:
        """(parameters, degree) of the polynomial behind the chosen route."""
        a = self.j3 - self.j2
        b = self.j2 + self.j3 + 1
        params = RacahParams(a, b, self.alpha, self.beta, family)
        if family is Family.U:
            n = self.j12 - self.j1 + self.j2
        else:
            n = self.j1 + self.j2 - self.j12
        if n.denominator != 1 or n < 0:
            raise InadmissibleParams(f"degree {n} not a nonnegative integer")
        return params, int(n)

    def swap_13(self) -> "SixJ":
        """The (j1,j12) <-> (j3,j23) symmetry partner."""
        return SixJ(self.j3, self.j2, self.j23, self.j1, self.j, self.j12)


def _parity(x: Fraction) -> int:
    x = _frac(x)
    if x.denominator != 1:
        raise InadmissibleParams(f"phase exponent {x} is not an integer")
    return int(x) % 2


ROUTES = ("u", "utilde", "explicit")


def sixj_value(ctx: QContext, sj: SixJ, route: str = "u") -> Scalar:
    """The 6j-symbol as an arbitrary-precision float, by the chosen route."""
    if ctx.is_exact:
        raise TypeError("6j values need square roots; use a float context "
                        "(or sixj_squared for exact statements)")
    sj.validate()
    if route == "explicit":
        square_free, total, parity = _explicit_parts(ctx, sj)
        val = ctx.sqrt(square_free) * total
        return -val if parity else val
    fam = Family.U if route == "u" else Family.UTILDE
    params, n = sj.racah_params(fam)
    s = sj.j23
    inside = rho_over_d2(ctx, params, n, s) / q_number(ctx, 2 * sj.j12 + 1)
    if inside < 0:
        raise NegativeUnderRadical(f"rho/d^2 < 0 for {sj} via {route}")
    poly = evaluate(ctx, params, n, s, "4f3")
    if fam is Family.U:
        parity = _parity(sj.j1 + sj.j23 + sj.j)
    else:
        parity = _parity(sj.j12 + sj.j3 + sj.j)
    val = ctx.sqrt(inside) * poly
    return -val if parity else val


def sixj_squared(sj: SixJ, route: str = "u",
                 sign_q: Rat = Fraction(7, 10),
                 sign_bits: int = 128) -> tuple[Scalar, int]:
    """Exact square of the 6j-symbol in Q(t) plus its sign at q = sign_q.

    The square is route-independent as a rational function; the sign is the
    route phase times the sign of the polynomial value (resp. sum), read off
    numerically at sign_q.
    """
    from .scalar import float_context
    sj.validate()
    ctx = exact_context()
    fctx = float_context(sign_q, sign_bits)
    if route == "explicit":
        square_free, total, parity = _explicit_parts(ctx, sj)
        square = square_free * total * total
        num_sign = 1 if evaluate_exact(total, fctx) >= 0 else -1
    else:
        fam = Family.U if route == "u" else Family.UTILDE
        params, n = sj.racah_params(fam)
        s = sj.j23
        poly = evaluate(ctx, params, n, s, "4f3")
        square = (rho_over_d2(ctx, params, n, s) / q_number(ctx, 2 * sj.j12 + 1)
                  * poly * poly)
        if fam is Family.U:
            parity = _parity(sj.j1 + sj.j23 + sj.j)
        else:
            parity = _parity(sj.j12 + sj.j3 + sj.j)
        num_sign = 1 if evaluate_exact(poly, fctx) >= 0 else -1
    sign = -num_sign if parity else num_sign
    return square, sign


def _fac_ratio(ctx: QContext, num: list[Fraction], den: list[Fraction]) -> Scalar:
    out = ctx.one
    for x in num:
        x = _frac(x)
        if x.denominator != 1 or x < 0:
            raise TriangleViolation(f"q-factorial argument {x} not a nonnegative integer")
        out = out * q_factorial(ctx, int(x))
    for x in den:
        x = _frac(x)
        if x.denominator != 1 or x < 0:
            raise TriangleViolation(f"q-factorial argument {x} not a nonnegative integer")
        out = out / q_factorial(ctx, int(x))
    return out


def _explicit_parts(ctx: QContext, sj: SixJ):
    """(square-free prefactor, single sum, phase parity) of the explicit route."""
    j1, j2, j12, j3, j, j23 = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    n = int(j12 - j1 + j2)
    pref = _fac_ratio(
        ctx,
        [j23 + j2 - j3, j23 + j2 + j3 + 1, j23 + j - j1, j2 + j3 - j23,
         j12 - j1 + j2, j1 - j2 + j12, j1 + j2 - j12, j3 + j - j12],
        [j23 + j3 - j2, j23 + j1 - j, j23 + j1 + j + 1, j1 + j - j23,
         j12 - j3 + j, j12 + j3 - j, j1 + j2 + j12 + 1, j12 + j3 + j + 1])
    total = ctx.zero
    for k in range(n + 1):
        num = [k + j23 + j3 - j2, 2 * j23 + k - j12 + j1 - j2,
               k + j23 + j1 - j, k + j23 + j1 + j + 1, j12 + j2 + j - j23 - k]
        den = [Fraction(k), j12 - j1 + j2 - k, 2 * j23 + k + 1,
               k + j23 + j1 - j12 - j3, k + j23 + j1 - j12 + j3 + 1,
               k + j23 + j - j2 - j12, j2 + j3 - j23 - k]
        term = (gamma_tilde_product(ctx, [x + 1 for x in num], [x + 1 for x in den])
                * q_number(ctx, 2 * j23 + 2 * k - j12 + j1 - j2 + 1))
        total = total + (-term if k % 2 else term)
    return pref, total, _parity(j1 + j23 + j)


def racah_coefficient(ctx: QContext, sj: SixJ, route: str = "u") -> Scalar:
    """U_q = (-1)^(j1+j2+j3+j) sqrt([2j12+1]_q [2j23+1]_q) {6j}."""
    val = sixj_value(ctx, sj, route)
    w = ctx.sqrt(q_number(ctx, 2 * sj.j12 + 1) * q_number(ctx, 2 * sj.j23 + 1))
    return -w * val if _parity(sj.j1 + sj.j2 + sj.j3 + sj.j) else w * val


def symmetry_residual(ctx: QContext, sj: SixJ, route: str = "u") -> Scalar:
    """{j1 j2 j12; j3 j j23} - {j3 j2 j23; j1 j j12}; zero."""
    return sixj_value(ctx, sj, route) - sixj_value(ctx, sj.swap_13(), route)


# -- enumeration ----------------------------------------------------------------

def _half_range(lo: Fraction, hi: Fraction):
    v = _frac(lo)
    while v <= hi:
        yield v
        v += 1


def j23_values(j1, j2, j3, j) -> list[Fraction]:
    return list(_half_range(j3 - j2, j2 + j3))


def j12_values(j1, j2, j3, j) -> list[Fraction]:
    return list(_half_range(j1 - j2, j1 + j2))


def outer_tuples(j_max: Rat):
    """All (j1, j2, j3, j) under the working assumptions with entries <= j_max
    and integer polynomial parameters."""
    j_max = _frac(j_max)
    grid = list(_half_range(Fraction(0), j_max))
    for j2 in grid:
        for j1 in grid:
            if j1 < j2:
                continue
            for j3 in grid:
                if j3 < j2:
                    continue
                for j in grid:
                    if abs(j - j3) > j1 - j2 or abs(j - j1) > j3 - j2:
                        continue
                    if (j1 - j2 - j3 + j).denominator != 1:
                        continue
                    yield (j1, j2, j3, j)


def admissible_symbols(j_max: Rat):
    """All admissible SixJ with every entry <= j_max."""
    j_max = _frac(j_max)
    for (j1, j2, j3, j) in outer_tuples(j_max):
        for j12 in j12_values(j1, j2, j3, j):
            if j12 > j_max:
                continue
            for j23 in j23_values(j1, j2, j3, j):
                if j23 > j_max:
                    continue
                yield SixJ(j1, j2, j12, j3, j, j23)


class SixJTable:
    """Caching evaluator: one route, one context, values keyed by entries."""

    def __init__(self, ctx: QContext, route: str = "u"):
        self.ctx = ctx
        self.route = route
        self._cache: dict[tuple, Scalar] = {}

    def __call__(self, j1, j2, j12, j3, j, j23) -> Scalar:
        key = (j1, j2, j12, j3, j, j23)
        hit = self._cache.get(key)
        if hit is None:
            hit = sixj_value(self.ctx, SixJ(*key), self.route)
            self._cache[key] = hit
        return hit


# -- coefficient factories -------------------------------------------------------

def _sqrt_qnum_product(ctx: QContext, args: list[Fraction]):
    """(value, is_zero) of sqrt of a product of q-numbers; exact zero detection."""
    if any(_frac(a) == 0 for a in args):
        return ctx.zero, True
    prod = ctx.one
    for a in args:
        prod = prod * q_number(ctx, a)
    if prod < 0:
        raise NegativeUnderRadical(f"sqrt of negative product {args}")
    return ctx.sqrt(prod), False


def A_minus(ctx, j1, j2, j3, j, j23):
    return _sqrt_qnum_product(ctx, [
        j + j23 + j1 + 1, j + j23 - j1, j - j23 + j1 + 1, j23 - j + j1,
        j2 + j3 + j23 + 1, j2 + j3 - j23 + 1, j3 - j2 + j23, j2 - j3 + j23])


def A_plus(ctx, j1, j2, j3, j, j23):
    return _sqrt_qnum_product(ctx, [
        j + j23 + j1 + 2, j + j23 - j1 + 1, j - j23 + j1, j23 - j + j1 + 1,
        j2 + j3 + j23 + 2, j2 + j3 - j23, j3 - j2 + j23 + 1, j2 - j3 + j23 + 1])


def A_tilde_minus(ctx, j1, j2, j3, j, j12):
    return _sqrt_qnum_product(ctx, [
        j2 - j1 + j12, j1 - j2 + j12, j12 - j3 + j, j12 + j3 - j,
        j1 + j2 + j12 + 1, j12 + j3 + j + 1, j1 + j2 - j12 + 1, j3 - j12 + j + 1])


def A_tilde_plus(ctx, j1, j2, j3, j, j12):
    return _sqrt_qnum_product(ctx, [
        j2 - j1 + j12 + 1, j1 - j2 + j12 + 1, j12 - j3 + j + 1, j12 + j3 - j + 1,
        j1 + j2 + j12 + 2, j12 + j3 + j + 2, j1 + j2 - j12, j3 - j12 + j])


def _sigma_u(ctx, j1, j2, j3, j, t):
    """sigma of the u family in 6j variables, as a function of t = j23."""
    return (q_number(ctx, t - j3 + j2) * q_number(ctx, t + j2 + j3 + 1)
            * q_number(ctx, t - j1 + j) * q_number(ctx, j + j1 - t + 1))


def _sigma_u_reflected(ctx, j1, j2, j3, j, t):
    """sigma(-t-1) of the u family."""
    return (q_number(ctx, t + j3 - j2 + 1) * q_number(ctx, j2 + j3 - t)
            * q_number(ctx, t + j1 - j + 1) * q_number(ctx, j + j1 + t + 2))


def _sigma_t(ctx, j1, j2, j3, j, t):
    """sigma of the second (utilde) family in 6j variables."""
    return (q_number(ctx, t - j3 + j2) * q_number(ctx, t + j2 + j3 + 1)
            * q_number(ctx, t + j1 - j) * q_number(ctx, t + j1 + j + 1))


def _sigma_t_reflected(ctx, j1, j2, j3, j, t):
    """sigma(-t-1) of the second family."""
    return (q_number(ctx, t + j3 - j2 + 1) * q_number(ctx, j2 + j3 - t)
            * q_number(ctx, t - j1 + j + 1) * q_number(ctx, j + j1 - t))


def _tau_n_u(ctx, sj: SixJ):
    params, n = sj.racah_params(Family.U)
    return tau_n_closed(ctx, params, n, sj.j23)


def _tau_n_t(ctx, sj: SixJ):
    params, n = sj.racah_params(Family.UTILDE)
    return tau_n_closed(ctx, params, n, sj.j23)


# -- recurrence residuals ---------------------------------------------------------

def recurrence_j23_residual(ctx: QContext, W, sj: SixJ) -> Scalar:
    """Three-term recurrence in j23 (the difference equation of the u family)."""
    j1, j2, j12, j3, j, s = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    two = q_number(ctx, 2)
    am, am_zero = A_minus(ctx, j1, j2, j3, j, s)
    ap, ap_zero = A_plus(ctx, j1, j2, j3, j, s)
    res = ctx.zero
    if not am_zero:
        res = res + two * q_number(ctx, 2 * s + 2) * am * W(j1, j2, j12, j3, j, s - 1)
    if not ap_zero:
        res = res + two * q_number(ctx, 2 * s) * ap * W(j1, j2, j12, j3, j, s + 1)
    big = ((q_number(ctx, 2 * s) * q_number(ctx, 2 * j1 + 2)
            - two * q_number(ctx, j - s + j1 + 1) * q_number(ctx, j + s - j1))
           * (q_number(ctx, 2 * j2) * q_number(ctx, 2 * s + 2)
              - two * q_number(ctx, j3 - j2 + s + 1) * q_number(ctx, j3 + j2 - s))
           - (q_number(ctx, 2 * j2) * q_number(ctx, 2 * j1 + 2)
              - two * q_number(ctx, j12 - j2 + j1 + 1) * q_number(ctx, j12 + j2 - j1))
           * q_number(ctx, 2 * s + 2) * q_number(ctx, 2 * s))
    res = res - big * q_number(ctx, 2 * s + 1) * W(j1, j2, j12, j3, j, s)
    return res


def recurrence_j12_residual(ctx: QContext, W, sj: SixJ) -> Scalar:
    """Three-term recurrence in j12 (the image of the polynomial TTRR)."""
    j1, j2, j12, j3, j, s = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    atp, atp_zero = A_tilde_plus(ctx, j1, j2, j3, j, j12)
    atm, atm_zero = A_tilde_minus(ctx, j1, j2, j3, j, j12)
    res = ctx.zero
    if not atp_zero:
        res = res + q_number(ctx, 2 * j12) * atp * W(j1, j2, j12 + 1, j3, j, s)
    if not atm_zero:
        res = res + q_number(ctx, 2 * j12 + 2) * atm * W(j1, j2, j12 - 1, j3, j, s)
    big = (q_number(ctx, 2 * j12) * q_number(ctx, 2 * j12 + 1) * q_number(ctx, 2 * j12 + 2)
           * (q_number(ctx, s) * q_number(ctx, s + 1)
              - q_number(ctx, j3 - j2) * q_number(ctx, j3 - j2 + 1))
           + q_number(ctx, 2 * j12) * q_number(ctx, j1 - j2 + j12 + 1)
           * q_number(ctx, j12 - j1 - j2) * q_number(ctx, j12 + j3 - j + 1)
           * q_number(ctx, j12 + j3 + j + 2)
           - q_number(ctx, 2 * j12 + 2) * q_number(ctx, j12 - j3 + j)
           * q_number(ctx, j1 + j2 + j12 + 1) * q_number(ctx, j3 - j12 + j + 1)
           * q_number(ctx, j2 - j1 + j12))
    return res - big * W(j1, j2, j12, j3, j, s)


def shift_residual_u1(ctx: QContext, W, sj: SixJ) -> Scalar:
    """Half-shift relation from the u-family lowering identity:
    sqrt(sigma(j23+1)) {j23+1} + sqrt(sigma(-j23-1)) {j23}
      = [2j23+2] sqrt([j12-j1+j2][j1-j2+j12+1]) {j1+1/2, j2-1/2; j23+1/2}."""
    j1, j2, j12, j3, j, s = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    lhs = ctx.zero
    sig_up = _sigma_u(ctx, j1, j2, j3, j, s + 1)
    if sig_up != 0:
        lhs = lhs + ctx.sqrt(sig_up) * W(j1, j2, j12, j3, j, s + 1)
    sig_rf = _sigma_u_reflected(ctx, j1, j2, j3, j, s)
    if sig_rf != 0:
        lhs = lhs + ctx.sqrt(sig_rf) * W(j1, j2, j12, j3, j, s)
    coeff, zero = _sqrt_qnum_product(ctx, [j12 - j1 + j2, j1 - j2 + j12 + 1])
    rhs = ctx.zero
    if not zero:
        rhs = (q_number(ctx, 2 * s + 2) * coeff
               * W(j1 + HALF, j2 - HALF, j12, j3, j, s + HALF))
    return lhs - rhs


def shift_residual_u2(ctx: QContext, W, sj: SixJ) -> Scalar:
    """Companion half-shift relation (the u-family raising identity):
    sqrt(sigma(-j23-1)) {shift; j23+1/2} + sqrt(sigma(j23)) {shift; j23-1/2}
      = [2j23+1] sqrt([j12-j1+j2][j12+j1-j2+1]) {j23}."""
    j1, j2, j12, j3, j, s = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    lhs = ctx.zero
    sig_rf = _sigma_u_reflected(ctx, j1, j2, j3, j, s)
    if sig_rf != 0:
        lhs = lhs + ctx.sqrt(sig_rf) * W(j1 + HALF, j2 - HALF, j12, j3, j, s + HALF)
    sig = _sigma_u(ctx, j1, j2, j3, j, s)
    if sig != 0:
        lhs = lhs + ctx.sqrt(sig) * W(j1 + HALF, j2 - HALF, j12, j3, j, s - HALF)
    coeff, zero = _sqrt_qnum_product(ctx, [j12 - j1 + j2, j12 + j1 - j2 + 1])
    rhs = ctx.zero
    if not zero:
        rhs = q_number(ctx, 2 * s + 1) * coeff * W(j1, j2, j12, j3, j, s)
    return lhs - rhs


def diff_recurrence_u1(ctx: QContext, W, sj: SixJ) -> Scalar:
    """[2j12+2] A- {j23-1} + [2j23] A~+ {j12+1}
       + (sigma(j23)[2j12+2] + [j1-j2+j12+1][2j23] tau_n(j23)) {j23} = 0."""
    j1, j2, j12, j3, j, s = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    am, am_zero = A_minus(ctx, j1, j2, j3, j, s)
    atp, atp_zero = A_tilde_plus(ctx, j1, j2, j3, j, j12)
    res = ctx.zero
    if not am_zero:
        res = res + q_number(ctx, 2 * j12 + 2) * am * W(j1, j2, j12, j3, j, s - 1)
    if not atp_zero:
        res = res + q_number(ctx, 2 * s) * atp * W(j1, j2, j12 + 1, j3, j, s)
    coeff = (_sigma_u(ctx, j1, j2, j3, j, s) * q_number(ctx, 2 * j12 + 2)
             + q_number(ctx, j1 - j2 + j12 + 1) * q_number(ctx, 2 * s)
             * _tau_n_u(ctx, sj))
    return res + coeff * W(j1, j2, j12, j3, j, s)


def diff_recurrence_u2(ctx: QContext, W, sj: SixJ) -> Scalar:
    """[2j12+2] A+ {j23+1} - [2j23+2] A~+ {j12+1}
       + ([2j12+2] sigma(-j23-1) - [2j23+2][j1-j2+j12+1]
          (tau_n + [j12-j1+j2][2j12+2][2j23+1])) {j23} = 0."""
    j1, j2, j12, j3, j, s = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    ap, ap_zero = A_plus(ctx, j1, j2, j3, j, s)
    atp, atp_zero = A_tilde_plus(ctx, j1, j2, j3, j, j12)
    res = ctx.zero
    if not ap_zero:
        res = res + q_number(ctx, 2 * j12 + 2) * ap * W(j1, j2, j12, j3, j, s + 1)
    if not atp_zero:
        res = res - q_number(ctx, 2 * s + 2) * atp * W(j1, j2, j12 + 1, j3, j, s)
    coeff = (q_number(ctx, 2 * j12 + 2) * _sigma_u_reflected(ctx, j1, j2, j3, j, s)
             - q_number(ctx, 2 * s + 2) * q_number(ctx, j1 - j2 + j12 + 1)
             * (_tau_n_u(ctx, sj) + q_number(ctx, j12 - j1 + j2)
                * q_number(ctx, 2 * j12 + 2) * q_number(ctx, 2 * s + 1)))
    return res + coeff * W(j1, j2, j12, j3, j, s)


def shift_residual_t1(ctx: QContext, W, sj: SixJ) -> Scalar:
    """Second-family lowering shift:
    sqrt(sigma~(j23+1)) {j23+1} - sqrt(sigma~(-j23-1)) {j23}
      = -[2j23+2] sqrt([j1+j2-j12][j1+j2+j12+1]) {j1-1/2, j2-1/2; j23+1/2}."""
    j1, j2, j12, j3, j, s = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    lhs = ctx.zero
    sig_up = _sigma_t(ctx, j1, j2, j3, j, s + 1)
    if sig_up != 0:
        lhs = lhs + ctx.sqrt(sig_up) * W(j1, j2, j12, j3, j, s + 1)
    sig_rf = _sigma_t_reflected(ctx, j1, j2, j3, j, s)
    if sig_rf != 0:
        lhs = lhs - ctx.sqrt(sig_rf) * W(j1, j2, j12, j3, j, s)
    coeff, zero = _sqrt_qnum_product(ctx, [j1 + j2 - j12, j1 + j2 + j12 + 1])
    rhs = ctx.zero
    if not zero:
        rhs = -(q_number(ctx, 2 * s + 2) * coeff
                * W(j1 - HALF, j2 - HALF, j12, j3, j, s + HALF))
    return lhs - rhs


def shift_residual_t2(ctx: QContext, W, sj: SixJ) -> Scalar:
    """Second-family raising shift:
    sqrt(sigma~(-j23-1)) {shift; j23+1/2} - sqrt(sigma~(j23)) {shift; j23-1/2}
      = [2j23+1] sqrt([j1+j2-j12][j1+j2+j12+1]) {j23}."""
    j1, j2, j12, j3, j, s = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    lhs = ctx.zero
    sig_rf = _sigma_t_reflected(ctx, j1, j2, j3, j, s)
    if sig_rf != 0:
        lhs = lhs + ctx.sqrt(sig_rf) * W(j1 - HALF, j2 - HALF, j12, j3, j, s + HALF)
    sig = _sigma_t(ctx, j1, j2, j3, j, s)
    if sig != 0:
        lhs = lhs - ctx.sqrt(sig) * W(j1 - HALF, j2 - HALF, j12, j3, j, s - HALF)
    coeff, zero = _sqrt_qnum_product(ctx, [j1 + j2 - j12, j1 + j2 + j12 + 1])
    rhs = ctx.zero
    if not zero:
        rhs = q_number(ctx, 2 * s + 1) * coeff * W(j1, j2, j12, j3, j, s)
    return lhs - rhs


def diff_recurrence_t1(ctx: QContext, W, sj: SixJ) -> Scalar:
    """[2j12] A- {j23-1} - [2j23] A~- {j12-1}
       - (sigma~(j23)[2j12] + [j1+j2+j12+1][2j23] tau~_n(j23)) {j23} = 0."""
    j1, j2, j12, j3, j, s = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    am, am_zero = A_minus(ctx, j1, j2, j3, j, s)
    atm, atm_zero = A_tilde_minus(ctx, j1, j2, j3, j, j12)
    res = ctx.zero
    if not am_zero:
        res = res + q_number(ctx, 2 * j12) * am * W(j1, j2, j12, j3, j, s - 1)
    if not atm_zero:
        res = res - q_number(ctx, 2 * s) * atm * W(j1, j2, j12 - 1, j3, j, s)
    coeff = (_sigma_t(ctx, j1, j2, j3, j, s) * q_number(ctx, 2 * j12)
             + q_number(ctx, j1 + j2 + j12 + 1) * q_number(ctx, 2 * s)
             * _tau_n_t(ctx, sj))
    return res - coeff * W(j1, j2, j12, j3, j, s)


def diff_recurrence_t2(ctx: QContext, W, sj: SixJ) -> Scalar:
    """[2j12] A+ {j23+1} + [2j23+2] A~- {j12-1}
       - ([2j12] sigma~(-j23-1) - [2j23+2][j1+j2+j12+1]
          (tau~_n + [j1+j2-j12][2j12][2j23+1])) {j23} = 0."""
    j1, j2, j12, j3, j, s = sj.j1, sj.j2, sj.j12, sj.j3, sj.j, sj.j23
    ap, ap_zero = A_plus(ctx, j1, j2, j3, j, s)
    atm, atm_zero = A_tilde_minus(ctx, j1, j2, j3, j, j12)
    res = ctx.zero
    if not ap_zero:
        res = res + q_number(ctx, 2 * j12) * ap * W(j1, j2, j12, j3, j, s + 1)
    if not atm_zero:
        res = res + q_number(ctx, 2 * s + 2) * atm * W(j1, j2, j12 - 1, j3, j, s)
    coeff = (q_number(ctx, 2 * j12) * _sigma_t_reflected(ctx, j1, j2, j3, j, s)
             - q_number(ctx, 2 * s + 2) * q_number(ctx, j1 + j2 + j12 + 1)
             * (_tau_n_t(ctx, sj) + q_number(ctx, j1 + j2 - j12)
                * q_number(ctx, 2 * j12) * q_number(ctx, 2 * s + 1)))
    return res - coeff * W(j1, j2, j12, j3, j, s)


RECURRENCES = {
    "ttrr-j23": recurrence_j23_residual,
    "ttrr-j12": recurrence_j12_residual,
    "shift-u-forward": shift_residual_u1,
    "shift-u-backward": shift_residual_u2,
    "diff-u-backward": diff_recurrence_u1,
    "diff-u-forward": diff_recurrence_u2,
    "shift-t-forward": shift_residual_t1,
    "shift-t-backward": shift_residual_t2,
    "diff-t-backward": diff_recurrence_t1,
    "diff-t-forward": diff_recurrence_t2,
}


def recurrence_residuals(ctx: QContext, sj: SixJ, W=None,
                         names=None) -> dict[str, Scalar]:
    """Residuals of every implemented 6j recurrence at one symbol."""
    sj.validate()
    if W is None:
        W = SixJTable(ctx, "u")
    out = {}
    for name in (names or RECURRENCES):
        out[name] = RECURRENCES[name](ctx, W, sj)
    return out


# -- unitarity --------------------------------------------------------------------

def unitarity_row_residual(ctx: QContext, j1, j2, j3, j, j12a, j12b, W=None) -> Scalar:
    """sum_j23 U(j12a, j23) U(j12b, j23) - delta."""
    if W is None:
        W = SixJTable(ctx, "u")
    weight = ctx.sqrt(q_number(ctx, 2 * j12a + 1) * q_number(ctx, 2 * j12b + 1))
    total = ctx.zero
    for j23 in j23_values(j1, j2, j3, j):
        total = total + (q_number(ctx, 2 * j23 + 1)
                         * W(j1, j2, j12a, j3, j, j23) * W(j1, j2, j12b, j3, j, j23))
    total = total * weight
    if j12a == j12b:
        total = total - ctx.one
    return total


def unitarity_col_residual(ctx: QContext, j1, j2, j3, j, j23a, j23b, W=None) -> Scalar:
    """sum_j12 U(j12, j23a) U(j12, j23b) - delta."""
    if W is None:
        W = SixJTable(ctx, "u")
    weight = ctx.sqrt(q_number(ctx, 2 * j23a + 1) * q_number(ctx, 2 * j23b + 1))
    total = ctx.zero
    for j12 in j12_values(j1, j2, j3, j):
        total = total + (q_number(ctx, 2 * j12 + 1)
                         * W(j1, j2, j12, j3, j, j23a) * W(j1, j2, j12, j3, j, j23b))
    total = total * weight
    if j23a == j23b:
        total = total - ctx.one
    return total


# -- boundary closed forms ---------------------------------------------------------

def value_j23_min(ctx: QContext, sj: SixJ) -> Scalar:
    """Closed form at j23 = j3 - j2."""
    j1, j2, j12, j3, j = sj.j1, sj.j2, sj.j12, sj.j3, sj.j
    if sj.j23 != j3 - j2:
        raise ValueError("closed form only at j23 = j3 - j2")
    inner = _fac_ratio(
        ctx,
        [j12 + j3 - j, 2 * j2, j12 + j3 + j + 1, 2 * j3 - 2 * j2, j2 - j1 + j12,
         j1 + j2 - j3 + j, j1 - j2 + j12, j3 - j12 + j],
        [j1 - j2 + j3 - j, j1 + j2 - j12, j1 - j2 + j3 + j + 1,
         2 * j3 + 1, j3 - j1 - j2 + j, j12 - j3 + j, j1 + j2 + j12 + 1])
    val = ctx.sqrt(inner)
    return -val if _parity(j12 + j3 + j) else val


def value_j23_max(ctx: QContext, sj: SixJ) -> Scalar:
    """Closed form at j23 = j2 + j3."""
    j1, j2, j12, j3, j = sj.j1, sj.j2, sj.j12, sj.j3, sj.j
    if sj.j23 != j2 + j3:
        raise ValueError("closed form only at j23 = j2 + j3")
    inner = _fac_ratio(
        ctx,
        [2 * j2, j12 - j3 + j, j2 - j1 + j3 + j, 2 * j3, j1 + j2 + j3 - j,
         j2 - j1 + j12, j1 - j2 + j12, j1 + j2 + j3 + j + 1],
        [j1 + j2 - j12, j1 - j2 - j3 + j, j3 - j12 + j,
         2 * j2 + 2 * j3 + 1, j12 + j3 - j, j1 + j2 + j12 + 1, j12 + j3 + j + 1])
    val = ctx.sqrt(inner)
    return -val if _parity(j1 + j2 + j3 + j) else val


def value_j12_min(ctx: QContext, sj: SixJ) -> Scalar:
    """Closed form at j12 = j1 - j2 (degree zero of the u route)."""
    j1, j2, j3, j, s = sj.j1, sj.j2, sj.j3, sj.j, sj.j23
    if sj.j12 != j1 - j2:
        raise ValueError("closed form only at j12 = j1 - j2")
    inner = _fac_ratio(
        ctx,
        [j1 + j + s + 1, j1 + j - s, j1 - j + s, j3 - j2 + s,
         2 * j1 - 2 * j2, 2 * j2, j2 + j3 + j - j1],
        [j - j1 + s, j3 + j2 - s, j2 - j3 + s, j2 + j3 + s + 1,
         2 * j1 + 1, j1 + j3 - j2 - j, j1 - j3 - j2 + j, j1 + j3 - j2 + j + 1])
    val = ctx.sqrt(inner)
    return -val if _parity(j + j1 + s) else val


def value_j12_max(ctx: QContext, sj: SixJ) -> Scalar:
    """Closed form at j12 = j1 + j2 (degree zero of the second route)."""
    j1, j2, j3, j, s = sj.j1, sj.j2, sj.j3, sj.j, sj.j23
    if sj.j12 != j1 + j2:
        raise ValueError("closed form only at j12 = j1 + j2")
    inner = _fac_ratio(
        ctx,
        [2 * j1, 2 * j2, j1 + j2 + j3 + j + 1, j1 + j2 + j3 - j, j1 + j2 - j3 + j,
         s - j1 + j, s - j2 + j3],
        [2 * j1 + 2 * j2 + 1, -j1 - j2 + j3 + j, j2 + j3 + s + 1,
         j1 + j - s, j1 - j + s, j1 + j + s + 1, j2 + j3 - s, j2 - j3 + s])
    val = ctx.sqrt(inner)
    return -val if _parity(j1 + j2 + j3 + j) else val
