"""The two q-Racah families on x(s) = [s]_q [s+1]_q.

Family "u" has
    sigma(s) = [s-a][s+b][s+a-beta][b+alpha-s],   B_n = (-1)^n/[n]_q!,
family "utilde" ("ut") has
    sigma(s) = [s-a][s+b][s-a+beta][s+b+alpha],   B_n = 1/[n]_q!.

Both are orthogonal on s = a, a+1, ..., b-1 with weights built from
gamma-tilde ratios; every closed form here is a literal transcription of the
family data tables, evaluated through the q-Pochhammer telescoping reducer.
Four evaluation routes are provided (explicit sum, two 4F3 representations,
three-term recurrence); on the exact backend they agree as identical reduced
rational functions.

Weight normalization: the table forms of rho and d_n^2 are elements of Q(t)
only when the gamma content telescopes (always true for the 6j regime where
alpha, beta are nonnegative integers).  For generic half-integer parameters
the module exposes rho(s)/rho(a) and d_n^2/rho(a), which is enough for every
orthogonality statement; absolute forms raise GammaProductUnbalanced when not
reducible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

from .errors import DegreeOutOfRange, InadmissibleParams
from .nulattice import NUProblem, shared_racah_lattice, sigma, sigma_reflected
from .qarith import (
    gamma_tilde_product,
    kappa,
    q_factorial,
    q_number,
    q_pochhammer,
    q_pochhammer_nu,
)
from .qhyper import eval_F, eval_phi
from .scalar import QContext, Rat, Scalar, _frac

LATTICE = shared_racah_lattice()

# read-mostly memo for closed-form coefficients, keyed by (what, ctx.key, ...)
_CACHE: dict = {}


def _cached(key, compute):
    hit = _CACHE.get(key)
    if hit is None:
        hit = compute()
        _CACHE[key] = hit
    return hit


class Family(str, Enum):
    U = "u"
    UTILDE = "utilde"


class AdmissibilityWarning(UserWarning):
    pass


METHODS = ("explicit", "4f3", "4f3-sears", "ttrr")


@dataclass(frozen=True)
class RacahParams:
    a: Fraction
    b: Fraction
    alpha: Fraction
    beta: Fraction
    family: Family = Family.U

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))
        object.__setattr__(self, "alpha", _frac(self.alpha))
        object.__setattr__(self, "beta", _frac(self.beta))
        object.__setattr__(self, "family", Family(self.family))

    @property
    def N(self) -> Fraction:
        return self.b - self.a

    def grid(self) -> list[Fraction]:
        require_grid(self)
        return [self.a + k for k in range(int(self.N))]

    def box_violations(self) -> list[str]:
        v = []
        if not (-Fraction(1, 2) < self.a <= self.b - 1):
            v.append(f"-1/2 < a <= b-1 fails: a={self.a}, b={self.b}")
        if not self.alpha > -1:
            v.append(f"alpha > -1 fails: alpha={self.alpha}")
        if not (-1 < self.beta < 2 * self.a + 1):
            v.append(f"-1 < beta < 2a+1 fails: beta={self.beta}, a={self.a}")
        return v

    def warn_if_outside_box(self) -> None:
        for msg in self.box_violations():
            warnings.warn(msg, AdmissibilityWarning, stacklevel=3)


def require_grid(params: RacahParams) -> int:
    N = params.N
    if N.denominator != 1 or N < 1:
        raise InadmissibleParams(f"b - a must be a positive integer, got {N}")
    return int(N)


def require_degree(params: RacahParams, n: int) -> None:
    N = require_grid(params)
    if not 0 <= n <= N - 1:
        raise DegreeOutOfRange(f"n={n} outside 0..{N - 1}")


def problem(params: RacahParams) -> NUProblem:
    """sigma roots / leading constant / B_n for the family."""
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        roots = (a, -b, be - a, b + al)
        leading = Fraction(-1)

        def b_rule(ctx, n):
            v = ctx.one / q_factorial(ctx, n)
            return -v if n % 2 else v
    else:
        roots = (a, -b, a - be, -b - al)
        leading = Fraction(1)

        def b_rule(ctx, n):
            return ctx.one / q_factorial(ctx, n)

    return NUProblem(roots=roots, leading=leading, b_rule=b_rule, lattice=LATTICE)


def x_of(ctx: QContext, s: Rat) -> Scalar:
    return LATTICE.x(ctx, s)


# -- closed-form table data ----------------------------------------------------

def lambda_n_closed(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        return q_number(ctx, n) * q_number(ctx, al + be + n + 1)
    return q_number(ctx, n) * q_number(ctx, 2 * b - 2 * a + al + be - n - 1)


def tau_n_closed(ctx: QContext, params: RacahParams, n: int, s: Rat) -> Scalar:
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    s = _frac(s)
    h = Fraction(n, 2)
    xn = LATTICE.x(ctx, s + h)
    if params.family is Family.U:
        lead = -q_number(ctx, al + be + 2 * n + 2)
        up = (q_number(ctx, a + h + 1) * q_number(ctx, b - h - 1)
              * q_number(ctx, be + h + 1 - a) * q_number(ctx, b + al + h + 1))
        down = (q_number(ctx, a + h) * q_number(ctx, b - h)
                * q_number(ctx, be + h - a) * q_number(ctx, b + al + h))
    else:
        lead = -q_number(ctx, 2 * b - 2 * a + al + be - 2 * n - 2)
        up = (q_number(ctx, a + h + 1) * q_number(ctx, b - h - 1)
              * q_number(ctx, a + h + 1 - be) * q_number(ctx, b - h + al - 1))
        down = (q_number(ctx, a + h) * q_number(ctx, b - h)
                * q_number(ctx, a + h - be) * q_number(ctx, b - h + al))
    return lead * xn + up - down


def _denom_qnum(ctx: QContext, params: RacahParams, n: int, shift: int) -> Scalar:
    """[alpha+beta+2n+shift]_q resp. [2b-2a+alpha+beta-2n-shift]_q."""
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        return q_number(ctx, al + be + 2 * n + shift)
    return q_number(ctx, 2 * b - 2 * a + al + be - 2 * n - shift)


def ttrr_alpha_closed(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    den = _denom_qnum(ctx, params, n, 1) * _denom_qnum(ctx, params, n, 2)
    if params.family is Family.U:
        return q_number(ctx, n + 1) * q_number(ctx, al + be + n + 1) / den
    return -q_number(ctx, n + 1) * q_number(ctx, 2 * b - 2 * a + al + be - n - 1) / den


def ttrr_beta_closed(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    out = q_number(ctx, a) * q_number(ctx, a + 1)
    if params.family is Family.U:
        mid = (q_number(ctx, al + be + n + 1) * q_number(ctx, a - b + n + 1)
               * q_number(ctx, be + n + 1) * q_number(ctx, a + b + al + n + 1))
        out = out - mid / (_denom_qnum(ctx, params, n, 1) * _denom_qnum(ctx, params, n, 2))
        if n > 0:
            last = (q_number(ctx, al + n) * q_number(ctx, b - a + al + be + n)
                    * q_number(ctx, a + b - be - n) * q_number(ctx, n))
            out = out + last / (_denom_qnum(ctx, params, n, 0) * _denom_qnum(ctx, params, n, 1))
    else:
        mid = (q_number(ctx, 2 * b - 2 * a + al + be - n - 1) * q_number(ctx, a - b + n + 1)
               * q_number(ctx, 2 * a - be + n + 1) * q_number(ctx, a - b - al + n + 1))
        out = out + mid / (_denom_qnum(ctx, params, n, 1) * _denom_qnum(ctx, params, n, 2))
        if n > 0:
            last = (q_number(ctx, 2 * b + al - n) * q_number(ctx, b - a + al + be - n)
                    * q_number(ctx, b - a + be - n) * q_number(ctx, n))
            out = out + last / (_denom_qnum(ctx, params, n, 0) * _denom_qnum(ctx, params, n, 1))
    return out


def ttrr_gamma_closed(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    den = _denom_qnum(ctx, params, n, 0) * _denom_qnum(ctx, params, n, 1)
    if params.family is Family.U:
        num = (q_number(ctx, a + b + al + n) * q_number(ctx, a + b - be - n)
               * q_number(ctx, al + n) * q_number(ctx, be + n)
               * q_number(ctx, b - a + al + be + n) * q_number(ctx, b - a - n))
        return num / den
    num = (q_number(ctx, 2 * a - be + n) * q_number(ctx, b - a - n)
           * q_number(ctx, b - a - n + al) * q_number(ctx, b - a - n + be)
           * q_number(ctx, 2 * b + al - n) * q_number(ctx, b - a + al + be - n))
    return -num / den


def leading_an_closed(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    """a_n, the x(s)^n coefficient."""
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        return q_pochhammer_nu(ctx, al + be + n + 1, n) / q_factorial(ctx, n)
    val = q_pochhammer_nu(ctx, 2 * b - 2 * a + al + be - 2 * n, n) / q_factorial(ctx, n)
    return -val if n % 2 else val


# -- weights and norms (gamma argument lists) ------------------------------------

def _rho_args(params: RacahParams, s: Fraction):
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        num = [s + a + 1, s - a + be + 1, s + al + b + 1, b + al - s]
        den = [s - a + 1, s + b + 1, s + a - be + 1, b - s]
    else:
        num = [s + a + 1, s + a - be + 1]
        den = [s + al + b + 1, b + al - s, s - a + 1, s + b + 1, s - a + be + 1, b - s]
    return num, den


def _rho_n_args(params: RacahParams, n: int, s: Fraction):
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        num = [s + n + a + 1, s + n - a + be + 1, s + n + al + b + 1, b + al - s]
        den = [s - a + 1, s + b + 1, s + a - be + 1, b - s - n]
    else:
        num = [s + a + n + 1, s + a + n - be + 1]
        den = [s + al + b + 1, b + al - s - n, s - a + 1, s + b + 1, s - a + be + 1, b - s - n]
    return num, den


def _d2_args(params: RacahParams, n: int):
    """Gamma args of d_n^2 and the extra 1/[..]_q factor's argument."""
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        num = [al + n + 1, be + n + 1, b - a + al + be + n + 1, a + b + al + n + 1]
        den = [n + 1, al + be + n + 1, b - a - n, a + b - be - n]
        qden = al + be + 2 * n + 1
    else:
        num = [2 * a + n - be + 1, 2 * b - 2 * a + al + be - n]
        den = [n + 1, b - a - n, b - a - n + al, b - a + be - n,
               2 * b + al - n, b - a + al + be - n]
        qden = 2 * b - 2 * a - 2 * n - 1 + al + be
    return num, den, qden


def rho_rel(ctx: QContext, params: RacahParams, s: Rat) -> Scalar:
    """rho(s)/rho(a); always in Q(t) for s-a integer."""
    s = _frac(s)
    num_s, den_s = _rho_args(params, s)
    num_a, den_a = _rho_args(params, params.a)
    return gamma_tilde_product(ctx, num_s + den_a, den_s + num_a)


def rho_abs(ctx: QContext, params: RacahParams, s: Rat) -> Scalar:
    """Table-normalized rho(s); raises GammaProductUnbalanced if not in Q(t)."""
    num, den = _rho_args(params, _frac(s))
    return gamma_tilde_product(ctx, num, den)


def rho_n_rel(ctx: QContext, params: RacahParams, n: int, s: Rat) -> Scalar:
    """rho_n(s)/rho(a)."""
    s = _frac(s)
    num_s, den_s = _rho_n_args(params, n, s)
    num_a, den_a = _rho_args(params, params.a)
    return gamma_tilde_product(ctx, num_s + den_a, den_s + num_a)


def d2_rel(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    """d_n^2 / rho(a)."""
    require_degree(params, n)
    num_d, den_d, qden = _d2_args(params, n)
    num_a, den_a = _rho_args(params, params.a)
    return gamma_tilde_product(ctx, num_d + den_a, den_d + num_a) / q_number(ctx, qden)


def d2_abs(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    """Table-normalized d_n^2; raises GammaProductUnbalanced if not in Q(t)."""
    require_degree(params, n)
    num_d, den_d, qden = _d2_args(params, n)
    return gamma_tilde_product(ctx, num_d, den_d) / q_number(ctx, qden)


def rho_over_d2(ctx: QContext, params: RacahParams, n: int, s: Rat) -> Scalar:
    """rho(s)/d_n^2, the 6j weight ratio (reducible on the grid)."""
    require_degree(params, n)
    s = _frac(s)
    num_s, den_s = _rho_args(params, s)
    num_d, den_d, qden = _d2_args(params, n)
    return (gamma_tilde_product(ctx, num_s + den_d, den_s + num_d)
            * q_number(ctx, qden))


# -- endpoint values -------------------------------------------------------------

def value_at_a(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    """Pochhammer form of P_n(x(a))."""
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        pre = (q_pochhammer_nu(ctx, a - b + 1, n) * q_pochhammer_nu(ctx, be + 1, n)
               * q_pochhammer_nu(ctx, a + b + al + 1, n))
    else:
        pre = (q_pochhammer_nu(ctx, a - b + 1, n) * q_pochhammer_nu(ctx, 2 * a - be + 1, n)
               * q_pochhammer_nu(ctx, a - b - al + 1, n))
    return pre / q_factorial(ctx, n)


def value_at_b(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    """Pochhammer form of P_n(x(b-1))."""
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        pre = (q_pochhammer_nu(ctx, a - b + 1, n) * q_pochhammer_nu(ctx, al + 1, n)
               * q_pochhammer_nu(ctx, -a - b + be + 1, n))
    else:
        pre = (q_pochhammer_nu(ctx, a - b + 1, n) * q_pochhammer_nu(ctx, -2 * b - al + 1, n)
               * q_pochhammer_nu(ctx, a - b - be + 1, n))
    return pre / q_factorial(ctx, n)


def value_at_a_gamma(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    """Gamma-ratio form of P_n(x(a))."""
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        num = [b - a, be + n + 1, b + a + al + n + 1]
        den = [b - a - n, be + 1, b + a + al + 1]
        sign = -1 if n % 2 else 1
    else:
        num = [b - a, 2 * a - be + n + 1, b - a + al]
        den = [b - a - n, 2 * a - be + 1, b - a + al - n]
        sign = 1
    val = gamma_tilde_product(ctx, num, den) / q_factorial(ctx, n)
    return -val if sign < 0 else val


def value_at_b_gamma(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    """Gamma-ratio form of P_n(x(b-1))."""
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        num = [b - a, al + n + 1, b + a - be]
        den = [b - a - n, al + 1, b + a - be - n]
        sign = 1
    else:
        num = [b - a, 2 * b + al, b - a + be]
        den = [b - a - n, 2 * b + al - n, b - a + be - n]
        sign = -1 if n % 2 else 1
    val = gamma_tilde_product(ctx, num, den) / q_factorial(ctx, n)
    return -val if sign < 0 else val


# -- evaluation routes -----------------------------------------------------------

def _hyper_param_lists(params: RacahParams, n: int, s: Fraction, sears: bool):
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        second = al + be + n + 1
        if not sears:
            num = [-n, second, a - s, a + s + 1]
            den = [a - b + 1, be + 1, a + b + al + 1]
        else:
            num = [-n, second, -b - s, -b + s + 1]
            den = [a - b + 1, al + 1, -a - b + be + 1]
    else:
        second = 2 * a - 2 * b - al - be + n + 1
        if not sears:
            num = [-n, second, a - s, a + s + 1]
            den = [a - b + 1, 2 * a - be + 1, a - b - al + 1]
        else:
            num = [-n, second, -b - s, -b + s + 1]
            den = [a - b + 1, -2 * b - al + 1, a - b - be + 1]
    return num, den


def eval_hyper(ctx: QContext, params: RacahParams, n: int, s: Rat,
               sears: bool = False) -> Scalar:
    """4F3 route: Pochhammer prefactor times the terminating q-hypergeometric sum."""
    s = _frac(s)
    num, den = _hyper_param_lists(params, n, s, sears)
    pre = q_factorial(ctx, n)
    body = eval_F(ctx, num, den, ctx.one)
    poch = ctx.one
    for d in den:
        poch = poch * q_pochhammer_nu(ctx, d, n)
    return poch / pre * body


def eval_phi_form(ctx: QContext, params: RacahParams, n: int, s: Rat,
                  sears: bool = False) -> Scalar:
    """Basic-series route (the phi representations); used for cross-checks."""
    s = _frac(s)
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    num, den = _hyper_param_lists(params, n, s, sears)
    if params.family is Family.U:
        expo = (2 * a + al + be + n + 1) if not sears else (-2 * b + al + be + n + 1)
    else:
        expo = (4 * a - 2 * b - al - be + n + 1) if not sears else (2 * a - 4 * b - al - be + n + 1)
    pre = ctx.qpow(-Fraction(n, 2) * expo) / (kappa(ctx) ** (2 * n) * q_pochhammer(ctx, 1, n))
    for d in den:
        pre = pre * q_pochhammer(ctx, d, n)
    body = eval_phi(ctx, num, den, ctx.qpow(1))
    return pre * body


def eval_explicit(ctx: QContext, params: RacahParams, n: int, s: Rat) -> Scalar:
    """Explicit gamma-ratio sum route (the Rodrigues-expanded closed form)."""
    s = _frac(s)
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        pre_num = [s - a + 1, s + b + 1, s + a - be + 1, b - s]
        pre_den = [s + a + 1, s - a + be + 1, s + al + b + 1, b + al - s]
    else:
        pre_num = [s - a + 1, s + b + 1, s - a + be + 1, b - s, s + al + b + 1, b + al - s]
        pre_den = [s + a + 1, s + a - be + 1]
    total = ctx.zero
    for k in range(n + 1):
        if params.family is Family.U:
            num = pre_num + [s + k + a + 1, 2 * s + k - n + 1, s + k - a + be + 1,
                             s + k + al + b + 1, b + al - s + n - k]
            den = pre_den + [k + 1, n - k + 1, 2 * s + k + 2, s - n + k - a + 1,
                             s - n + k + b + 1, s - n + k + a - be + 1, b - s - k]
            sign = -1 if k % 2 else 1
        else:
            num = pre_num + [s + k + a + 1, 2 * s + k - n + 1, s + k + a - be + 1]
            den = pre_den + [k + 1, n - k + 1, 2 * s + k + 2, s - n + k - a + 1,
                             b - s - k, s + k - n + al + b + 1, b + al - s - k,
                             s - n + k + b + 1, s - n + k - a + be + 1]
            sign = -1 if (k + n) % 2 else 1
        term = gamma_tilde_product(ctx, num, den) * q_number(ctx, 2 * s + 2 * k - n + 1)
        total = total + (-term if sign < 0 else term)
    return total


def _ttrr_coeffs(ctx: QContext, params: RacahParams, k: int):
    return _cached(("ttrr", ctx.key, params, k), lambda: (
        ttrr_alpha_closed(ctx, params, k),
        ttrr_beta_closed(ctx, params, k),
        ttrr_gamma_closed(ctx, params, k) if k > 0 else None))


def ttrr_ladder(ctx: QContext, params: RacahParams, nmax: int, s: Rat) -> list:
    """[P_0(x(s)), ..., P_nmax(x(s))] by one forward recursion."""
    x = x_of(ctx, s)
    out = [ctx.one]
    p_prev, p_here = None, ctx.one
    for k in range(nmax):
        alpha_k, beta_k, gamma_k = _ttrr_coeffs(ctx, params, k)
        nxt = (x - beta_k) * p_here
        if k > 0:
            nxt = nxt - gamma_k * p_prev
        p_prev, p_here = p_here, nxt / alpha_k
        out.append(p_here)
    return out


def eval_ttrr(ctx: QContext, params: RacahParams, n: int, s: Rat) -> Scalar:
    """Forward three-term recursion with the closed TTRR coefficients."""
    return ttrr_ladder(ctx, params, n, s)[n]


def evaluate(ctx: QContext, params: RacahParams, n: int, s: Rat,
             method: str = "4f3") -> Scalar:
    """P_n(x(s)) by the chosen route; exact backend results are identical."""
    if n < 0:
        raise DegreeOutOfRange(f"n={n}")
    N = params.N
    if N.denominator == 1 and n > int(N) - 1:
        warnings.warn(f"degree n={n} beyond the orthogonality range 0..{int(N) - 1}",
                      AdmissibilityWarning, stacklevel=2)
    if method == "explicit":
        return eval_explicit(ctx, params, n, s)
    if method == "4f3":
        return eval_hyper(ctx, params, n, s, sears=False)
    if method == "4f3-sears":
        return eval_hyper(ctx, params, n, s, sears=True)
    if method == "ttrr":
        return eval_ttrr(ctx, params, n, s)
    if method == "phi":
        return eval_phi_form(ctx, params, n, s, sears=False)
    if method == "phi-sears":
        return eval_phi_form(ctx, params, n, s, sears=True)
    raise ValueError(f"unknown method {method!r}")


def eval_u(ctx: QContext, params: RacahParams, n: int, s: Rat,
           method: str = "4f3") -> Scalar:
    if params.family is not Family.U:
        params = replace(params, family=Family.U)
    return evaluate(ctx, params, n, s, method)


def eval_u_tilde(ctx: QContext, params: RacahParams, n: int, s: Rat,
                 method: str = "4f3") -> Scalar:
    if params.family is not Family.UTILDE:
        params = replace(params, family=Family.UTILDE)
    return evaluate(ctx, params, n, s, method)


# -- symmetry, duality, connection ------------------------------------------------

def symmetry_map(params: RacahParams) -> RacahParams:
    """(alpha, beta) -> (-b-a+beta, b+a+alpha); an involution."""
    return replace(params,
                   alpha=-params.b - params.a + params.beta,
                   beta=params.b + params.a + params.alpha)


def symmetry_residual(ctx: QContext, params: RacahParams, n: int, s: Rat,
                      method: str = "4f3") -> Scalar:
    other = symmetry_map(params)
    return (evaluate(ctx, params, n, s, method)
            - evaluate(ctx, other, n, s, method))


def dual_params(params: RacahParams) -> RacahParams:
    """a' = (alpha+beta)/2, b' = b-a+(alpha+beta)/2, alpha' = 2a-beta, beta' = beta."""
    half = (params.alpha + params.beta) / 2
    return replace(params,
                   a=half, b=params.b - params.a + half,
                   alpha=2 * params.a - params.beta, beta=params.beta)


def dual_change(params: RacahParams, n: int, s: Rat) -> tuple[Fraction, Fraction]:
    """(k, t): the dual degree/variable pair for the family."""
    s = _frac(s)
    half = (params.alpha + params.beta) / 2
    if params.family is Family.U:
        return s - params.a, n + half
    return params.b - s - 1, params.b - params.a - n + half - 1


def dual_transfer(ctx: QContext, params: RacahParams, n: int, s: Rat) -> Scalar:
    """The coefficient relating the dual polynomial at (k, t) to P_n(x(s))."""
    s = _frac(s)
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        num = [b - a - n, s - a + be + 1, b + al + s + 1, n + 1]
        den = [b - s, n + be + 1, b + a + al + n + 1, s - a + 1]
        parity = s - a + n
    else:
        num = [b - a - n, 2 * b + al - n, b - a + be - n, n + 1]
        den = [b - s, s - a + be + 1, s + b + al + 1, s - a + 1]
        parity = b - s - 1 - n
    if parity.denominator != 1:
        raise InadmissibleParams("dual transfer needs s on the grid")
    val = gamma_tilde_product(ctx, num, den)
    return -val if int(parity) % 2 else val


def dual_pair(params: RacahParams):
    """(dual parameter set, transfer coefficient function (ctx, n, s) -> Scalar)."""
    params.warn_if_outside_box()
    dp = dual_params(params)

    def transfer(ctx, n, s):
        return dual_transfer(ctx, params, n, s)

    return dp, transfer


def dual_relation_residual(ctx: QContext, params: RacahParams, n: int, s: Rat,
                           method: str = "4f3") -> Scalar:
    """Dual polynomial at (k, t) minus transfer * P_n(x(s)); identically zero."""
    k, t = dual_change(params, n, _frac(s))
    if k.denominator != 1 or k < 0:
        raise InadmissibleParams(f"dual degree k={k} must be a nonnegative integer")
    dp = dual_params(params)
    lhs = evaluate(ctx, dp, int(k), t, method)
    return lhs - dual_transfer(ctx, params, n, s) * evaluate(ctx, params, n, s, method)


def connection_factor(ctx: QContext, params: RacahParams, n: int, s: Rat) -> Scalar:
    """Coefficient C with  utilde_{b-a-1-n}(x(s)) = C * u_n(x(s))."""
    s = _frac(s)
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    num = [s - a + be + 1, b + al - s, b + al + 1 + s, a + b - be - n]
    den = [s + a - be + 1, al + 1 + n, be + 1 + n, a + b + al + 1 + n]
    parity = s - a - n
    if parity.denominator != 1:
        raise InadmissibleParams("connection formula needs s on the grid")
    val = gamma_tilde_product(ctx, num, den)
    return -val if int(parity) % 2 else val


def connection_residual(ctx: QContext, params: RacahParams, n: int, s: Rat,
                        method: str = "4f3") -> Scalar:
    N = require_grid(params)
    require_degree(replace(params, family=Family.U), n)
    lhs = eval_u_tilde(ctx, params, N - 1 - n, s, method)
    rhs = connection_factor(ctx, params, n, s) * eval_u(ctx, params, n, s, method)
    return lhs - rhs


# -- family differentiation formulas ----------------------------------------------

def companion_params(params: RacahParams) -> RacahParams:
    """Family orthogonal w.r.t. rho_1(s-1/2): shift (a,b) by 1/2 and, for the
    u family, (alpha, beta) by 1."""
    h = Fraction(1, 2)
    if params.family is Family.U:
        return replace(params, a=params.a + h, b=params.b - h,
                       alpha=params.alpha + 1, beta=params.beta + 1)
    return replace(params, a=params.a + h, b=params.b - h)


def _raise_const(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    """The factor multiplying the companion polynomial in the forward-difference
    lowering identity: [alpha+beta+n+1] (u) / -[2b-2a+alpha+beta-n-1] (utilde)."""
    a, b, al, be = params.a, params.b, params.alpha, params.beta
    if params.family is Family.U:
        return q_number(ctx, al + be + n + 1)
    return -q_number(ctx, 2 * b - 2 * a + al + be - n - 1)


def lowering_residual_1(ctx: QContext, params: RacahParams, n: int, s: Rat,
                        method: str = "4f3") -> Scalar:
    """Delta P_n(x(s))/Delta x(s) = const * P~_{n-1}(x(s+1/2)) on the shifted grid."""
    s = _frac(s)
    dx = LATTICE.dx(ctx, s)
    lhs = (evaluate(ctx, params, n, s + 1, method) - evaluate(ctx, params, n, s, method)) / dx
    comp = companion_params(params)
    rhs = _raise_const(ctx, params, n) * evaluate(ctx, comp, n - 1, s + Fraction(1, 2), method)
    return lhs - rhs


def lowering_residual_2(ctx: QContext, params: RacahParams, n: int, s: Rat,
                        method: str = "4f3") -> Scalar:
    """-+[n][2s+1] P_n(x(s)) = sigma(-s-1) P~_{n-1}(x(s+1/2)) - sigma(s) P~_{n-1}(x(s-1/2))."""
    s = _frac(s)
    p = problem(params)
    comp = companion_params(params)
    h = Fraction(1, 2)
    rhs = (sigma_reflected(ctx, p, s) * evaluate(ctx, comp, n - 1, s + h, method)
           - sigma(ctx, p, s) * evaluate(ctx, comp, n - 1, s - h, method))
    lhs = q_number(ctx, n) * q_number(ctx, 2 * s + 1) * evaluate(ctx, params, n, s, method)
    if params.family is Family.U:
        lhs = -lhs
    return lhs - rhs


def diff_residual_backward(ctx: QContext, params: RacahParams, n: int, s: Rat,
                           method: str = "4f3") -> Scalar:
    """sigma(s) nabla P_n/[2s] + kappa_n (tau_n P_n +- [n+1] P_{n+1}); needs [2s] != 0."""
    s = _frac(s)
    p = problem(params)
    den = q_number(ctx, 2 * s)
    if ctx.is_zero(den):
        raise ZeroDivisionError("[2s]_q = 0; excluded point")
    lhs = sigma(ctx, p, s) * (evaluate(ctx, params, n, s, method)
                              - evaluate(ctx, params, n, s - 1, method)) / den
    ratio = _raise_const(ctx, params, n) / _denom_qnum(ctx, params, n, 2)
    sign = 1 if params.family is Family.U else -1
    bracket = tau_n_closed(ctx, params, n, s) * evaluate(ctx, params, n, s, method)
    bracket = bracket + ctx.integer(sign) * q_number(ctx, n + 1) * evaluate(ctx, params, n + 1, s, method)
    if params.family is Family.UTILDE:
        ratio = -ratio
    return lhs + ratio * bracket


def diff_residual_forward(ctx: QContext, params: RacahParams, n: int, s: Rat,
                          method: str = "4f3") -> Scalar:
    """sigma(-s-1) Delta P_n/[2s+2] + kappa_n ((tau_n + [n] D [2s+1]) P_n +- [n+1] P_{n+1})."""
    s = _frac(s)
    p = problem(params)
    den = q_number(ctx, 2 * s + 2)
    if ctx.is_zero(den):
        raise ZeroDivisionError("[2s+2]_q = 0; excluded point")
    lhs = sigma_reflected(ctx, p, s) * (evaluate(ctx, params, n, s + 1, method)
                                        - evaluate(ctx, params, n, s, method)) / den
    big_d = _denom_qnum(ctx, params, n, 2)
    ratio = _raise_const(ctx, params, n) / big_d
    sign = 1 if params.family is Family.U else -1
    bracket = (tau_n_closed(ctx, params, n, s)
               + q_number(ctx, n) * big_d * q_number(ctx, 2 * s + 1)) \
        * evaluate(ctx, params, n, s, method)
    bracket = bracket + ctx.integer(sign) * q_number(ctx, n + 1) * evaluate(ctx, params, n + 1, s, method)
    if params.family is Family.UTILDE:
        ratio = -ratio
    return lhs + ratio * bracket


# -- orthogonality ---------------------------------------------------------------

def weight_rel_cached(ctx: QContext, params: RacahParams, s: Rat) -> Scalar:
    return _cached(("rho", ctx.key, params, _frac(s)),
                   lambda: rho_rel(ctx, params, s))


def d2_rel_cached(ctx: QContext, params: RacahParams, n: int) -> Scalar:
    return _cached(("d2", ctx.key, params, n), lambda: d2_rel(ctx, params, n))


def orthogonality_residual(ctx: QContext, params: RacahParams, n: int, m: int) -> Scalar:
    """sum_s P_n P_m rho(s) Delta x(s-1/2) - delta_{nm} d_n^2, in units of rho(a)."""
    require_degree(params, n)
    require_degree(params, m)
    total = ctx.zero
    top = max(n, m)
    for s in params.grid():
        ladder = ttrr_ladder(ctx, params, top, s)
        w = weight_rel_cached(ctx, params, s) * q_number(ctx, 2 * s + 1)
        total = total + ladder[n] * ladder[m] * w
    if n == m:
        total = total - d2_rel_cached(ctx, params, n)
    return total


def dual_orthogonality_residual(ctx: QContext, params: RacahParams,
                                s: Rat, s2: Rat) -> Scalar:
    """sum_n P_n(x(s)) P_n(x(s')) rho(a)/d_n^2 - delta_{ss'} rho(a)/(rho(s) Delta x(s-1/2))."""
    N = require_grid(params)
    s, s2 = _frac(s), _frac(s2)
    total = ctx.zero
    lad1 = ttrr_ladder(ctx, params, N - 1, s)
    lad2 = lad1 if s == s2 else ttrr_ladder(ctx, params, N - 1, s2)
    for n in range(N):
        total = total + lad1[n] * lad2[n] / d2_rel_cached(ctx, params, n)
    if s == s2:
        total = total - ctx.one / (weight_rel_cached(ctx, params, s) * q_number(ctx, 2 * s + 1))
    return total
