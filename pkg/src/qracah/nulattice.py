"""Generic second-order difference machinery on the quadratic q-lattice.

A problem is specified by the four roots s_1..s_4 of
    sigma(s) = A prod_i [s - s_i]_q  =  C q^(-2s) prod_i (q^s - q^(s_i)),
a leading constant A, a normalization sequence B_n and a lattice
    x(s) = c_1 (q^s + q^(-s-mu)) + c_3,   x(s) = x(-s-mu).

From those the module derives everything the difference equation
    A_s y(s+1) + B_s y(s) + C_s y(s-1) + lambda_n y(s) = 0
needs: tau_n, lambda_n, the Pearson weight ratios, the explicit
(Rodrigues-expanded) sum, recurrence coefficients, norms and the four
differentiation identities -- independent of any concrete family.  Weight
functions enter only through ratios with integer offsets, so the generic
route never needs a normalization choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DegenerateLatticePoint, PoleInRatio
from .qarith import kappa, q_number, q_factorial
from .scalar import QContext, Rat, Scalar, _frac


class Lattice:
    """x(s) = c1 (q^s + q^(-s-mu)) + c3 with memoized per-context values."""

    def __init__(self, mu: Rat, c1_fn: Callable[[QContext], Scalar],
                 c3_fn: Callable[[QContext], Scalar],
                 x_fn: Callable[[QContext, Fraction], Scalar] | None = None,
                 xn_zero_fn: Callable[[int], Fraction] | None = None):
        self.mu = _frac(mu)
        self._c1_fn = c1_fn
        self._c3_fn = c3_fn
        self._x_fn = x_fn
        self._xn_zero_fn = xn_zero_fn
        self._cache: dict[tuple, Scalar] = {}

    def c1(self, ctx: QContext) -> Scalar:
        key = ("c1",) + ctx.key
        if key not in self._cache:
            self._cache[key] = self._c1_fn(ctx)
        return self._cache[key]

    def c3(self, ctx: QContext) -> Scalar:
        key = ("c3",) + ctx.key
        if key not in self._cache:
            self._cache[key] = self._c3_fn(ctx)
        return self._cache[key]

    def x(self, ctx: QContext, s: Rat) -> Scalar:
        s = _frac(s)
        key = ("x", s) + ctx.key
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self._x_fn is not None:
            val = self._x_fn(ctx, s)
        else:
            val = self.x_from_constants(ctx, s)
        self._cache[key] = val
        return val

    def x_from_constants(self, ctx: QContext, s: Rat) -> Scalar:
        s = _frac(s)
        return self.c1(ctx) * (ctx.qpow(s) + ctx.qpow(-s - self.mu)) + self.c3(ctx)

    def xn(self, ctx: QContext, n: int, s: Rat) -> Scalar:
        """x_n(s) = x(s + n/2)."""
        return self.x(ctx, _frac(s) + Fraction(n, 2))

    def xn_zero(self, n: int) -> Fraction:
        if self._xn_zero_fn is None:
            raise NotImplementedError("lattice has no rational x_n zero rule")
        return self._xn_zero_fn(n)

    # difference helpers; all are exact lattice differences
    def dx(self, ctx: QContext, s: Rat) -> Scalar:
        """Delta x(s) = x(s+1) - x(s)."""
        s = _frac(s)
        return self.x(ctx, s + 1) - self.x(ctx, s)

    def nabla_x(self, ctx: QContext, s: Rat) -> Scalar:
        """nabla x(s) = x(s) - x(s-1)."""
        s = _frac(s)
        return self.x(ctx, s) - self.x(ctx, s - 1)

    def dx_mid(self, ctx: QContext, s: Rat) -> Scalar:
        """Delta x(s - 1/2) = x(s+1/2) - x(s-1/2)."""
        s = _frac(s)
        return self.x(ctx, s + Fraction(1, 2)) - self.x(ctx, s - Fraction(1, 2))


def racah_lattice() -> Lattice:
    """The lattice x(s) = [s]_q [s+1]_q: c1 = q^(1/2)/kappa^2, mu = 1,
    c3 = -(q^(1/2)+q^(-1/2))/kappa^2; x_n(s) vanishes at s = -n/2."""
    def c1(ctx):
        return ctx.qpow(Fraction(1, 2)) / kappa(ctx) ** 2

    def c3(ctx):
        return -(ctx.qpow(Fraction(1, 2)) + ctx.qpow(Fraction(-1, 2))) / kappa(ctx) ** 2

    def x(ctx, s):
        return q_number(ctx, s) * q_number(ctx, s + 1)

    return Lattice(1, c1, c3, x_fn=x, xn_zero_fn=lambda n: Fraction(-n, 2))


_RACAH_LATTICE = racah_lattice()


def shared_racah_lattice() -> Lattice:
    return _RACAH_LATTICE


@dataclass(frozen=True)
class NUProblem:
    """sigma roots, leading constant A, normalization rule B_n, lattice."""
    roots: tuple[Fraction, Fraction, Fraction, Fraction]
    leading: Fraction
    b_rule: Callable[[QContext, int], Scalar]
    lattice: Lattice = dfield(default_factory=shared_racah_lattice)

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(_frac(r) for r in self.roots))
        object.__setattr__(self, "leading", _frac(self.leading))
        if self.leading == 0:
            raise ValueError("leading constant A must be nonzero")

    def B(self, ctx: QContext, n: int) -> Scalar:
        return self.b_rule(ctx, n)

    @property
    def root_sum(self) -> Fraction:
        return sum(self.roots, Fraction(0))


def sigma(ctx: QContext, p: NUProblem, s: Rat) -> Scalar:
    """sigma(s) = A prod_i [s - s_i]_q."""
    s = _frac(s)
    out = ctx.rational(p.leading)
    for r in p.roots:
        out = out * q_number(ctx, s - r)
    return out


def sigma_qpower_form(ctx: QContext, p: NUProblem, s: Rat) -> Scalar:
    """The equivalent factorization C q^(-2s) prod_i (q^s - q^(s_i)),
    with C = A q^(-sum(s_i)/2) kappa^(-4)."""
    s = _frac(s)
    C = ctx.rational(p.leading) * ctx.qpow(-p.root_sum / 2) / kappa(ctx) ** 4
    out = C * ctx.qpow(-2 * s)
    for r in p.roots:
        out = out * (ctx.qpow(s) - ctx.qpow(r))
    return out


def sigma_reflected(ctx: QContext, p: NUProblem, s: Rat) -> Scalar:
    """sigma(-s-mu) = sigma(s) + tau(s) Delta x(s-1/2)."""
    s = _frac(s)
    return sigma(ctx, p, -s - p.lattice.mu)


def lambda_over_qnum_n(ctx: QContext, p: NUProblem, n: int) -> Scalar:
    """lambda_n / [n]_q, well defined for every n (including 0)."""
    lat = p.lattice
    c1 = lat.c1(ctx)
    pref = -ctx.rational(p.leading) * ctx.qpow(lat.mu) / (c1 * c1 * kappa(ctx) ** 4)
    return pref * q_number(ctx, p.root_sum + 2 * lat.mu + n - 1)


def lambda_n(ctx: QContext, p: NUProblem, n: int) -> Scalar:
    """Eigenvalue from equating largest powers of q^s in the difference equation."""
    return q_number(ctx, n) * lambda_over_qnum_n(ctx, p, n)


def tau_n(ctx: QContext, p: NUProblem, n: int, s: Rat) -> Scalar:
    """tau_n(s) = (sigma(-s-n-mu) - sigma(s)) / Delta x_n(s - 1/2)."""
    s = _frac(s)
    lat = p.lattice
    den = lat.x(ctx, s + Fraction(n + 1, 2)) - lat.x(ctx, s + Fraction(n - 1, 2))
    if ctx.is_zero(den):
        raise DegenerateLatticePoint(f"Delta x_{n}({s}-1/2) = 0")
    return (sigma(ctx, p, -s - n - lat.mu) - sigma(ctx, p, s)) / den


def tau(ctx: QContext, p: NUProblem, s: Rat) -> Scalar:
    return tau_n(ctx, p, 0, s)


def tau_n_prime(ctx: QContext, p: NUProblem, n: int) -> Scalar:
    """Leading coefficient of tau_n: -lambda_(2n+1) / [2n+1]_q."""
    return -lambda_over_qnum_n(ctx, p, 2 * n + 1)


def tau_n_zero(ctx: QContext, p: NUProblem, n: int) -> Scalar:
    """tau_n(0), evaluated at the zero s* of x_n."""
    lat = p.lattice
    s_star = lat.xn_zero(n)
    den = lat.x(ctx, s_star + Fraction(n + 1, 2)) - lat.x(ctx, s_star + Fraction(n - 1, 2))
    return (sigma(ctx, p, -s_star - n - lat.mu) - sigma(ctx, p, s_star)) / den


# -- difference equation ------------------------------------------------------

def sode_coefficients(ctx: QContext, p: NUProblem, s: Rat):
    """(A_s, B_s, C_s) with B_s = -(A_s + C_s)."""
    s = _frac(s)
    lat = p.lattice
    dxs = lat.dx(ctx, s)
    nxs = lat.nabla_x(ctx, s)
    dmid = lat.dx_mid(ctx, s)
    if ctx.is_zero(dxs) or ctx.is_zero(nxs) or ctx.is_zero(dmid):
        raise DegenerateLatticePoint(f"lattice difference vanishes at s={s}")
    A_s = sigma_reflected(ctx, p, s) / (dxs * dmid)
    C_s = sigma(ctx, p, s) / (nxs * dmid)
    return A_s, -(A_s + C_s), C_s


def sode_residual(ctx: QContext, p: NUProblem, n: int, s: Rat,
                  y_prev: Scalar, y_here: Scalar, y_next: Scalar) -> Scalar:
    """A_s y(s+1) + B_s y(s) + C_s y(s-1) + lambda_n y(s); zero on solutions."""
    A_s, B_s, C_s = sode_coefficients(ctx, p, s)
    return A_s * y_next + B_s * y_here + C_s * y_prev + lambda_n(ctx, p, n) * y_here


# -- Pearson weight ratios ----------------------------------------------------

def rho_ratio(ctx: QContext, p: NUProblem, s_to: Rat, s_from: Rat) -> Scalar:
    """rho(s_to)/rho(s_from) by iterating rho(s+1)/rho(s) = sigma(-s-mu)/sigma(s+1).

    Only integer offsets are meaningful; the weight is defined along the grid.
    """
    s_to, s_from = _frac(s_to), _frac(s_from)
    steps = s_to - s_from
    if steps.denominator != 1:
        raise PoleInRatio(f"weight ratio needs integer offset, got {steps}")
    out = ctx.one
    k = int(steps)
    s = s_from
    for _ in range(k):
        den = sigma(ctx, p, s + 1)
        if ctx.is_zero(den):
            raise PoleInRatio(f"sigma({s + 1}) = 0 in Pearson recurrence")
        out = out * sigma_reflected(ctx, p, s) / den
        s += 1
    for _ in range(-k):
        s -= 1
        num = sigma(ctx, p, s + 1)
        refl = sigma_reflected(ctx, p, s)
        if ctx.is_zero(refl):
            raise PoleInRatio(f"sigma(-({s})-mu) = 0 in Pearson recurrence")
        out = out * num / refl
    return out


def rho_n_over_rho(ctx: QContext, p: NUProblem, n: int, s_at: Rat,
                   s_base: Rat) -> Scalar:
    """rho_n(s_at)/rho(s_base) via rho_n(s) = rho(s+n) prod_{m=1..n} sigma(s+m)."""
    s_at = _frac(s_at)
    out = rho_ratio(ctx, p, s_at + n, s_base)
    for m in range(1, n + 1):
        out = out * sigma(ctx, p, s_at + m)
    return out


def pearson_residual(ctx: QContext, p: NUProblem, s: Rat,
                     rho_fn: Callable[[Fraction], Scalar]) -> Scalar:
    """rho(s+1) sigma(s+1) - rho(s) sigma(-s-mu); zero for a Pearson solution."""
    s = _frac(s)
    return rho_fn(s + 1) * sigma(ctx, p, s + 1) - rho_fn(s) * sigma_reflected(ctx, p, s)


# -- explicit (Rodrigues-expanded) representation -------------------------------

def explicit_sum_eval(ctx: QContext, p: NUProblem, n: int, s: Rat) -> Scalar:
    """P_n(s) as the m-sum expansion of the Rodrigues formula.

    Uses only B_n, lattice differences and Pearson weight ratios, so it is
    normalization-free and independent of any family closed form.
    """
    s = _frac(s)
    lat = p.lattice
    nfac = q_factorial(ctx, n)
    total = ctx.zero
    for m in range(n + 1):
        coef = nfac / (q_factorial(ctx, m) * q_factorial(ctx, n - m))
        if (n + m) % 2:
            coef = -coef
        num = lat.nabla_x(ctx, s + m - Fraction(n - 1, 2))
        den = ctx.one
        for l in range(n + 1):
            den = den * lat.nabla_x(ctx, s + Fraction(m - l + 1, 2))
        if ctx.is_zero(den):
            raise DegenerateLatticePoint(f"nabla x vanishes in explicit sum at s={s}")
        total = total + coef * num / den * rho_n_over_rho(ctx, p, n, s - n + m, s)
    return p.B(ctx, n) * total


# -- norms and recurrence coefficients -----------------------------------------

def A_nk(ctx: QContext, p: NUProblem, n: int, k: int) -> Scalar:
    """A_{n,k} = [n]_q!/[n-k]_q! prod_{m=0}^{k-1} (-lambda_{n+m}/[n+m]_q)."""
    out = q_factorial(ctx, n) / q_factorial(ctx, n - k)
    for m in range(k):
        out = out * (-lambda_over_qnum_n(ctx, p, n + m))
    return out


def leading_coefficient(ctx: QContext, p: NUProblem, n: int) -> Scalar:
    """a_n = B_n A_{n,n} / [n]_q!, the x^n(s) coefficient of P_n."""
    return p.B(ctx, n) * A_nk(ctx, p, n, n) / q_factorial(ctx, n)


def subleading_over_leading(ctx: QContext, p: NUProblem, n: int) -> Scalar:
    """b_n/a_n = [n]_q tau_{n-1}(0)/tau'_{n-1} + c3 ([n]_q - n)."""
    if n == 0:
        return ctx.zero
    c3 = p.lattice.c3(ctx)
    return (q_number(ctx, n) * tau_n_zero(ctx, p, n - 1) / tau_n_prime(ctx, p, n - 1)
            + c3 * (q_number(ctx, n) - ctx.rational(n)))


def ttrr_alpha(ctx: QContext, p: NUProblem, n: int) -> Scalar:
    """alpha_n = a_n / a_{n+1}."""
    return leading_coefficient(ctx, p, n) / leading_coefficient(ctx, p, n + 1)


def ttrr_beta_tau_route(ctx: QContext, p: NUProblem, n: int) -> Scalar:
    """beta_n from the tau data:
    [n] tau_{n-1}(0)/tau'_{n-1} - [n+1] tau_n(0)/tau'_n + c3([n]_q + 1 - [n+1]_q)."""
    c3 = p.lattice.c3(ctx)
    out = -q_number(ctx, n + 1) * tau_n_zero(ctx, p, n) / tau_n_prime(ctx, p, n)
    out = out + c3 * (q_number(ctx, n) + ctx.one - q_number(ctx, n + 1))
    if n > 0:
        out = out + q_number(ctx, n) * tau_n_zero(ctx, p, n - 1) / tau_n_prime(ctx, p, n - 1)
    return out


def ttrr_beta_value_route(ctx: QContext, p: NUProblem, n: int, a: Rat,
                          value_fn: Callable[[int], Scalar],
                          gamma_n: Scalar) -> Scalar:
    """beta_n by evaluating the recurrence at the boundary point s=a."""
    x_a = p.lattice.x(ctx, a)
    pn = value_fn(n)
    out = x_a * pn - ttrr_alpha(ctx, p, n) * value_fn(n + 1)
    if n > 0:
        out = out - gamma_n * value_fn(n - 1)
    return out / pn


def ttrr_residual(ctx: QContext, p: NUProblem, s: Rat,
                  alpha: Scalar, beta: Scalar, gamma: Scalar,
                  p_prev: Scalar, p_here: Scalar, p_next: Scalar) -> Scalar:
    """x(s) P_n - alpha_n P_{n+1} - beta_n P_n - gamma_n P_{n-1}."""
    x_s = p.lattice.x(ctx, s)
    return x_s * p_here - alpha * p_next - beta * p_here - gamma * p_prev


def norm_d2_sum(ctx: QContext, p: NUProblem, n: int, a: Rat, b: Rat,
                rho_n_fn: Callable[[Fraction], Scalar]) -> Scalar:
    """d_n^2 = (-1)^n A_{n,n} B_n^2 sum_{s=a}^{b-n-1} rho_n(s) Delta x_n(s-1/2).

    The result carries whatever normalization rho_n_fn carries.
    """
    a, b = _frac(a), _frac(b)
    lat = p.lattice
    pref = A_nk(ctx, p, n, n) * p.B(ctx, n) ** 2
    if n % 2:
        pref = -pref
    total = ctx.zero
    s = a
    while s <= b - n - 1:
        dmid = lat.x(ctx, s + Fraction(n + 1, 2)) - lat.x(ctx, s + Fraction(n - 1, 2))
        total = total + rho_n_fn(s) * dmid
        s += 1
    return pref * total


# -- differentiation-type identities (generic residual forms) -------------------

def rodrigues_forward_residual(ctx: QContext, p: NUProblem, n: int, s: Rat,
                               value_fn: Callable[[Fraction], Scalar],
                               companion_value_fn: Callable[[Fraction], Scalar],
                               companion_B: Callable[[QContext, int], Scalar]) -> Scalar:
    """Residual of  Delta P_n(s-1/2)/Delta x(s-1/2) = -lambda_n B_n/B~_{n-1} P~_{n-1}(s),

    where P~ is orthogonal w.r.t. rho_1(s-1/2) (the companion family).
    value_fn evaluates P_n at rational points, companion_value_fn evaluates
    P~_{n-1}.
    """
    s = _frac(s)
    lat = p.lattice
    h = Fraction(1, 2)
    dmid = lat.x(ctx, s + h) - lat.x(ctx, s - h)
    if ctx.is_zero(dmid):
        raise DegenerateLatticePoint(f"Delta x({s}-1/2) = 0")
    lhs = (value_fn(s + h) - value_fn(s - h)) / dmid
    const = -lambda_n(ctx, p, n) * p.B(ctx, n) / companion_B(ctx, n - 1)
    return lhs - const * companion_value_fn(s)


def lowering_residual(ctx: QContext, p: NUProblem, n: int, s: Rat,
                      value_fn: Callable[[Fraction], Scalar],
                      companion_value_fn: Callable[[Fraction], Scalar],
                      companion_B: Callable[[QContext, int], Scalar]) -> Scalar:
    """Residual of  P_n(s) = B_n/B~_{n-1} (sigma(s) nabla/nabla x_1(s) + tau(s)) P~_{n-1}(s+1/2)."""
    s = _frac(s)
    lat = p.lattice
    h = Fraction(1, 2)
    nx1 = lat.x(ctx, s + h) - lat.x(ctx, s - h)  # nabla x_1(s)
    if ctx.is_zero(nx1):
        raise DegenerateLatticePoint(f"nabla x_1({s}) = 0")
    op = (sigma(ctx, p, s) * (companion_value_fn(s + h) - companion_value_fn(s - h)) / nx1
          + tau(ctx, p, s) * companion_value_fn(s + h))
    return value_fn(s) - p.B(ctx, n) / companion_B(ctx, n - 1) * op


def backward_diff_residual(ctx: QContext, p: NUProblem, n: int, s: Rat,
                           value_fn: Callable[[int, Fraction], Scalar]) -> Scalar:
    """Residual of sigma(s) nabla P_n/nabla x = lambda_n/([n] tau_n')
    [tau_n(s) P_n - B_n/B_{n+1} P_{n+1}]  (well defined at n=0 via lambda_n/[n])."""
    s = _frac(s)
    lat = p.lattice
    nx = lat.nabla_x(ctx, s)
    if ctx.is_zero(nx):
        raise DegenerateLatticePoint(f"nabla x({s}) = 0")
    lhs = sigma(ctx, p, s) * (value_fn(n, s) - value_fn(n, s - 1)) / nx
    lam_over = lambda_over_qnum_n(ctx, p, n)
    bracket = (tau_n(ctx, p, n, s) * value_fn(n, s)
               - p.B(ctx, n) / p.B(ctx, n + 1) * value_fn(n + 1, s))
    return lhs - lam_over / tau_n_prime(ctx, p, n) * bracket


def forward_diff_residual(ctx: QContext, p: NUProblem, n: int, s: Rat,
                          value_fn: Callable[[int, Fraction], Scalar]) -> Scalar:
    """Residual of sigma(-s-mu) Delta P_n/Delta x = lambda_n/([n] tau_n')
    [(tau_n(s) - [n] tau_n' Delta x(s-1/2)) P_n - B_n/B_{n+1} P_{n+1}]."""
    s = _frac(s)
    lat = p.lattice
    dx = lat.dx(ctx, s)
    if ctx.is_zero(dx):
        raise DegenerateLatticePoint(f"Delta x({s}) = 0")
    lhs = sigma_reflected(ctx, p, s) * (value_fn(n, s + 1) - value_fn(n, s)) / dx
    lam_over = lambda_over_qnum_n(ctx, p, n)
    tnp = tau_n_prime(ctx, p, n)
    bracket = ((tau_n(ctx, p, n, s) - q_number(ctx, n) * tnp * lat.dx_mid(ctx, s)) * value_fn(n, s)
               - p.B(ctx, n) / p.B(ctx, n + 1) * value_fn(n + 1, s))
    return lhs - lam_over / tnp * bracket


# -- degree check via divided differences ---------------------------------------

def divided_difference(ctx: QContext, nodes: Sequence[Scalar],
                       values: Sequence[Scalar]) -> Scalar:
    """Leading (order len(nodes)-1) divided difference over distinct nodes."""
    vals = list(values)
    pts = list(nodes)
    for order in range(1, len(pts)):
        vals = [(vals[i + 1] - vals[i]) / (pts[i + order] - pts[i])
                for i in range(len(vals) - 1)]
    return vals[0]
