"""Verification suites: every identity in the package as a machine check.

Exact suites (sode, orthogonality, duality, diff-formulas, connection,
identities) run on the exact backend and demand residuals that are the zero
rational function.  The 6j suites run on the float backend at a given q and
precision and compare against a tolerance.

Each suite returns a JSON-able report:
    {"suite": ..., "passed": bool, "checks": [
        {"name": ..., "params": ..., "max_residual": str, "passed": bool}, ...]}
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction

from . import nulattice as nu
from . import racah as rc
from . import sixj as sx
from .errors import UnknownSuite
from .qarith import (
    gamma_tilde_ratio,
    kappa,
    q_factorial,
    q_number,
    q_pochhammer,
    q_pochhammer_nu,
)
from .qhyper import eval_F, eval_phi, vwp_6phi5_closed, vwp_6phi5_series
from .racah import AdmissibilityWarning, Family, RacahParams
from .scalar import exact_context, exact_eval_at_unity, float_context, format_scalar

F = Fraction

# Admissible half-integer tuples (a, b, alpha, beta), 3 <= b-a <= 6, with
# alpha+beta integral so the dual lattice points stay on (1/2)Z.
DEFAULT_TUPLES: tuple[tuple[Fraction, Fraction, Fraction, Fraction], ...] = (
    (F(1, 2), F(9, 2), F(1), F(0)),
    (F(1, 2), F(7, 2), F(2), F(1)),
    (F(1), F(5), F(1, 2), F(3, 2)),
    (F(0), F(3), F(2), F(0)),
    (F(3, 2), F(13, 2), F(1), F(2)),
    (F(1, 2), F(11, 2), F(3), F(0)),
    (F(2), F(6), F(5, 2), F(3, 2)),
    (F(1), F(7), F(0), F(0)),
)

SIXJ_OUTER = (
    (F(3, 2), F(1, 2), F(3, 2), F(3, 2)),
    (F(2), F(1), F(2), F(1)),
    (F(5, 2), F(1, 2), F(2), F(2)),
    (F(2), F(2), F(2), F(2)),
    (F(7, 2), F(3, 2), F(3), F(2)),
)


def _params_list(quick: bool = False):
    tuples = DEFAULT_TUPLES[:3] if quick else DEFAULT_TUPLES
    return [RacahParams(a, b, al, be, fam)
            for (a, b, al, be) in tuples
            for fam in (Family.U, Family.UTILDE)]


def _label(params: RacahParams) -> str:
    return (f"{params.family.value}(a={params.a}, b={params.b}, "
            f"alpha={params.alpha}, beta={params.beta})")


class _Report:
    def __init__(self, suite: str):
        self.suite = suite
        self.checks = []

    def exact(self, name: str, params: str, residuals) -> None:
        bad = [r for r in residuals if r != 0]
        self.checks.append({
            "name": name, "params": params,
            "max_residual": "0" if not bad else format_scalar(exact_context(), bad[0]),
            "passed": not bad,
        })

    def numeric(self, name: str, params: str, ctx, residuals, tol) -> None:
        worst = max((abs(r) for r in residuals), default=ctx.zero)
        self.checks.append({
            "name": name, "params": params,
            "max_residual": ctx.mp.nstr(worst, 6),
            "passed": bool(worst < tol),
        })

    def result(self) -> dict:
        return {"suite": self.suite,
                "passed": all(c["passed"] for c in self.checks),
                "checks": self.checks}


def _degrees(params: RacahParams, cap: int = 4):
    return range(min(cap, int(params.N) - 1) + 1)


def suite_sode(quick: bool = False, **_) -> dict:
    """Difference-equation residuals, exact, both families."""
    ctx = exact_context()
    rep = _Report("sode")
    for params in _params_list(quick):
        p = rc.problem(params)
        res = []
        for n in _degrees(params):
            vals = {s: rc.evaluate(ctx, params, n, s, "ttrr")
                    for s in [params.a + k for k in range(-1, int(params.N) + 1)]}
            for s in params.grid():
                if s == 0:
                    continue  # nabla x(0) = [0]_q: degenerate lattice point
                res.append(nu.sode_residual(ctx, p, n, s,
                                            vals[s - 1], vals[s], vals[s + 1]))
        rep.exact("sode-residual", _label(params), res)
    return rep.result()


def suite_orthogonality(quick: bool = False, **_) -> dict:
    ctx = exact_context()
    rep = _Report("orthogonality")
    for params in _params_list(quick):
        res = [rc.orthogonality_residual(ctx, params, n, m)
               for n in _degrees(params) for m in _degrees(params) if m >= n]
        rep.exact("orthogonality", _label(params), res)
    return rep.result()


def suite_duality(quick: bool = False, **_) -> dict:
    ctx = exact_context()
    rep = _Report("duality")
    for params in _params_list(quick):
        res = [rc.dual_relation_residual(ctx, params, n, s)
               for n in _degrees(params) for s in params.grid()]
        rep.exact("dual-relation", _label(params), res)
        res = [rc.dual_orthogonality_residual(ctx, params, s, s2)
               for s in params.grid() for s2 in params.grid()]
        rep.exact("dual-orthogonality", _label(params), res)
    # TTRR <-> SODE exchange for the first family of each tuple
    for params in _params_list(quick):
        if params.family is not Family.U:
            continue
        p = rc.problem(params)
        dp = rc.dual_params(params)
        dprob = rc.problem(dp)
        a_half = (params.alpha + params.beta) / 2
        res = []
        for n in _degrees(params):
            for s in params.grid():
                k, t = rc.dual_change(params, n, s)
                k = int(k)
                xt = p.lattice.x(ctx, t)
                # u-SODE becomes the dual TTRR with coefficients read off sigma
                alpha_k = (q_number(ctx, s - params.a + 1) * q_number(ctx, s + params.a + 1)
                           / (q_number(ctx, 2 * s + 1) * q_number(ctx, 2 * s + 2)))
                beta_k = (q_number(ctx, a_half) * q_number(ctx, a_half + 1)
                          + nu.sigma_reflected(ctx, p, s)
                          / (q_number(ctx, 2 * s + 1) * q_number(ctx, 2 * s + 2)))
                if s != params.a:
                    beta_k = beta_k + nu.sigma(ctx, p, s) / (
                        q_number(ctx, 2 * s + 1) * q_number(ctx, 2 * s))
                r = (xt - beta_k) * rc.evaluate(ctx, dp, k, t, "ttrr") \
                    - alpha_k * rc.evaluate(ctx, dp, k + 1, t, "ttrr")
                if k >= 1:
                    a_, b_ = params.a, params.b
                    al_, be_ = params.alpha, params.beta
                    gamma_k = (q_number(ctx, b_ + al_ + s) * q_number(ctx, b_ + al_ - s)
                               * q_number(ctx, s + a_ - be_) * q_number(ctx, s - a_ + be_)
                               * q_number(ctx, b_ + s) * q_number(ctx, b_ - s)
                               / (q_number(ctx, 2 * s + 1) * q_number(ctx, 2 * s)))
                    r = r - gamma_k * rc.evaluate(ctx, dp, k - 1, t, "ttrr")
                res.append(r)
                # u-TTRR becomes the dual SODE
                if 0 < t - dp.a and t + 1 <= dp.b - 1:
                    r2 = nu.sode_residual(
                        ctx, dprob, k, t,
                        rc.evaluate(ctx, dp, k, t - 1, "ttrr"),
                        rc.evaluate(ctx, dp, k, t, "ttrr"),
                        rc.evaluate(ctx, dp, k, t + 1, "ttrr"))
                    res.append(r2)
        rep.exact("ttrr-sode-exchange", _label(params), res)
    return rep.result()


def suite_diff_formulas(quick: bool = False, **_) -> dict:
    ctx = exact_context()
    rep = _Report("diff-formulas")
    for params in _params_list(quick):
        res1, res2, res3, res4 = [], [], [], []
        for n in _degrees(params, 3):
            for s in params.grid():
                if n >= 1:
                    if s < params.b - 1:
                        res1.append(rc.lowering_residual_1(ctx, params, n, s))
                    res2.append(rc.lowering_residual_2(ctx, params, n, s))
                if n <= int(params.N) - 2:
                    if s != 0:
                        res3.append(rc.diff_residual_backward(ctx, params, n, s))
                    res4.append(rc.diff_residual_forward(ctx, params, n, s))
        rep.exact("lowering-forward", _label(params), res1)
        rep.exact("lowering-central", _label(params), res2)
        rep.exact("diff-backward", _label(params), res3)
        rep.exact("diff-forward", _label(params), res4)
    return rep.result()


def suite_connection(quick: bool = False, **_) -> dict:
    ctx = exact_context()
    rep = _Report("connection")
    for (a, b, al, be) in (DEFAULT_TUPLES[:3] if quick else DEFAULT_TUPLES):
        params = RacahParams(a, b, al, be, Family.U)
        res = [rc.connection_residual(ctx, params, n, s)
               for n in _degrees(params) for s in params.grid()]
        rep.exact("connection", _label(params), res)
        res = [_closing_identity_residual(ctx, a, b, al, be, n, a + m)
               for n in range(min(4, int(b - a)))
               for m in range(int(b - a))]
        rep.exact("terminating-4phi3-switch", _label(params), res)
    return rep.result()


def _closing_identity_residual(ctx, a, b, al, be, n, s):
    """The terminating 4phi3 switch identity induced by the connection formula,
    with A = q^alpha, B = q^beta, D = q^(2s+1), N = b-a, k = s-a."""
    N = b - a
    k = s - a
    lhs = eval_phi(ctx,
                   [n - N + 1, -n - N - al - be, -k, s + a + 1],
                   [1 - N, 2 * a - be + 1, 1 - N - al],
                   ctx.qpow(1))
    pref = (ctx.qpow(-k * N - k * al - k * be)
            * q_pochhammer(ctx, be + 1, int(k))
            * q_pochhammer(ctx, a + b + al + 1, int(k))
            / (q_pochhammer(ctx, 2 * a - be + 1, int(k))
               * q_pochhammer(ctx, 1 - N - al, int(k))))
    rhs = pref * eval_phi(ctx,
                          [-n, al + be + n + 1, -k, s + a + 1],
                          [1 - N, be + 1, a + b + al + 1],
                          ctx.qpow(1))
    return lhs - rhs


def suite_identities(quick: bool = False, **_) -> dict:
    """Leaf identities: Pochhammer conversions, gamma reflection, the
    F<->phi correspondence, Sears pairs and the 6phi5 summation."""
    ctx = exact_context()
    rep = _Report("identities")

    res = []
    for a in (F(0), F(1), F(5, 2), F(-3, 2)):
        for k in range(5):
            lhs = q_pochhammer_nu(ctx, a, k)
            rhs = (q_pochhammer(ctx, a, k) * kappa(ctx) ** (-k)
                   * ctx.qpow(-F(k * (k - 1), 4) - F(k) * a / 2))
            res.append(lhs - (-rhs if k % 2 else rhs))
    rep.exact("pochhammer-conversion", "grid a, k<=4", res)

    res = []
    for A in (F(5), F(7, 2), F(2)):
        for s in range(4):
            if A - s < 1 and (A - s).denominator == 1:
                continue  # gamma pole on both sides; identity holds as 1/0 = 1/0
            lhs = gamma_tilde_ratio(ctx, A, -s)
            rhs = ctx.one / q_pochhammer_nu(ctx, 1 - A, s)
            res.append(lhs - (-rhs if s % 2 else rhs))
    rep.exact("gamma-reflection", "A grid, s<=3", res)

    res = []
    for n in range(1, 4):
        num = [F(-n), F(3, 2), F(1), F(2)]
        den = [F(1, 2), F(3), F(5, 2)]
        z = F(1)
        t0 = z + F(sum(num) - sum(den) - 1, 2)
        lhs = eval_F(ctx, num, den, ctx.qpow(t0))
        rhs = eval_phi(ctx, num, den, ctx.qpow(z))
        res.append(lhs - rhs)
    rep.exact("F-phi-correspondence", "4F3/4phi3 at t0", res)

    res = []
    for (a, b, al, be) in ((F(1, 2), F(7, 2), F(1), F(0)), (F(1), F(4), F(2), F(1))):
        params = RacahParams(a, b, al, be, Family.U)
        paramst = RacahParams(a, b, al, be, Family.UTILDE)
        for n in range(3):
            for s in (a, a + 1):
                res.append(rc.eval_hyper(ctx, params, n, s)
                           - rc.eval_hyper(ctx, params, n, s, sears=True))
                res.append(rc.eval_hyper(ctx, paramst, n, s)
                           - rc.eval_hyper(ctx, paramst, n, s, sears=True))
    rep.exact("sears-pairs", "both families", res)

    res = []
    grid = [(F(3), F(1), F(2)), (F(8), F(2), F(7)), (F(5, 2), F(1), F(1)),
            (F(4), F(2), F(3)), (F(3, 2), F(1, 2), F(1)), (F(2), F(1, 2), F(3, 2)),
            (F(5), F(2), F(2)), (F(7, 2), F(3), F(1)), (F(3), F(3, 2), F(5, 2)),
            (F(6), F(1), F(4))]
    kmax = 3 if quick else 5
    for (a, b, c) in grid:
        for k in range(kmax + 1):
            res.append(vwp_6phi5_closed(ctx, a, b, c, k)
                       - vwp_6phi5_series(ctx, a, b, c, k))
    rep.exact("6phi5-summation", f"10 instances, k<={kmax}", res)
    # the norm-closing instance: k = b-a-n-1 tied to (a,b,alpha,beta,n)
    a0, b0, al0, be0, n0 = F(1, 2), F(9, 2), F(1), F(0), 1
    k0 = int(b0 - a0 - n0 - 1)
    args = (2 * a0 + n0 + 1, n0 + be0 + 1, n0 + a0 + al0 + b0 + 1)
    rep.exact("6phi5-norm-instance", f"k={k0}",
              [vwp_6phi5_closed(ctx, *args, k0) - vwp_6phi5_series(ctx, *args, k0)])

    res = []
    for n in range(13):
        val = exact_eval_at_unity(q_factorial(ctx, n))
        res.append(ctx.rational(F(math.factorial(n))) - ctx.rational(val))
    rep.exact("q-factorial-limit", "n<=12", res)
    return rep.result()


def _sixj_float_ctx(q, precision_bits):
    return float_context(q, precision_bits)


def suite_sixj_recurrences(q=F(7, 10), precision_bits=128,
                           tolerance=F(1, 10) ** 25, quick: bool = False, **_) -> dict:
    ctx = _sixj_float_ctx(q, precision_bits)
    tol = ctx.mp.mpf(tolerance.numerator) / ctx.mp.mpf(tolerance.denominator)
    rep = _Report("sixj-recurrences")
    W = sx.SixJTable(ctx, "u")
    outers = SIXJ_OUTER[:2] if quick else SIXJ_OUTER
    for outer in outers:
        j1, j2, j3, j = outer
        res = {name: [] for name in sx.RECURRENCES}
        for j12 in sx.j12_values(j1, j2, j3, j):
            for j23 in sx.j23_values(j1, j2, j3, j):
                sj = sx.SixJ(j1, j2, j12, j3, j, j23)
                for name, fn in sx.RECURRENCES.items():
                    if name in ("shift-u-forward", "shift-t-forward") and j23 > j2 + j3 - 1:
                        continue
                    if name == "shift-u-backward" and j12 < j1 - j2 + 1:
                        continue
                    if name == "shift-t-backward" and j12 > j1 + j2 - 1:
                        continue
                    res[name].append(fn(ctx, W, sj))
        label = f"(j1,j2,j3,j)=({j1},{j2},{j3},{j})"
        for name, values in res.items():
            rep.numeric(name, label, ctx, values, tol)
    return rep.result()


def suite_sixj_unitarity(q=F(7, 10), precision_bits=128,
                         tolerance=F(1, 10) ** 25, quick: bool = False, **_) -> dict:
    ctx = _sixj_float_ctx(q, precision_bits)
    tol = ctx.mp.mpf(tolerance.numerator) / ctx.mp.mpf(tolerance.denominator)
    rep = _Report("sixj-unitarity")
    W = sx.SixJTable(ctx, "u")
    outers = SIXJ_OUTER[:2] if quick else SIXJ_OUTER
    for outer in outers:
        j1, j2, j3, j = outer
        label = f"(j1,j2,j3,j)=({j1},{j2},{j3},{j})"
        rows = [sx.unitarity_row_residual(ctx, j1, j2, j3, j, ja, jb, W)
                for ja in sx.j12_values(j1, j2, j3, j)
                for jb in sx.j12_values(j1, j2, j3, j)]
        cols = [sx.unitarity_col_residual(ctx, j1, j2, j3, j, ja, jb, W)
                for ja in sx.j23_values(j1, j2, j3, j)
                for jb in sx.j23_values(j1, j2, j3, j)]
        rep.numeric("unitarity-rows", label, ctx, rows, tol)
        rep.numeric("unitarity-cols", label, ctx, cols, tol)
        syms = [sx.symmetry_residual(ctx, sx.SixJ(j1, j2, j12, j3, j, j23))
                for j12 in sx.j12_values(j1, j2, j3, j)
                for j23 in sx.j23_values(j1, j2, j3, j)]
        rep.numeric("symmetry", label, ctx, syms, tol)
    return rep.result()


SUITES = {
    "sode": suite_sode,
    "orthogonality": suite_orthogonality,
    "duality": suite_duality,
    "diff-formulas": suite_diff_formulas,
    "connection": suite_connection,
    "sixj-recurrences": suite_sixj_recurrences,
    "sixj-unitarity": suite_sixj_unitarity,
    "identities": suite_identities,
}


def run_suite(name: str, **kwargs) -> dict:
    try:
        fn = SUITES[name]
    except KeyError:
        raise UnknownSuite(f"unknown suite {name!r}; pick from {sorted(SUITES)}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdmissibilityWarning)
        return fn(**kwargs)
