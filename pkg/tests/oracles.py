"""Independent brute-force oracles used by the tests.

Everything here is deliberately primitive: plain Fraction arithmetic, ordinary
factorials, naive summation.  The classical (q -> 1) oracles replace every
symmetric q-number [x]_q by x itself.
"""

from __future__ import annotations

import math
from fractions import Fraction

F = Fraction


def classical_ttrr_coefficients(a, b, alpha, beta, n, family="u"):
    """(alpha_n, beta_n, gamma_n) of the classical-limit recurrence."""
    a, b, alpha, beta = F(a), F(b), F(alpha), F(beta)
    if family == "u":
        al_n = F((n + 1) * (alpha + beta + n + 1),
                 (alpha + beta + 2 * n + 1) * (alpha + beta + 2 * n + 2))
        be_n = a * (a + 1) - ((alpha + beta + n + 1) * (a - b + n + 1)
                              * (beta + n + 1) * (a + b + alpha + n + 1)) \
            / ((alpha + beta + 2 * n + 1) * (alpha + beta + 2 * n + 2))
        if n > 0:
            be_n += ((alpha + n) * (b - a + alpha + beta + n)
                     * (a + b - beta - n) * n) \
                / ((alpha + beta + 2 * n) * (alpha + beta + 2 * n + 1))
        ga_n = ((a + b + alpha + n) * (a + b - beta - n) * (alpha + n)
                * (beta + n) * (b - a + alpha + beta + n) * (b - a - n)) \
            / ((alpha + beta + 2 * n) * (alpha + beta + 2 * n + 1)) if n > 0 else None
    else:
        big = 2 * b - 2 * a + alpha + beta
        al_n = -F((n + 1) * (big - n - 1), (big - 2 * n - 1) * (big - 2 * n - 2))
        be_n = a * (a + 1) + ((big - n - 1) * (a - b + n + 1)
                              * (2 * a - beta + n + 1) * (a - b - alpha + n + 1)) \
            / ((big - 2 * n - 1) * (big - 2 * n - 2))
        if n > 0:
            be_n += ((2 * b + alpha - n) * (b - a + alpha + beta - n)
                     * (b - a + beta - n) * n) / ((big - 2 * n - 1) * (big - 2 * n))
        ga_n = -((2 * a - beta + n) * (b - a - n) * (b - a - n + alpha)
                 * (b - a - n + beta) * (2 * b + alpha - n)
                 * (b - a + alpha + beta - n)) \
            / ((big - 2 * n - 1) * (big - 2 * n)) if n > 0 else None
    return al_n, be_n, ga_n


def classical_racah_value(a, b, alpha, beta, n, s, family="u") -> Fraction:
    """Classical-limit polynomial value by naive forward recursion."""
    a, b, s = F(a), F(b), F(s)
    x = s * (s + 1)
    p_prev, p_here = None, F(1)
    for k in range(n):
        al_k, be_k, ga_k = classical_ttrr_coefficients(a, b, alpha, beta, k, family)
        nxt = (x - be_k) * p_here
        if k > 0:
            nxt -= ga_k * p_prev
        p_prev, p_here = p_here, nxt / al_k
    return p_here


def _fact(x: Fraction) -> int:
    x = F(x)
    if x.denominator != 1 or x < 0:
        raise ValueError(f"factorial of {x}")
    return math.factorial(int(x))


def classical_sixj(j1, j2, j12, j3, j, j23) -> float:
    """Classical 6j-symbol via the same single-sum formula as the q-case,
    with every q-factorial replaced by an ordinary factorial."""
    j1, j2, j12, j3, j, j23 = map(F, (j1, j2, j12, j3, j, j23))
    n = int(j12 - j1 + j2)
    pref = F(
        _fact(j23 + j2 - j3) * _fact(j23 + j2 + j3 + 1) * _fact(j23 + j - j1)
        * _fact(j2 + j3 - j23) * _fact(j12 - j1 + j2) * _fact(j1 - j2 + j12)
        * _fact(j1 + j2 - j12) * _fact(j3 + j - j12),
        _fact(j23 + j3 - j2) * _fact(j23 + j1 - j) * _fact(j23 + j1 + j + 1)
        * _fact(j1 + j - j23) * _fact(j12 - j3 + j) * _fact(j12 + j3 - j)
        * _fact(j1 + j2 + j12 + 1) * _fact(j12 + j3 + j + 1))
    total = F(0)
    for k in range(n + 1):
        den_args = [F(k), j12 - j1 + j2 - k, 2 * j23 + k + 1,
                    k + j23 + j1 - j12 - j3, k + j23 + j1 - j12 + j3 + 1,
                    k + j23 + j - j2 - j12, j2 + j3 - j23 - k]
        if any(x < 0 for x in den_args):
            continue
        num_args = [k + j23 + j3 - j2, 2 * j23 + k - j12 + j1 - j2,
                    k + j23 + j1 - j, k + j23 + j1 + j + 1,
                    j12 + j2 + j - j23 - k]
        term = F(math.prod(_fact(x) for x in num_args),
                 math.prod(_fact(x) for x in den_args))
        term *= (2 * j23 + 2 * k - j12 + j1 - j2 + 1)
        total += -term if k % 2 else term
    phase = -1 if int(j1 + j23 + j) % 2 else 1
    return phase * math.sqrt(pref) * float(total)


def classical_hypergeometric_sum(num, den, z: Fraction, terms: int) -> Fraction:
    """sum_k prod (a_i)_k / prod (b_j)_k * z^k / k! with rising factorials."""
    total = F(0)
    for k in range(terms):
        t = F(z) ** k / math.factorial(k)
        for a in num:
            for m in range(k):
                t *= (F(a) + m)
        for b in den:
            dd = F(1)
            for m in range(k):
                dd *= (F(b) + m)
            t /= dd
        total += t
    return total
