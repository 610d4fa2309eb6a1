"""Distribution of (discriminant, Hasse invariant) of a Haar-random quadratic form,
and the isotropy probabilities derived from it."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..canonical import isotropic_by_invariants, qp_class
from ..padic import ALL_CLASSES, ONE, R, SquareClass, check_odd_prime, eps, hilbert
from .classes import event_prob_capped
from .groups import alpha_ns, beta_t, pi_n
from .intervals import Interval, beta_inf, pi_inf

PAIRS = tuple((a, b) for a in ALL_CLASSES for b in (1, -1))


def _ep(p: int, k: int) -> Fraction:
    """(eps/p)^k, the ratio eps/p raised to k."""
    return Fraction(eps(p), p) ** k


def _pow_pm(x: int, e: int) -> int:
    """x^e for x in {+1,-1}; negative exponents allowed."""
    return x if e % 2 else 1


def sigma_n(a: SquareClass, n: int, p: int) -> Fraction:
    """P(d(Q) = a) for an n-ary Haar form."""
    check_odd_prime(p)
    if n < 0:
        raise ValueError("n must be >= 0")
    q = Fraction(1, p)
    if n % 2:
        return 1 / (2 * (1 + q)) if not a.odd else q / (2 * (1 + q))
    if a.odd:
        return (1 - q ** n) * q / (2 * (1 + q) * (1 - q ** (n + 1)))
    s = a.sign
    e = _ep(p, n // 2)
    return (1 + s * e) * (1 - s * q * q * e) / (2 * (1 + q) * (1 - q ** (n + 1)))


def delta_n(a: SquareClass, n: int, p: int) -> Fraction:
    """P(d = a, c = +1) - P(d = a, c = -1)."""
    check_odd_prime(p)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Fraction(int(a == ONE))
    if not a.odd:
        return pi_n(n, p) / (beta_t(n + 1, p) * alpha_ns(n, a.sign, p))
    if n % 2 == 0:
        return Fraction(0)
    return eps(p) * _ep(p, (n + 1) // 2) * pi_n(n, p) / (2 * beta_t(n + 1, p) * beta_t(n - 1, p))


def rho_n(a: SquareClass, b: int, n: int, p: int) -> Fraction:
    """P(d(Q) = a, c(Q) = b)."""
    if b not in (1, -1):
        raise ValueError("Hasse invariant must be +1 or -1")
    if n == 0:
        return Fraction(int(a == ONE and b == 1))
    return (sigma_n(a, n, p) + b * delta_n(a, n, p)) / 2


def rho_table(n: int, p: int) -> dict:
    return {(a, b): rho_n(a, b, n, p) for a, b in PAIRS}


def rho_recurrence_residual(n: int, p: int) -> Fraction:
    """Largest |LHS - RHS| when the closed forms are substituted into the m_0-recurrence."""
    if n < 1:
        raise ValueError("n must be >= 1")
    check_odd_prime(p)
    e = eps(p)
    P = SquareClass(1, 1)
    worst = Fraction(0)
    for a, b in PAIRS:
        pa = hilbert(P, a, p)
        rhs = Fraction(1, p ** (n * (n + 1) // 2)) * rho_n(
            a.times_p(n), b * _pow_pm(e, n * (n - 1) // 2) * _pow_pm(pa, n - 1), n, p)
        for l in range(n):
            w = Fraction(1, p ** (l * (l + 1) // 2)) * pi_n(n, p) / pi_n(l, p)
            twist = _pow_pm(e, l * (l - 1) // 2)
            rhs += w / alpha_ns(n - l, 1, p) * rho_n(
                a.times_p(l), b * twist * _pow_pm(pa, l - 1), l, p)
            ar = a * R
            rhs += w / alpha_ns(n - l, -1, p) * rho_n(
                ar.times_p(l),
                b * twist * _pow_pm(hilbert(a, R, p), l) * _pow_pm(hilbert(P, ar, p), l - 1), l, p)
        worst = max(worst, abs(rho_n(a, b, n, p) - rhs))
    return worst


def t_operator(a: SquareClass, b: int, delta: SquareClass, l: int, p: int) -> tuple[SquareClass, int]:
    """Invariants of U + pQ' where U is unimodular with discriminant ``delta`` (Hasse +1)
    and Q' is an l-ary form with invariants (a, b)."""
    e = eps(p)
    P = SquareClass(1, 1)
    new_b = b * _pow_pm(e, l * (l - 1) // 2) * _pow_pm(hilbert(P, a, p), l - 1)
    new_b *= hilbert(delta, a.times_p(l), p)
    return delta * a.times_p(l), new_b


def rho_via_blocks(n: int, p: int) -> dict:
    """rho_n recomputed from rho_0..rho_{n-1} by conditioning on (m_0, s_0).

    The m_0 = 0 term only rescales, so it is moved to the left-hand side after
    pairing (a, b) with its own rescaled image.
    """
    check_odd_prime(p)
    if n < 1:
        raise ValueError("block recursion needs n >= 1")
    lower = {l: rho_table(l, p) for l in range(n)}
    partial = {pair: Fraction(0) for pair in PAIRS}
    for l in range(n):
        w = Fraction(1, p ** (l * (l + 1) // 2)) * pi_n(n, p) / pi_n(l, p)
        for s, delta in ((1, ONE), (-1, R)):
            ws = w / alpha_ns(n - l, s, p)
            for (a, b), prob in lower[l].items():
                if prob:
                    partial[t_operator(a, b, delta, l, p)] += ws * prob
    # rho = c * rho o T_n + partial, with T_n the rescaling bijection
    c = Fraction(1, p ** (n * (n + 1) // 2))
    out = {}
    for pair in PAIRS:
        img = t_operator(pair[0], pair[1], ONE, n, p)
        img2 = t_operator(img[0], img[1], ONE, n, p)
        # T_n is an involution up to a fixed point check; solve the 2x2 system
        if img2 != pair:
            raise AssertionError("rescaling by p twice should be the identity on invariants")
        out[pair] = (partial[pair] + c * partial[img]) / (1 - c * c) if img != pair \
            else partial[pair] / (1 - c)
    return out


def rho_capped(a: SquareClass, b: int, n: int, p: int, cap: int) -> Interval:
    """rho_n(a, b) bracketed by summing class probabilities with all k_i <= cap."""
    def pred(cls):
        q = qp_class(cls, p)
        return q.disc == a and q.hasse == b
    return event_prob_capped(pred, n, p, cap)


@lru_cache(maxsize=None)
def rho_limit(a: SquareClass, b: int, p: int) -> Interval:
    q = Fraction(1, p)
    if a.odd:
        return Interval.point(q / (4 * (1 + q)))
    return (1 / (4 * (1 + q)) + b * pi_inf(p) / (4 * beta_inf(p) * beta_inf(p))).rounded()


# -- isotropy ---------------------------------------------------------------

def isotropy_prob_closed(n: int, p: int) -> Fraction:
    check_odd_prime(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    q = Fraction(1, p)
    if n == 1:
        return Fraction(0)
    if n == 2:
        return Fraction(1, 2)
    if n == 3:
        return 1 - q / (2 * (1 + q) ** 2)
    if n == 4:
        return 1 - (1 - q) * q ** 3 / (4 * (1 + q) ** 2 * (1 - q ** 5))
    return Fraction(1)


def isotropy_prob_from_rho(n: int, p: int) -> Fraction:
    """Sum of rho_n(a, b) over the isotropic (d, c) pairs."""
    return sum((rho_n(a, b, n, p) for a, b in PAIRS if isotropic_by_invariants(n, a, b, p)),
               Fraction(0))


def xi_coeffs(n: int, p: int) -> tuple[Fraction, Fraction, Fraction]:
    """(xi_0, xi_1, xi_2): P(rest), P(m_0 = 2, s_0 = -eps), P(m_0 = 1)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    check_odd_prime(p)
    q = Fraction(1, p)
    xi1 = q ** ((n - 2) * (n - 1) // 2) * (1 - q ** (n - 1)) * (1 - q ** n) / (2 * (1 + q))
    xi2 = q ** ((n - 1) * n // 2) * (1 - q ** n)
    xi0 = 1 - q ** (n * (n + 1) // 2) - xi1 - xi2
    return xi0, xi1, xi2


def m0_prob(n: int, m0: int, s: int, p: int) -> Fraction:
    """P(m_0 = m0, s_0 = s) for an n-ary Haar form (m0 >= 1)."""
    l = n - m0
    return Fraction(1, p ** (l * (l + 1) // 2)) * pi_n(n, p) / (pi_n(l, p) * alpha_ns(m0, s, p))


def isotropy_prob_recursive(n: int, p: int) -> Fraction:
    """Isotropy probability by conditioning on the unimodular part, as in the
    finite-field recursion: only m_0 = 1, or m_0 = 2 with s_0 = -eps, can be
    anisotropic mod p; everything else lifts a smooth zero."""
    check_odd_prime(p)
    if n < 2:
        return Fraction(0)
    e = eps(p)

    def good(l, delta):
        return sum((prob for (a, b), prob in rho_table(l, p).items()
                    if isotropic_by_invariants(n, *t_operator(a, b, delta, l, p), p)), Fraction(0))

    xi0, xi1, xi2 = xi_coeffs(n, p)
    total = xi0
    for s, delta in ((1, ONE), (-1, R)):
        total += m0_prob(n, 1, s, p) * good(n - 1, delta)
    total += xi1 * good(n - 2, R if e == 1 else ONE)
    return total / (1 - Fraction(1, p ** (n * (n + 1) // 2)))


def isotropy_prob(n: int, p: int) -> Fraction:
    """P(an n-ary Haar form over Z_p is isotropic); closed form checked against
    the (d, c) distribution."""
    closed = isotropy_prob_closed(n, p)
    if n >= 2 and closed != isotropy_prob_from_rho(n, p):
        raise AssertionError("closed form and rho-composed isotropy probabilities disagree")
    return closed
