"""Haar probabilities of symmetric and general elementary-divisor classes."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator

from ..canonical import SymClass
from ..errors import LengthExceedsN
from ..padic import check_odd_prime
from .groups import D_sigma, alpha_ns, beta_t, multiplicities, pi_n
from .intervals import Interval, beta_inf, pi_inf


def _finite_eldivs(eldivs) -> tuple[int, ...]:
    ks = tuple(eldivs)
    if any(not isinstance(k, int) or k < 0 for k in ks):
        raise ValueError(f"exponents must be finite non-negative ints, got {ks}")
    return tuple(sorted(ks))


def _weight(ks, n, p) -> Fraction:
    # prod_j p^{-k_j (n - j + 1)} with j 1-based over the increasing sequence
    e = sum(k * (n - j) for j, k in enumerate(ks))
    return Fraction(1, p ** e)


def _check_n(ks, n):
    if len(ks) != n:
        raise ValueError(f"need {n} exponents, got {len(ks)}")


def sym_class_prob(cls: SymClass, n: int, p: int) -> Fraction:
    check_odd_prime(p)
    ks = _finite_eldivs(cls.eldivs)
    _check_n(ks, n)
    out = pi_n(n, p) * _weight(ks, n, p)
    signs = dict(cls.signs)
    for k, m in multiplicities(ks).items():
        out /= alpha_ns(m, signs[k], p)
    return out


def sym_eldiv_prob(eldivs, n: int, p: int) -> Fraction:
    check_odd_prime(p)
    ks = _finite_eldivs(eldivs)
    _check_n(ks, n)
    out = pi_n(n, p) * _weight(ks, n, p)
    for m in multiplicities(ks).values():
        out /= beta_t(m, p)
    return out


def gen_eldiv_prob(eldivs, n: int, p: int) -> Fraction:
    ks = _finite_eldivs(eldivs)
    _check_n(ks, n)
    out = pi_n(n, p) ** 2 * Fraction(p) ** D_sigma(ks) / Fraction(p) ** (n * sum(ks))
    for m in multiplicities(ks).values():
        out /= pi_n(m, p)
    return out


def rect_eldiv_prob(eldivs, n: int, m: int, p: int) -> Fraction:
    """n x m matrices (n >= m) with m elementary divisors p^k_i."""
    if n < m:
        raise ValueError("rectangular case needs n >= m")
    ks = _finite_eldivs(eldivs)
    _check_n(ks, m)
    out = pi_n(n, p) * pi_n(m, p) / pi_n(n - m, p)
    out *= Fraction(p) ** D_sigma(ks) / Fraction(p) ** (m * sum(ks))
    for mult in multiplicities(ks).values():
        out /= pi_n(mult, p)
    return out


def rank_dist_general(n: int, m: int, r: int, q) -> Fraction:
    """P(corank r) for a uniform n x m matrix over F_q, n <= m."""
    if not 0 <= r <= n <= m:
        raise ValueError("need 0 <= r <= n <= m")
    q = Fraction(q)
    return (q ** (-r * (m - n + r)) * pi_n(n, q) * pi_n(m, q)
            / (pi_n(r, q) * pi_n(m - n + r, q) * pi_n(n - r, q)))


def rank_dist_symmetric(n: int, r: int, p) -> Fraction:
    """P(corank r) for a uniform symmetric n x n matrix over F_p."""
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    p = Fraction(p)
    return p ** (-(r * (r + 1) // 2)) * pi_n(n, p) / (pi_n(r, p) * beta_t(n - r, p))


# -- partitions -------------------------------------------------------------

def as_partition(parts) -> tuple[int, ...]:
    """Normalise to strictly positive, weakly decreasing parts (zeros dropped)."""
    ps = [int(x) for x in parts]
    if any(x < 0 for x in ps):
        raise ValueError("partition parts must be >= 0")
    return tuple(sorted((x for x in ps if x), reverse=True))


def partitions(weight: int, max_part: int | None = None, max_len: int | None = None) -> Iterator[tuple]:
    """All partitions of ``weight`` (decreasing tuples)."""
    if max_part is None:
        max_part = weight
    if weight == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(weight, max_part), 0, -1):
        for rest in partitions(weight - first, first, None if max_len is None else max_len - 1):
            yield (first,) + rest


def _d_lambda(lam, p) -> Fraction:
    out = Fraction(1)
    for part, m in multiplicities(lam).items():
        out *= beta_t(m, p)
    return out


def _lambda_weight(lam, p) -> Fraction:
    return Fraction(1, p ** sum(i * x for i, x in enumerate(lam, 1)))


def finite_partition_prob(lam, n: int, p: int) -> Fraction:
    lam = as_partition(lam)
    if len(lam) > n:
        raise LengthExceedsN(f"partition {lam} has more than {n} parts")
    return pi_n(n, p) / (beta_t(n - len(lam), p) * _d_lambda(lam, p)) * _lambda_weight(lam, p)


def limit_constant(p: int) -> Interval:
    """pi_inf / beta_inf."""
    return (pi_inf(p) / beta_inf(p)).rounded()


def limit_partition_prob(lam, p: int) -> Interval:
    lam = as_partition(lam)
    return limit_constant(p) * (_lambda_weight(lam, p) / _d_lambda(lam, p))


def partition_tail_bound(weight: int, p: int, x=None) -> Fraction:
    """Upper bound on sum_{|lambda| > weight} f(lambda).

    Write lambda_i = sum_{j>=i} c_j so that sum i*lambda_i = sum c_j j(j+1)/2 and
    |lambda| = sum c_j j.  With 1/d_lambda <= (1 - p^-2)^-len and Rankin's trick
    (multiply each term by x^(|lambda| - weight) >= 1, x > 1) the tail is at most
    x^-weight * sum_c prod_j (gamma^[j = len] y_j^c_j) where y_j = x^j p^-j(j+1)/2
    and gamma = (1 - p^-2)^-1.  Without an explicit ``x`` the best of a small
    grid of admissible values is used.
    """
    check_odd_prime(p)
    if x is None:
        best = None
        for num in range(9, 8 * p):
            try:
                b = partition_tail_bound(weight, p, Fraction(num, 8))
            except ValueError:
                continue
            best = b if best is None else min(best, b)
        return best
    x = Fraction(x)
    gamma = 1 / (1 - Fraction(1, p * p))

    def y(j):
        return x ** j / Fraction(p) ** (j * (j + 1) // 2)

    if x <= 1 or any(y(j) >= 1 for j in range(1, 8)):
        raise ValueError("need 1 < x with every y_j < 1")
    total = Fraction(1)  # empty partition
    prefix = Fraction(1)  # prod_{j<l} 1/(1 - y_j)
    l = 1
    while True:
        yl = y(l)
        term = gamma ** l * prefix * yl / (1 - yl)
        total += term
        prefix /= 1 - yl
        # consecutive term ratio gamma * (y_{l+1}/y_l) / (1 - y_{l+1}) is decreasing in l
        ratio = gamma * (x / Fraction(p) ** (l + 1)) / (1 - y(l + 1))
        if ratio < Fraction(1, 2) and term < Fraction(1, 10 ** 12):
            total += term * ratio / (1 - ratio)
            break
        l += 1
    bound = limit_constant(p).upper * total / x ** weight
    return Fraction(math.ceil(bound * 10 ** 30), 10 ** 30)


# -- capped enumeration -----------------------------------------------------

def iter_eldivs(n: int, cap: int) -> Iterator[tuple[int, ...]]:
    """Non-decreasing exponent sequences of length n with entries <= cap."""
    def rec(start, left):
        if left == 0:
            yield ()
            return
        for k in range(start, cap + 1):
            for rest in rec(k, left - 1):
                yield (k,) + rest
    yield from rec(0, n)


def iter_classes(n: int, cap: int) -> Iterator[SymClass]:
    for ks in iter_eldivs(n, cap):
        blocks = sorted(set(ks))
        for signs in product((1, -1), repeat=len(blocks)):
            yield SymClass(ks, tuple(zip(blocks, signs)))


def event_prob_capped(predicate: Callable[[SymClass], bool], n: int, p: int, cap: int) -> Interval:
    """Certified bracket for P(class satisfies predicate) from all classes with k_i <= cap."""
    hit = Fraction(0)
    seen = Fraction(0)
    for cls in iter_classes(n, cap):
        w = sym_class_prob(cls, n, p)
        seen += w
        if predicate(cls):
            hit += w
    return Interval(hit, hit + (1 - seen))


def det_dist(n: int, k: int, p: int, cap: int | None = None) -> Interval:
    """P(|det| = p^-k) for a Haar symmetric n x n matrix; exact, returned as a point interval."""
    if cap is None:
        cap = k
    if cap < k:
        raise ValueError("cap must be >= k")
    total = Fraction(0)
    for lam in partitions(k, max_len=n):
        ks = (0,) * (n - len(lam)) + tuple(reversed(lam))
        total += sym_eldiv_prob(ks, n, p)
    return Interval.point(total)
