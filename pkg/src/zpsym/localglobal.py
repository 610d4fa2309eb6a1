"""Euler products for densities of integer symmetric matrices, with certified truncation.

Local factors are the exact rational p-adic probabilities.  The product over
p <= cutoff is carried in mpmath interval arithmetic; primes above the cutoff
are handled by an explicit deficit bound 1 - f_p <= C p^-2 together with
sum_{p > N} p^-2 <= 2 * 1.25506 / (N ln N), which follows from
pi(x) < 1.25506 x / ln x by partial summation.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import iv

from .densities.groups import beta_t, pi_n

DPS = 50
INF = math.inf


@contextmanager
def _iv_precision(dps: int):
    old = iv.dps
    iv.dps = dps
    try:
        yield
    finally:
        iv.dps = old


def primes_upto(N: int) -> list[int]:
    if N < 2:
        return []
    sieve = np.ones(N + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(N ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.nonzero(sieve)[0].tolist()


def _ivq(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def prime_tail_sum(N: int) -> Fraction:
    """Upper bound for sum_{p > N} p^-2 (N >= 2), rounded up to a rational."""
    bound = 2 * 1.25506 / (N * math.log(N))
    return Fraction(bound).limit_denominator(10 ** 12) * Fraction(1000001, 1000000)


@dataclass(frozen=True)
class EulerProductResult:
    lower: mpmath.mpf
    upper: mpmath.mpf
    prime_cutoff: int
    tail_bound: Fraction
    n: float
    assume_p2: bool

    @property
    def mid(self) -> float:
        return float((self.lower + self.upper) / 2)

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper

    def near(self, x, tol) -> bool:
        """Interval meets [x - tol, x + tol]."""
        return self.lower <= x + tol and self.upper >= x - tol

    def to_json(self) -> dict:
        return {
            "n": "inf" if self.n == INF else int(self.n),
            "cutoff": self.prime_cutoff,
            "value": [mpmath.nstr(self.lower, 30), mpmath.nstr(self.upper, 30)],
            "tail_bound": float(self.tail_bound),
            "assume_p2": self.assume_p2,
        }


# -- local factors (exact) --------------------------------------------------

def local_first_divisors_one(n: int, p: int) -> Fraction:
    """P(first n-1 elementary divisors are 1) = P(corank mod p <= 1)."""
    return pi_n(n, p) / beta_t(n, p) + Fraction(1, p) * pi_n(n, p) / (beta_t(n - 1, p) * pi_n(1, p))


def local_squarefree_det(n: int, p: int) -> Fraction:
    """P(p^2 does not divide det)."""
    return pi_n(n, p) / beta_t(n, p) + Fraction(1, p) * pi_n(n, p) / (beta_t(n - 1, p) * beta_t(1, p))


def _odd_power_product(p: int):
    """prod_{i>=1} (1 - p^-(2i+1)) as an interval."""
    pp = iv.mpf(p)
    out = iv.mpf(1)
    terms = max(4, int(DPS * math.log(10) / (2 * math.log(p))) + 2)
    for i in range(1, terms + 1):
        out *= 1 - pp ** (-(2 * i + 1))
    rest = pp ** (-(2 * terms + 3)) / (1 - pp ** -2)
    return out * iv.mpf([1 - rest.b, 1])


def _local_iv(kind: str, n, p: int):
    if n == INF:
        base = _odd_power_product(p)
        if kind == "first":
            return base
        return (1 - iv.mpf(p) ** -2) * base
    f = local_first_divisors_one(n, p) if kind == "first" else local_squarefree_det(n, p)
    return _ivq(f)


def _deficit_constant(kind: str, n, N: int) -> Fraction:
    """C with 1 - f_p <= C p^-2 for every prime p > N (N >= 3).

    The complement of the first event is corank >= 2 mod p, of mass at most
    p^-3 / (pi_inf (1 - p^-3)) <= (2/N) p^-2 since pi_inf(p) > 0.56 for p >= 3.
    The square-free complement adds corank exactly 1 with k_n >= 2, of mass at
    most P(corank >= 1) / p <= p^-2 / (1 - p^-2).
    """
    if n == 1:
        return Fraction(1) if kind == "square" else Fraction(0)
    corank2 = Fraction(2, N)
    if kind == "first":
        return corank2
    return corank2 + 1 / (1 - Fraction(1, N * N))


def _euler_product(kind: str, n, cutoff: int, assume_p2: bool) -> EulerProductResult:
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    with _iv_precision(DPS):
        prod = iv.mpf(1)
        for p in primes_upto(cutoff):
            if p == 2 and not assume_p2:
                continue
            prod *= _local_iv(kind, n, p)
        N = max(cutoff, 3)
        tail = _deficit_constant(kind, n, N) * prime_tail_sum(N)
        if cutoff < 3:
            # p = 3 itself is not yet included; fall back to the crude integer bound
            tail = _deficit_constant(kind, n, 3) * Fraction(1, 2)
        lower_iv = prod * (1 - _ivq(tail))
        with mpmath.workdps(DPS):
            lower, upper = mpmath.mpf(lower_iv.a), mpmath.mpf(prod.b)
        return EulerProductResult(lower, upper, cutoff, tail, n, assume_p2)


def density_first_divisors_one(n, cutoff: int = 10 ** 5, assume_p2: bool = True) -> EulerProductResult:
    """Density of integer symmetric n x n matrices whose first n-1 elementary divisors are 1."""
    if n != INF and n < 2:
        raise ValueError("n must be >= 2")
    return _euler_product("first", n, cutoff, assume_p2)


def density_squarefree_det(n, cutoff: int = 10 ** 5, assume_p2: bool = True) -> EulerProductResult:
    """Density of integer symmetric n x n matrices with square-free determinant."""
    if n != INF and n < 1:
        raise ValueError("n must be >= 1")
    return _euler_product("square", n, cutoff, assume_p2)


def zeta_product(exponents, cutoff: int = 10 ** 4):
    """Interval for prod 1/zeta(e) over the given integers e >= 2.

    Each 1/zeta(e) lies in [E_N (1 - N^(1-e)/(e-1)), E_N], E_N the Euler product over p <= N.
    """
    exps = list(exponents)
    if any(e < 2 for e in exps):
        raise ValueError("exponents must be >= 2")
    ps = primes_upto(cutoff)
    with _iv_precision(DPS):
        out = iv.mpf(1)
        for e in exps:
            E = iv.mpf(1)
            for p in ps:
                E *= 1 - iv.mpf(p) ** (-e)
            tail = iv.mpf(cutoff) ** (1 - e) / (e - 1)
            out *= iv.mpf([(E * (1 - tail)).a, E.b])
        with mpmath.workdps(DPS):
            return mpmath.mpf(out.a), mpmath.mpf(out.b)
