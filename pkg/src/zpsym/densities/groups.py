"""Densities of GL_n, O_n^+/- over F_p, and the stabiliser measures built from them.

Everything is an exact ``Fraction`` in the prime (or formal parameter) q.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..errors import UndefinedSignature
from ..padic import check_odd_prime, eps


@lru_cache(maxsize=None)
def pi_n(n: int, q=2) -> Fraction:
    """pi_n(q) = prod_{k<=n} (1 - q^-k); pi_0 = 1.  ``q`` may be any rational > 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    q = Fraction(q)
    out = Fraction(1)
    for k in range(1, n + 1):
        out *= 1 - q ** -k
    return out


@lru_cache(maxsize=None)
def beta_t(t: int, p) -> Fraction:
    """beta_t = prod_{i <= floor(t/2)} (1 - p^-2i)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    p = Fraction(p)
    out = Fraction(1)
    for i in range(1, t // 2 + 1):
        out *= 1 - p ** (-2 * i)
    return out


@lru_cache(maxsize=None)
def alpha_ns(n: int, s: int, p: int) -> Fraction:
    """alpha_n^s = |O_n^s(F_p)| / p^(n(n-1)/2); alpha_0^+ = 1."""
    check_odd_prime(p)
    if s not in (1, -1):
        raise ValueError("signature must be +1 or -1")
    if n == 0:
        if s == -1:
            raise UndefinedSignature("alpha_0^- is undefined")
        return Fraction(1)
    t = n // 2
    base = 2 * beta_t(2 * t, p)
    if n % 2:
        return base
    return base / (1 + Fraction(s * eps(p) ** t, p ** t))


def orth_order(n: int, s: int, p: int) -> int:
    """|O_n^s(F_p)|."""
    val = alpha_ns(n, s, p) * p ** (n * (n - 1) // 2)
    assert val.denominator == 1
    return int(val)


def multiplicities(eldivs) -> dict:
    out: dict = {}
    for k in eldivs:
        out[k] = out.get(k, 0) + 1
    return out


def D_sigma(eldivs) -> int:
    """sum_{i<j} (k_j - k_i), cross-checked against sum_{a<b} m_a m_b (b - a)."""
    ks = sorted(eldivs)
    pairwise = sum(ks[j] - ks[i] for i in range(len(ks)) for j in range(i + 1, len(ks)))
    m = multiplicities(ks)
    blocks = sorted(m)
    via_mult = sum(m[a] * m[b] * (b - a) for i, a in enumerate(blocks) for b in blocks[i + 1:])
    assert pairwise == via_mult
    return pairwise


def stabilizer_measure(eldivs, p) -> Fraction:
    """Haar measure of K cap Sigma K Sigma^-1: p^-D prod_k pi_{m_k}."""
    out = Fraction(1, Fraction(p) ** D_sigma(eldivs))
    for m in multiplicities(eldivs).values():
        out *= pi_n(m, p)
    return out
