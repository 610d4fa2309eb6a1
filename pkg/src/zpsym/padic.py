"""Arithmetic in Z/p^K for an odd prime p.

Residues are plain Python ints reduced into ``range(p**K)``; the ring object
only carries ``p`` and ``K``.  Square classes of Q_p^x, the quadratic
character and the tame Hilbert symbol live here as well, together with the
seeded random stream used by every sampler in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NotAUnit, ZeroAtPrecision


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_odd_prime(p: int) -> int:
    if not (isinstance(p, (int, np.integer)) and p >= 3 and is_prime(int(p))):
        raise ValueError(f"p must be an odd prime, got {p!r}")
    return int(p)


@dataclass(frozen=True)
class PrecisionRing:
    """The ring Z/p^K with p an odd prime and K >= 1."""

    p: int
    K: int
    modulus: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        check_odd_prime(self.p)
        if int(self.K) < 1:
            raise ValueError(f"precision K must be >= 1, got {self.K!r}")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "K", int(self.K))
        object.__setattr__(self, "modulus", self.p ** self.K)

    def reduce(self, x: int) -> int:
        return int(x) % self.modulus

    def __contains__(self, x) -> bool:
        return isinstance(x, (int, np.integer)) and 0 <= x < self.modulus


def val_p(x: int, ring: PrecisionRing) -> int:
    """Valuation of ``x`` at precision K; returns K when x is 0 mod p^K."""
    x = int(x) % ring.modulus
    if x == 0:
        return ring.K
    p = ring.p
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def unit_part(x: int, ring: PrecisionRing) -> int:
    """Unit u with p^val(x) * u == x (mod p^K), reduced mod p^(K - val)."""
    v = val_p(x, ring)
    if v == ring.K:
        raise ZeroAtPrecision(f"{x} is zero modulo {ring.p}^{ring.K}")
    return (int(x) % ring.modulus) // ring.p ** v


def inv_mod(x: int, ring: PrecisionRing) -> int:
    x = int(x) % ring.modulus
    if x % ring.p == 0:
        raise NotAUnit(f"{x} is not a unit modulo {ring.p}^{ring.K}")
    return pow(x, -1, ring.modulus)


def legendre(x: int, p: int) -> int:
    """Legendre symbol (x/p) in {-1, 0, 1}."""
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def chi(x: int, p: int) -> int:
    """Quadratic character of x in Z_p: +1 unit square, -1 unit non-square, 0 if p | x.

    For odd p a unit is a square in Z_p iff its reduction mod p is, so only
    ``x mod p`` matters.
    """
    return legendre(int(x), p)


def eps(p: int) -> int:
    """chi(-1): +1 when p = 1 mod 4, -1 when p = 3 mod 4."""
    return 1 if p % 4 == 1 else -1


@lru_cache(maxsize=None)
def nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod p (the fixed non-square r)."""
    check_odd_prime(p)
    for r in range(2, p):
        if legendre(r, p) == -1:
            return r
    raise AssertionError("unreachable for odd p")


def sqrt_mod(a: int, p: int, k: int) -> int:
    """A square root of the unit square ``a`` modulo p^k (Tonelli-Shanks + Hensel)."""
    mod = p ** k
    a %= mod
    if legendre(a, p) != 1:
        raise ValueError(f"{a} is not a unit square mod {p}")
    x = _sqrt_mod_p(a % p, p)
    # Newton lifting; 2x is a unit because p is odd.
    e = 1
    while e < k:
        e = min(2 * e, k)
        m = p ** e
        x = (x - (x * x - a) * pow(2 * x, -1, m)) % m
    return x % mod


def _sqrt_mod_p(a: int, p: int) -> int:
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@dataclass(frozen=True, order=True)
class SquareClass:
    """Element of Q_p^x / (Q_p^x)^2, written as p^odd * (1 or r).

    ``odd`` is the valuation parity, ``sign`` is +1 for the unit class 1 and
    -1 for the unit class r.
    """

    odd: int
    sign: int

    def __post_init__(self):
        if self.odd not in (0, 1) or self.sign not in (1, -1):
            raise ValueError(f"bad square class ({self.odd}, {self.sign})")

    @classmethod
    def from_tag(cls, tag: str) -> "SquareClass":
        try:
            return _TAGS[tag]
        except KeyError:
            raise ValueError(f"unknown square class {tag!r}; use 1, r, p or pr") from None

    @classmethod
    def of(cls, x: int, ring: PrecisionRing) -> "SquareClass":
        """Square class of a residue that is nonzero at precision K."""
        v = val_p(x, ring)
        u = unit_part(x, ring)
        return cls(v % 2, chi(u, ring.p))

    @classmethod
    def of_unit_sign(cls, sign: int) -> "SquareClass":
        return cls(0, sign)

    @property
    def tag(self) -> str:
        return ("1", "r", "p", "pr")[2 * self.odd + (self.sign == -1)]

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass((self.odd + other.odd) % 2, self.sign * other.sign)

    def times_p(self, power: int = 1) -> "SquareClass":
        return SquareClass((self.odd + power) % 2, self.sign)

    def __str__(self) -> str:
        return self.tag

    def __repr__(self) -> str:
        return f"SquareClass({self.tag})"


_TAGS = {
    "1": SquareClass(0, 1),
    "r": SquareClass(0, -1),
    "p": SquareClass(1, 1),
    "pr": SquareClass(1, -1),
}
ONE, R, P, PR = (_TAGS[t] for t in ("1", "r", "p", "pr"))
ALL_CLASSES = (ONE, R, P, PR)


def minus_one(p: int) -> SquareClass:
    """Square class of -1."""
    return SquareClass(0, eps(p))


def hilbert(a: SquareClass, b: SquareClass, p: int) -> int:
    """Tame Hilbert symbol <a, b> for odd p, valued in {+1, -1}.

    For a = p^alpha u, b = p^beta v it is
    chi(-1)^(alpha beta) chi(u)^beta chi(v)^alpha.
    """
    e = eps(p)
    out = 1
    if a.odd and b.odd:
        out *= e
    if b.odd:
        out *= a.sign
    if a.odd:
        out *= b.sign
    return out


class RandomStream:
    """Seeded, splittable random stream backed by numpy's PCG64 (128-bit state)."""

    def __init__(self, seed=None):
        if isinstance(seed, np.random.SeedSequence):
            self.seed_seq = seed
        else:
            self.seed_seq = np.random.SeedSequence(seed)
        self.seed = self.seed_seq.entropy
        self.generator = np.random.Generator(np.random.PCG64(self.seed_seq))

    def split(self, n: int) -> list["RandomStream"]:
        """Statistically independent child streams."""
        return [RandomStream(s) for s in self.seed_seq.spawn(n)]

    def digits(self, p: int, shape) -> np.ndarray:
        return self.generator.integers(0, p, size=shape, dtype=np.int64)


def sample_uniform(ring: PrecisionRing, rng: RandomStream, size: int | None = None):
    """Haar-uniform residue(s) mod p^K built from K independent base-p digits."""
    shape = (1 if size is None else size, ring.K)
    d = rng.digits(ring.p, shape)
    weights = [ring.p ** i for i in range(ring.K)]
    vals = [sum(int(c) * w for c, w in zip(row, weights)) for row in d.tolist()]
    return vals[0] if size is None else vals
