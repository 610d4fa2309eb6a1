"""Closed rational intervals for certified truncations of infinite sums and products."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


@dataclass(frozen=True)
class Interval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lower), Fraction(self.upper)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def mid(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper

    def is_probability(self) -> bool:
        return 0 <= self.lower and self.upper <= 1

    def _coerce(self, other) -> "Interval":
        return other if isinstance(other, Interval) else Interval.point(other)

    def __add__(self, other):
        o = self._coerce(other)
        return Interval(self.lower + o.lower, self.upper + o.upper)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.upper, -self.lower)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        c = [a * b for a in (self.lower, self.upper) for b in (o.lower, o.upper)]
        return Interval(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lower <= 0 <= o.upper:
            raise ZeroDivisionError("interval divisor contains 0")
        return self * Interval(1 / o.upper, 1 / o.lower)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __float__(self):
        return float(self.mid)

    def rounded(self, digits: int = 40) -> "Interval":
        """Outward rounding to a 10^-digits grid (keeps fractions small)."""
        scale = 10 ** digits
        lo = Fraction(math.floor(self.lower * scale), scale)
        hi = Fraction(math.ceil(self.upper * scale), scale)
        return Interval(lo, hi)


IntervalProb = Interval


def product_one_minus(terms, tail_sum) -> Interval:
    """Certified prod (1 - x_i) given the exact head ``terms`` and an upper bound
    ``tail_sum`` >= sum of the omitted x_i (all x_i in [0, 1))."""
    head = Fraction(1)
    for x in terms:
        head *= 1 - x
    return Interval(head * max(Fraction(0), 1 - Fraction(tail_sum)), head)


@lru_cache(maxsize=None)
def pi_inf(p, terms: int = 60) -> Interval:
    """prod_{k>=1} (1 - p^-k)."""
    p = Fraction(p)
    head = [p ** -k for k in range(1, terms + 1)]
    return product_one_minus(head, p ** -terms / (p - 1)).rounded()


@lru_cache(maxsize=None)
def beta_inf(p, terms: int = 30) -> Interval:
    """prod_{i>=1} (1 - p^-2i)."""
    p = Fraction(p)
    head = [p ** (-2 * i) for i in range(1, terms + 1)]
    return product_one_minus(head, p ** (-2 * terms) / (p * p - 1)).rounded()
