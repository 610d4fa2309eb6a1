"""Hall-Littlewood P and Q evaluated at rational points by explicit symmetrisation."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from ..errors import LengthExceedsN, RepeatedSpecializationPoint
from .groups import multiplicities

MAX_N = 8


def _phi(m: int, t: Fraction) -> Fraction:
    out = Fraction(1)
    for j in range(1, m + 1):
        out *= 1 - t ** j
    return out


def _symmetrised_sum(lam, n, t, x) -> Fraction:
    total = Fraction(0)
    for sigma in permutations(range(n)):
        xs = [x[i] for i in sigma]
        term = Fraction(1)
        for i in range(n):
            term *= xs[i] ** lam[i]
            for j in range(i + 1, n):
                term *= (xs[i] - t * xs[j]) / (xs[i] - xs[j])
        total += term
    return total


def _prepare(lam, n, t, x):
    if n > MAX_N:
        raise ValueError(f"direct symmetrisation is limited to n <= {MAX_N}")
    parts = sorted((int(v) for v in lam), reverse=True)
    if any(v < 0 for v in parts):
        raise ValueError("partition parts must be >= 0")
    parts = [v for v in parts if v]
    if len(parts) > n:
        raise LengthExceedsN(f"partition {tuple(parts)} longer than n={n}")
    xs = [Fraction(v) for v in x]
    if len(xs) != n:
        raise ValueError(f"need {n} specialisation points, got {len(xs)}")
    if len(set(xs)) != n:
        raise RepeatedSpecializationPoint("specialisation points must be distinct")
    padded = parts + [0] * (n - len(parts))
    return padded, Fraction(t), xs


def hall_littlewood_P(lam, n: int, t, x) -> Fraction:
    padded, t, xs = _prepare(lam, n, t, x)
    norm = (1 - t) ** n
    for m in multiplicities(padded).values():
        norm /= _phi(m, t)
    return norm * _symmetrised_sum(padded, n, t, xs)


def hall_littlewood_Q(lam, n: int, t, x) -> Fraction:
    padded, t, xs = _prepare(lam, n, t, x)
    m0 = padded.count(0)
    return (1 - t) ** n / _phi(m0, t) * _symmetrised_sum(padded, n, t, xs)
