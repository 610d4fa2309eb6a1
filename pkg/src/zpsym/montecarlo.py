"""Sampling checks: empirical class distributions, Pearson goodness of fit, isotropy frequency.

Only this module uses floating point, and only for test statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.special import gammaincc

from .canonical import SymClass, isotropy_by_invariants, qp_class, sym_class
from .errors import ExpectedCountTooSmall, PrecisionExhausted, PrecisionInsufficient
from .matrix import Matrix
from .oracle import TallyTable
from .padic import PrecisionRing, RandomStream, sample_uniform

TAIL = "tail"


def sample_sym_matrix(n: int, ring: PrecisionRing, rng: RandomStream) -> Matrix:
    """Symmetric matrix with n(n+1)/2 independent Haar entries mod p^K."""
    vals = iter(sample_uniform(ring, rng, n * (n + 1) // 2))
    X = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            X[i][j] = X[j][i] = next(vals)
    return X


def resolved_classes(n: int, cutoff: int) -> list[SymClass]:
    """All classes with every exponent <= cutoff."""
    from .densities.classes import iter_classes

    return list(iter_classes(n, cutoff))


def empirical_class_dist(n: int, p: int, K: int, samples: int, rng: RandomStream, cutoff: int) -> TallyTable:
    """Tally of sampled classes; anything with an exponent above ``cutoff`` goes to ``TAIL``."""
    if n * cutoff > K - 1:
        raise PrecisionInsufficient(f"n*cutoff = {n * cutoff} exceeds K-1 = {K - 1}")
    ring = PrecisionRing(p, K)
    out = TallyTable()
    for _ in range(samples):
        X = sample_sym_matrix(n, ring, rng)
        try:
            cls = sym_class(X, ring)
        except PrecisionExhausted:
            out.add(TAIL)
            continue
        out.add(cls if max(cls.eldivs) <= cutoff else TAIL)
    return out


def parallel_class_dist(n, p, K, samples, rng: RandomStream, cutoff, workers: int = 1) -> TallyTable:
    """Split the stream, tally per worker, merge (identical result for any merge order)."""
    streams = rng.split(workers)
    sizes = [samples // workers + (i < samples % workers) for i in range(workers)]
    if workers == 1:
        parts = [empirical_class_dist(n, p, K, sizes[0], streams[0], cutoff)]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda a: empirical_class_dist(n, p, K, a[0], a[1], cutoff), zip(sizes, streams)))
    out = TallyTable()
    for t in parts:
        out = out.merge(t)
    return out


@dataclass
class GofReport:
    statistic: float
    degrees_of_freedom: int
    p_value: float
    per_class: list  # (label, observed, expected, z)
    samples: int
    seed: object = None

    def max_abs_z(self) -> float:
        return max(abs(z) for *_, z in self.per_class)

    def to_json(self) -> dict:
        return {
            "seed": None if self.seed is None else str(self.seed),
            "samples": self.samples,
            "classes": [{"label": str(l), "observed": o, "expected": e, "z": z} for l, o, e, z in self.per_class],
            "statistic": self.statistic,
            "df": self.degrees_of_freedom,
            "p_value": self.p_value,
        }


def chi2_sf(x: float, df: int) -> float:
    """Upper tail of chi-square: regularized upper incomplete gamma Q(df/2, x/2)."""
    return float(gammaincc(df / 2, x / 2))


def gof_chisq(tally: TallyTable, expected: dict, min_expected: float = 5.0, seed=None) -> GofReport:
    """Pearson test of ``tally`` against exact masses ``expected`` (label -> Fraction).

    Labels missing from ``expected`` are pooled into the tail bucket, whose
    mass is 1 minus the listed masses.
    """
    N = tally.total
    masses = {k: Fraction(v) for k, v in expected.items()}
    rest = 1 - sum(masses.values())
    if rest < 0:
        raise ValueError("expected masses exceed 1")
    if rest > 0 and TAIL not in masses:
        masses[TAIL] = rest
    if len(masses) < 2:
        raise ValueError("need at least two classes (df >= 1)")
    observed = {k: 0 for k in masses}
    for k, c in tally.counts.items():
        observed[k if k in masses else TAIL] = observed.get(k if k in masses else TAIL, 0) + c
    stat = 0.0
    rows = []
    for k, m in masses.items():
        e = float(m) * N
        if e < min_expected:
            raise ExpectedCountTooSmall(f"expected count {e:.3g} for {k} is below {min_expected}")
        o = observed[k]
        stat += (o - e) ** 2 / e
        mf = float(m)
        sd = math.sqrt(N * mf * (1 - mf)) if 0 < mf < 1 else 0.0
        rows.append((k, o, e, (o - e) / sd if sd else 0.0))
    df = len(masses) - 1
    return GofReport(stat, df, chi2_sf(stat, df), rows, N, seed)


def isotropy_frequency(n: int, p: int, samples: int, rng: RandomStream, K: int = 20) -> tuple[int, int, int]:
    """(isotropic, anisotropic, unresolved) counts over Haar samples, classified via (d, c)."""
    ring = PrecisionRing(p, K)
    iso = aniso = unresolved = 0
    for _ in range(samples):
        X = sample_sym_matrix(n, ring, rng)
        try:
            cls = sym_class(X, ring)
        except PrecisionExhausted:
            unresolved += 1
            continue
        if not cls.finite:
            unresolved += 1
        elif isotropy_by_invariants(qp_class(cls, p), p):
            iso += 1
        else:
            aniso += 1
    return iso, aniso, unresolved


def within_sigma(count: int, total: int, prob, k: float = 5.0) -> bool:
    pf = float(prob)
    return abs(count / total - pf) <= k * math.sqrt(pf * (1 - pf) / total) + 1e-15
