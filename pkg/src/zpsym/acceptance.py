"""Acceptance checks shared by ``zpsym check`` and the test suite.

Each ``criterion_N`` returns a ``Result``: a pass flag plus one line of
detail listing the sub-checks that were evaluated.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .canonical import (
    SymClass,
    isotropy_by_invariants,
    qp_class,
    smith_normal_form,
    sym_canonical,
    sym_canonical_check,
    sym_class,
)
from .densities import (
    alpha_ns,
    det_dist,
    event_prob_capped,
    finite_partition_prob,
    gen_eldiv_prob,
    hall_littlewood_P,
    hall_littlewood_Q,
    isotropy_prob,
    isotropy_prob_from_rho,
    iter_classes,
    iter_eldivs,
    limit_partition_prob,
    partition_tail_bound,
    partitions,
    pi_n,
    rank_dist_general,
    rank_dist_symmetric,
    rho_n,
    rho_recurrence_residual,
    sym_class_prob,
)
from .densities.intervals import Interval
from .densities.qpclass import PAIRS
from .errors import PrecisionExhausted
from .localglobal import INF, density_first_divisors_one, density_squarefree_det
from .matrix import congruence, det_mod, matmul, random_invertible
from .montecarlo import empirical_class_dist, gof_chisq, isotropy_frequency, resolved_classes, sample_sym_matrix, within_sigma
from .oracle import (
    eldivs_via_minors,
    enumerate_orbits,
    orbit_of,
    orth_count_mod,
    rank_tally,
    stabilizer_closed_form,
    stabilizer_count,
    sym_rank_tally,
)
from .padic import ALL_CLASSES, PrecisionRing, RandomStream


@dataclass
class Result:
    ident: int
    title: str
    checks: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def line(self) -> str:
        failed = [k for k, v in self.checks.items() if not v]
        status = "PASS" if self.ok else "FAIL"
        tail = "" if not failed else " failed: " + "; ".join(failed)
        return f"[{status}] {self.ident:2d} {self.title} ({len(self.checks)} checks, {self.seconds:.1f}s){tail}"


def _timed(ident, title):
    def deco(fn):
        def run() -> Result:
            res = Result(ident, title)
            t0 = time.perf_counter()
            fn(res.checks)
            res.seconds = time.perf_counter() - t0
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return deco


@_timed(1, "orbit ground truth n=2 p=3 K=2")
def criterion_1(c):
    p, K, n = 3, 2, 2
    ring = PrecisionRing(p, K)
    orbits = enumerate_orbits(n, p, K)
    total = p ** (K * n * (n + 1) // 2)
    c["orbits partition all matrices"] = sum(s for _, s in orbits) == total
    resolved = {}
    for rep, size in orbits:
        try:
            ks = eldivs_via_minors(rep, ring)
        except PrecisionExhausted:
            continue
        if sum(ks) <= K - 1:
            resolved[tuple(map(tuple, rep))] = size
    classes = [cls for cls in iter_classes(n, 1) if sum(cls.eldivs) <= K - 1]
    matched = {}
    for cls in classes:
        members = orbit_of(cls.matrix(ring), p, K)
        hits = [rep for rep in resolved if (rep[0][0], rep[0][1], rep[1][1]) in members]
        c[f"class {cls.label()} owns exactly one orbit"] = len(hits) == 1
        if len(hits) == 1:
            matched[hits[0]] = cls
            c[f"class {cls.label()} size/729 = density"] = Fraction(resolved[hits[0]], total) == sym_class_prob(cls, n, p)
    c["every resolved orbit is one of the 6 classes"] = set(matched) == set(resolved)
    res_mass = Fraction(sum(resolved.values()), total)
    unres_mass = Fraction(total - sum(resolved.values()), total)
    c["unresolved mass = 1 - resolved"] = unres_mass == 1 - sum(sym_class_prob(k, n, p) for k in classes) \
        and unres_mass == 1 - res_mass


@_timed(2, "n=1 exact enumeration K=3")
def criterion_2(c):
    for p in (3, 5):
        K = 3
        ring = PrecisionRing(p, K)
        counts = {}
        for x in range(p ** K):
            try:
                cls = sym_class([[x]], ring)
            except PrecisionExhausted:
                continue
            counts[cls] = counts.get(cls, 0) + 1
        for k in range(3):
            for s in (1, -1):
                cls = SymClass((k,), ((k, s),))
                c[f"p={p} {cls.label()}"] = Fraction(counts.get(cls, 0), p ** K) == sym_class_prob(cls, 1, p)
    c["p=3 (0|+) = 1/3"] = sym_class_prob(SymClass((0,), ((0, 1),)), 1, 3) == Fraction(1, 3)
    c["p=3 (1|-) = 1/9"] = sym_class_prob(SymClass((1,), ((1, -1),)), 1, 3) == Fraction(1, 9)


@_timed(3, "stabiliser and orthogonal group counts")
def criterion_3(c):
    p, n = 3, 2
    for K in (1, 2):
        for cls in iter_classes(n, K - 1):
            if sum(cls.eldivs) > K - 1:
                continue
            c[f"stab {cls.label()} K={K}"] = stabilizer_count(cls, p, K) == stabilizer_closed_form(cls, p, K)
    for m in (1, 2, 3):
        for s in (1, -1):
            for k in (1, 2):
                expect = alpha_ns(m, s, p) * p ** (k * m * (m - 1) // 2)
                c[f"orth n={m} s={s:+d} k={k}"] = orth_count_mod(m, s, p, k) == expect
    c["|O_2^+(F_3)| = 8"] = orth_count_mod(2, 1, 3, 1) == 8
    c["|O_2^-(F_3)| = 4"] = orth_count_mod(2, -1, 3, 1) == 4
    c["|O_3^+(F_3)| = |O_3^-(F_3)| = 48"] = orth_count_mod(3, 1, 3, 1) == 48 == orth_count_mod(3, -1, 3, 1)


@_timed(4, "rank distributions over finite fields")
def criterion_4(c):
    for n in (1, 2, 3):
        t = sym_rank_tally(n, 3)
        c[f"sym n={n}"] = all(Fraction(t.counts.get(n - r, 0), t.total) == rank_dist_symmetric(n, r, 3)
                              for r in range(n + 1))
    t = sym_rank_tally(2, 3)
    c["sym n=2 p=3 is 18/8/1"] = (t.counts[2], t.counts[1], t.counts[0]) == (18, 8, 1)
    for q in (2, 3):
        for n in (1, 2, 3):
            for m in (1, 2, 3):
                t = rank_tally(n, m, q)
                a, b = min(n, m), max(n, m)
                c[f"general {n}x{m} q={q}"] = all(
                    Fraction(t.counts.get(a - r, 0), t.total) == rank_dist_general(a, b, r, q) for r in range(a + 1))
    ok_sum = True
    for n in range(0, 9):
        ok_sum &= sum(rank_dist_symmetric(n, r, 3) for r in range(n + 1)) == 1
        for m in range(n, 9):
            for q in (2, 3):
                ok_sum &= sum(rank_dist_general(n, m, r, q) for r in range(n + 1)) == 1
    c["closed forms sum to 1 for n <= 8"] = ok_sum


@_timed(5, "Hall-Littlewood forms of both densities")
def criterion_5(c):
    ok_p = ok_q = True
    for p in (3, 5):
        t = Fraction(1, p)
        for n in range(1, 5):
            x = [Fraction(1, p ** i) for i in range(1, n + 1)]
            for ks in iter_eldivs(n, 4):
                if sum(ks) > 4:
                    continue
                lam = sorted(ks, reverse=True)
                weight = Fraction(1, p ** sum((n - i) * k for i, k in enumerate(ks, 1)))
                ok_p &= gen_eldiv_prob(ks, n, p) == pi_n(n, p) * weight * hall_littlewood_P(lam, n, t, x)
                Q = hall_littlewood_Q(lam, n, t, x)
                blocks = sorted(set(ks))
                for signs in product((1, -1), repeat=len(blocks)):
                    cls = SymClass(ks, tuple(zip(blocks, signs)))
                    rhs = pi_n(ks.count(0), p) * Q
                    for k, s in cls.signs:
                        rhs /= alpha_ns(ks.count(k), s, p)
                    ok_q &= sym_class_prob(cls, n, p) == rhs
    c["general density = Hall-Littlewood P form"] = ok_p
    c["symmetric class density = Q form"] = ok_q


@_timed(6, "recurrence residual and normalisation")
def criterion_6(c):
    for p in (3, 5, 7):
        c[f"residual 0 p={p} n<=5"] = all(rho_recurrence_residual(n, p) == 0 for n in range(1, 6))
        c[f"sum rho = 1 p={p} n<=6"] = all(sum(rho_n(a, b, n, p) for a, b in PAIRS) == 1 for n in range(0, 7))
        c[f"rho_1(a,-1) = 0 p={p}"] = all(rho_n(a, -1, 1, p) == 0 for a in ALL_CLASSES)


STATED_ISOTROPY = {(3, 3): Fraction(23, 32), (4, 3): Fraction(7015, 7744)}


@_timed(7, "isotropy probabilities")
def criterion_7(c):
    c["n=2 gives 1/2"] = all(isotropy_prob(2, p) == Fraction(1, 2) for p in (3, 5, 7, 11, 13))
    for (n, p), stated in STATED_ISOTROPY.items():
        c[f"n={n} p={p} equals {stated} (got {isotropy_prob(n, p)})"] = isotropy_prob(n, p) == stated
    c["closed form = rho-composed"] = all(isotropy_prob(n, p) == isotropy_prob_from_rho(n, p)
                                         for n in range(2, 7) for p in (3, 5, 7))
    for n in (2, 3, 4):
        iv = event_prob_capped(lambda cls: isotropy_by_invariants(qp_class(cls, 3), 3), n, 3, 8)
        c[f"capped sum brackets n={n} p=3"] = isotropy_prob(n, 3) in iv
        if (n, 3) in STATED_ISOTROPY:
            c[f"capped sum brackets stated {STATED_ISOTROPY[n, 3]}"] = STATED_ISOTROPY[n, 3] in iv
    for (n, p), seed in zip(((2, 3), (3, 3), (4, 5)), (101, 202, 303)):
        iso, aniso, unres = isotropy_frequency(n, p, 10 ** 5, RandomStream(seed))
        c[f"MC n={n} p={p} within 5 sigma ({iso}/{10 ** 5})"] = unres == 0 and within_sigma(iso, 10 ** 5, isotropy_prob(n, p))


def det_ratios(n=3, p=3, ks=range(2, 9)):
    return [det_dist(n, k, p).lower * p ** k / (1 - Fraction(1, p ** n)) for k in ks]


@_timed(8, "determinant law leading order n=3 p=3")
def criterion_8(c):
    ratios = det_ratios()
    c["|ratio - 1| <= 10 p^(-k/2)"] = all(float(abs(r - 1)) <= 10 * 3 ** (-k / 2) for k, r in zip(range(2, 9), ratios))
    c["ratio non-increasing in k (ratios " + ", ".join(f"{float(r):.4f}" for r in ratios) + ")"] = all(
        b <= a for a, b in zip(ratios, ratios[1:]))


TEST_PARTITIONS = ((1,), (1, 1), (2, 1))


@_timed(9, "partition limit p=3")
def criterion_9(c):
    p = 3
    total = sum((limit_partition_prob(lam, p) for w in range(13) for lam in partitions(w)), Interval.point(0))
    tail = partition_tail_bound(12, p)
    c["tail bound < 1e-4"] = tail < Fraction(1, 10 ** 4)
    c["sum_{|lambda|<=12} f in [1 - tail, 1]"] = total.upper <= 1 and total.lower >= 1 - tail
    for lam in TEST_PARTITIONS:
        lim = limit_partition_prob(lam, p)
        errs = [abs(finite_partition_prob(lam, n, p) - lim.mid) for n in range(len(lam), 13)]
        c[f"|f_n - f| non-increasing in n for {lam}"] = all(b <= a for a, b in zip(errs, errs[1:]))


@_timed(10, "Euler products, cutoff 1e5")
def criterion_10(c):
    import mpmath

    a = density_first_divisors_one(INF, 10 ** 5)
    b = density_squarefree_det(INF, 10 ** 5)
    one = density_squarefree_det(1, 10 ** 5)
    c["first divisors one within 1e-3 of 0.7935"] = a.near(0.7935, 1e-3)
    c["square-free det within 1e-3 of 0.4824"] = b.near(0.4824, 1e-3)
    six = 6 / mpmath.pi ** 2
    c["n=1 interval contains 6/pi^2"] = one.contains(six)
    c["n=1 midpoint within 1e-6 of 6/pi^2"] = abs(one.mid - float(six)) <= 1e-6


@_timed(11, "Monte Carlo goodness of fit n=3 p=3 K=4")
def criterion_11(c):
    n, p, K, cutoff, N = 3, 3, 4, 1, 10 ** 5
    expected = {cls: sym_class_prob(cls, n, p) for cls in resolved_classes(n, cutoff)}
    for seed in (11, 22, 33):
        tally = empirical_class_dist(n, p, K, N, RandomStream(seed), cutoff)
        rep = gof_chisq(tally, expected, seed=seed)
        c[f"seed {seed} not rejected at 0.001 (p={rep.p_value:.3f})"] = rep.p_value >= 1e-3
        c[f"seed {seed} all classes within 5 sigma"] = all(
            within_sigma(o, N, expected[k]) for k, o, e, z in rep.per_class if k in expected)


@_timed(12, "decomposition soundness")
def criterion_12(c):
    rng = RandomStream(12)
    K = 6
    n_done = 0
    ok_rt = ok_det = ok_inv = ok_minor = True
    while n_done < 10 ** 4:
        p = (3, 5)[n_done % 2]
        n = 1 + (n_done // 2) % 4
        ring = PrecisionRing(p, K)
        X = sample_sym_matrix(n, ring, rng)
        try:
            cls, U = sym_canonical(X, ring)
        except PrecisionExhausted:
            continue
        if not cls.finite or cls.weight > K - 1:
            continue
        n_done += 1
        ok_rt &= sym_canonical_check(X, cls, U, ring)
        ok_det &= det_mod(U, p) != 0
        for _ in range(10):
            V = random_invertible(n, ring, rng)
            ok_inv &= sym_class(congruence(V, X, ring.modulus), ring) == cls
        exps, _, _ = smith_normal_form(X, ring, compute_uv=False)
        ok_minor &= tuple(exps) == eldivs_via_minors(X, ring) == cls.eldivs
    c["U Sigma S U^T = X"] = ok_rt
    c["det U is a unit"] = ok_det
    c["class invariant under congruence"] = ok_inv
    c["minors agree with Smith form"] = ok_minor


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def run_all(only=None, out=print) -> list[Result]:
    results = []
    for fn in CRITERIA:
        if only and int(fn.__name__.rsplit("_", 1)[1]) not in only:
            continue
        r = fn()
        out(r.line())
        results.append(r)
    return results
