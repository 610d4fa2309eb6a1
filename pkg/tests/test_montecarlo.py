from fractions import Fraction as F

import pytest
from scipy.stats import chi2

from zpsym.densities import isotropy_prob, sym_class_prob
from zpsym.errors import ExpectedCountTooSmall, PrecisionInsufficient
from zpsym.montecarlo import (
    TAIL, chi2_sf, empirical_class_dist, gof_chisq, isotropy_frequency, parallel_class_dist,
    resolved_classes, sample_sym_matrix, within_sigma,
)
from zpsym.oracle import TallyTable
from zpsym.padic import PrecisionRing, RandomStream


def test_sample_is_symmetric_and_reproducible():
    ring = PrecisionRing(5, 3)
    X = sample_sym_matrix(4, ring, RandomStream(7))
    assert X == sample_sym_matrix(4, ring, RandomStream(7))
    assert all(X[i][j] == X[j][i] and 0 <= X[i][j] < 125 for i in range(4) for j in range(4))


def test_resolved_classes_count():
    # n=1, exponents 0..2, two signs each
    assert len(resolved_classes(1, 2)) == 6


def test_precision_guard():
    with pytest.raises(PrecisionInsufficient):
        empirical_class_dist(3, 3, 3, 10, RandomStream(0), 1)


def test_tail_and_totals():
    t = empirical_class_dist(2, 3, 3, 2000, RandomStream(1), 1)
    t.check()
    assert t.total == 2000 and TAIL in t.counts


def test_parallel_merge_is_deterministic():
    a = parallel_class_dist(2, 3, 3, 999, RandomStream(5), 1, workers=3)
    b = parallel_class_dist(2, 3, 3, 999, RandomStream(5), 1, workers=3)
    assert a == b and a.total == 999


def test_chi2_sf_matches_scipy():
    for x, df in ((0.5, 1), (3.0, 2), (12.3, 7), (40.0, 20)):
        assert chi2_sf(x, df) == pytest.approx(chi2.sf(x, df), rel=1e-12)


def test_gof_accepts_true_law():
    n, p, K, cutoff = 2, 3, 3, 1
    expected = {c: sym_class_prob(c, n, p) for c in resolved_classes(n, cutoff)}
    t = empirical_class_dist(n, p, K, 20000, RandomStream(3), cutoff)
    rep = gof_chisq(t, expected, seed=3)
    assert rep.p_value > 1e-3
    assert rep.max_abs_z() < 5
    assert rep.to_json()["samples"] == 20000


def test_gof_rejects_wrong_law():
    t = TallyTable({"a": 7000, "b": 3000}, 10000)
    rep = gof_chisq(t, {"a": F(1, 2)})
    assert rep.p_value < 1e-10 and rep.degrees_of_freedom == 1


def test_gof_small_expected_raises():
    t = TallyTable({"a": 9, "b": 1}, 10)
    with pytest.raises(ExpectedCountTooSmall):
        gof_chisq(t, {"a": F(9, 10)})


def test_isotropy_frequency_n3():
    N = 5000
    iso, aniso, unres = isotropy_frequency(3, 3, N, RandomStream(21))
    assert iso + aniso + unres == N and unres == 0
    assert within_sigma(iso, N, isotropy_prob(3, 3))
    assert not within_sigma(iso, N, F(23, 32))
