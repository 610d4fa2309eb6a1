from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zpsym.canonical import SymClass, sym_class
from zpsym.densities import alpha_ns, iter_classes, rank_dist_general, rank_dist_symmetric, sym_class_prob
from zpsym.errors import BudgetExceeded, PrecisionExhausted
from zpsym.oracle import (
    TallyTable, enumerate_orbits, gl_order, orbit_of, orth_count_mod, rank_tally, stabilizer_closed_form,
    stabilizer_count, sym_rank_tally, eldivs_via_minors,
)
from zpsym.padic import PrecisionRing


def test_n1_orbits_mod_9():
    # 3 and 6 are not congruent: 6/3 = 2 is a non-square unit
    orbits = dict((rep[0][0], size) for rep, size in enumerate_orbits(1, 3, 2))
    assert orbits == {0: 1, 1: 3, 2: 3, 3: 1, 6: 1}


def test_orbits_partition_and_match_densities():
    p, K = 3, 2
    orbits = enumerate_orbits(2, p, K)
    total = p ** (K * 3)
    assert sum(s for _, s in orbits) == total
    ring = PrecisionRing(p, K)
    for cls in iter_classes(2, 1):
        if cls.weight > K - 1:
            continue
        members = orbit_of(cls.matrix(ring), p, K)
        assert F(len(members), total) == sym_class_prob(cls, 2, p)


def test_orbit_of_is_closed():
    orb = orbit_of([[1, 0], [0, 2]], 3, 1)
    assert (1, 0, 2) in orb and (0, 1, 0) in orb  # the hyperbolic plane is 1 + (-1) over F_3
    assert len(orb) == 48 // 4  # |GL_2(F_3)| / |O_2^-(F_3)|


def test_group_orders():
    assert gl_order(1, 3, 1) == 2
    assert gl_order(2, 3, 1) == 48
    assert gl_order(2, 3, 2) == 48 * 3 ** 4


def test_orthogonal_counts():
    assert orth_count_mod(2, 1, 3, 1) == 8
    assert orth_count_mod(2, -1, 3, 1) == 4
    assert orth_count_mod(3, 1, 3, 1) == orth_count_mod(3, -1, 3, 1) == 48
    assert orth_count_mod(1, 1, 5, 2) == 2
    for m in (1, 2):
        for s in (1, -1):
            assert orth_count_mod(m, s, 3, 2) == alpha_ns(m, s, 3) * 3 ** (2 * m * (m - 1) // 2)


def test_stabilizer_example():
    cls = SymClass.from_lists((0, 1), (1, 1))
    assert stabilizer_count(cls, 3, 2) == stabilizer_closed_form(cls, 3, 2) == 108


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        enumerate_orbits(3, 3, 2, budget=100)
    with pytest.raises(BudgetExceeded):
        rank_tally(3, 3, 3, budget=10)
    with pytest.raises(BudgetExceeded):
        orth_count_mod(3, 1, 5, 2, budget=10)


def test_rank_tallies():
    t = sym_rank_tally(2, 3)
    assert (t.counts[2], t.counts[1], t.counts[0]) == (18, 8, 1)
    for n, m in ((1, 2), (2, 2), (2, 3)):
        t = rank_tally(n, m, 3)
        t.check()
        assert all(F(t.counts.get(n - r, 0), t.total) == rank_dist_general(n, m, r, 3) for r in range(n + 1))
    t = sym_rank_tally(3, 3)
    assert all(F(t.counts.get(3 - r, 0), t.total) == rank_dist_symmetric(3, r, 3) for r in range(4))
    with pytest.raises(ValueError):
        rank_tally(1, 1, 4)


def test_tally_table_merge():
    a, b = TallyTable(), TallyTable()
    a.add("x")
    b.add("x", 2)
    b.add("y")
    m = a.merge(b)
    m.check()
    assert m.counts == {"x": 3, "y": 1} and m.total == 4
    assert m == b.merge(a)
    assert m.to_json() == [{"label": "x", "count": 3}, {"label": "y", "count": 1}]


def test_minors_precision():
    ring = PrecisionRing(3, 2)
    assert eldivs_via_minors([[1, 0], [0, 3]], ring) == (0, 1)
    with pytest.raises(PrecisionExhausted):
        eldivs_via_minors([[3, 0], [0, 3]], ring)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 26), min_size=3, max_size=3))
def test_minors_match_canonical_mod_27(entries):
    a, b, d = entries
    ring = PrecisionRing(3, 3)
    X = [[a, b], [b, d]]
    try:
        cls = sym_class(X, ring)
    except PrecisionExhausted:
        return
    assert eldivs_via_minors(X, ring) == cls.eldivs
