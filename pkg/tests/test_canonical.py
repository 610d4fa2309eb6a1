import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zpsym.canonical import (
    QpClass, SymClass, canonical_matrix, certifies, isotropic_by_invariants, isotropy_by_invariants,
    isotropy_search, qp_class, rank_d, rank_mod_p, smith_normal_form, sym_canonical,
    sym_canonical_check, sym_class,
)
from zpsym.errors import PrecisionExhausted, SingularClass
from zpsym.matrix import congruence, det_mod, matmul, random_invertible
from zpsym.montecarlo import sample_sym_matrix
from zpsym.oracle import eldivs_via_minors
from zpsym.padic import ONE, P, PR, R, PrecisionRing, RandomStream, SquareClass, chi, minus_one


def test_snf_examples():
    assert smith_normal_form([[1, 0], [0, 3]], PrecisionRing(3, 3))[0] == (0, 1)
    assert smith_normal_form([[0, 1], [1, 0]], PrecisionRing(3, 2))[0] == (0, 0)
    assert smith_normal_form([[3, 3], [3, 3]], PrecisionRing(3, 3))[0] == (1, math.inf)


def test_snf_reconstructs_rectangular():
    ring = PrecisionRing(5, 3)
    A = [[5, 10, 3], [25, 0, 15]]
    exps, U, V = smith_normal_form(A, ring)
    S = [[0] * 3 for _ in range(2)]
    for i, k in enumerate(exps):
        S[i][i] = 0 if k == math.inf else 5 ** k
    assert matmul(matmul(U, S, ring.modulus), V, ring.modulus) == [[x % 125 for x in r] for r in A]


def test_canonical_examples():
    ring = PrecisionRing(3, 3)
    cls, U = sym_canonical([[1, 0, 0], [0, 1, 0], [0, 0, 1]], ring)
    assert cls == SymClass((0, 0, 0), ((0, 1),))
    cls, _ = sym_canonical([[1, 0], [0, 2]], PrecisionRing(3, 2))
    assert cls == SymClass((0, 0), ((0, -1),))
    cls, U = sym_canonical([[0, 1], [1, 0]], ring)
    assert cls == SymClass((0, 0), ((0, -1),))
    assert sym_canonical_check([[0, 1], [1, 0]], cls, U, ring)


def test_canonical_matrix_has_r_last():
    ring = PrecisionRing(5, 3)
    cls = SymClass.from_lists((0, 0, 1), (-1, 1))
    assert canonical_matrix(cls, ring) == [[1, 0, 0], [0, 2, 0], [0, 0, 5]]


def test_precision_rule_raises():
    with pytest.raises(PrecisionExhausted):
        sym_canonical([[3, 0], [0, 9]], PrecisionRing(3, 3))
    with pytest.raises(PrecisionExhausted):
        sym_class([[3, 0], [0, 0]], PrecisionRing(3, 4))


def test_symclass_validation():
    with pytest.raises(ValueError):
        SymClass((1, 0), ((0, 1), (1, 1)))
    with pytest.raises(ValueError):
        SymClass((0, 1), ((0, 1),))
    with pytest.raises(ValueError):
        SymClass.from_lists((0, 0), (1, 1))
    assert SymClass.from_lists((0, 1), (1, -1)).label() == "(0,1|+,-)"


def test_qp_class_examples():
    assert qp_class(SymClass((0, 0), ((0, 1),)), 3) == QpClass(2, ONE, 1)
    assert qp_class(SymClass((1,), ((1, -1),)), 3) == QpClass(1, PR, 1)
    assert qp_class(SymClass.from_lists((0, 1), (1, 1)), 3) == QpClass(2, P, 1)
    with pytest.raises(SingularClass):
        qp_class(SymClass((0, math.inf), ((0, 1), (math.inf, 1))), 3)


def test_rank_examples():
    assert rank_mod_p([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3) == 3
    assert rank_mod_p([[0, 0], [0, 0]], 3) == 0
    assert rank_mod_p([[1, 2], [2, 4]], 3) == 1
    ring = PrecisionRing(3, 4)
    assert rank_d([[1, 0], [0, 1]], 2, ring) == 2
    assert rank_d([[3, 0], [0, 3]], 1, ring) == 0
    assert rank_d([[1, 0, 0], [0, 3, 0], [0, 0, 9]], 2, ring) == 2
    with pytest.raises(PrecisionExhausted):
        rank_d([[1]], 5, ring)


def test_isotropy_rules():
    assert isotropic_by_invariants(2, R, 1, 3)  # -1 is r for p = 3
    assert not isotropic_by_invariants(2, ONE, 1, 3)
    assert not isotropic_by_invariants(4, ONE, -1, 3)
    assert isotropic_by_invariants(5, PR, -1, 7)
    assert not isotropic_by_invariants(1, ONE, 1, 5)


def test_isotropy_search_examples():
    cert = isotropy_search([[1, 0], [0, -1]], PrecisionRing(5, 4))
    assert cert is not None and cert.witness == (1, 1)
    assert isotropy_search([[1, 0], [0, 1]], PrecisionRing(3, 4)) is None
    ring = PrecisionRing(3, 4)
    X = [[1, 0, 0], [0, -1, 0], [0, 0, 3]]
    cert = isotropy_search(X, ring)
    assert cert is not None and cert.witness[2] == 0
    assert certifies([[x % 81 for x in r] for r in X], cert.witness, ring) is not None


sizes = st.integers(1, 4)
primes = st.sampled_from([3, 5])


@settings(max_examples=150, deadline=None)
@given(sizes, primes, st.integers(0, 2 ** 32))
def test_canonical_roundtrip_and_congruence_invariance(n, p, seed):
    ring = PrecisionRing(p, 6)
    rng = RandomStream(seed)
    X = sample_sym_matrix(n, ring, rng)
    try:
        cls, U = sym_canonical(X, ring)
    except PrecisionExhausted:
        return
    assert sym_canonical_check(X, cls, U, ring)
    assert det_mod(U, p) != 0
    V = random_invertible(n, ring, rng)
    assert sym_class(congruence(V, X, ring.modulus), ring) == cls
    assert rank_mod_p(X, p) == cls.eldivs.count(0)
    assert eldivs_via_minors(X, ring) == cls.eldivs
    q = qp_class(cls, p)
    assert q.disc.odd == cls.weight % 2
    if n == 1:
        assert q.hasse == 1


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 4), primes, st.integers(0, 2 ** 32))
def test_search_never_contradicts_invariants(n, p, seed):
    ring = PrecisionRing(p, 8)
    X = sample_sym_matrix(n, ring, RandomStream(seed))
    try:
        cls = sym_class(X, ring)
    except PrecisionExhausted:
        return
    verdict = isotropy_by_invariants(qp_class(cls, p), p)
    cert = isotropy_search(X, ring)
    if cert is not None:
        assert verdict
        assert certifies(X, cert.witness, ring) is not None
    if n == 2:
        d = qp_class(cls, p).disc
        assert verdict == (d == minus_one(p))
