from fractions import Fraction as F

import mpmath
import pytest
from sympy import primerange

from zpsym.localglobal import (
    INF, density_first_divisors_one, density_squarefree_det, local_first_divisors_one,
    local_squarefree_det, prime_tail_sum, primes_upto, zeta_product,
)


def test_primes_upto():
    assert primes_upto(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_upto(10 ** 4) == list(primerange(2, 10 ** 4 + 1))


def test_prime_tail_sum_is_an_upper_bound():
    for N in (10, 100, 1000):
        partial = sum(1.0 / (p * p) for p in primerange(N + 1, 10 ** 6))
        assert partial + 1e-6 < float(prime_tail_sum(N))  # sum over n > 10^6 of n^-2 is < 1e-6


def test_local_factors():
    for p in (3, 5, 7):
        assert local_squarefree_det(1, p) == 1 - F(1, p * p)
        for n in range(2, 8):
            assert 0 < local_first_divisors_one(n, p) < 1
            assert local_squarefree_det(n, p) < local_first_divisors_one(n, p)


def test_local_factor_converges_in_n():
    p = 3
    with mpmath.workdps(40):
        lim = mpmath.nprod(lambda i: 1 - mpmath.mpf(p) ** (-(2 * i + 1)), [1, mpmath.inf])
        errs = [abs(mpmath.mpf(local_first_divisors_one(n, p).numerator) / local_first_divisors_one(n, p).denominator - lim)
                for n in range(2, 14)]
    assert all(b <= a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-5


def test_square_free_n1_is_inverse_zeta2():
    r = density_squarefree_det(1, 10 ** 4)
    assert r.contains(6 / mpmath.pi ** 2)
    assert abs(r.mid - float(6 / mpmath.pi ** 2)) < 1e-4


def test_intervals_are_nested_in_cutoff():
    coarse = density_first_divisors_one(INF, 10 ** 3)
    fine = density_first_divisors_one(INF, 10 ** 4)
    assert coarse.lower <= fine.lower and fine.upper <= coarse.upper
    assert coarse.near(0.7935, 1e-3)
    sq = density_squarefree_det(INF, 10 ** 4)
    assert sq.near(0.4824, 1e-3)
    assert sq.upper < fine.lower


def test_without_p2():
    a = density_first_divisors_one(3, 10 ** 3, assume_p2=False)
    b = density_first_divisors_one(3, 10 ** 3, assume_p2=True)
    assert b.upper < a.upper
    assert a.to_json()["assume_p2"] is False


def test_zeta_product():
    lo, hi = zeta_product([2, 3], 10 ** 3)
    target = 1 / (mpmath.zeta(2) * mpmath.zeta(3))
    assert lo <= target <= hi
    with pytest.raises(ValueError):
        zeta_product([1])


def test_argument_checks():
    with pytest.raises(ValueError):
        density_first_divisors_one(1)
    with pytest.raises(ValueError):
        density_squarefree_det(0)
    with pytest.raises(ValueError):
        density_squarefree_det(2, cutoff=1)
