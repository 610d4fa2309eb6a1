"""The twelve acceptance criteria, one test each.

Three criteria do not hold as stated and are marked strict xfail; each has a
companion test pinning exactly which sub-checks fail and a test of the
statement that does hold. Run this file directly for the plain report.
"""

from fractions import Fraction as F
from functools import lru_cache

import pytest

from conftest import ACCEPTANCE_LINES
from zpsym.acceptance import CRITERIA, STATED_ISOTROPY, TEST_PARTITIONS, det_ratios, run_all
from zpsym.densities import finite_partition_prob, isotropy_prob, limit_partition_prob

KNOWN_FAILURES = {
    7: "stated n=3 and n=4 isotropy values are smaller than the true ones (29/32, 7717/7744 at p=3)",
    8: "the normalised determinant ratio increases towards 1 instead of decreasing",
    9: "|f_n - f| alternates with the parity of n - len(lambda)",
}


@lru_cache(maxsize=None)
def result(ident):
    r = CRITERIA[ident - 1]()
    ACCEPTANCE_LINES[ident] = r.line()
    print(r.line())
    return r


def _param(i):
    marks = [pytest.mark.slow] if i in (7, 11, 12) else []
    if i in KNOWN_FAILURES:
        marks.append(pytest.mark.xfail(strict=True, reason=KNOWN_FAILURES[i]))
    return pytest.param(i, marks=marks, id=f"criterion_{i:02d}")


@pytest.mark.parametrize("ident", [_param(i) for i in range(1, 13)])
def test_criterion(ident):
    r = result(ident)
    assert r.ok, r.line()


def _failed(ident):
    return sorted(k for k, v in result(ident).checks.items() if not v)


def test_criterion_7_fails_only_on_stated_values():
    failed = _failed(7)
    assert failed and all("23/32" in k or "7015/7744" in k for k in failed)
    assert len(failed) == 4  # two equalities, two capped brackets


def test_isotropy_true_values():
    assert isotropy_prob(3, 3) == F(29, 32) != STATED_ISOTROPY[3, 3]
    assert isotropy_prob(4, 3) == F(7717, 7744) != STATED_ISOTROPY[4, 3]


def test_criterion_8_fails_only_on_direction():
    failed = _failed(8)
    assert len(failed) == 1 and failed[0].startswith("ratio non-increasing")


def test_det_ratio_approaches_one():
    ratios = det_ratios()
    gaps = [abs(1 - r) for r in ratios]
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    assert all(r < 1 for r in ratios)
    assert gaps[-1] < F(1, 200)


def test_criterion_9_fails_only_on_monotonicity():
    failed = _failed(9)
    assert len(failed) == len(TEST_PARTITIONS)
    assert all(k.startswith("|f_n - f| non-increasing") for k in failed)


@pytest.mark.parametrize("lam", [(), *TEST_PARTITIONS])
def test_partition_error_monotone_per_parity(lam):
    p = 3
    lim = limit_partition_prob(lam, p)
    errs = {n: abs(finite_partition_prob(lam, n, p) - lim.mid) for n in range(len(lam), 16)}
    for start in (len(lam), len(lam) + 1):
        seq = [errs[n] for n in range(start, 16, 2)]
        assert all(b < a for a, b in zip(seq, seq[1:]))
    assert errs[15] < F(1, 10 ** 6)


if __name__ == "__main__":
    import sys

    sys.exit(0 if all(r.ok for r in run_all()) else 1)
