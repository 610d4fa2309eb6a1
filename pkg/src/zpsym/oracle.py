"""Brute-force ground truth over small Z/p^K.

Nothing here calls into the canonical-form code: orbits come from closing
under a generating set of GL_n(Z/p^K), stabilisers and orthogonal groups from
exhaustive row-by-row search, elementary divisors from minors.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Hashable

import numpy as np

from .errors import BudgetExceeded, PrecisionExhausted
from .matrix import Matrix, det_mod, rank_mod_prime
from .padic import PrecisionRing, check_odd_prime, is_prime, nonresidue

DEFAULT_BUDGET = 10 ** 6


@dataclass
class TallyTable:
    counts: dict = field(default_factory=dict)
    total: int = 0

    def add(self, label: Hashable, count: int = 1):
        self.counts[label] = self.counts.get(label, 0) + count
        self.total += count

    def merge(self, other: "TallyTable") -> "TallyTable":
        out = TallyTable(dict(self.counts), self.total)
        for k, v in other.counts.items():
            out.counts[k] = out.counts.get(k, 0) + v
        out.total += other.total
        return out

    def check(self):
        assert sum(self.counts.values()) == self.total

    def to_json(self, label=str) -> list:
        return [{"label": label(k), "count": v} for k, v in sorted(self.counts.items(), key=lambda kv: str(kv[0]))]


def _check_budget(size: int, budget: int, what: str):
    if size > budget:
        raise BudgetExceeded(f"{what} needs {size} steps, budget is {budget}")


def gl_order(n: int, p: int, K: int) -> int:
    """|GL_n(Z/p^K)| = p^((K-1) n^2) |GL_n(F_p)|."""
    out = 1
    for i in range(n):
        out *= p ** n - p ** i
    return out * p ** ((K - 1) * n * n)


def _primitive_root(p: int, K: int) -> int:
    """Generator of (Z/p^K)^x (cyclic for odd p)."""
    order = (p - 1) * p ** (K - 1)
    factors = {q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)}
    if K > 1:
        factors.add(p)
    mod = p ** K
    for g in range(2, mod):
        if g % p and all(pow(g, order // q, mod) != 1 for q in factors):
            return g
    return 1  # p^K = 3 has generator 2 found above; unreachable otherwise


def _generators(n: int, p: int, K: int) -> list[Matrix]:
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                E = [row[:] for row in eye]
                E[i][j] = 1
                gens.append(E)
    D = [row[:] for row in eye]
    D[0][0] = _primitive_root(p, K)
    gens.append(D)
    for i in range(1, n):
        P = [row[:] for row in eye]
        P[0][0] = P[i][i] = 0
        P[0][i] = P[i][0] = 1
        gens.append(P)
    return gens


def _pack(X, n):
    return tuple(X[i][j] for i in range(n) for j in range(i, n))


def _unpack(t, n):
    X = [[0] * n for _ in range(n)]
    it = iter(t)
    for i in range(n):
        for j in range(i, n):
            X[i][j] = X[j][i] = next(it)
    return X


def _act(g: Matrix, X: Matrix, mod: int) -> Matrix:
    n = len(X)
    GX = [[sum(g[i][k] * X[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return [[sum(GX[i][k] * g[j][k] for k in range(n)) % mod for j in range(n)] for i in range(n)]


def enumerate_orbits(n: int, p: int, K: int, budget: int = DEFAULT_BUDGET) -> list[tuple[Matrix, int]]:
    """All GL_n(Z/p^K)-congruence orbits on symmetric matrices mod p^K.

    Returns (lexicographically smallest member, orbit size) pairs sorted by representative.
    """
    check_odd_prime(p)
    mod = p ** K
    n_states = mod ** (n * (n + 1) // 2)
    _check_budget(n_states, budget, "state space")
    _check_budget(gl_order(n, p, K), budget, "group order")
    gens = _generators(n, p, K)
    seen: set = set()
    orbits = []
    for start in product(range(mod), repeat=n * (n + 1) // 2):
        if start in seen:
            continue
        seen.add(start)
        members = [start]
        queue = deque([start])
        while queue:
            X = _unpack(queue.popleft(), n)
            for g in gens:
                Y = _pack(_act(g, X, mod), n)
                if Y not in seen:
                    seen.add(Y)
                    members.append(Y)
                    queue.append(Y)
        orbits.append((_unpack(min(members), n), len(members)))
    return orbits


def orbit_of(X: Matrix, p: int, K: int) -> set:
    """The orbit of one symmetric matrix, as packed upper-triangle tuples."""
    n, mod = len(X), p ** K
    gens = _generators(n, p, K)
    start = _pack([[x % mod for x in r] for r in X], n)
    seen = {start}
    queue = deque([start])
    while queue:
        Y = _unpack(queue.popleft(), n)
        for g in gens:
            Z = _pack(_act(g, Y, mod), n)
            if Z not in seen:
                seen.add(Z)
                queue.append(Z)
    return seen


def _count_solutions(D: np.ndarray, mod: int, p: int, budget: int, need_unit_det: bool) -> int:
    """#{U : U D U^T = D mod ``mod``}, optionally only invertible U, by row backtracking."""
    n = D.shape[0]
    _check_budget(n * mod ** n, budget, "row candidate space")
    vecs = np.array(list(product(range(mod), repeat=n)), dtype=np.int64)
    VD = vecs @ D % mod  # row v -> v D

    # diagonal condition u_i D u_i^T == D_ii, reused for every row
    norms = np.einsum("ij,ij->i", VD, vecs) % mod
    by_norm = {int(d): np.nonzero(norms == int(D[i, i]) % mod)[0] for i, d in enumerate(np.diag(D))}

    count = 0
    rows: list[int] = []

    def rec(i: int):
        nonlocal count
        if i == n:
            if not need_unit_det:
                count += 1
                return
            U = vecs[rows].tolist()
            if det_mod(U, p) != 0:
                count += 1
            return
        cand = by_norm[int(D[i, i])]
        for j, r in enumerate(rows):
            cand = cand[(VD[r] @ vecs[cand].T) % mod == D[j, i] % mod] if len(cand) else cand
        for c in cand.tolist():
            rows.append(c)
            rec(i + 1)
            rows.pop()

    rec(0)
    return count


def stabilizer_count(cls, p: int, K: int, budget: int = DEFAULT_BUDGET) -> int:
    """#{U in GL_n(Z/p^K) : U (Sigma S) U^T = Sigma S}, by exhaustive search."""
    ring = PrecisionRing(p, K)
    D = np.array(cls.matrix(ring), dtype=np.int64)
    return _count_solutions(D, ring.modulus, p, budget, need_unit_det=True)


def orth_count_mod(n: int, s: int, p: int, k: int, budget: int = DEFAULT_BUDGET) -> int:
    """|O_n^s(Z/p^k)|: U with U 1^s U^T = 1^s, where 1^- has r in the last slot."""
    check_odd_prime(p)
    D = np.eye(n, dtype=np.int64)
    if s == -1:
        D[n - 1, n - 1] = nonresidue(p)
    return _count_solutions(D, p ** k, p, budget, need_unit_det=False)


def stabilizer_closed_form(cls, p: int, K: int) -> int:
    """prod alpha_{m_i}^{s_i} * p^(K n(n-1)/2) * prod_i p^(k_i (n-i+1))."""
    from .densities.groups import alpha_ns

    n = cls.n
    val = 1
    for k, m in cls.multiplicities.items():
        val *= alpha_ns(m, cls.sign_map[k], p)
    val *= p ** (K * n * (n - 1) // 2)
    val *= p ** sum(k * (n - i) for i, k in enumerate(cls.eldivs))
    assert val.denominator == 1
    return int(val)


def _val(x: int, p: int, K: int) -> int:
    x %= p ** K
    if x == 0:
        return K
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def eldivs_via_minors(X, ring: PrecisionRing) -> tuple[int, ...]:
    """Elementary divisor exponents from min valuations of j x j minors."""
    A = [[int(x) % ring.modulus for x in r] for r in X]
    n_rows, n_cols = len(A), len(A[0])
    n = min(n_rows, n_cols)
    if n > 5:
        raise ValueError("minor enumeration is limited to n <= 5")
    p, K = ring.p, ring.K
    prefix = [0]
    for j in range(1, n + 1):
        best = K
        for rows in combinations(range(n_rows), j):
            for cols in combinations(range(n_cols), j):
                minor = det_mod([[A[r][c] for c in cols] for r in rows], ring.modulus)
                best = min(best, _val(minor, p, K))
                if best == prefix[-1]:
                    break
            if best == prefix[-1]:
                break
        if best >= K:
            raise PrecisionExhausted(f"prefix sum of the first {j} exponents reaches K={K}")
        prefix.append(best)
    return tuple(b - a for a, b in zip(prefix, prefix[1:]))


def rank_tally(n: int, m_cols: int, q: int, budget: int = DEFAULT_BUDGET) -> TallyTable:
    """Exact rank counts over all n x m matrices over F_q (q prime)."""
    if not is_prime(q):
        raise ValueError("exhaustive rank tally needs q prime")
    _check_budget(q ** (n * m_cols), budget, "matrix space")
    out = TallyTable()
    for entries in product(range(q), repeat=n * m_cols):
        M = [list(entries[i * m_cols:(i + 1) * m_cols]) for i in range(n)]
        out.add(rank_mod_prime(M, q))
    return out


def sym_rank_tally(n: int, p: int, budget: int = DEFAULT_BUDGET) -> TallyTable:
    """Exact rank counts over all symmetric n x n matrices over F_p."""
    check_odd_prime(p)
    _check_budget(p ** (n * (n + 1) // 2), budget, "matrix space")
    out = TallyTable()
    for entries in product(range(p), repeat=n * (n + 1) // 2):
        out.add(rank_mod_prime(_unpack(entries, n), p))
    return out
