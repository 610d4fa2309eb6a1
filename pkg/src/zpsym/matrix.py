"""Dense integer matrices modulo p^K, stored as lists of lists of Python ints."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import NotAUnit
from .padic import PrecisionRing, RandomStream, sample_uniform

Matrix = list[list[int]]


def as_matrix(A, ring: PrecisionRing) -> Matrix:
    """Copy ``A`` (any nested sequence or array of ints) reduced mod p^K."""
    rows = np.asarray(A, dtype=object).tolist() if not isinstance(A, list) else A
    if not rows or not isinstance(rows[0], (list, tuple)):
        raise ValueError("matrix must be a non-empty 2-d array")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise ValueError("matrix rows must be non-empty and of equal length")
    m = ring.modulus
    return [[int(x) % m for x in r] for r in rows]


def as_symmetric(A, ring: PrecisionRing) -> Matrix:
    X = as_matrix(A, ring)
    n = len(X)
    if any(len(r) != n for r in X):
        raise ValueError("symmetric matrix must be square")
    for i in range(n):
        for j in range(i):
            if X[i][j] != X[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i}, {j})")
    return X


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def diag(entries: Sequence[int], modulus: int | None = None) -> Matrix:
    n = len(entries)
    out = [[0] * n for _ in range(n)]
    for i, e in enumerate(entries):
        out[i][i] = e % modulus if modulus else e
    return out


def transpose(A: Matrix) -> Matrix:
    return [list(c) for c in zip(*A)]


def matmul(A: Matrix, B: Matrix, modulus: int) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) % modulus for col in Bt] for row in A]


def congruence(V: Matrix, X: Matrix, modulus: int) -> Matrix:
    """V X V^T mod ``modulus``."""
    return matmul(matmul(V, X, modulus), transpose(V), modulus)


def det_mod(A: Matrix, modulus: int) -> int:
    """Determinant via Bareiss fraction-free elimination over Z, reduced at the end."""
    n = len(A)
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return (sign * M[n - 1][n - 1]) % modulus


def inverse_mod(A: Matrix, ring: PrecisionRing) -> Matrix:
    """Inverse over Z/p^K by Gauss-Jordan with unit pivots."""
    n = len(A)
    m, p = ring.modulus, ring.p
    M = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] % p), None)
        if piv is None:
            raise NotAUnit("matrix is not invertible modulo p")
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], -1, m)
        M[c] = [x * inv % m for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % m for x, y in zip(M[i], M[c])]
    return [r[n:] for r in M]


def rank_mod_prime(A: Matrix, p: int) -> int:
    """Rank over F_p (any prime, including 2)."""
    M = [[x % p for x in r] for r in A]
    rows, cols = len(M), len(M[0])
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        for i in range(rows):
            if i != rank and M[i][c]:
                f = M[i][c] * inv % p
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def random_matrix(n_rows: int, n_cols: int, ring: PrecisionRing, rng: RandomStream) -> Matrix:
    vals = sample_uniform(ring, rng, n_rows * n_cols)
    return [vals[i * n_cols:(i + 1) * n_cols] for i in range(n_rows)]


def random_invertible(n: int, ring: PrecisionRing, rng: RandomStream) -> Matrix:
    while True:
        V = random_matrix(n, n, ring, rng)
        if det_mod(V, ring.p) != 0:
            return V
