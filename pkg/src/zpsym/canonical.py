"""Smith normal form, the symmetric canonical form X = U (Sigma S) U^T over Z/p^K,
Q_p-invariants, ranks, and isotropy decisions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import PrecisionExhausted, SingularClass
from .matrix import (
    Matrix,
    as_matrix,
    as_symmetric,
    congruence,
    identity,
    inverse_mod,
    rank_mod_prime,
    transpose,
)
from .padic import (
    ONE,
    PrecisionRing,
    SquareClass,
    chi,
    hilbert,
    minus_one,
    nonresidue,
    sqrt_mod,
    val_p,
)

INF = math.inf


@dataclass(frozen=True)
class SymClass:
    """GL_n(Z_p)-congruence class: elementary divisor exponents plus block signatures.

    ``eldivs`` is non-decreasing; ``signs`` holds one ``(k, +1/-1)`` pair per
    distinct exponent k, in increasing order of k.
    """

    eldivs: tuple
    signs: tuple

    def __post_init__(self):
        e = tuple(self.eldivs)
        if any(a > b for a, b in zip(e, e[1:])):
            raise ValueError(f"elementary divisors must be non-decreasing: {e}")
        if any((x != INF and (int(x) != x or x < 0)) for x in e):
            raise ValueError(f"exponents must be non-negative integers: {e}")
        e = tuple(x if x == INF else int(x) for x in e)
        s = tuple((int(k) if k != INF else k, int(v)) for k, v in self.signs)
        if [k for k, _ in s] != sorted(set(e)):
            raise ValueError(f"signatures {s} must be keyed exactly by the blocks of {e}")
        if any(v not in (1, -1) for _, v in s):
            raise ValueError("signatures must be +1 or -1")
        object.__setattr__(self, "eldivs", e)
        object.__setattr__(self, "signs", s)

    @classmethod
    def from_lists(cls, eldivs: Sequence[int], signs: Sequence[int]) -> "SymClass":
        """Build from exponents and one sign per distinct exponent (increasing)."""
        blocks = sorted(set(eldivs))
        if len(signs) != len(blocks):
            raise ValueError(f"need {len(blocks)} signatures for blocks {blocks}, got {len(signs)}")
        return cls(tuple(sorted(eldivs)), tuple(zip(blocks, signs)))

    @property
    def n(self) -> int:
        return len(self.eldivs)

    @property
    def multiplicities(self) -> dict:
        out: dict = {}
        for k in self.eldivs:
            out[k] = out.get(k, 0) + 1
        return out

    @property
    def sign_map(self) -> dict:
        return dict(self.signs)

    @property
    def weight(self):
        return sum(self.eldivs)

    @property
    def finite(self) -> bool:
        return all(k != INF for k in self.eldivs)

    def diagonal(self, p: int) -> list[tuple[int, int]]:
        """Diagonal of Sigma S as (exponent, unit) pairs; r sits last in a minus block."""
        r = nonresidue(p)
        out = []
        mult, sg = self.multiplicities, self.sign_map
        for k in sorted(mult):
            units = [1] * mult[k]
            if sg[k] == -1:
                units[-1] = r
            out.extend((k, u) for u in units)
        return out

    def matrix(self, ring: PrecisionRing) -> Matrix:
        if not self.finite:
            raise SingularClass("class has an infinite elementary divisor")
        n = self.n
        out = [[0] * n for _ in range(n)]
        for i, (k, u) in enumerate(self.diagonal(ring.p)):
            out[i][i] = ring.p ** k * u % ring.modulus
        return out

    def label(self) -> str:
        ks = ",".join("inf" if k == INF else str(k) for k in self.eldivs)
        ss = ",".join("+" if v > 0 else "-" for _, v in self.signs)
        return f"({ks}|{ss})"

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class QpClass:
    """GL_n(Q_p)-class of a nonsingular form: size, discriminant and Hasse invariant."""

    n: int
    disc: SquareClass
    hasse: int


def _val(x: int, p: int, K: int) -> int:
    if x == 0:
        return K
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(A, ring: PrecisionRing, compute_uv: bool = True):
    """Elementary divisors of a (possibly rectangular) matrix over Z/p^K.

    Returns ``(eldivs, U, V)`` with ``U diag(p^k) V == A (mod p^K)``; exponents
    that reach K are reported as ``math.inf``.  With ``compute_uv=False`` the
    transforms are skipped and returned as ``None``.
    """
    p, K, mod = ring.p, ring.K, ring.modulus
    M = as_matrix(A, ring)
    nr, nc = len(M), len(M[0])
    U = identity(nr) if compute_uv else None
    V = identity(nc) if compute_uv else None
    exps = []
    for t in range(min(nr, nc)):
        best, bi, bj = K, -1, -1
        for i in range(t, nr):
            row = M[i]
            for j in range(t, nc):
                x = row[j]
                if x:
                    v = _val(x, p, K)
                    if v < best:
                        best, bi, bj = v, i, j
                        if v == 0:
                            break
            if best == 0:
                break
        if best == K:
            exps.extend([INF] * (min(nr, nc) - t))
            break
        exps.append(best)
        if bi != t:
            M[t], M[bi] = M[bi], M[t]
            if compute_uv:
                for r in U:
                    r[t], r[bi] = r[bi], r[t]
        if bj != t:
            for r in M:
                r[t], r[bj] = r[bj], r[t]
            if compute_uv:
                V[t], V[bj] = V[bj], V[t]
        pk = p ** best
        u = M[t][t] // pk
        uinv = pow(u, -1, mod)
        # normalise the pivot to p^best: row t *= uinv, so U col t *= u
        M[t] = [x * uinv % mod for x in M[t]]
        if compute_uv:
            for r in U:
                r[t] = r[t] * u % mod
        for i in range(t + 1, nr):
            if M[i][t]:
                c = M[i][t] // pk
                M[i] = [(x - c * y) % mod for x, y in zip(M[i], M[t])]
                if compute_uv:
                    for r in U:
                        r[t] = (r[t] + c * r[i]) % mod
        for j in range(t + 1, nc):
            if M[t][j]:
                c = M[t][j] // pk
                for r in M:
                    r[j] = (r[j] - c * r[t]) % mod
                if compute_uv:
                    V[t] = [(x + c * y) % mod for x, y in zip(V[t], V[j])]
    return tuple(exps), U, V


# ---------------------------------------------------------------------------
# Symmetric canonical form


def _diagonalize(X: Matrix, p: int, K: int, mod: int, track: bool):
    """Congruence-diagonalise a symmetric matrix; returns (diagonal, U or None)
    with X == U diag U^T.  Works on the upper triangle only."""
    n = len(X)
    M = [r[:] for r in X]
    U = identity(n) if track else None
    for t in range(n):
        best, bi, bj = K, -1, -1
        dbest, di = K, -1
        for i in range(t, n):
            row = M[i]
            for j in range(i, n):
                x = row[j]
                if x:
                    v = _val(x, p, K)
                    if v < best:
                        best, bi, bj = v, i, j
                    if i == j and v < dbest:
                        dbest, di = v, i
        if best == K:
            for i in range(t, n):
                for j in range(t, n):
                    M[i][j] = 0
            break
        if dbest == best:
            piv = di
        else:
            i, j = bi, bj
            c = 1
            if _val((M[i][i] + 2 * M[i][j] + M[j][j]) % mod, p, K) != best:
                c = -1
            # row i += c row j, col i += c col j
            for k in range(n):
                M[i][k] = (M[i][k] + c * M[j][k]) % mod
            for k in range(n):
                M[k][i] = (M[k][i] + c * M[k][j]) % mod
            if track:
                for r in U:
                    r[j] = (r[j] - c * r[i]) % mod
            piv = i
        if piv != t:
            M[t], M[piv] = M[piv], M[t]
            for r in M:
                r[t], r[piv] = r[piv], r[t]
            if track:
                for r in U:
                    r[t], r[piv] = r[piv], r[t]
        pk = p ** best
        d = M[t][t]
        uinv = pow(d // pk, -1, mod)
        coeffs = []
        for i in range(t + 1, n):
            x = M[t][i]
            coeffs.append((x // pk) * uinv % mod if x else 0)
        Mt = M[t]
        for a, i in enumerate(range(t + 1, n)):
            ci = coeffs[a]
            for b, j in enumerate(range(i, n)):
                cj = coeffs[a + b]
                if ci or cj:
                    val = (M[i][j] - ci * Mt[j] - cj * Mt[i] + ci * cj * d) % mod
                    M[i][j] = val
                    M[j][i] = val
        for i in range(t + 1, n):
            M[t][i] = M[i][t] = 0
        if track:
            for r in U:
                s = r[t]
                for a, i in enumerate(range(t + 1, n)):
                    if coeffs[a]:
                        s += coeffs[a] * r[i]
                r[t] = s % mod
    return [M[i][i] for i in range(n)], U


def _class_from_diagonal(dg, p, K):
    """Sorted (exponent, unit) data and the SymClass of a diagonal."""
    entries = []
    for idx, d in enumerate(dg):
        v = _val(d, p, K)
        entries.append((v if v < K else INF, d // p ** v if v < K else 0, idx))
    entries.sort(key=lambda e: e[0])
    exps = tuple(e[0] for e in entries)
    signs = []
    for k, grp in itertools.groupby(entries, key=lambda e: e[0]):
        if k == INF:
            signs.append((k, 1))
            continue
        s = 1
        for _, u, _ in grp:
            s *= chi(u, p)
        signs.append((k, s))
    return entries, SymClass(exps, tuple(signs))


def _require_precision(cls: SymClass, K: int):
    if not cls.finite:
        raise PrecisionExhausted(f"matrix is singular modulo p^{K}; raise K to resolve it")
    if cls.weight > K - 1:
        raise PrecisionExhausted(
            f"determinant valuation {cls.weight} needs precision K >= {cls.weight + 1}, have K={K}"
        )


def sym_class(X, ring: PrecisionRing) -> SymClass:
    """Congruence class of a symmetric matrix, without computing the transform."""
    Xm = as_symmetric(X, ring)
    dg, _ = _diagonalize(Xm, ring.p, ring.K, ring.modulus, track=False)
    _, cls = _class_from_diagonal(dg, ring.p, ring.K)
    _require_precision(cls, ring.K)
    return cls


def _binary_to_one(ui: int, uj: int, p: int, e: int) -> tuple[int, int]:
    """(x, y) with ui x^2 + uj y^2 == 1 (mod p^e)."""
    ujinv = pow(uj, -1, p)
    for x in range(p):
        t = (1 - ui * x * x) * ujinv % p
        if t == 0:
            return sqrt_mod(pow(ui, -1, p ** e), p, e), 0
        if chi(t, p) == 1:
            me = p ** e
            y = sqrt_mod((1 - ui * x * x) * pow(uj, -1, me) % me, p, e)
            return x, y
    raise AssertionError("a nondegenerate binary form over F_p represents 1")


def sym_canonical(X, ring: PrecisionRing):
    """Canonical form of a symmetric matrix over Z/p^K.

    Returns ``(cls, U)`` with ``U @ cls.matrix(ring) @ U.T == X (mod p^K)`` and
    ``det U`` a unit.  Raises PrecisionExhausted unless the determinant has
    valuation at most K - 1, the range where classes mod p^K are Z_p-classes.
    """
    p, K, mod = ring.p, ring.K, ring.modulus
    Xm = as_symmetric(X, ring)
    n = len(Xm)
    dg, U = _diagonalize(Xm, p, K, mod, track=True)
    entries, cls = _class_from_diagonal(dg, p, K)
    _require_precision(cls, K)
    # reorder coordinates by exponent
    order = [e[2] for e in entries]
    U = [[r[j] for j in order] for r in U]
    D = [dg[j] for j in order]
    r_ns = nonresidue(p)
    for k, grp in itertools.groupby(range(n), key=lambda i: entries[i][0]):
        idx = list(grp)
        e = K - k
        me = p ** e
        pk = p ** k
        units = [(D[i] // pk) % me for i in idx]
        for a in range(len(idx) - 1):
            i, j = idx[a], idx[a + 1]
            ui, uj = units[a], units[a + 1]
            x, y = _binary_to_one(ui, uj, p, e)
            # new basis rows v = (x, y), w = (-uj y, ui x): diag(1, ui uj)
            E = ((x, y), (-uj * y % mod, ui * x % mod))
            det = (E[0][0] * E[1][1] - E[0][1] * E[1][0]) % mod
            dinv = pow(det, -1, mod)
            for row in U:
                ci, cj = row[i], row[j]
                row[i] = (E[1][1] * ci - E[1][0] * cj) * dinv % mod
                row[j] = (-E[0][1] * ci + E[0][0] * cj) * dinv % mod
            units[a] = 1
            units[a + 1] = ui * uj % me
        target = r_ns if chi(units[-1], p) == -1 else 1
        c = sqrt_mod(target * pow(units[-1], -1, me) % me, p, e)
        cinv = pow(c, -1, mod)
        last = idx[-1]
        for row in U:
            row[last] = row[last] * cinv % mod
    return cls, U


def canonical_matrix(cls: SymClass, ring: PrecisionRing) -> Matrix:
    return cls.matrix(ring)


# ---------------------------------------------------------------------------
# Q_p invariants


def qp_class(cls: SymClass, p: int) -> QpClass:
    """Discriminant and Hasse invariant of the diagonal form Sigma S."""
    if not cls.finite:
        raise SingularClass("Q_p invariants need finite elementary divisors")
    items = [SquareClass(k % 2, chi(u, p)) for k, u in cls.diagonal(p)]
    disc = ONE
    for a in items:
        disc = disc * a
    hasse = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            hasse *= hilbert(items[i], items[j], p)
    return QpClass(cls.n, disc, hasse)


def isotropic_by_invariants(n: int, disc: SquareClass, hasse: int, p: int) -> bool:
    """Isotropy of a nonsingular n-ary form over Q_p from (d, c)."""
    if n <= 1:
        return False
    if n == 2:
        return disc == minus_one(p)
    if n == 3:
        return hasse == hilbert(minus_one(p), disc, p)
    if n == 4:
        return not (disc == ONE and hasse == -1)
    return True


def isotropy_by_invariants(c: QpClass, p: int) -> bool:
    return isotropic_by_invariants(c.n, c.disc, c.hasse, p)


# ---------------------------------------------------------------------------
# ranks


def rank_mod_p(X, p: int) -> int:
    """Rank of the reduction mod p."""
    return rank_mod_prime([[int(x) for x in r] for r in X], p)


def rank_d(X, m: int, ring: PrecisionRing) -> int:
    """Determinantal rank mod p^m: largest j with k_1 + ... + k_j < m."""
    if m > ring.K:
        raise PrecisionExhausted(f"rank mod p^{m} needs precision K >= {m}, have {ring.K}")
    exps, _, _ = smith_normal_form(X, ring, compute_uv=False)
    total, j = 0, 0
    for k in exps:
        total += k
        if total >= m:
            break
        j += 1
    return j


# ---------------------------------------------------------------------------
# isotropy search


@dataclass(frozen=True)
class IsotropyCertificate:
    """Primitive vector v with val Q(v) >= 2s + 1 where s = val(X v); Hensel lifts it."""

    witness: tuple
    gradient_valuation: int


def quad_value(X: Matrix, v: Sequence[int], modulus: int) -> int:
    n = len(X)
    return sum(X[i][j] * v[i] * v[j] for i in range(n) for j in range(n)) % modulus


def certifies(X: Matrix, v: Sequence[int], ring: PrecisionRing) -> int | None:
    """Gradient valuation s if v certifies isotropy of X, else None."""
    p, K, mod = ring.p, ring.K, ring.modulus
    if all(x % p == 0 for x in v):
        return None
    Xv = [sum(a * b for a, b in zip(row, v)) % mod for row in X]
    s = min(val_p(x, ring) for x in Xv)
    if 2 * s + 1 > K:
        return None
    if val_p(quad_value(X, v, mod), ring) >= 2 * s + 1:
        return s
    return None


def _smooth_zero_mod_p(X: Matrix, p: int):
    n = len(X)
    Xp = [[x % p for x in r] for r in X]
    for v in itertools.product(range(p), repeat=n):
        # primitive up to scaling: first nonzero coordinate is 1
        first = next((x for x in v if x), None)
        if first != 1:
            continue
        if quad_value(Xp, v, p):
            continue
        if any(sum(a * b for a, b in zip(row, v)) % p for row in Xp):
            return v
    return None


def isotropy_search(X, ring: PrecisionRing, depth: int | None = None):
    """Look for a Hensel-liftable zero of the form v^T X v.

    Returns an IsotropyCertificate, or None when no certificate was found
    within ``depth`` rescaling steps (default 2K).  None means "unknown", not
    "anisotropic".
    """
    p, K, mod = ring.p, ring.K, ring.modulus
    Xm = as_symmetric(X, ring)
    n = len(Xm)
    if n > 4:
        raise ValueError("isotropy_search is limited to n <= 4")
    v = _smooth_zero_mod_p(Xm, p)
    if v is not None:
        s = certifies(Xm, v, ring)
        if s is not None:
            return IsotropyCertificate(tuple(v), s)
    try:
        cls, U = sym_canonical(Xm, ring)
    except PrecisionExhausted:
        return None
    diag_data = cls.diagonal(p)
    depth = 2 * K if depth is None else depth
    scale = [0] * n  # coordinate i is p^scale[i] * y_i
    UinvT = transpose(inverse_mod(U, ring))
    for _ in range(depth + 1):
        rel = [k + 2 * e for (k, _), e in zip(diag_data, scale)]
        low = min(rel)
        unimod = [i for i in range(n) if rel[i] == low]
        units = [diag_data[i][1] for i in unimod]
        y = _unimodular_zero(units, p)
        if y is not None:
            y = _lift_zero(units, list(y), p, K)
            w = [0] * n
            for i, yi in zip(unimod, y):
                w[i] = yi * p ** scale[i] % mod
            cand = [sum(a * b for a, b in zip(row, w)) % mod for row in UinvT]
            t = min(_val(c, p, K) for c in cand)
            if 0 < t < K:
                cand = [c // p ** t for c in cand]
            s = certifies(Xm, cand, ring)
            return IsotropyCertificate(tuple(cand), s) if s is not None else None
        for i in unimod:
            scale[i] += 1
    return None


def _lift_zero(units: list[int], y: list[int], p: int, K: int) -> list[int]:
    """Adjust one coordinate so that sum u_i y_i^2 == 0 mod p^K (y_i a unit there)."""
    i = next(a for a, t in enumerate(y) if t % p)
    mod = p ** K
    rest = sum(u * t * t for a, (u, t) in enumerate(zip(units, y)) if a != i)
    target = -rest * pow(units[i], -1, mod) % mod
    y[i] = sqrt_mod(target, p, K)
    return y


def _unimodular_zero(units: list[int], p: int):
    """Nontrivial zero mod p of sum u_i y_i^2, or None if anisotropic mod p."""
    m = len(units)
    if m == 1:
        return None
    for y in itertools.product(range(p), repeat=m):
        if any(y) and sum(u * t * t for u, t in zip(units, y)) % p == 0:
            return y
    return None


def sym_canonical_check(X, cls: SymClass, U: Matrix, ring: PrecisionRing) -> bool:
    """True iff U (Sigma S) U^T == X mod p^K and det U is a unit."""
    from .matrix import det_mod

    Xm = as_symmetric(X, ring)
    return congruence(U, cls.matrix(ring), ring.modulus) == Xm and det_mod(U, ring.p) != 0


__all__ = [
    "INF",
    "IsotropyCertificate",
    "QpClass",
    "SymClass",
    "canonical_matrix",
    "certifies",
    "isotropic_by_invariants",
    "isotropy_by_invariants",
    "isotropy_search",
    "qp_class",
    "rank_d",
    "rank_mod_p",
    "smith_normal_form",
    "sym_canonical",
    "sym_canonical_check",
    "sym_class",
]
