"""Lattice reduction and enumeration.

Lattices are given either by a Gram matrix (exact integers or fractions) or by
a basis whose rows are vectors in R^d.  Coordinates returned by the
enumeration routines are always integer vectors with respect to the input
basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

DELTA_LLL = Fraction(99, 100)


class PrecisionEscalation(ArithmeticError):
    """A lattice point lies too close to the polytope boundary to classify."""


class LatticeError(ValueError):
    pass


def _frac_matrix(M) -> list[list[Fraction]]:
    return [[x if isinstance(x, Fraction) else Fraction(x) for x in row] for row in M]


def lll_gram(gram, delta: Fraction = DELTA_LLL):
    """LLL-reduce a positive definite Gram matrix exactly.

    Returns ``(G', U)`` with ``G' = U G U^T`` and ``U`` unimodular; the rows of
    ``U`` express the reduced basis in the input basis.  Rational Gram
    matrices are scaled to integers; the reduction itself runs in integer
    arithmetic on the subdeterminants ``d_i`` and ``lambda_ij = d_{j+1} mu_ij``.
    """
    G0 = _frac_matrix(gram)
    n = len(G0)
    if n == 0:
        return G0, []
    den = 1
    for row in G0:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    G = [[int(x * den) for x in row] for row in G0]
    U = _lll_int(G, Fraction(delta))
    UG = [[sum(U[i][a] * G[a][b] for a in range(n) if U[i][a]) for b in range(n)] for i in range(n)]
    Gr = [[Fraction(sum(UG[i][b] * U[j][b] for b in range(n)), den) for j in range(n)] for i in range(n)]
    return Gr, U


def _lll_int(G: list[list[int]], delta: Fraction) -> list[list[int]]:
    """Integral LLL on an integer Gram matrix; returns the transformation."""
    n = len(G)
    G = [list(r) for r in G]
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    num, dd = delta.numerator, delta.denominator
    d = [1] + [0] * n  # d[i+1] = det of the leading (i+1)x(i+1) Gram block
    lam = [[0] * n for _ in range(n)]
    if G[0][0] <= 0:
        raise LatticeError("Gram matrix is not positive definite")
    d[1] = G[0][0]

    def red(k, l):
        dl = d[l + 1]
        lk = lam[k][l]
        if 2 * abs(lk) <= dl:
            return
        q = (2 * lk + dl) // (2 * dl)
        H[k] = [a - q * b for a, b in zip(H[k], H[l])]
        gkk = G[k][k] - 2 * q * G[k][l] + q * q * G[l][l]
        for j in range(n):
            if j != k:
                G[k][j] -= q * G[l][j]
                G[j][k] = G[k][j]
        G[k][k] = gkk
        lam[k][l] = lk - q * dl
        for i in range(l):
            lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        H[k], H[k - 1] = H[k - 1], H[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        Bv = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (Bv * t + lm * lam[i][k]) // d[k + 1]
        d[k] = Bv

    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = G[k][j]
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise LatticeError("Gram matrix is not positive definite")
                    d[k + 1] = u
        red(k, k - 1)
        if dd * d[k + 1] * d[k - 1] < num * d[k] * d[k] - dd * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return H


def _lll_fraction(gram, delta: Fraction = DELTA_LLL):
    """Textbook rational LLL (kept as an independent reference)."""
    G = _frac_matrix(gram)
    n = len(G)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return G, U
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = G[i][j]
            for k in range(j):
                s -= mu[j][k] * mu[i][k] * B[k]
            mu[i][j] = s / B[j]
        s = G[i][i]
        for k in range(i):
            s -= mu[i][k] * mu[i][k] * B[k]
        if s <= 0:
            raise LatticeError("Gram matrix is not positive definite")
        B[i] = s

    def swap(k):
        U[k], U[k - 1] = U[k - 1], U[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]
        m = mu[k][k - 1]
        Bn = B[k] + m * m * B[k - 1]
        mu[k][k - 1] = m * B[k - 1] / Bn
        B[k] = B[k - 1] * B[k] / Bn
        B[k - 1] = Bn
        for j in range(k - 1):
            mu[k - 1][j], mu[k][j] = mu[k][j], mu[k - 1][j]
        for i in range(k + 1, n):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]

    k = 1
    while k < n:
        _red_exact(G, U, mu, k, k - 1)
        if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                _red_exact(G, U, mu, k, l)
            k += 1
    return G, U


def _red_exact(G, U, mu, k, l):
    m = mu[k][l]
    if abs(m) <= Fraction(1, 2):
        return
    q = math.floor(m + Fraction(1, 2))
    n = len(G)
    U[k] = [a - q * b for a, b in zip(U[k], U[l])]
    # b_k <- b_k - q b_l
    gkk = G[k][k] - 2 * q * G[k][l] + q * q * G[l][l]
    for j in range(n):
        if j != k:
            G[k][j] -= q * G[l][j]
            G[j][k] = G[k][j]
    G[k][k] = gkk
    mu[k][l] -= q
    for i in range(l):
        mu[k][i] -= q * mu[l][i]


def lll_reduce(basis, delta: Fraction = DELTA_LLL, return_transform: bool = False):
    """LLL-reduce the rows of ``basis`` (exact rationals or integers)."""
    Bm = _frac_matrix(basis)
    n = len(Bm)
    gram = [[sum(a * b for a, b in zip(Bm[i], Bm[j])) for j in range(n)] for i in range(n)]
    _, U = lll_gram(gram, delta)
    out = [[sum(U[i][k] * Bm[k][j] for k in range(n)) for j in range(len(Bm[0]))] for i in range(n)]
    out = [[int(x) if x.denominator == 1 else x for x in row] for row in out]
    return (out, U) if return_transform else out


@lru_cache(maxsize=512)
def _reduced_cached(gram_key: tuple):
    G = [list(r) for r in gram_key]
    return lll_gram(G)


def reduced_gram(gram):
    """Cached LLL reduction keyed on the exact Gram matrix."""
    key = tuple(tuple(Fraction(x) for x in row) for row in gram)
    return _reduced_cached(key)


# ---------------------------------------------------------------------------
# Fincke-Pohst


def _cholesky_q(G) -> tuple[np.ndarray, np.ndarray]:
    """Cohen's ``q_ij`` decomposition: ``Q(x) = sum q_ii (x_i + sum_{j>i} q_ij x_j)^2``."""
    A = np.array([[float(x) for x in row] for row in G])
    n = len(A)
    q = A.copy()
    for i in range(n):
        if q[i, i] <= 0:
            raise LatticeError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            q[j, i] = q[i, j]
            q[i, j] = q[i, j] / q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k, l] -= q[k, i] * q[i, l]
    return np.diag(q).copy(), np.triu(q, 1)


def _enumerate_ellipsoid(G, C: float, center=None):
    """Integer points ``x`` with ``(x-c)^T G (x-c) <= C`` (float, slightly padded)."""
    d, q = _cholesky_q(G)
    n = len(d)
    c = [0.0] * n if center is None else [float(v) for v in center]
    C = C * (1 + 1e-9) + 1e-9
    x = [0] * n
    out = []

    def rec(i, rem):
        # offset from already fixed coordinates j > i
        shift = c[i]
        for j in range(i + 1, n):
            shift -= q[i, j] * (x[j] - c[j])
        r = math.sqrt(max(rem, 0.0) / d[i])
        lo = math.ceil(shift - r - 1e-12)
        hi = math.floor(shift + r + 1e-12)
        for v in range(lo, hi + 1):
            t = v - shift
            nrem = rem - d[i] * t * t
            if nrem < -1e-9 * (1 + C):
                continue
            x[i] = v
            if i == 0:
                out.append(tuple(x))
            else:
                rec(i - 1, nrem)
        x[i] = 0

    rec(n - 1, C)
    return out


def _qform(G, x) -> Fraction:
    n = len(x)
    return sum(G[i][j] * x[i] * x[j] for i in range(n) for j in range(n) if x[i] and x[j])


def enumerate_short_vectors(gram, C) -> list[tuple[int, ...]]:
    """All nonzero ``x`` with ``x^T G x <= C``, one per sign pair.

    The enumeration runs on an LLL-reduced form in floating point with a
    small slack; every candidate is then checked exactly.
    """
    G = _frac_matrix(gram)
    n = len(G)
    C = Fraction(C) if not isinstance(C, float) else Fraction(repr(C))
    if C <= 0:
        return []
    Gr, U = reduced_gram(G)
    out = []
    for y in _enumerate_ellipsoid(Gr, float(C)):
        if not any(y):
            continue
        # keep the representative whose last nonzero coordinate is positive
        last = next(v for v in reversed(y) if v)
        if last < 0:
            continue
        if _qform(Gr, y) <= C:
            xv = tuple(sum(y[i] * U[i][j] for i in range(n)) for j in range(n))
            out.append(xv)
    normed = []
    for xv in out:
        first = next(v for v in xv if v)
        normed.append(xv if first > 0 else tuple(-v for v in xv))
    return sorted(set(normed), key=lambda v: (_qform(G, v), v))


def closest_vector(gram, target) -> tuple[tuple[int, ...], Fraction]:
    """Integer ``x`` minimizing ``(x - t)^T G (x - t)``; ties break lexicographically."""
    G = _frac_matrix(gram)
    n = len(G)
    t = [Fraction(v) for v in target]
    Gr, U = reduced_gram(G)
    Uinv = _int_inverse(U)
    # target in reduced coordinates: t = s U  =>  s = t U^{-1}
    s = [sum(t[i] * Uinv[i][j] for i in range(n)) for j in range(n)]
    babai = [math.floor(v + Fraction(1, 2)) for v in s]
    diff = [b - v for b, v in zip(babai, s)]
    best = _qform(Gr, diff)
    cands = _enumerate_ellipsoid(Gr, float(best), center=[float(v) for v in s])
    found = []
    for y in cands:
        dv = [a - b for a, b in zip(y, s)]
        val = _qform(Gr, dv)
        if val <= best:
            xv = tuple(sum(y[i] * U[i][j] for i in range(n)) for j in range(n))
            found.append((val, xv))
    if not found:
        xv = tuple(sum(babai[i] * U[i][j] for i in range(n)) for j in range(n))
        return xv, best
    m = min(v for v, _ in found)
    return min(x for v, x in found if v == m), m


def _int_inverse(U):
    """Inverse of a unimodular integer matrix."""
    n = len(U)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [v / pv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [[int(v) for v in row[n:]] for row in A]


# ---------------------------------------------------------------------------
# lattice points in polytopes


@dataclass(frozen=True)
class ConvexPolytope:
    """Convex hull of ``vertices`` with facets ``A x <= b`` (rows of ``halfspaces``).

    ``opposite`` optionally pairs each vertex index with its opposite vertex
    (parallelepipeds), which selects the tighter rounding rule.
    """

    vertices: tuple
    halfspaces: tuple
    opposite: tuple | None = None

    @classmethod
    def box(cls, lo: Sequence[float], hi: Sequence[float]) -> "ConvexPolytope":
        d = len(lo)
        if any(not (l < h) for l, h in zip(lo, hi)):
            raise LatticeError("degenerate box")
        verts = []
        for mask in range(1 << d):
            verts.append(tuple(hi[i] if mask >> i & 1 else lo[i] for i in range(d)))
        hs = []
        for i in range(d):
            e = [0.0] * d
            e[i] = 1.0
            hs.append((tuple(e), float(hi[i])))
            e = [0.0] * d
            e[i] = -1.0
            hs.append((tuple(e), -float(lo[i])))
        opp = tuple(((1 << d) - 1) ^ m for m in range(1 << d))
        return cls(tuple(verts), tuple(hs), opp)

    @classmethod
    def from_vertices(cls, vertices) -> "ConvexPolytope":
        from scipy.spatial import ConvexHull

        pts = np.array(vertices, dtype=float)
        if len(pts[0]) == 1:
            lo, hi = float(pts.min()), float(pts.max())
            return cls(tuple(map(tuple, pts)), (((1.0,), hi), ((-1.0,), -lo)))
        hull = ConvexHull(pts)
        hs = tuple((tuple(eq[:-1]), -float(eq[-1])) for eq in hull.equations)
        return cls(tuple(map(tuple, pts[hull.vertices])), hs)

    @classmethod
    def from_halfspaces(cls, halfspaces, vertices) -> "ConvexPolytope":
        return cls(tuple(map(tuple, vertices)), tuple((tuple(a), float(b)) for a, b in halfspaces))


def rounded_superset_vertices(P: ConvexPolytope, phi: np.ndarray) -> list[tuple[int, ...]]:
    """Integer vertices of a polytope ``Q`` containing ``phi(P)``.

    Each vertex is paired with the vertices on the far side of ``P``: its
    coordinates are rounded down where it is the smaller of the pair and up
    otherwise.  With an ``opposite`` pairing (parallelepipeds) every vertex
    is paired only with its opposite; otherwise with every other vertex.
    """
    V = np.array(P.vertices, dtype=float) @ phi
    out = set()
    nv = len(V)
    for i in range(nv):
        partners = [P.opposite[i]] if P.opposite is not None else [j for j in range(nv) if j != i] or [i]
        for j in partners:
            v, w = V[i], V[j]
            r = tuple(math.floor(a - 1e-9) if a <= b else math.ceil(a + 1e-9) for a, b in zip(v, w))
            out.add(r)
    return sorted(out)


def lattice_points_in_polytope(basis, P: ConvexPolytope, boundary: str = "raise", gram=None) -> list[tuple[int, ...]]:
    """Coordinates ``c`` (w.r.t. the rows of ``basis``) with ``sum c_i b_i`` in ``P``.

    ``boundary`` controls points within 1e-9 of a facet: ``"raise"`` signals
    :class:`PrecisionEscalation`, ``"include"`` keeps them.
    """
    Bm = np.array([[float(x) for x in row] for row in basis])
    d = len(Bm)
    if gram is None:
        Gf = Bm @ Bm.T
        gram = [[Fraction(float(Gf[i, j])) for j in range(d)] for i in range(d)]
        for i in range(d):
            for j in range(i):
                gram[i][j] = gram[j][i]
    _, U = reduced_gram(gram)
    Ua = np.array(U, dtype=float)
    R = Ua @ Bm  # reduced basis rows
    phi = np.linalg.inv(R)  # ambient row vector p -> coordinates p @ phi
    qv = np.array(rounded_superset_vertices(P, phi), dtype=float)
    lo = qv.min(axis=0).astype(int)
    hi = qv.max(axis=0).astype(int)
    # facets in reduced coordinates: a . (y R) <= b  <=>  (R a) . y <= b
    A = np.array([a for a, _ in P.halfspaces], dtype=float)
    b = np.array([bb for _, bb in P.halfspaces], dtype=float)
    Ay = A @ R.T
    scale = np.abs(A) @ np.abs(np.array(P.vertices, dtype=float)).max(axis=0) + np.abs(b) + 1.0
    tol = 1e-9 * scale
    results = []
    y = [0] * d

    def rec(i, partial):
        # partial = Ay[:, i+1:] @ y[i+1:]; bound y_i using the box on y_0..y_{i-1}
        rest_min = np.zeros(len(b))
        for j in range(i):
            cj = Ay[:, j]
            rest_min += np.minimum(cj * lo[j], cj * hi[j])
        slack = b + tol - partial - rest_min
        ci = Ay[:, i]
        l, h = lo[i], hi[i]
        for row in range(len(b)):
            c = ci[row]
            if c > 1e-300:
                h = min(h, math.floor(slack[row] / c + 1e-9))
            elif c < -1e-300:
                l = max(l, math.ceil(slack[row] / c - 1e-9))
            elif slack[row] < 0:
                return
        for v in range(l, h + 1):
            y[i] = v
            np_ = partial + ci * v
            if i == 0:
                _classify(tuple(y), np_)
            else:
                rec(i - 1, np_)
        y[i] = 0

    def _classify(yv, val):
        excess = val - b
        if np.all(excess < -tol):
            results.append(yv)
        elif np.any(excess > tol):
            return
        elif boundary == "include":
            results.append(yv)
        else:
            raise PrecisionEscalation(f"lattice point {yv} within tolerance of the boundary")

    rec(d - 1, np.zeros(len(b)))
    out = [tuple(int(sum(yv[i] * U[i][j] for i in range(d))) for j in range(d)) for yv in results]
    return sorted(out)
