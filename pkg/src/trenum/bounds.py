"""Search-space bounds for totally real polynomials.

The search fixes the top coefficients of ``f = x^n + a_{n-1} x^{n-1} + ...``
one at a time.  With ``a_{n-1}, ..., a_{n-k}`` known, the polynomial
``f_k = f^{(n-k)} / (n-k)!`` of degree ``k`` is known too.  Its roots interlace
those of ``f_{k+1}``, and together with outer bounds on the roots of ``f``
this pins ``a_{n-k-1}`` to a finite interval.

Coefficients may be exact integers (absolute search) or floats (one real
embedding of a relative polynomial); exact refinements only run for integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

from .polyarith import ContractError, MonicPolynomial, factor, poly_mul, resultant

# Unconditional lower bounds on the root discriminant, as printed (the true
# bound is strictly larger than each value).
ODLYZKO = {
    2: Fraction("2.223"), 3: Fraction("3.610"), 4: Fraction("5.067"),
    5: Fraction("6.523"), 6: Fraction("7.941"), 7: Fraction("9.301"),
    8: Fraction("10.596"), 9: Fraction("11.823"), 10: Fraction("12.985"),
}

# Search bound per degree used for the published tabulation.
DELTA_PROFILE = {
    2: Fraction(30), 3: Fraction(25), 4: Fraction(20), 5: Fraction(17),
    6: Fraction(16), 7: Fraction("15.5"), 8: Fraction(15), 9: Fraction("14.5"),
    10: Fraction(14),
}

# gamma_k^e = R, stored as k -> (R, e).  Exact values up to 8; 9 and 10 come
# from Mordell's inequality gamma_k <= gamma_{k-1}^{(k-1)/(k-2)}.
HERMITE = {
    1: (Fraction(1), 1), 2: (Fraction(4, 3), 2), 3: (Fraction(2), 3),
    4: (Fraction(4), 4), 5: (Fraction(8), 5), 6: (Fraction(64, 3), 6),
    7: (Fraction(64), 7), 8: (Fraction(256), 8),
    9: (Fraction(256), 7), 10: (Fraction(512), 7),
}

SMYTH_CONSTANT = Fraction(17719, 10000)

# Minimal polynomials (low to high) of the totally positive algebraic
# integers whose trace does not exceed the Smyth constant times the degree.
SMYTH_EXCEPTIONS = (
    (-1, 1),
    (1, -3, 1),
    (-1, 6, -5, 1),
    (1, -7, 13, -7, 1),
    (1, -8, 14, -7, 1),
)

EPSILON = 1e-4


def odlyzko_floor(n: int) -> Fraction:
    """Printed Odlyzko value lowered by one unit in the last printed digit."""
    if n not in ODLYZKO:
        raise ContractError(f"no Odlyzko bound stored for degree {n}")
    return ODLYZKO[n] - Fraction(1, 1000)


def hermite(k: int) -> float:
    r, e = HERMITE[k]
    return float(r) ** (1.0 / e)


def as_fraction(B) -> Fraction:
    if isinstance(B, Fraction):
        return B
    if isinstance(B, float):
        return Fraction(repr(B))
    return Fraction(str(B)) if not isinstance(B, int) else Fraction(B)


# ---------------------------------------------------------------------------
# Hunter-type bounds


def hunter_floor(shift: Fraction, k: int, Y: Fraction) -> int:
    """Largest integer ``T`` with ``T <= shift + gamma_k * Y^(1/k)``, exactly."""
    r, e = HERMITE[k]
    rhs = r ** k * Y ** e

    def ok(T):
        lhs = T - shift
        return lhs <= 0 or lhs ** (e * k) <= rhs

    approx = float(shift) + hermite(k) * float(Y) ** (1.0 / k)
    T = math.floor(approx) + 2
    while not ok(T):
        T -= 1
    while ok(T + 1):
        T += 1
    return T


def hunter_t2_bound(n: int, B, t) -> float:
    """``t^2/n + gamma_{n-1} (B^n/n)^(1/(n-1))`` rounded upward."""
    if n < 2:
        raise ContractError("Hunter bound needs n >= 2")
    B = as_fraction(B)
    with mpmath.workdps(40):
        r, e = HERMITE[n - 1]
        val = mpmath.mpf(t) ** 2 / n + mpmath.power(
            mpmath.mpf(r.numerator) / r.denominator, mpmath.mpf(1) / e
        ) * mpmath.power(mpmath.mpf(B.numerator) ** n / (mpmath.mpf(B.denominator) ** n * n), mpmath.mpf(1) / (n - 1))
        return float(val) * (1 + 1e-15)


def hunter_t2_max(n: int, B, t: int) -> int:
    """Largest integral ``T_2`` allowed by the Hunter bound."""
    B = as_fraction(B)
    return hunter_floor(Fraction(t * t, n), n - 1, B ** n / n)


def seed_coefficient_ranges(n: int, B, a: int) -> range:
    """Admissible ``a_{n-2}`` for a given ``a_{n-1}``.

    Lower end from the Hunter bound on ``T_2 = a^2 - 2 a_{n-2}``, upper end
    from the strict Smyth bound ``T_2 > 1.7719 n``.
    """
    if abs(a) > n // 2:
        raise ContractError(f"a_(n-1) = {a} outside the trace normalization")
    tmax = hunter_t2_max(n, B, abs(a))
    lo = -((tmax - a * a) // 2)  # ceil((a^2 - tmax) / 2)
    upper = Fraction(a * a, 2) - SMYTH_CONSTANT * n / 2
    hi = math.ceil(upper) - 1
    return range(lo, hi + 1)


@lru_cache(maxsize=None)
def smyth_exceptional_candidates(n: int) -> tuple[MonicPolynomial, ...]:
    """Degree-``n`` polynomials whose root squares are Smyth exceptions."""
    if not 2 <= n <= 10:
        raise ContractError("degree out of range")
    out = []
    for g in SMYTH_EXCEPTIONS:
        dg = len(g) - 1
        if dg != n and 2 * dg != n:
            continue
        sq = [0] * (2 * dg + 1)
        for i, c in enumerate(g):
            sq[2 * i] = c
        for h, _ in factor(sq):
            if len(h) - 1 == n:
                out.append(MonicPolynomial.from_full(h))
    return tuple(sorted(set(out), key=lambda p: p.coeffs))


# ---------------------------------------------------------------------------
# Rolle ladder


@lru_cache(maxsize=None)
def _binom_row(n: int, k: int) -> tuple[int, ...]:
    # C(n-j, n-k) for j = 0..k
    return tuple(math.comb(n - j, n - k) for j in range(k + 1))


def derivative_poly(n: int, coeffs: Sequence, k: int) -> list:
    """High-to-low coefficients of ``f_k = f^{(n-k)}/(n-k)!`` (length k+1)."""
    row = _binom_row(n, k)
    return [row[0]] + [row[j] * coeffs[j - 1] for j in range(1, k + 1)]


def _horner_hi(p: Sequence, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def _horner_hi_d(p: Sequence, x):
    val = der = 0.0
    for c in p:
        der = der * x + val
        val = val * x + c
    return val, der


def _abs_scale(p: Sequence, x: float) -> float:
    ax = abs(x)
    acc = 0.0
    for c in p:
        acc = acc * ax + abs(c)
    return acc


class Prune(Exception):
    """No totally real polynomial extends the current prefix."""


class PrecisionEscalation(ArithmeticError):
    """Working precision could not decide a sign; retry at higher precision."""


def _exact_ints(p: Sequence) -> bool:
    return all(isinstance(c, int) for c in p)


def _precise_value(p: Sequence, q: Sequence, x0: float, dps: int = 60):
    """Value of ``p`` at the root of ``q`` nearest ``x0``, at high precision."""
    with mpmath.workdps(dps):
        qq = [mpmath.mpf(c) for c in q]
        dq = [c * (len(qq) - 1 - i) for i, c in enumerate(qq[:-1])]
        x = mpmath.mpf(x0)
        for _ in range(200):
            fx = mpmath.polyval(qq, x)
            d = mpmath.polyval(dq, x)
            if d == 0:
                break
            step = fx / d
            x -= step
            if abs(step) < mpmath.mpf(10) ** (-dps + 5) * (1 + abs(x)):
                break
        return mpmath.polyval([mpmath.mpf(c) for c in p], x)


def _sign_at(p: Sequence, q: Sequence | None, x: float) -> int:
    """Sign of ``p`` at ``x``, where ``x`` approximates a root of ``q``.

    Near-zero values are decided exactly (a common root means a repeated
    root upstream, hence a prune) or at higher precision.
    """
    v = _horner_hi(p, x)
    tol = 1e-11 * _abs_scale(p, x)
    if v > tol:
        return 1
    if v < -tol:
        return -1
    if q is None:
        return 0
    if _exact_ints(p) and _exact_ints(q) and resultant(p[::-1], q[::-1]) == 0:
        return 0
    for dps in (40, 80, 160):
        pv = _precise_value(p, q, x, dps)
        if abs(pv) > mpmath.mpf(10) ** (-dps // 2) * (1 + tol):
            return 1 if pv > 0 else -1
    raise PrecisionEscalation(f"cannot decide sign of {p} near {x}")


def _bracketed_root(p: Sequence, lo: float, hi: float, slo: int) -> float:
    """Root of ``p`` in ``(lo, hi)`` where ``sign p(lo) = slo`` and ``p(hi)`` has the opposite sign."""
    x = 0.5 * (lo + hi)
    for _ in range(200):
        v, d = _horner_hi_d(p, x)
        if v == 0:
            return x
        if (v > 0) == (slo > 0):
            lo = x
        else:
            hi = x
        if d != 0:
            nx = x - v / d
            if lo < nx < hi:
                if abs(nx - x) <= 1e-14 * (1 + abs(x)):
                    return nx
                x = nx
                continue
        nx = 0.5 * (lo + hi)
        if hi - lo <= 1e-15 * (1 + abs(nx)):
            return nx
        x = nx
    return x


def lagrange_k2(n: int, s1, s2) -> tuple[float, float]:
    """Extreme root values given ``s_1, s_2``; raises Prune when none exist."""
    rad = (n - 1) * (n * s2 - s1 * s1)
    if rad < 0:
        if isinstance(rad, int) or rad < -1e-9 * (1 + abs(s2) * n * n):
            raise Prune("negative radicand")
        rad = 0
    if isinstance(rad, int):
        r = math.isqrt(rad)
        if r * r == rad:
            return (s1 - r) / n, (s1 + r) / n
    root = math.sqrt(rad)
    lo = (s1 - root) / n
    hi = (s1 + root) / n
    pad = 1e-12 * (1 + abs(lo) + abs(hi))
    return lo - pad, hi + pad


def _np_poly(p_low: Sequence) -> np.ndarray:
    return np.array([float(c) for c in reversed(p_low)])


def lagrange_k3(n: int, s1, s2, s3) -> tuple[float, float]:
    """Extreme root values given ``s_1, s_2, s_3`` (outward rounded).

    At an extremum the other ``N = n-1`` roots take two values with
    multiplicities ``p + q = N``.  Writing ``P_j = s_j - x^j`` this forces
    ``p q (N^2 M_3)^2 = (q-p)^2 (N V)^3`` with ``N V = N P_2 - P_1^2`` and
    ``N^2 M_3 = N^2 P_3 - 3 N P_1 P_2 + 2 P_1^3``, a sextic in ``x``.
    """
    N = n - 1
    P1 = [s1, -1]
    P2 = [s2, 0, -1]
    P3 = [s3, 0, 0, -1]
    P1sq = poly_mul(P1, P1)
    NV = [N * c for c in P2]
    NV = [a - b for a, b in zip(NV + [0] * (len(P1sq) - len(NV)), P1sq)]
    A = [N * N * c for c in P3]
    B3 = poly_mul(P1, P2)
    C3 = poly_mul(P1sq, P1)
    M = [0] * 4
    for i in range(4):
        M[i] = A[i] - 3 * N * (B3[i] if i < len(B3) else 0) + 2 * C3[i]
    M2 = poly_mul(M, M)
    V3 = poly_mul(poly_mul(NV, NV), NV)
    cands = []

    def add_roots(poly_low):
        poly = list(poly_low)
        while poly and abs(poly[-1]) == 0:
            poly.pop()
        if len(poly) < 2:
            return
        for z in np.roots(_np_poly(poly)):
            if abs(z.imag) <= 1e-5 * (1 + abs(z.real)):
                cands.append(float(z.real))

    add_roots(NV)
    for p in range(1, N // 2 + 1):
        q = N - p
        eq = [p * q * a - (q - p) ** 2 * b for a, b in zip(M2, V3)]
        add_roots(eq)
    good = []
    for x in cands:
        nv = _horner_hi(NV[::-1], x)
        if nv >= -1e-6 * (1 + _abs_scale(NV[::-1], x)):
            good.append(x)
    if not good:
        raise Prune("no extremal configuration")
    lo, hi = min(good), max(good)
    pad = 1e-7 * (1 + abs(lo) + abs(hi))
    return lo - pad, hi + pad


def lagrange_extrema(prefix: "SearchPrefix", k: int | None = None) -> tuple[float, float]:
    """Lower/upper bounds on every root given the first ``k`` power sums."""
    k = prefix.level if k is None else k
    s = prefix.power_sums
    n = prefix.n
    lo, hi = lagrange_k2(n, s[0], s[1])
    if k >= 3 and n >= 4:
        lo3, hi3 = lagrange_k3(n, s[0], s[1], s[2])
        lo, hi = max(lo, lo3), min(hi, hi3)
    return lo, hi


@dataclass(frozen=True)
class SearchPrefix:
    """A node of the coefficient search tree at level ``k = len(coeffs)``.

    ``ladder[j-1]`` holds the sorted roots of ``f_j``; ``envelope`` bounds
    all roots of any real-rooted ``f`` extending the prefix.
    """

    n: int
    coeffs: tuple
    power_sums: tuple
    ladder: tuple = ()
    envelope: tuple = (-math.inf, math.inf)

    @property
    def level(self) -> int:
        return len(self.coeffs)

    @property
    def exact(self) -> bool:
        return _exact_ints(self.coeffs)

    @classmethod
    def seed(cls, n: int, a1, a2) -> "SearchPrefix":
        """Level-2 prefix for ``(a_{n-1}, a_{n-2})``; raises Prune if infeasible."""
        coeffs = (a1, a2)
        sums = _power_sums(coeffs)
        env = lagrange_k2(n, sums[0], sums[1])
        l1 = (-a1 / n,)
        node = cls(n, coeffs, sums, (l1,), env)
        roots = interlaced_real_roots(node, 2)
        return cls(n, coeffs, sums, (l1, roots), env)

    def extend(self, a) -> "SearchPrefix":
        """Child prefix with ``a_{n-k-1} = a``; raises Prune if infeasible."""
        coeffs = self.coeffs + (a,)
        k = len(coeffs)
        sums = _power_sums(coeffs)
        lo, hi = self.envelope
        if k == 3 and self.n >= 4:
            lo3, hi3 = lagrange_k3(self.n, sums[0], sums[1], sums[2])
            lo, hi = max(lo, lo3), min(hi, hi3)
            if lo > hi:
                raise Prune("empty envelope")
        node = SearchPrefix(self.n, coeffs, sums, self.ladder, (lo, hi))
        if k == self.n:
            return node
        roots = interlaced_real_roots(node, k)
        return SearchPrefix(self.n, coeffs, sums, self.ladder + (roots,), (lo, hi))


def _power_sums(coeffs: tuple) -> tuple:
    k = len(coeffs)
    s = [0] * (k + 1)
    for j in range(1, k + 1):
        acc = j * coeffs[j - 1]
        for i in range(1, j):
            acc += coeffs[i - 1] * s[j - i]
        s[j] = -acc
    return tuple(s[1:])


def interlaced_real_roots(prefix: SearchPrefix, k: int) -> tuple[float, ...]:
    """Sorted roots of ``f_k`` isolated between the roots of ``f_{k-1}``.

    Raises Prune when ``f_k`` cannot have ``k`` simple real roots inside the
    envelope (including the repeated-root case).
    """
    if len(prefix.ladder) < k - 1:
        raise ContractError("ladder not populated below the requested level")
    n = prefix.n
    p = derivative_poly(n, prefix.coeffs, k)
    q = derivative_poly(n, prefix.coeffs, k - 1)
    prev = prefix.ladder[k - 2]
    lo, hi = prefix.envelope
    # sign of f_k just below the smallest root is (-1)^k
    pts = [lo] + list(prev) + [hi]
    signs = []
    for i, x in enumerate(pts):
        want = 1 if (k - i) % 2 == 0 else -1
        if i == 0 or i == len(pts) - 1:
            s = _sign_at(p, None, x)
            if s == 0:
                s = want  # outward-rounded envelope: treat as strictly outside
        else:
            s = _sign_at(p, q, x)
        if s != want:
            raise Prune(f"sign pattern broken at level {k}")
        signs.append(s)
    roots = []
    for i in range(k):
        a, b = pts[i], pts[i + 1]
        if not a < b:
            raise Prune("degenerate bracket")
        roots.append(_bracketed_root(p, a, b, signs[i]))
    return tuple(roots)


def next_coefficient_interval(prefix: SearchPrefix, normalize: bool = True):
    """Integer range (or real interval for float prefixes) for ``a_{n-k-1}``.

    Integer prefixes return a ``range``; float prefixes return ``(lo, hi)``
    open-interval bounds widened by the evaluation error.
    """
    n, k = prefix.n, prefix.level
    if k >= n:
        raise ContractError("prefix already complete")
    roots = prefix.ladder[k - 1]
    lo_env, hi_env = prefix.envelope
    row = _binom_row(n, k + 1)
    g = [row[0]] + [row[j] * prefix.coeffs[j - 1] for j in range(1, k + 1)] + [0]
    pts = [lo_env] + list(roots) + [hi_env]
    lower = -math.inf
    upper = math.inf
    lower_m = upper_m = 0.0
    for i, x in enumerate(pts):
        v = -_horner_hi(g, x)
        m = 4e-12 * _abs_scale(g, x) + 1e-12
        if (k + 1 - i) % 2 == 0:
            # f_{k+1}(beta_i) > 0, i.e. a > -g(beta_i)
            if v > lower:
                lower, lower_m = v, m
        else:
            if v < upper:
                upper, upper_m = v, m
    if not prefix.exact:
        return lower - lower_m, upper + upper_m
    lo = math.floor(lower - lower_m) + 1
    hi = math.ceil(upper + upper_m) - 1
    fk = derivative_poly(n, prefix.coeffs, k)
    # exact boundary refinement: a value making f_{k+1} share a root with f_k
    # gives a repeated root and cannot occur
    if lo <= hi and abs(lo - lower) <= 2 * lower_m + 1e-9:
        if resultant((g[:-1] + [lo])[::-1], fk[::-1]) == 0:
            lo += 1
    if lo <= hi and abs(hi - upper) <= 2 * upper_m + 1e-9:
        if resultant((g[:-1] + [hi])[::-1], fk[::-1]) == 0:
            hi -= 1
    if normalize and (k + 1) % 2 == 1 and k + 1 >= 3:
        if all(prefix.coeffs[j] == 0 for j in range(0, k, 2)):
            lo = max(lo, 0)
    return range(lo, hi + 1)
