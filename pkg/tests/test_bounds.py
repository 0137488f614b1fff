import itertools
import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize

from trenum import polyarith as pa
from trenum.bounds import (
    DELTA_PROFILE,
    HERMITE,
    ODLYZKO,
    Prune,
    SearchPrefix,
    derivative_poly,
    hermite,
    hunter_t2_bound,
    hunter_t2_max,
    lagrange_extrema,
    lagrange_k2,
    lagrange_k3,
    next_coefficient_interval,
    odlyzko_floor,
    seed_coefficient_ranges,
    smyth_exceptional_candidates,
)
from trenum.polyarith import ContractError
from trenum.search import sturm_real_root_count


def poly_from_roots(roots):
    full = [1]
    for r in roots:
        full = pa.poly_mul(full, [-r, 1])
    return full


def high(full):
    n = len(full) - 1
    return [full[n - j] for j in range(1, n + 1)]


# --- tables -----------------------------------------------------------------------

def test_tables_as_printed():
    printed = "2.223 3.610 5.067 6.523 7.941 9.301 10.596 11.823 12.985".split()
    assert [ODLYZKO[n] for n in range(2, 11)] == [Fraction(x) for x in printed]
    assert [DELTA_PROFILE[n] for n in range(2, 11)] == [Fraction(x) for x in "30 25 20 17 16 15.5 15 14.5 14".split()]
    assert odlyzko_floor(2) == Fraction("2.222")


def test_hermite_values():
    want = [1, Fraction(4, 3), 2, 4, 8, Fraction(64, 3), 64, 256]
    for k, w in enumerate(want, 1):
        r, e = HERMITE[k]
        # gamma_k^k = w, stored as gamma_k^e = r
        assert r ** k == w ** e
        assert math.isclose(hermite(k) ** k, float(w), rel_tol=1e-12)


def test_mordell_extension_is_an_upper_bound():
    for k in (9, 10):
        assert hermite(k) >= hermite(k - 1) ** ((k - 1) / (k - 2)) * (1 - 1e-12)


# --- Hunter bound --------------------------------------------------------------

def test_hunter_examples():
    assert hunter_t2_bound(2, 30, 0) == pytest.approx(450)
    assert hunter_t2_max(2, 30, 0) == 450
    v = hunter_t2_bound(3, 25, 1)
    with mpmath.workdps(50):
        ref = mpmath.mpf(1) / 3 + mpmath.sqrt(mpmath.mpf(4) / 3) * mpmath.sqrt(mpmath.mpf(25) ** 3 / 3)
    assert v >= ref and v == pytest.approx(float(ref), rel=1e-12)
    assert math.floor(ref * 100) == 8366
    assert hunter_t2_max(3, 25, 1) == 83
    with pytest.raises(ContractError):
        hunter_t2_bound(1, 10, 0)


@given(st.integers(2, 10), st.fractions(min_value=2, max_value=40), st.fractions(min_value=0, max_value=5))
def test_hunter_monotone_in_B(n, B, dB):
    assert hunter_t2_bound(n, B, 0) <= hunter_t2_bound(n, B + dB, 0)
    assert hunter_t2_max(n, B, 0) <= hunter_t2_max(n, B + dB, 0)


@given(st.integers(2, 10), st.fractions(min_value=2, max_value=40), st.data())
def test_hunter_max_is_exact_floor(n, B, data):
    t = data.draw(st.integers(0, n // 2))
    T = hunter_t2_max(n, B, t)
    with mpmath.workdps(60):
        r, e = HERMITE[n - 1]
        val = mpmath.mpf(t * t) / n + mpmath.power(mpmath.mpf(r.numerator) / r.denominator, mpmath.mpf(1) / e) * \
            mpmath.power(mpmath.mpf(B.numerator) ** n / (mpmath.mpf(B.denominator) ** n * n), mpmath.mpf(1) / (n - 1))
        assert T <= val + mpmath.mpf(10) ** -40 and T + 1 > val - mpmath.mpf(10) ** -40


def test_seed_ranges_examples():
    r = seed_coefficient_ranges(2, 30, -1)
    assert (r.start, r.stop - 1) == (-224, -2)
    r = seed_coefficient_ranges(3, 25, 0)
    assert (r.start, r.stop - 1) == (-41, -3)
    assert -1 not in seed_coefficient_ranges(2, 30, -1)
    with pytest.raises(ContractError):
        seed_coefficient_ranges(3, 25, 2)


def test_smyth_candidates():
    as_set = lambda n: {str(p) for p in smyth_exceptional_candidates(n)}
    assert as_set(2) == {"x^2 - x - 1", "x^2 + x - 1"}
    assert as_set(3) == {"x^3 - x^2 - 2*x + 1", "x^3 + x^2 - 2*x - 1"}
    assert as_set(5) == set()
    for n in range(2, 11):
        for p in smyth_exceptional_candidates(n):
            s = pa.power_sums(p.full(), 3)
            # squares of the roots have trace at most the Smyth constant times n
            assert s[2] <= Fraction(17719, 10000) * n


# --- Lagrange envelopes ----------------------------------------------------------

def test_lagrange_examples():
    p = SearchPrefix.seed(3, 0, -3)
    assert p.envelope == (-2, 2)
    assert all(-2 < r < 2 for r in np.roots([1, 0, -3, 1]))
    # all-equal configuration: radical vanishes
    n, a1 = 4, -4
    a2 = Fraction((n - 1) * a1 * a1, 2 * n)
    s1 = -a1
    s2 = a1 * a1 - 2 * a2
    lo, hi = lagrange_k2(n, s1, s2)
    assert lo == pytest.approx(1) and hi == pytest.approx(1)


def test_lagrange_n5_against_optimizer():
    s = pa.newton_power_sums([1, -5], 2)
    lo, hi = lagrange_k2(5, *s)
    assert (round(lo, 3), round(hi, 3)) == (-3.139, 2.739)
    cons = [{"type": "eq", "fun": lambda x: sum(x) - s[0]},
            {"type": "eq", "fun": lambda x: sum(v * v for v in x) - s[1]}]
    x0 = np.array([-2.0, -1.0, 0.0, 0.5, 1.5])
    mn = minimize(lambda x: x[0], x0, constraints=cons, method="SLSQP")
    mx = minimize(lambda x: -x[0], x0, constraints=cons, method="SLSQP")
    assert mn.fun == pytest.approx(lo, abs=1e-5)
    assert -mx.fun == pytest.approx(hi, abs=1e-5)


def test_lagrange_k2_contains_companion_roots():
    rng = random.Random(30)
    for _ in range(10000):
        n = rng.randint(2, 10)
        if rng.random() < 0.5:
            roots = [rng.randint(-8, 8) for _ in range(n)]
            s1 = sum(roots)
            s2 = sum(r * r for r in roots)
            full = poly_from_roots(roots)
        else:
            roots = [rng.uniform(-8, 8) for _ in range(n)]
            s1 = sum(roots)
            s2 = sum(r * r for r in roots)
            full = np.poly(roots)[::-1]
        lo, hi = lagrange_k2(n, s1, s2)
        eig = np.roots(np.array(full[::-1], dtype=float)).real
        # repeated integer roots are ill-conditioned for the eigenvalue solver
        tol = (1e-6 if len(set(roots)) == n else 1e-3) * (1 + max(abs(lo), abs(hi)))
        assert lo <= min(roots) + 1e-9 and max(roots) <= hi + 1e-9
        assert np.all(eig >= lo - tol) and np.all(eig <= hi + tol)
        # never wider than the trivial bound |x| <= sqrt(s2)
        assert hi - lo <= 2 * math.sqrt(s2) + 1e-9
        if n >= 3 and (n - 1) * (n * s2 - s1 * s1) > 1e-6:
            assert hi - lo < 2 * math.sqrt(s2)


def test_lagrange_k3_contains_roots_and_refines():
    rng = random.Random(31)
    for _ in range(2000):
        n = rng.randint(4, 9)
        roots = [rng.uniform(-6, 6) for _ in range(n)]
        s = [sum(r ** k for r in roots) for k in (1, 2, 3)]
        lo2, hi2 = lagrange_k2(n, s[0], s[1])
        lo3, hi3 = lagrange_k3(n, *s)
        assert min(roots) >= lo3 - 1e-6 and max(roots) <= hi3 + 1e-6
        assert max(lo2, lo3) <= min(hi2, hi3)


def test_lagrange_extrema_combines_levels():
    p = SearchPrefix.seed(5, -1, -4).extend(2)
    s = p.power_sums
    assert lagrange_extrema(p, 2) == lagrange_k2(5, s[0], s[1])
    lo2, hi2 = lagrange_k2(5, s[0], s[1])
    lo3, hi3 = lagrange_k3(5, *s[:3])
    assert lagrange_extrema(p) == (max(lo2, lo3), min(hi2, hi3))


def test_lagrange_prune():
    with pytest.raises(Prune):
        lagrange_k2(3, 3, 2)  # s2 < s1^2 / n is impossible for real roots


# --- ladders -------------------------------------------------------------------

def test_ladder_examples():
    p = SearchPrefix.seed(3, 0, -3)
    assert p.ladder[1] == pytest.approx((-1, 1))
    with pytest.raises(Prune):
        SearchPrefix.seed(3, 0, 0)


def test_ladder_matches_eigenvalues():
    rng = random.Random(32)
    for _ in range(200):
        roots = rng.sample(range(-9, 10), 7)
        full = poly_from_roots(roots)
        hi = high(full)
        p = SearchPrefix.seed(7, hi[0], hi[1])
        for a in hi[2:6]:
            p = p.extend(a)
        for k in range(2, 7):
            fk = derivative_poly(7, hi, k)
            eig = sorted(np.roots(np.array(fk, dtype=float)).real)
            assert np.allclose(p.ladder[k - 1], eig, atol=1e-4)


def assert_interlaced(p):
    for j in range(2, len(p.ladder) + 1):
        cur, prev = p.ladder[j - 1], p.ladder[j - 2]
        assert len(cur) == j
        for i in range(j):
            if i > 0:
                assert prev[i - 1] < cur[i]
            if i < j - 1:
                assert cur[i] < prev[i]
    lo, hi = p.envelope
    if p.ladder:
        assert lo <= p.ladder[-1][0] and p.ladder[-1][-1] <= hi


def walk(n, B):
    """Every accepted prefix of the search tree."""
    from trenum.search import seed_pairs

    for a1, a2 in seed_pairs(n, B):
        try:
            root = SearchPrefix.seed(n, a1, a2)
        except Prune:
            continue
        stack = [root]
        while stack:
            p = stack.pop()
            yield p
            if p.level >= n - 1:
                continue
            for a in next_coefficient_interval(p):
                try:
                    stack.append(p.extend(a))
                except Prune:
                    pass


@pytest.mark.parametrize("n,B", [(3, 25), (4, 12), (5, 9), (6, 8.5)])
def test_interlacing_on_accepted_ladders(n, B):
    count = 0
    for p in walk(n, B):
        assert_interlaced(p)
        count += 1
    assert count > 0


def test_next_interval_example():
    p = SearchPrefix.seed(3, 0, -3)
    assert list(next_coefficient_interval(p, normalize=False)) == [-1, 0, 1]
    assert list(next_coefficient_interval(p)) == [0, 1]


def test_float_prefix_returns_open_interval():
    p = SearchPrefix.seed(3, 0.0, -3.0)
    lo, hi = next_coefficient_interval(p)
    assert lo == pytest.approx(-2) and hi == pytest.approx(2)


def naive_totally_real(n, tmax):
    """All monic totally real squarefree f with T2 <= tmax and 0 <= -a_{n-1} <= n/2, by brute force."""
    R = math.sqrt(tmax)
    boxes = [range(-math.floor(math.comb(n, k) * R ** k), math.floor(math.comb(n, k) * R ** k) + 1) for k in range(3, n + 1)]
    for t in range(n // 2 + 1):
        a1 = -t
        for a2 in range(-((tmax - t * t) // 2), (t * t) // 2 + 1):
            if t * t - 2 * a2 > tmax:
                continue
            if n == 2:
                rest = [()]
            else:
                rest = itertools.product(*boxes)
            cand = []
            for tail in rest:
                cand.append((a1, a2) + tuple(tail))
            if not cand:
                continue
            arr = np.array(cand, dtype=float)
            comp = np.zeros((len(cand), n, n))
            comp[:, 0, :] = -arr
            for i in range(1, n):
                comp[:, i, i - 1] = 1
            eig = np.linalg.eigvals(comp)
            near = np.all(np.abs(eig.imag) < 1e-3, axis=1)
            for c, ok in zip(cand, near):
                if not ok:
                    continue
                full = [1] + list(c)
                full = full[::-1]
                if pa.discriminant(full) > 0 and sturm_real_root_count(full) == n:
                    yield c


def chain_ok(n, coeffs, normalize):
    try:
        p = SearchPrefix.seed(n, coeffs[0], coeffs[1])
        for a in coeffs[2:]:
            if a not in next_coefficient_interval(p, normalize=normalize):
                return False
            if p.level + 1 < n:
                p = p.extend(a)
    except Prune:
        return False
    return True


@pytest.mark.parametrize("n,B", [(3, 10), (4, 6)])
def test_no_false_prunes(n, B):
    tmax = hunter_t2_max(n, B, n // 2)
    seen = 0
    for c in naive_totally_real(n, tmax):
        if c[1] not in seed_coefficient_ranges(n, B, c[0]):
            continue
        seen += 1
        assert chain_ok(n, c, normalize=False), c
        refl = tuple(a * (-1) ** (i + 1) for i, a in enumerate(c))
        assert chain_ok(n, c, True) or chain_ok(n, refl, True), c
    assert seen > 0


def test_published_quartics_replay():
    # a handful of quartic fields (canonical polynomials) replayed through their prefix chains
    for text in ("x^4-x^3-3x^2+x+1", "x^4-4x^2+2", "x^4-x^3-4x^2+4x+1", "x^4-5x^2+5", "x^4-2x^3-3x^2+2x+1"):
        full = pa.parse_polynomial(text)
        c = tuple(high(full))
        refl = tuple(a * (-1) ** (i + 1) for i, a in enumerate(c))
        if c[0] > 0:
            c, refl = refl, c
        assert chain_ok(4, c, False)
