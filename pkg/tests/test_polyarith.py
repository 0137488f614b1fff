import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from trenum import polyarith as pa
from trenum.bounds import odlyzko_floor
from trenum.polyarith import ContractError, MonicPolynomial

X = sympy.Symbol("x")


def sym(full):
    return sympy.Poly(list(reversed(full)), X)


monic = st.integers(2, 10).flatmap(
    lambda n: st.lists(st.integers(-20, 20), min_size=n, max_size=n).map(lambda c: c + [1])
)


# --- Newton identities -----------------------------------------------------

def test_newton_examples():
    assert pa.newton_power_sums([-1, -1], 2) == [1, 3]
    assert pa.newton_power_sums([0, -3, 1], 3) == [0, 6, -3]


def test_newton_level_too_high():
    with pytest.raises(ContractError):
        pa.newton_power_sums([0, -3], 3)


@given(monic, st.data())
def test_newton_round_trip(full, data):
    n = len(full) - 1
    k = data.draw(st.integers(1, n))
    prefix = [full[n - i] for i in range(1, k + 1)]
    sums = pa.newton_power_sums(prefix, k)
    assert pa.coefficients_from_power_sums(sums) == prefix


def test_newton_matches_companion_eigenvalues():
    rng = random.Random(6)
    for _ in range(50):
        full = [rng.randint(-9, 9) for _ in range(6)] + [1]
        roots = np.roots(full[::-1])
        prefix = full[-2::-1]
        sums = pa.newton_power_sums(prefix, 6)
        for k, s in enumerate(sums, 1):
            num = np.sum(roots ** k).real
            assert abs(num - s) <= 1e-6 * max(1.0, abs(s), np.sum(np.abs(roots) ** k))


def test_power_sums_full():
    # x^3 - 3x + 1
    assert pa.power_sums([1, -3, 0, 1], 5) == [3, 0, 6, -3, 18]


# --- discriminant ----------------------------------------------------------

def test_discriminant_examples():
    assert pa.discriminant([-2, 0, 1]) == 8
    assert pa.discriminant([1, -3, 0, 1]) == 81
    assert pa.discriminant([-2, 0, 0, 1]) == -108


def test_discriminant_octic_vs_resultant():
    full = [-1, 2, 7, -12, -8, 14, 0, -4, 1]
    n = 8
    res = sympy.resultant(sym(full), sym(full).diff(X))
    assert pa.discriminant(full) * (-1) ** (n * (n - 1) // 2) == res
    assert pa.resultant(full, pa.derivative(full)) == res


@settings(max_examples=60, deadline=None)
@given(monic)
def test_discriminant_matches_sympy(full):
    assert pa.discriminant(full) == sympy.discriminant(sym(full))


@settings(max_examples=40, deadline=None)
@given(monic)
def test_discriminant_pencil(full):
    pencil = pa.discriminant_pencil(full)
    for t in (-3, 0, 5, 17):
        g = [full[0] + t] + full[1:]
        assert pa.horner(pencil, t) == pa.discriminant(g)


# --- reducibility -----------------------------------------------------------

def test_easy_screen_examples():
    assert pa.easy_reducibility_screen([0, -1, 0, 1]) == (0, 1)
    assert pa.easy_reducibility_screen([4, 0, -4, 0, 1]) == (-2, 0, 1)
    assert pa.easy_reducibility_screen([1, -3, 0, 1]) is None
    assert pa.easy_reducibility_screen(MonicPolynomial.parse("x^4-3x^2+1")) is not None


def test_easy_screen_sound():
    rng = random.Random(1)
    for _ in range(10000):
        n = rng.randint(2, 8)
        full = [rng.randint(-6, 6) for _ in range(n)] + [1]
        fac = pa.easy_reducibility_screen(full)
        if fac is None:
            continue
        q, r = pa.poly_divmod(full, list(fac))
        assert not r
        assert len(fac) - 1 < n or sympy.Poly(list(reversed(full)), X).is_irreducible


def test_easy_screen_exclusions_agree():
    rng = random.Random(2)
    for _ in range(200):
        n = rng.randint(3, 7)
        base = [0] + [rng.randint(-5, 5) for _ in range(n - 1)] + [1]
        ex = pa.easy_screen_exclusions(base)
        for t in range(-40, 41):
            g = list(base)
            g[0] = t
            assert (t in ex) == (pa.easy_reducibility_screen(g) is not None)


def test_is_irreducible_examples():
    assert pa.is_irreducible([-2, 0, 1])
    assert not pa.is_irreducible([1, 0, -3, 0, 1])
    assert pa.is_irreducible([-1, 3, 3, -4, -1, 1])
    with pytest.raises(ContractError):
        pa.is_irreducible([1, -2, 1])


def test_is_irreducible_vs_sympy():
    rng = random.Random(3)
    seen = 0
    while seen < 400:
        n = rng.randint(2, 8)
        full = [rng.randint(-4, 4) for _ in range(n)] + [1]
        if pa.discriminant(full) == 0:
            continue
        seen += 1
        assert pa.is_irreducible(full) == sym(full).is_irreducible


def test_products_are_reducible():
    rng = random.Random(4)
    for _ in range(100):
        a = [rng.randint(-5, 5) for _ in range(rng.randint(1, 4))] + [1]
        b = [rng.randint(-5, 5) for _ in range(rng.randint(1, 4))] + [1]
        full = pa.poly_mul(a, b)
        if pa.discriminant(full) == 0:
            continue
        assert not pa.is_irreducible(full)


def test_factor_matches_sympy():
    full = pa.poly_mul(pa.poly_mul([-1, -1, 1], [-1, -1, 1]), [1, -3, 0, 1])
    fac = pa.factor(full)
    assert fac == [([-1, -1, 1], 2), ([1, -3, 0, 1], 1)]
    _, sf = sympy.factor_list(sym(full))
    assert sorted(e for _, e in sf) == sorted(e for _, e in fac)


# --- square-divisor window -------------------------------------------------

def test_window_examples():
    assert pa.square_divisor_window(20, 2, 30) == [1, 2]
    assert pa.square_divisor_window(3, 2, 30) == []
    assert pa.square_divisor_window(81, 3, 25) == [1]
    assert pa.square_divisor_window(-5, 2, 30) == []


@given(st.integers(1, 10 ** 7), st.integers(2, 5), st.integers(3, 30))
def test_window_vs_brute_force(d, n, B):
    got = pa.square_divisor_window(d, n, B)
    lo = odlyzko_floor(n) ** n
    want = [a for a in range(1, int(d ** 0.5) + 2) if d % (a * a) == 0 and lo < Fraction(d, a * a) <= B ** n]
    assert got == want


def test_window_large_cofactor_is_conservative():
    p = 1000003
    d = 5 * p * p
    out = pa.square_divisor_window(d, 2, 10 ** 7, limit=1000)
    # the prime square is above the trial limit but still detected as a square
    assert 1 in out and p in out
    q = 1000033
    out = pa.square_divisor_window(5 * p * q, 2, 10 ** 7, limit=1000)
    assert out[0] == 0 and 1 in out


# --- parsing ---------------------------------------------------------------

@pytest.mark.parametrize("text,full", [
    ("x^3-3*x+1", [1, -3, 0, 1]),
    ("x**2 - x - 1", [-1, -1, 1]),
    ("1,0,-3,1", [1, -3, 0, 1]),
    ("[1, -1, -1]", [-1, -1, 1]),
    ("x^8-4x^7+14x^5-8x^4-12x^3+7x^2+2x-1", [-1, 2, 7, -12, -8, 14, 0, -4, 1]),
])
def test_parse(text, full):
    assert pa.parse_polynomial(text) == full


@given(monic)
def test_format_parse_round_trip(full):
    assert pa.parse_polynomial(pa.format_polynomial(full)) == full


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        pa.parse_polynomial("x^2 + y")


def test_monic_polynomial_invariants():
    f = MonicPolynomial.parse("x^3-3x+1")
    assert f.degree == 3 and f.coeffs == (1, -3, 0) and f.full() == [1, -3, 0, 1]
    assert str(f) == "x^3 - 3*x + 1"
    with pytest.raises(ContractError):
        MonicPolynomial.from_full([1, 2])
