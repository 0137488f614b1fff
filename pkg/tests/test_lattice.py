import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from trenum.lattice import (
    DELTA_LLL,
    ConvexPolytope,
    LatticeError,
    PrecisionEscalation,
    _lll_fraction,
    closest_vector,
    enumerate_short_vectors,
    lattice_points_in_polytope,
    lll_gram,
    lll_reduce,
    rounded_superset_vertices,
)


def gram_of(B):
    return [[sum(a * b for a, b in zip(u, v)) for v in B] for u in B]


def qform(G, x):
    return sum(G[i][j] * x[i] * x[j] for i in range(len(x)) for j in range(len(x)))


def gso(B):
    """Exact Gram-Schmidt: squared norms and mu coefficients."""
    Bs, mu = [], [[Fraction(0)] * len(B) for _ in B]
    norms = []
    for i, b in enumerate(B):
        v = [Fraction(x) for x in b]
        for j in range(i):
            mu[i][j] = sum(Fraction(x) * y for x, y in zip(b, Bs[j])) / norms[j]
            v = [a - mu[i][j] * c for a, c in zip(v, Bs[j])]
        Bs.append(v)
        norms.append(sum(x * x for x in v))
    return norms, mu


def assert_lll_reduced(B, delta=DELTA_LLL):
    norms, mu = gso(B)
    for i in range(len(B)):
        for j in range(i):
            assert abs(mu[i][j]) <= Fraction(1, 2)
    for k in range(1, len(B)):
        assert norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]


def random_basis(rng, d, lo=-9, hi=9):
    while True:
        B = [[rng.randint(lo, hi) for _ in range(d)] for _ in range(d)]
        if sympy.Matrix(B).det() != 0:
            return B


# --- LLL ---------------------------------------------------------------------

def test_identity_is_reduced():
    assert lll_reduce([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_small_example():
    out = lll_reduce([[1, 0], [4, 1]])
    assert sorted(sum(x * x for x in v) for v in out) == [1, 1]


def test_lll_properties_random():
    rng = random.Random(7)
    for _ in range(60):
        d = rng.randint(2, 6)
        B = random_basis(rng, d)
        R, U = lll_reduce(B, return_transform=True)
        assert abs(sympy.Matrix(U).det()) == 1
        assert sympy.Matrix(U) * sympy.Matrix(B) == sympy.Matrix(R)
        assert_lll_reduced(R)


def test_lll_first_vector_bound():
    rng = random.Random(8)
    for _ in range(20):
        B = random_basis(rng, 5, -6, 6)
        R = lll_reduce(B)
        G = gram_of(B)
        # lambda_1 by exhaustive enumeration (the oracle is a plain box scan)
        first = sum(x * x for x in R[0])
        short = enumerate_short_vectors(G, first)
        lam1 = min(qform(G, v) for v in short)
        assert first <= 2 ** (5 - 1) * lam1


def test_lll_gram_rational_matches_reference():
    rng = random.Random(9)
    for _ in range(300):
        d = rng.randint(1, 5)
        B = random_basis(rng, d)
        G = [[Fraction(x, rng.choice([1, 2, 3, 6])) if i == j else Fraction(x) for j, x in enumerate(row)]
             for i, row in enumerate(gram_of(B))]
        G = [[G[min(i, j)][max(i, j)] for j in range(d)] for i in range(d)]
        if any(sympy.Matrix(G)[:k, :k].det() <= 0 for k in range(1, d + 1)):
            continue
        Gr, U = lll_gram(G)
        Gf, Uf = _lll_fraction(G)
        assert U == Uf and Gr == Gf


def test_rank_deficient_raises():
    with pytest.raises((LatticeError, ZeroDivisionError, ValueError)):
        lll_reduce([[1, 2], [2, 4]])


# --- short vectors -------------------------------------------------------------

def test_short_vector_examples():
    assert set(enumerate_short_vectors([[1, 0], [0, 1]], Fraction(9, 4))) == {(1, 0), (0, 1), (1, 1), (1, -1)}
    assert enumerate_short_vectors([[1, 0], [0, 3]], 1) == [(1, 0)]


def test_not_positive_definite():
    with pytest.raises(LatticeError):
        enumerate_short_vectors([[1, 2], [2, 1]], 5)


def brute_short(G, C, R):
    out = set()
    for x in itertools.product(range(-R, R + 1), repeat=len(G)):
        if any(x) and qform(G, x) <= C:
            first = next(v for v in x if v)
            out.add(x if first > 0 else tuple(-v for v in x))
    return out


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_short_vectors_vs_brute_force(d):
    rng = random.Random(10 + d)
    for _ in range(25 if d < 4 else 8):
        B = random_basis(rng, d, -4, 4)
        G = gram_of(B)
        lam = min(np.linalg.eigvalsh(np.array(G, dtype=float)))
        C = rng.randint(1, 40)
        R = math.ceil(math.sqrt(C / lam)) + 1
        assert set(enumerate_short_vectors(G, C)) == brute_short(G, C, R)


def test_closest_vector_vs_brute_force():
    rng = random.Random(12)
    for _ in range(60):
        d = rng.randint(1, 3)
        G = gram_of(random_basis(rng, d, -3, 3))
        t = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(d)]
        x, val = closest_vector(G, t)
        best = min(qform(G, [a - b for a, b in zip(y, t)])
                   for y in itertools.product(*[range(math.floor(v) - 6, math.ceil(v) + 7) for v in t]))
        assert val == best == qform(G, [a - b for a, b in zip(x, t)])


# --- polytopes -------------------------------------------------------------------

def test_box_example():
    P = ConvexPolytope.box([0.2, -0.4], [1.8, 0.9])
    assert lattice_points_in_polytope([[1, 0], [0, 1]], P) == [(1, 0)]


def brute_points(basis, P, R):
    A = np.array([a for a, _ in P.halfspaces])
    b = np.array([bb for _, bb in P.halfspaces])
    Bm = np.array(basis, dtype=float)
    grid = np.array(list(itertools.product(range(-R, R + 1), repeat=len(basis))))
    inside = np.all((grid @ Bm) @ A.T < b, axis=1)
    return sorted(tuple(int(v) for v in c) for c in grid[inside])


def test_skew_square():
    basis = [[1, 0], [4, 1]]
    s = 1.5 - 1e-3
    P = ConvexPolytope.box([-s, -s], [s, s])
    assert lattice_points_in_polytope(basis, P) == brute_points(basis, P, 20)


def test_empty_after_filter():
    # a thin sliver between lattice lines: the rounded superset has points, P has none
    P = ConvexPolytope.from_vertices([(0.1, 0.1), (0.9, 0.2), (0.5, 0.9)])
    assert lattice_points_in_polytope([[1, 0], [0, 1]], P) == []


def test_boundary_point_signals():
    P = ConvexPolytope.box([0.0, 0.5], [1.5, 1.5])
    with pytest.raises(PrecisionEscalation):
        lattice_points_in_polytope([[1, 0], [0, 1]], P)
    assert lattice_points_in_polytope([[1, 0], [0, 1]], P, boundary="include") == [(0, 1), (1, 1)]


coords = st.floats(-6, 6, allow_nan=False).map(lambda v: round(v, 3) + 0.0001)


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(st.integers(1, 3), st.data())
def test_polytope_vs_brute_force(d, data):
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    basis = random_basis(rng, d, -3, 3)
    if d == 1:
        a, b = sorted(data.draw(st.lists(coords, min_size=2, max_size=2, unique=True)))
        P = ConvexPolytope.box([a], [b])
    else:
        kind = data.draw(st.sampled_from(["box", "hull"]))
        if kind == "box":
            lo = data.draw(st.lists(coords, min_size=d, max_size=d))
            w = data.draw(st.lists(st.floats(0.3, 5), min_size=d, max_size=d))
            P = ConvexPolytope.box(lo, [x + y for x, y in zip(lo, w)])
        else:
            pts = data.draw(st.lists(st.tuples(*[coords] * d), min_size=d + 2, max_size=d + 5, unique=True))
            try:
                P = ConvexPolytope.from_vertices(pts)
            except Exception:
                assume(False)  # degenerate hull
    # every lattice point of P has coordinates bounded by |v| * ||B^-1||
    phi = np.abs(np.linalg.inv(np.array(basis, dtype=float)))
    M = np.abs(np.array(P.vertices)).max()
    R = math.ceil(M * phi.sum(axis=0).max()) + 1
    assume(R <= (60 if d < 3 else 25))
    try:
        got = lattice_points_in_polytope(basis, P)
    except PrecisionEscalation:
        assume(False)
    want = brute_points(basis, P, R)
    assert got == want


def test_rounding_rule_is_a_superset():
    rng = random.Random(13)
    for _ in range(100):
        d = rng.randint(2, 3)
        basis = random_basis(rng, d, -3, 3)
        pts = [tuple(rng.uniform(-5, 5) for _ in range(d)) for _ in range(d + 3)]
        try:
            P = ConvexPolytope.from_vertices(pts)
        except Exception:
            continue
        phi = np.linalg.inv(np.array(basis, dtype=float))
        Q = np.array(rounded_superset_vertices(P, phi), dtype=float)
        lo, hi = Q.min(axis=0), Q.max(axis=0)
        for c in brute_points(basis, P, 25):
            assert np.all(np.array(c) >= lo - 1e-9) and np.all(np.array(c) <= hi + 1e-9)
