"""Imprimitive fields: relative Hunter search over a totally real base field.

A field ``F`` of degree ``n = m d`` containing ``E`` of degree ``d`` is
reached through the relative minimal polynomial of a small ``alpha``
over ``Z_E``.  Elements of ``Z_E`` are integer coordinate tuples with
respect to an integral basis.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import polyarith as pa
from .bounds import (
    HERMITE,
    SMYTH_CONSTANT,
    Prune,
    PrecisionEscalation,
    SearchPrefix,
    as_fraction,
    hunter_floor,
    next_coefficient_interval,
)
from .lattice import ConvexPolytope, LatticeError, closest_vector, lattice_points_in_polytope
from .orders import Order, bareiss_det, maximal_order_discriminant, real_roots
from .polyarith import ContractError, MonicPolynomial
from .search import FieldRecord, SieveOutcome, StageCounters, merge_dedup, sieve_candidate, sturm_real_root_count

log = logging.getLogger(__name__)

MAX_DEGREE = 10


@dataclass
class BaseFieldData:
    """A totally real base field ``E`` with an integral basis ``w_1..w_d``."""

    degree: int
    disc: int
    poly: MonicPolynomial
    order: Order
    embeddings: list  # embeddings[v][i] = sigma_v(w_i) as floats
    trace_gram: list
    traces: list = field(default_factory=list)  # Tr(w_i)

    @classmethod
    def from_polynomial(cls, f) -> "BaseFieldData":
        f = f if isinstance(f, MonicPolynomial) else MonicPolynomial.from_full(pa.parse_polynomial(f) if isinstance(f, str) else f)
        full = list(f.full())
        if len(full) == 2:
            O = Order(tuple(full), [[1]], 1)
            return cls(1, 1, f, O, [[1]], [[1]], [1])
        if sturm_real_root_count(full) != len(full) - 1:
            raise ContractError("base field is not totally real")
        mo = maximal_order_discriminant(full)
        O = mo.order()
        roots = real_roots(full, 40)
        emb = []
        for r in roots:
            emb.append([float(sum(O.M[i][j] * r ** j for j in range(len(O.M[i]))) / O.den) for i in range(O.n)])
        G = O.trace_gram()
        one = O.one()
        tr = [sum(one[j] * G[i][j] for j in range(O.n)) for i in range(O.n)]
        return cls(O.n, mo.field_disc, f, O, emb, G, tr)

    @classmethod
    def from_record(cls, rec: FieldRecord) -> "BaseFieldData":
        return cls.from_polynomial(rec.poly)

    # element arithmetic -------------------------------------------------

    def one(self) -> tuple:
        return tuple(self.order.one()) if self.degree > 1 else (1,)

    def embed(self, c: Sequence[int]) -> list:
        if self.degree == 1:
            return [c[0]]
        return [sum(ci * row[i] for i, ci in enumerate(c)) for row in self.embeddings]

    def mul(self, a: Sequence[int], b: Sequence[int]) -> tuple:
        if self.degree == 1:
            return (a[0] * b[0],)
        return tuple(self.order.mul(a, b))

    def trace(self, c: Sequence[int]) -> int:
        return sum(ci * t for ci, t in zip(c, self.traces))

    def trace_sq(self, c: Sequence[int]) -> int:
        """``Tr_{E/Q}(c^2)``, the positive definite trace form."""
        G = self.trace_gram
        d = self.degree
        return sum(c[i] * G[i][j] * c[j] for i in range(d) for j in range(d))

    def mult_matrix(self, c: Sequence[int]) -> list[list[int]]:
        """Matrix of multiplication by ``c`` (rows: images of the basis)."""
        d = self.degree
        if d == 1:
            return [[c[0]]]
        basis = [[int(i == j) for j in range(d)] for i in range(d)]
        return [list(self.order.mul(c, e)) for e in basis]


# ---------------------------------------------------------------------------
# bounds and representatives


def relative_hunter_bound(E: BaseFieldData, m: int, B, a: Sequence[int]) -> int:
    """Largest integral ``T_2(alpha)`` allowed by the relative Hunter bound."""
    n = m * E.degree
    if n > MAX_DEGREE:
        raise ContractError(f"degree {n} exceeds {MAX_DEGREE}")
    if m < 2:
        raise ContractError("relative degree must be at least 2")
    B = as_fraction(B)
    shift = Fraction(E.trace_sq(a), m)
    Y = B ** n / (Fraction(m) ** E.degree * E.disc)
    return hunter_floor(shift, n - E.degree, Y)


def relative_hunter_value(E: BaseFieldData, m: int, B, a: Sequence[int]) -> float:
    """Real value of the relative Hunter bound (for display)."""
    n = m * E.degree
    B = as_fraction(B)
    r, e = HERMITE[n - E.degree]
    Y = B ** n / (Fraction(m) ** E.degree * E.disc)
    return E.trace_sq(a) / m + float(r) ** (1 / e) * float(Y) ** (1 / (n - E.degree))


def a_m1_representatives(E: BaseFieldData, m: int) -> list[tuple]:
    """One minimal-``Tr(a^2)`` element per class of ``Z_E / m Z_E`` up to sign."""
    d = E.degree
    G = E.trace_gram
    mG = [[Fraction(m * m * G[i][j]) for j in range(d)] for i in range(d)]
    seen = set()
    out = []
    for c in itertools.product(range(m), repeat=d):
        if c in seen:
            continue
        neg = tuple((-x) % m for x in c)
        seen.add(c)
        seen.add(neg)
        # minimise Tr((c + m y)^2): closest lattice vector m*y to -c
        target = [Fraction(-x, m) for x in c]
        y, _ = closest_vector(mG, target)
        best = tuple(ci + m * yi for ci, yi in zip(c, y))
        # ties: prefer the lexicographically smallest among equal norms
        val = E.trace_sq(best)
        cands = [best]
        for delta in itertools.product((-1, 0, 1), repeat=d):
            alt = tuple(b + m * t for b, t in zip(best, delta))
            v = E.trace_sq(alt)
            if v < val:
                val, cands = v, [alt]
            elif v == val:
                cands.append(alt)
            altn = tuple(-x for x in alt)
            if E.trace_sq(altn) == val:
                cands.append(altn)
        out.append(min(cands, key=lambda t: (E.trace_sq(t), tuple(abs(x) for x in t), t)))
    return sorted(out, key=lambda t: (E.trace_sq(t), t))


def representative_count(d: int, m: int) -> int:
    """Number of classes of ``(Z/m)^d`` modulo ``x ~ -x``."""
    fixed = 2 ** d if m % 2 == 0 else 1
    return (m ** d + fixed) // 2


# ---------------------------------------------------------------------------
# t_2 values


def _simplex(lower: Sequence[float], top: float, shift: Sequence[float], scale: float) -> ConvexPolytope | None:
    """``{(x - shift)/scale : x_v >= lower_v, sum x_v <= top}``."""
    d = len(lower)
    room = top - sum(lower)
    if room < 0:
        return None
    base = [(lower[v] - shift[v]) / scale for v in range(d)]
    verts = [tuple(base)]
    for v in range(d):
        p = list(base)
        p[v] += room / scale
        verts.append(tuple(p))
    hs = []
    for v in range(d):
        a = [0.0] * d
        a[v] = -1.0
        hs.append((tuple(a), -base[v]))
    hs.append((tuple([1.0] * d), (top - sum(shift)) / scale))
    if room == 0:
        # a single point; widen slightly so the polytope is full dimensional
        eps = 1e-9 * (1 + abs(top))
        return _simplex([x - eps for x in lower], top + d * eps, shift, scale)
    return ConvexPolytope.from_halfspaces(hs, verts)


def enumerate_t2_values(E: BaseFieldData, a: Sequence[int], t2_trace_bound: int, m: int = 2,
                        lower: int | None = None) -> list[tuple]:
    """Totally positive ``t_2 = a^2 + 2u`` with ``lower < Tr t_2 <= bound``.

    Each embedding also satisfies ``sigma(t_2) >= sigma(a)^2 / m`` (the
    conjugates of ``alpha`` above ``sigma`` are real), which sharpens the
    positivity constraint.  ``lower`` defaults to the Smyth bound for
    ``n = m d``.
    """
    d = E.degree
    n = m * d
    if lower is None:
        lower = math.floor(SMYTH_CONSTANT * n)
    if t2_trace_bound <= lower:
        return []
    a2 = E.mul(a, a)
    ea = E.embed(a)
    ea2 = E.embed(a2)
    low = [float(x) ** 2 / m for x in ea]
    P = _simplex(low, float(t2_trace_bound), [float(x) for x in ea2], 2.0)
    if P is None:
        return []
    basis = [[float(E.embeddings[v][i]) if d > 1 else 1.0 for v in range(d)] for i in range(d)]
    gram = [[Fraction(x) for x in row] for row in E.trace_gram]
    try:
        us = lattice_points_in_polytope(basis, P, boundary="include", gram=gram)
    except LatticeError:
        return []
    out = []
    for u in us:
        t2 = tuple(x + 2 * y for x, y in zip(a2, u))
        tr = E.trace(t2)
        if not lower < tr <= t2_trace_bound:
            continue
        et = E.embed(t2)
        if all(float(x) > 0 for x in et):
            out.append(t2)
    return sorted(out, key=lambda t: (E.trace(t), t))


# ---------------------------------------------------------------------------
# relative coefficient search


@dataclass(frozen=True)
class RelativePrefix:
    """Known top coefficients ``a_{m-1}, ..., a_{m-k}`` with one ladder per embedding."""

    m: int
    coeffs: tuple  # Z_E elements
    ladders: tuple  # SearchPrefix per embedding

    @property
    def level(self) -> int:
        return len(self.coeffs)


def relative_seed(E: BaseFieldData, m: int, a: Sequence[int], am2: Sequence[int]) -> RelativePrefix:
    """Level-2 prefix; raises Prune if some embedding is infeasible."""
    ea = E.embed(a)
    eb = E.embed(am2)
    ladders = tuple(SearchPrefix.seed(m, x, y) for x, y in zip(ea, eb))
    return RelativePrefix(m, (tuple(a), tuple(am2)), ladders)


def relative_extend(E: BaseFieldData, prefix: RelativePrefix, c: Sequence[int]) -> RelativePrefix:
    ec = E.embed(c)
    ladders = tuple(L.extend(x) for L, x in zip(prefix.ladders, ec))
    return RelativePrefix(prefix.m, prefix.coeffs + (tuple(c),), ladders)


def relative_coefficient_box(E: BaseFieldData, prefix: RelativePrefix) -> list[tuple]:
    """``Z_E`` candidates for the next coefficient from the per-embedding Rolle intervals."""
    d = E.degree
    if d == 1:
        rng = next_coefficient_interval(prefix.ladders[0], normalize=False)
        if isinstance(rng, range):
            return [(x,) for x in rng]
        lo, hi = rng
        return [(x,) for x in range(math.ceil(lo), math.floor(hi) + 1)]
    los, his = [], []
    for L in prefix.ladders:
        lo, hi = next_coefficient_interval(L, normalize=False)
        if not lo < hi:
            return []
        los.append(lo)
        his.append(hi)
    P = ConvexPolytope.box(los, his)
    basis = [[E.embeddings[v][i] for v in range(d)] for i in range(d)]
    gram = [[Fraction(x) for x in row] for row in E.trace_gram]
    return lattice_points_in_polytope(basis, P, boundary="include", gram=gram)


def absolute_polynomial(E: BaseFieldData, coeffs: Sequence[Sequence[int]]) -> list[int]:
    """``N_{E/Q}`` of the relative polynomial ``x^m + sum coeffs[i] x^i`` (low to high)."""
    d = E.degree
    m = len(coeffs)
    n = m * d
    if d == 1:
        return [c[0] for c in coeffs] + [1]
    one = E.one()
    pts = list(range(n + 1))
    vals = []
    for x0 in pts:
        elt = [0] * d
        xp = 1
        for i in range(m + 1):
            c = coeffs[i] if i < m else one
            for j in range(d):
                elt[j] += c[j] * xp
            xp *= x0
        vals.append(bareiss_det(E.mult_matrix(elt)))
    return _interpolate(pts, vals)


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[int]:
    """Integer polynomial through the points (Newton form, exact)."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    poly[0] = coef[n - 1]
    for k in range(n - 2, -1, -1):
        # poly = poly * (x - xs[k]) + coef[k]
        new = [Fraction(0)] * n
        for i in range(n - 1):
            new[i + 1] += poly[i]
            new[i] -= xs[k] * poly[i]
        new[0] += coef[k]
        poly = new
    if any(c.denominator != 1 for c in poly):
        raise ArithmeticError("norm polynomial is not integral")
    return [int(c) for c in poly]


def shift_relative(E: BaseFieldData, coeffs: Sequence[Sequence[int]], s: Sequence[int]) -> list[tuple]:
    """Coefficients of ``f(x - s)`` for the monic relative ``f`` given by ``coeffs``."""
    m = len(coeffs)
    d = E.degree
    # Horner: g = ((x + c_m)(x - s) + ...) built top down over Z_E[x]
    full = [tuple(c) for c in coeffs] + [E.one()]
    neg = tuple(-x for x in s)
    acc = [E.one()]  # low to high
    for c in reversed(full[:-1]):
        nxt = [tuple([0] * d)] + acc  # x * acc
        for i, t in enumerate(acc):
            prod = E.mul(t, neg)
            nxt[i] = tuple(x + y for x, y in zip(nxt[i], prod))
        nxt[0] = tuple(x + y for x, y in zip(nxt[0], c))
        acc = nxt
    return acc[:m]


def _compositum_generator(E: BaseFieldData, rel, tries: int = 40) -> list[int] | None:
    """Absolute polynomial of ``alpha + c w`` when ``alpha`` itself has smaller degree.

    ``alpha`` can generate ``F`` over ``E`` while lying in another subfield;
    then ``alpha + c w`` generates ``F`` for all but finitely many integers
    ``c``.  Returns None when no shift works (``alpha`` lies in ``E``).
    """
    d = E.degree
    one = E.one()
    # any basis vector other than 1 is irrational
    w = next(e for e in (tuple(int(i == k) for k in range(d)) for i in range(d)) if e != tuple(one))
    for c in range(1, tries + 1):
        shifted = shift_relative(E, rel, tuple(c * x for x in w))
        full = absolute_polynomial(E, shifted)
        if pa.discriminant(full) != 0:
            return full
    return None


def _relative_leaves(E: BaseFieldData, prefix: RelativePrefix):
    m = prefix.m
    if prefix.level == m:
        yield prefix.coeffs
        return
    for c in relative_coefficient_box(E, prefix):
        if prefix.level + 1 == m:
            # the last coefficient: check real-rootedness per embedding
            try:
                relative_extend(E, prefix, c)
            except Prune:
                continue
            yield prefix.coeffs + (tuple(c),)
            continue
        try:
            child = relative_extend(E, prefix, c)
        except Prune:
            continue
        yield from _relative_leaves(E, child)


def relative_candidates(E: BaseFieldData, m: int, B, a: Sequence[int], lower: int | None = None):
    """Relative polynomials (``a_0, ..., a_{m-1}``, each in ``Z_E``) for one ``a_{m-1}``."""
    tmax = relative_hunter_bound(E, m, B, a)
    if lower is None:
        lower = m * E.degree
    for t2 in enumerate_t2_values(E, a, tmax, m, lower):
        a2 = E.mul(a, a)
        am2 = tuple((x - y) // 2 for x, y in zip(a2, t2))
        if m == 2:
            yield (am2, tuple(a))
            continue
        try:
            root = relative_seed(E, m, a, am2)
        except (Prune, PrecisionEscalation):
            continue
        for top_down in _relative_leaves(E, root):
            yield tuple(reversed(top_down))


def enumerate_over_base(E: BaseFieldData, m: int, B, counters: StageCounters | None = None,
                        lower: int | None = None) -> list[FieldRecord]:
    """All fields found by the relative search over a single base field."""
    n = m * E.degree
    B = as_fraction(B)
    if counters is None:
        counters = StageCounters()
    if Fraction(E.disc) ** m > B ** n:
        return []
    found = {}
    seen = set()
    tags: dict = {}
    for a in a_m1_representatives(E, m):
        for rel in relative_candidates(E, m, B, a, lower):
            full = absolute_polynomial(E, rel)
            if E.degree > 1 and pa.discriminant(full) == 0:
                full = _compositum_generator(E, rel)
                if full is None:
                    counters.add(SieveOutcome.reject("reducible", "reducible over the base field"))
                    continue
            key = tuple(full)
            if key in seen:
                continue
            seen.add(key)
            out = sieve_candidate(full, n, B, tag_cache=tags)
            counters.add(out)
            if out.accepted:
                found[out.record.poly] = out.record
    return list(found.values())


def enumerate_imprimitive(n: int, B, bases, counters: StageCounters | None = None,
                          lower: int | None = None) -> list[FieldRecord]:
    """Imprimitive fields of degree ``n`` with root discriminant at most ``B``.

    ``bases`` maps each proper divisor degree ``1 < d < n`` to the complete
    tabulation of degree ``d`` fields for the same bound.
    """
    B = as_fraction(B)
    if n > MAX_DEGREE:
        raise ContractError(f"degree {n} exceeds {MAX_DEGREE}")
    need = [d for d in range(2, n) if n % d == 0]
    missing = [d for d in need if d not in bases]
    if missing:
        raise ContractError(f"missing base tabulation for degree(s) {missing}")
    if counters is None:
        counters = StageCounters()
    found = []
    for d in need:
        for rec in sorted(bases[d], key=FieldRecord.sort_key):
            if rec.degree != d or Fraction(rec.disc) ** (n // d) > B ** n:
                continue
            E = BaseFieldData.from_record(rec)
            found.extend(enumerate_over_base(E, n // d, B, counters, lower))
    return merge_dedup(found)


def base_tabulation(d: int, B) -> list[FieldRecord]:
    """Every totally real field of degree ``d`` with root discriminant at most ``B``."""
    from .search import enumerate_primitive

    recs = enumerate_primitive(d, B)
    need = [e for e in range(2, d) if d % e == 0]
    if need:
        bases = {e: base_tabulation(e, B) for e in need}
        recs = merge_dedup(recs + enumerate_imprimitive(d, B, bases))
    return recs
