"""Maximal orders, canonical defining polynomials and subfields.

An order ``O`` of ``Q[x]/(f)`` is stored by an integer matrix ``M`` and a
denominator ``den``: row ``i`` of ``M`` divided by ``den`` gives the power-basis
coordinates of the ``i``-th basis element.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import flint
import mpmath

from . import polyarith as pa
from .lattice import enumerate_short_vectors, reduced_gram
from .polyarith import ContractError, MonicPolynomial


class DiscriminantTooLarge(Exception):
    """The field discriminant provably exceeds the requested bound."""


class IndexUncertain(Exception):
    """The discriminant could not be factored far enough to certify the index."""


def _full(f) -> list[int]:
    return f.full() if isinstance(f, MonicPolynomial) else list(f)


# ---------------------------------------------------------------------------
# linear algebra helpers


def rref_mod_p(rows: list[list[int]], p: int) -> list[list[int]]:
    """Reduced row echelon basis (pivots equal to 1) of the row span mod p."""
    A = [[x % p for x in r] for r in rows]
    A = [r for r in A if any(r)]
    if not A:
        return []
    n = len(A[0])
    out = []
    col = 0
    while A and col < n:
        piv = next((r for r in A if r[col]), None)
        if piv is None:
            col += 1
            continue
        A.remove(piv)
        inv = pow(piv[col], -1, p)
        piv = [(x * inv) % p for x in piv]
        A = [[(a - r[col] * b) % p for a, b in zip(r, piv)] for r in A]
        A = [r for r in A if any(r)]
        out = [[(a - r[col] * b) % p for a, b in zip(r, piv)] for r in out]
        out.append(piv)
        col += 1
    out.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    return out


def left_kernel_mod_p(A: list[list[int]], p: int) -> list[list[int]]:
    """Basis of ``{v : v A = 0 mod p}``."""
    m = len(A)
    if m == 0:
        return []
    ncols = len(A[0])
    # augment with identity and eliminate on the A part
    rows = [[x % p for x in A[i]] + [int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return [row[ncols:] for row in rows[r:]]


def lattice_with_p(kernel: list[list[int]], n: int, p: int) -> list[list[int]]:
    """Basis of ``p Z^n + span(kernel)`` (upper triangular)."""
    R = rref_mod_p(kernel, p)
    pivots = {next(i for i, x in enumerate(r) if x): r for r in R}
    return [pivots[c] if c in pivots else [p * int(j == c) for j in range(n)] for c in range(n)]


def hnf_modular(rows: list[list[int]], D: int, n: int) -> list[list[int]]:
    """Upper triangular HNF basis of ``span(rows) + D Z^n`` (full rank)."""
    pool = [[x % D for x in r] for r in rows] + [[D * int(i == j) for j in range(n)] for i in range(n)]
    basis = []
    for c in range(n):
        active = [r for r in pool if r[c]]
        rest = [r for r in pool if not r[c]]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            piv = active[0]
            new = [piv]
            for r in active[1:]:
                q = r[c] // piv[c]
                r2 = [a - q * b for a, b in zip(r, piv)]
                r2 = r2[:c + 1] + [x % D for x in r2[c + 1:]] if c + 1 < n else r2
                if r2[c]:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            active = new
        piv = active[0]
        if piv[c] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        pool = rest
    for i in range(n - 1, -1, -1):
        for j in range(i):
            q = basis[j][i] // basis[i][i]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[i])]
    return basis


def _det_upper(M):
    d = 1
    for i, r in enumerate(M):
        d *= r[i]
    return d


def _mat_inverse_frac(M) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [v / pv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                fct = A[r][c]
                A[r] = [a - fct * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


def bareiss_det(M) -> int:
    """Exact determinant of an integer matrix."""
    A = [list(r) for r in M]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------------------
# orders


@dataclass
class Order:
    """A full-rank order of ``Q[x]/(f)`` given by ``M / den`` in the power basis."""

    f: tuple
    M: list
    den: int

    @property
    def n(self) -> int:
        return len(self.f) - 1

    @cached_property
    def inv(self) -> list[list[Fraction]]:
        # power-basis coordinates x  ->  order coordinates x * den * M^{-1}
        Mi = _mat_inverse_frac(self.M)
        return [[v * self.den for v in row] for row in Mi]

    def index(self) -> int:
        """``[O : Z[alpha]]``."""
        return self.den ** self.n // abs(_det_upper(self.M))

    def to_order(self, x: Sequence) -> list:
        """Coordinates in the order basis of a power-basis vector (Fractions)."""
        # M is upper triangular: forward substitution
        n = self.n
        M = self.M
        out = []
        for j in range(n):
            acc = Fraction(x[j]) * self.den if j < len(x) else Fraction(0)
            for i in range(j):
                if out[i] and M[i][j]:
                    acc -= out[i] * M[i][j]
            out.append(acc / M[j][j])
        return out

    def to_order_int(self, num: Sequence[int], scale: int) -> list[int] | None:
        """Integer coordinates of ``num / scale`` (power basis), or None if not in the order."""
        n = self.n
        M = self.M
        den = self.den
        out = []
        for j in range(n):
            acc = (num[j] if j < len(num) else 0) * den
            for i in range(j):
                if out[i] and M[i][j]:
                    acc -= out[i] * M[i][j] * scale
            q, r = divmod(acc, M[j][j] * scale)
            if r:
                return None
            out.append(q)
        return out

    def to_power(self, c: Sequence[int]) -> tuple[list[int], int]:
        """Integer numerator and denominator of an element in the power basis."""
        n = self.n
        num = [0] * n
        for i, ci in enumerate(c):
            if ci:
                row = self.M[i]
                for j in range(n):
                    num[j] += ci * row[j]
        return num, self.den

    @cached_property
    def table(self) -> list[list[list[int]]]:
        """Structure constants: ``table[i][j]`` are the coordinates of ``w_i w_j``."""
        n = self.n
        out = [[None] * n for _ in range(n)]
        d2 = self.den * self.den
        for i in range(n):
            for j in range(i, n):
                prod = pa.poly_rem_monic(pa.poly_mul(self.M[i], self.M[j]), self.f)
                c = self.to_order_int(prod, d2)
                if c is None:
                    raise ArithmeticError("basis does not span a ring")
                out[i][j] = out[j][i] = c
        return out

    def mul(self, a: Sequence[int], b: Sequence[int], p: int | None = None) -> list[int]:
        n = self.n
        T = self.table
        out = [0] * n
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * bj
                Tij = T[i][j]
                for k in range(n):
                    out[k] += c * Tij[k]
        if p is not None:
            out = [x % p for x in out]
        return out

    def one(self) -> list[int]:
        return list(self._one)

    @cached_property
    def _one(self) -> tuple:
        return tuple(self.to_order_int([1] + [0] * (self.n - 1), 1))

    def power(self, a, e: int, p: int | None = None) -> list[int]:
        result = self.one()
        base = list(a)
        while e:
            if e & 1:
                result = self.mul(result, base, p)
            base = self.mul(base, base, p)
            e >>= 1
        return result

    def enlarge(self, W: list[list[int]], q: int) -> "Order":
        """The order spanned by ``W / q`` (rows in the coordinates of ``self``)."""
        n = self.n
        num = [[sum(W[i][k] * self.M[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        den = self.den * q
        H = hnf_modular(num, den, n)
        g = den
        for r in H:
            for x in r:
                g = math.gcd(g, x)
        return Order(self.f, [[x // g for x in r] for r in H], den // g)

    def trace_gram(self) -> list[list[int]]:
        """Integer Gram matrix ``Tr(w_i w_j)`` of the trace form."""
        n = self.n
        s = pa.power_sums(list(self.f), 2 * n - 1)
        H = [[s[i + j] for j in range(n)] for i in range(n)]
        MH = [[sum(self.M[i][k] * H[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        d2 = self.den * self.den
        G = [[sum(MH[i][k] * self.M[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
        for row in G:
            for x in row:
                if x % d2:
                    raise ArithmeticError("trace form not integral")
        return [[x // d2 for x in row] for row in G]


def equation_order(f) -> Order:
    full = tuple(_full(f))
    n = len(full) - 1
    return Order(full, [[int(i == j) for j in range(n)] for i in range(n)], 1)


# ---------------------------------------------------------------------------
# polynomials over F_p


def _trim(a):
    a = [x for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, p):
    return _trim([x % p for x in a])


def _pderiv(a, p):
    return _trim([(i * a[i]) % p for i in range(1, len(a))])


def _pdivmod(a, b, p):
    a = _pmod(a, p)
    b = _pmod(b, p)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        c = (a[-1] * inv) % p
        s = len(a) - 1 - db
        q[s] = c
        for i in range(db + 1):
            a[s + i] = (a[s + i] - c * b[i]) % p
        a = _trim(a)
    return _trim(q), a


def _pgcd(a, b, p):
    a, b = _pmod(a, p), _pmod(b, p)
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [(x * inv) % p for x in a]


def _pmul(a, b, p):
    return _pmod(pa.poly_mul(a, b), p)


def radical_mod_p(a, p) -> list[int]:
    """Product of the distinct monic irreducible factors of ``a`` mod p."""
    a = _pmod(a, p)
    if len(a) <= 1:
        return [1]
    inv = pow(a[-1], -1, p)
    a = [(x * inv) % p for x in a]
    d = _pderiv(a, p)
    if not d:
        # a = b(x^p), and b^p = a over F_p
        return radical_mod_p(a[::p], p)
    g = _pgcd(a, d, p)
    r = _pdivmod(a, g, p)[0]
    if len(g) <= 1:
        return r
    rg = radical_mod_p(g, p)
    common = _pgcd(r, rg, p)
    return _pdivmod(_pmul(r, rg, p), common, p)[0]


def dedekind_test(f, p: int):
    """Dedekind's criterion at ``p``.

    Returns ``None`` when ``Z[alpha]`` is ``p``-maximal, otherwise the lifted
    polynomial ``V = f / U mod p`` whose value at ``alpha`` divided by ``p``
    enlarges the equation order.
    """
    full = _full(f)
    t = radical_mod_p(full, p)
    h = _pdivmod(full, t, p)[0]
    th = pa.poly_mul(t, h)
    F = [x // p for x in pa.poly_sub(th, full)]
    U = _pgcd(_pgcd(F, t, p), h, p)
    if len(U) <= 1:
        return None
    V = _pdivmod(full, U, p)[0]
    return V


def _dedekind_enlarge(O: Order, V: list[int], p: int) -> Order:
    """``O + (V(alpha)/p) Z[alpha]`` for ``O`` equal to ``Z[alpha]`` locally at p."""
    n = O.n
    gens = []
    cur = list(V) + [0] * (n + 1 - len(V))
    for i in range(n):
        r = pa.poly_rem_monic(cur[: max(len(cur), n)], list(O.f))
        gens.append(O.to_order_int(r, 1))
        cur = [0] + list(r)
    # V(alpha) alpha^i / p in O-coordinates are gens / p; lattice pO + gens
    rows = gens
    W = lattice_with_p(rows, n, p)
    return O.enlarge(W, p)


def _round2_step(O: Order, p: int) -> Order | None:
    """One Pohst-Zassenhaus enlargement at ``p``; None if ``O`` is p-maximal."""
    n = O.n
    q = p
    while q < n:
        q *= p
    frob = [O.power([int(i == j) for j in range(n)], q, p) for i in range(n)]
    K = left_kernel_mod_p(frob, p)
    if not K:
        return None
    I = lattice_with_p(K, n, p)  # basis of the p-radical in O-coordinates
    big = []
    T = O.table
    for u in range(n):
        row = []
        for beta in I:
            # w_u * beta in O-coordinates, then in the (triangular) basis of I
            prod = [0] * n
            for k, bk in enumerate(beta):
                if bk:
                    Tk = T[u][k]
                    for j in range(n):
                        prod[j] += bk * Tk[j]
            c = []
            for j in range(n):
                acc = prod[j]
                for i in range(j):
                    if c[i] and I[i][j]:
                        acc -= c[i] * I[i][j]
                c.append(acc // I[j][j])
            row.extend(x % p for x in c)
        big.append(row)
    Uk = left_kernel_mod_p(big, p)
    if not Uk:
        return None
    W = lattice_with_p(Uk, n, p)
    return O.enlarge(W, p)


def p_maximal(O: Order, p: int, dedekind: bool = True) -> Order:
    if dedekind and O.index() % p != 0:
        V = dedekind_test(O.f, p)
        if V is None:
            return O
        O = _dedekind_enlarge(O, V, p)
    while True:
        nxt = _round2_step(O, p)
        if nxt is None:
            return O
        O = nxt


@dataclass(frozen=True)
class MaximalOrderResult:
    field_disc: int
    index: int
    integral_basis: tuple  # rows of M
    den: int
    poly: tuple

    def order(self) -> Order:
        return Order(self.poly, [list(r) for r in self.integral_basis], self.den)


def _critical_primes(d: int, factor_fallback: bool = True) -> dict[int, int]:
    fac, exact = pa.square_part(d)
    if not exact:
        if not factor_fallback:
            raise IndexUncertain(f"unresolved cofactor in {d}")
        fac = {}
        for q, e in flint.fmpz(abs(d)).factor():
            if e >= 2:
                fac[int(q)] = e // 2
    return fac


def maximal_order_discriminant(f, disc: int | None = None, bound=None, factor_fallback: bool = True) -> MaximalOrderResult:
    """Maximal order of ``Q[x]/(f)`` and its discriminant.

    ``bound`` (optional, on ``|d_F|``) allows an early exit with
    :class:`DiscriminantTooLarge` once no remaining index can bring the
    discriminant under it.
    """
    full = _full(f)
    if disc is None:
        disc = pa.discriminant(full)
    if disc == 0:
        raise ContractError("reducible or inseparable polynomial")
    crit = _critical_primes(disc, factor_fallback)
    remaining = 1
    for p, e in crit.items():
        remaining *= p ** e
    O = equation_order(full)
    ad = abs(disc)
    for p in sorted(crit):
        if bound is not None and Fraction(ad, remaining * remaining) > bound:
            raise DiscriminantTooLarge
        O = p_maximal(O, p)
        remaining //= p ** crit[p]
        ad = abs(disc) // O.index() ** 2
    idx = O.index()
    dF = disc // (idx * idx)
    if bound is not None and abs(dF) > bound:
        raise DiscriminantTooLarge
    return MaximalOrderResult(dF, idx, tuple(tuple(r) for r in O.M), O.den, tuple(full))


def maximal_order(f) -> Order:
    return maximal_order_discriminant(f).order()


# ---------------------------------------------------------------------------
# characteristic polynomials and POLRED


def char_poly(O: Order, c: Sequence[int]) -> list[int]:
    """Characteristic polynomial (low to high, monic) of the element ``c`` of ``O``."""
    n = O.n
    num, den = O.to_power(c)
    s = pa.power_sums(list(O.f), n + 1)
    sums = []
    cur = [1]
    for j in range(1, n + 1):
        cur = pa.poly_rem_monic(pa.poly_mul(cur, num), list(O.f))
        tr = sum(cur[k] * s[k] for k in range(len(cur)))
        dj = den ** j
        if tr % dj:
            raise ArithmeticError("non-integral trace")
        sums.append(tr // dj)
    hi = pa.coefficients_from_power_sums(sums)
    return [int(x) for x in reversed(hi)] + [1]


def sign_normalize(full: Sequence[int]) -> list[int]:
    """Apply ``x -> -x`` if needed so the first nonzero of a_{n-1}, a_{n-3}, ... is <= 0."""
    full = list(full)
    n = len(full) - 1
    for j in range(1, n + 1, 2):
        c = full[n - j]
        if c:
            if c > 0:
                return [full[i] * (-1) ** (n - i) for i in range(n + 1)]
            return full
    return full


def _lex_key(full: Sequence[int]):
    n = len(full) - 1
    return tuple(full[n - j] for j in range(1, n + 1))


def polred_canonical(f, mo: MaximalOrderResult | None = None) -> MonicPolynomial:
    """Canonical defining polynomial of the field ``Q[x]/(f)``.

    Among all generators of the maximal order with the smallest ``T_2``, take
    the characteristic polynomials, normalize the sign, and return the
    lexicographically smallest ``(a_{n-1}, ..., a_0)``.
    """
    full = _full(f)
    n = len(full) - 1
    if n == 1:
        return MonicPolynomial((0,))
    if mo is None:
        mo = maximal_order_discriminant(full)
    O = mo.order()
    G = O.trace_gram()
    Gr, U = reduced_gram(G)

    def is_gen(cp):
        return pa.discriminant(cp) != 0

    C = None
    probes = [list(r) for r in U]
    for i in range(n):
        for j in range(i + 1, n):
            probes.append([a + b for a, b in zip(U[i], U[j])])
            probes.append([a - b for a, b in zip(U[i], U[j])])
    for v in probes:
        t2 = sum(G[a][b] * v[a] * v[b] for a in range(n) for b in range(n))
        if C is not None and t2 >= C:
            continue
        if is_gen(char_poly(O, v)):
            C = t2
    if C is None:
        C = 2 * max(Gr[i][i] for i in range(n))
        while True:
            vs = enumerate_short_vectors(G, C)
            found = [v for v in vs if is_gen(char_poly(O, v))]
            if found:
                break
            C *= 2
    vecs = enumerate_short_vectors(G, C)
    best = None
    cands = []
    for v in vecs:
        t2 = sum(G[a][b] * v[a] * v[b] for a in range(n) for b in range(n))
        if best is not None and t2 > best:
            break
        cp = char_poly(O, v)
        if not is_gen(cp):
            continue
        best = t2
        cands.append(sign_normalize(cp))
    choice = min(cands, key=_lex_key)
    return MonicPolynomial.from_full(choice)


# ---------------------------------------------------------------------------
# embeddings, isomorphism and subfields


def real_roots(f, dps: int = 50) -> list:
    """Sorted real roots of a totally real polynomial at ``dps`` digits."""
    full = _full(f)
    with mpmath.workdps(dps):
        rts = mpmath.polyroots(full[::-1], maxsteps=200, extraprec=4 * dps)
        out = sorted(mpmath.re(r) for r in rts)
    return out


def _embedding_matrix(O: Order, roots) -> list[list]:
    # E[i][k] = w_i(r_k)
    n = O.n
    E = []
    for i in range(n):
        row = []
        for r in roots:
            v = mpmath.polyval(list(reversed(O.M[i])), r) / O.den
            row.append(v)
        E.append(row)
    return E


def is_isomorphic(f, g, dps: int = 60) -> bool:
    """Whether ``Q[x]/(f)`` and ``Q[x]/(g)`` are the same field.

    Looks for a root of ``g`` in the maximal order of ``f`` by an integer
    relation at high precision, then verifies ``g(beta) = 0`` exactly.
    """
    ff, gg = _full(f), _full(g)
    if len(ff) != len(gg):
        raise ContractError("degrees differ")
    mf = maximal_order_discriminant(ff)
    mg = maximal_order_discriminant(gg)
    if mf.field_disc != mg.field_disc:
        raise ContractError("field discriminants differ")
    if polred_canonical(ff, mf) == polred_canonical(gg, mg):
        return True
    O = mf.order()
    n = O.n
    with mpmath.workdps(dps):
        rf = real_roots(ff, dps)
        rg = real_roots(gg, dps)
        w = [mpmath.polyval(list(reversed(O.M[i])), rf[0]) / O.den for i in range(n)]
        for r in rg:
            rel = mpmath.pslq([r] + w, maxcoeff=10 ** 15, maxsteps=10 ** 5)
            if rel is None or rel[0] == 0:
                continue
            if abs(rel[0]) != 1:
                continue
            c = [-rel[0] * x for x in rel[1:]]
            num, den = O.to_power(c)
            # verify g(beta) == 0 mod f exactly
            val = _eval_at_element(gg, num, den, ff)
            if all(x == 0 for x in val):
                return True
    return False


def _eval_at_element(g, num, den, f) -> list:
    """``g(num/den)`` reduced modulo ``f`` as rational power-basis coordinates."""
    n = len(f) - 1
    acc = [Fraction(0)] * n
    x = [Fraction(v, den) for v in num]
    for coeff in reversed(g):
        acc = pa.poly_rem_monic(pa.poly_mul(acc, x), f)
        acc[0] += coeff
    return acc


def _set_partitions(n: int, m: int):
    """Partitions of range(n) into blocks of size m (blocks sorted by first element)."""
    def rec(remaining):
        if not remaining:
            yield []
            return
        first = remaining[0]
        rest = remaining[1:]
        for combo in itertools.combinations(rest, m - 1):
            block = (first,) + combo
            left = [x for x in rest if x not in combo]
            for tail in rec(left):
                yield [block] + tail
    yield from rec(list(range(n)))


@dataclass(frozen=True)
class Subfield:
    degree: int
    disc: int
    poly: MonicPolynomial
    blocks: tuple


def _is_perfect_power_of(cp: list[int], g: list[int], m: int) -> bool:
    acc = [1]
    for _ in range(m):
        acc = pa.poly_mul(acc, g)
    return acc == list(cp)


def subfields(f, mo: MaximalOrderResult | None = None, dps: int = 40) -> list[Subfield]:
    """All proper subfields ``Q < E < F`` (one entry per block system)."""
    full = _full(f)
    n = len(full) - 1
    if mo is None:
        mo = maximal_order_discriminant(full)
    O = mo.order()
    out = []
    divisors = [d for d in range(2, n) if n % d == 0]
    if not divisors:
        return out
    with mpmath.workdps(dps):
        roots = real_roots(full, dps)
        E = _embedding_matrix(O, roots)
        Em = mpmath.matrix(E)
        Einv = Em ** -1
        powers = [[r ** e for r in roots] for e in range(1, n + 1)]
        for d in divisors:
            m = n // d
            for part in _set_partitions(n, m):
                block_of = [0] * n
                for b, blk in enumerate(part):
                    for i in blk:
                        block_of[i] = b
                found = None
                for e in range(1, n + 1):
                    sums = [sum(powers[e - 1][i] for i in blk) for blk in part]
                    gap = min(abs(a - b) for a, b in itertools.combinations(sums, 2))
                    if gap < mpmath.mpf(10) ** (-dps // 3):
                        continue
                    v = [sums[block_of[k]] for k in range(n)]
                    # coordinates c with sum_i c_i w_i(r_k) = v_k
                    c = [sum(v[k] * Einv[k, i] for k in range(n)) for i in range(n)]
                    ci = [int(mpmath.nint(x)) for x in c]
                    if max(abs(x - y) for x, y in zip(c, ci)) > mpmath.mpf(10) ** (-dps // 3):
                        break
                    cp = char_poly(O, ci)
                    gpoly = [int(mpmath.nint(x)) for x in _poly_from_roots(sums)]
                    if _is_perfect_power_of(cp, gpoly, m):
                        found = gpoly
                    break
                if found is None:
                    continue
                sub_mo = maximal_order_discriminant(found)
                canon = polred_canonical(found, sub_mo)
                out.append(Subfield(d, sub_mo.field_disc, canon, tuple(part)))
    return out


def _poly_from_roots(vals) -> list:
    acc = [mpmath.mpf(1)]
    for v in vals:
        new = [mpmath.mpf(0)] * (len(acc) + 1)
        for i, c in enumerate(acc):
            new[i + 1] += c
            new[i] -= v * c
        acc = new
    return acc


def _refines(fine: tuple, coarse: tuple) -> bool:
    where = {}
    for b, blk in enumerate(coarse):
        for i in blk:
            where[i] = b
    return all(len({where[i] for i in blk}) == 1 for blk in fine)


def maximal_subfields(subs: list[Subfield]) -> list[Subfield]:
    return [s for s in subs if not any(t is not s and t.degree > s.degree and _refines(t.blocks, s.blocks) for t in subs)]


def subfield_tag(f, mo: MaximalOrderResult | None = None) -> tuple[int, int, MonicPolynomial | None]:
    """``(degree, disc, poly)`` of the smallest-discriminant maximal subfield; ``(1, 1, None)`` if primitive."""
    subs = subfields(f, mo)
    if not subs:
        return 1, 1, None
    best = min(maximal_subfields(subs), key=lambda s: (s.disc, s.degree, _lex_key(s.poly.full())))
    return best.degree, best.disc, best.poly
