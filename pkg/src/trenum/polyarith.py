"""Exact integer polynomial arithmetic.

Polynomials are dense coefficient lists with the constant term first.  Monic
polynomials of degree ``n`` are passed around either as a
:class:`MonicPolynomial` (which stores ``a_0, ..., a_{n-1}``) or as the full
list ``[a_0, ..., a_{n-1}, 1]``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import flint
import numpy as np


class ContractError(ValueError):
    """Raised when an operation is called outside its precondition."""


@dataclass(frozen=True, order=True)
class MonicPolynomial:
    """Monic polynomial ``x^n + a_{n-1} x^{n-1} + ... + a_0`` over Z."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ContractError("a monic polynomial needs degree >= 1")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def full(self) -> list[int]:
        return list(self.coeffs) + [1]

    @classmethod
    def from_full(cls, full: Sequence[int]) -> "MonicPolynomial":
        full = strip(list(full))
        if not full or full[-1] != 1:
            raise ContractError(f"not monic: {full}")
        return cls(tuple(full[:-1]))

    @classmethod
    def parse(cls, text: str) -> "MonicPolynomial":
        return cls.from_full(parse_polynomial(text))

    def __call__(self, x):
        return horner(self.full(), x)

    def __str__(self) -> str:
        return format_polynomial(self.full())


# ---------------------------------------------------------------------------
# basic dense operations


def strip(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def horner(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def derivative(a: Sequence[int]) -> list[int]:
    return [i * a[i] for i in range(1, len(a))]


def poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_add(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return strip(out)


def poly_sub(a: Sequence, b: Sequence) -> list:
    return poly_add(a, [-y for y in b])


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Division with remainder over Q (exact when ``b`` is monic over Z)."""
    a = strip(list(a))
    b = strip(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lb = b[-1]
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] if lb == 1 else Fraction(a[-1]) / lb
        if isinstance(c, Fraction) and c.denominator == 1:
            c = c.numerator
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a.pop()
        strip(a)
    return q, a


def poly_rem_monic(a: Sequence, m: Sequence[int]) -> list:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = list(a)
    dm = len(m) - 1
    for top in range(len(a) - 1, dm - 1, -1):
        c = a[top]
        if c:
            base = top - dm
            for i in range(dm):
                a[base + i] -= c * m[i]
        a[top] = 0
    return a[:dm] + [0] * (dm - len(a[:dm]))


def content(a: Iterable[int]) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def pseudo_remainder(a: list[int], b: list[int]) -> list[int]:
    """``lc(b)^(deg a - deg b + 1) * a`` reduced modulo ``b``."""
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    e = len(a) - len(b) + 1
    while a and len(a) - 1 >= db:
        lead = a[-1]
        shift = len(a) - 1 - db
        a = [x * lb for x in a]
        for i in range(db + 1):
            a[shift + i] -= lead * b[i]
        a.pop()
        strip(a)
        e -= 1
    if e > 0 and a:
        f = lb ** e
        a = [x * f for x in a]
    return a


def resultant(a: Sequence[int], b: Sequence[int]) -> int:
    """Resultant of two integer polynomials by the subresultant algorithm."""
    a = strip(list(a))
    b = strip(list(b))
    if not a or not b:
        return 0
    da, db = len(a) - 1, len(b) - 1
    ca, cb = content(a), content(b)
    if ca < 0:
        ca = -ca
    if cb < 0:
        cb = -cb
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    t = ca ** db * cb ** da
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da & 1 and db & 1:
            s = -s
    g = h = 1
    while db > 0:
        delta = da - db
        if da & 1 and db & 1:
            s = -s
        r = pseudo_remainder(a, b)
        if not r:
            return 0
        a, da = b, db
        den = g * h ** delta
        b = [x // den for x in r]
        db = len(b) - 1
        g = a[-1]
        if delta:
            h = g ** delta // h ** (delta - 1)
    if da == 0:
        return s * t
    return s * t * (b[-1] ** da // h ** (da - 1))


def discriminant(f) -> int:
    """Discriminant of a monic integer polynomial of degree >= 2."""
    full = f.full() if isinstance(f, MonicPolynomial) else list(f)
    n = len(full) - 1
    if n < 1:
        raise ContractError("discriminant needs degree >= 1")
    r = resultant(full, derivative(full))
    sign = -1 if (n * (n - 1) // 2) & 1 else 1
    lc = full[-1]
    return sign * r // lc


def discriminant_pencil(full: Sequence[int]) -> list[int]:
    """Coefficients (low to high) of ``t -> disc(f + t)``, a polynomial of degree n-1."""
    n = len(full) - 1
    base = list(full)
    xs = list(range(n))
    ys = []
    for t in xs:
        base[0] = full[0] + t
        ys.append(discriminant(base))
    # Newton divided differences on 0..n-1 (exact)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / j
    out = [Fraction(0)] * n
    basis = [Fraction(1)]
    for j in range(n):
        for i, b in enumerate(basis):
            out[i] += coef[j] * b
        basis = [Fraction(0)] + basis
        for i in range(len(basis) - 1):
            basis[i] -= j * basis[i + 1]
    return [int(x) for x in out]


# ---------------------------------------------------------------------------
# Newton's identities


def newton_power_sums(prefix: Sequence[int], k: int) -> list[int]:
    """Power sums ``s_1..s_k`` fixed by the top coefficients of a monic poly.

    ``prefix`` is ``(a_{n-1}, a_{n-2}, ..., a_{n-j})`` with ``j >= k``.
    """
    if k > len(prefix):
        raise ContractError(f"level {k} needs {k} known coefficients, got {len(prefix)}")
    s = [0] * (k + 1)
    for j in range(1, k + 1):
        acc = j * prefix[j - 1]
        for i in range(1, j):
            acc += prefix[i - 1] * s[j - i]
        s[j] = -acc
    return s[1:]


def coefficients_from_power_sums(sums: Sequence) -> list:
    """Inverse of :func:`newton_power_sums`: ``(a_{n-1}, ..., a_{n-k})``."""
    out = []
    for j in range(1, len(sums) + 1):
        acc = sums[j - 1]
        for i in range(1, j):
            acc += out[i - 1] * sums[j - i - 1]
        val = Fraction(-acc, j) if isinstance(acc, int) else -acc / j
        if isinstance(val, Fraction) and val.denominator == 1:
            val = val.numerator
        out.append(val)
    return out


def power_sums(full: Sequence[int], count: int) -> list[int]:
    """``[s_0, s_1, ..., s_{count-1}]`` for the roots of a monic polynomial."""
    n = len(full) - 1
    hi = [full[n - i] for i in range(1, n + 1)]  # a_{n-1}, ..., a_0
    s = [n] + [0] * max(count - 1, 0)
    for j in range(1, count):
        acc = j * hi[j - 1] if j <= n else 0
        for i in range(1, min(j, n + 1)):
            acc += hi[i - 1] * s[j - i]
        s[j] = -acc
    return s[:count]


# ---------------------------------------------------------------------------
# Step 1: the easy reducibility screen

# (factor, exact test) pairs; quadratic factors are tested in Z[w] with w a root.
_GOLDEN = (1 + 5 ** 0.5) / 2
_EASY_LINEAR = (0, 1, -1, 2, -2)
_EASY_QUADRATIC = (
    # factor (low->high), float root, reduction rule w^2 = p*w + q
    ((-1, -1, 1), _GOLDEN, (1, 1)),
    ((-1, 1, 1), _GOLDEN - 1, (-1, 1)),
    ((-2, 0, 1), 2 ** 0.5, (0, 2)),
)


def _eval_quadratic_ring(full: Sequence[int], p: int, q: int) -> tuple[int, int]:
    # evaluate at w with w^2 = p*w + q; result u + v*w
    u = v = 0
    for c in reversed(full):
        # (u + v w) * w = u w + v (p w + q)
        u, v = v * q + c, u + v * p
    return u, v


def easy_reducibility_screen(f) -> tuple[int, ...] | None:
    """Return a small factor of ``f`` from the fixed screening list, or None.

    The list is x, x +- 1, x +- 2, x^2 +- x - 1, x^2 - 2.  ``None`` does not
    mean irreducible.  Factors are returned low-to-high with leading 1.
    """
    full = f.full() if isinstance(f, MonicPolynomial) else list(f)
    for c in _EASY_LINEAR:
        if horner(full, c) == 0:
            return (-c, 1)
    for factor, root, (p, q) in _EASY_QUADRATIC:
        approx = horner(full, root)
        scale = sum(abs(c) for c in full) * 2.0 ** len(full)
        if abs(approx) > 1e-9 * scale:
            continue
        if _eval_quadratic_ring(full, p, q) == (0, 0):
            return factor
    return None


def easy_screen_exclusions(lower: Sequence[int]) -> set[int]:
    """Constant terms ``t`` for which ``lower + t`` fails the easy screen.

    ``lower`` is a monic polynomial whose constant term is ignored; for each
    screened factor at most one value of the constant term makes it divisible.
    """
    base = list(lower)
    base[0] = 0
    out = {0}
    for c in _EASY_LINEAR[1:]:
        out.add(-horner(base, c))
    for _, _, (p, q) in _EASY_QUADRATIC:
        u, v = _eval_quadratic_ring(base, p, q)
        if v == 0:
            out.add(-u)
    return out


# ---------------------------------------------------------------------------
# arithmetic modulo a small prime


def _strip_mod(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod_monic(a: list[int], f: list[int], p: int) -> list[int]:
    a = list(a)
    df = len(f) - 1
    for top in range(len(a) - 1, df - 1, -1):
        c = a[top] % p
        if c:
            base = top - df
            for i in range(df):
                a[base + i] = (a[base + i] - c * f[i]) % p
        a[top] = 0
    return _strip_mod([x % p for x in a[:df]])


def _mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    return _mod_monic(poly_mul(a, b), f, p)


def _make_monic_mod(a: list[int], p: int) -> list[int]:
    inv = pow(a[-1], -1, p)
    return [(x * inv) % p for x in a]


def _gcd_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = _strip_mod([x % p for x in a])
    b = _strip_mod([x % p for x in b])
    while b:
        b = _make_monic_mod(b, p)
        a = _mod_monic(a, b, p) if len(a) >= len(b) else a
        a, b = b, a
    return _make_monic_mod(a, p) if a else a


def _divexact_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    b = _make_monic_mod(b, p)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for top in range(len(a) - 1, db - 1, -1):
        c = a[top] % p
        q[top - db] = c
        if c:
            for i in range(db + 1):
                a[top - db + i] = (a[top - db + i] - c * b[i]) % p
    return _strip_mod(q)


def distinct_degree_pattern(full: Sequence[int], p: int) -> list[int]:
    """Degrees of the irreducible factors of ``f mod p`` (f squarefree mod p)."""
    f = [x % p for x in full]
    n = len(f) - 1
    # Frobenius matrix: rows are x^(i p) mod f
    xp = [1]
    base = [0, 1]
    e = p
    while e:
        if e & 1:
            xp = _mulmod(xp, base, f, p)
        base = _mulmod(base, base, f, p)
        e >>= 1
    rows = [[1]]
    for _ in range(1, n):
        rows.append(_mulmod(rows[-1], xp, f, p))
    g = list(f)
    h = [0, 1]
    degrees: list[int] = []
    i = 0
    while True:
        i += 1
        dg = len(g) - 1
        if 2 * i > dg:
            if dg > 0:
                degrees.append(dg)
            break
        # h <- h^p mod f via the Frobenius rows
        acc = [0] * n
        for j, c in enumerate(h):
            if c:
                for t, r in enumerate(rows[j]):
                    acc[t] = (acc[t] + c * r) % p
        h = _strip_mod(acc)
        hx = list(h) + [0] * max(0, 2 - len(h))
        hx[1] = (hx[1] - 1) % p
        d = _gcd_mod(g, _strip_mod(hx), p)
        dd = len(d) - 1
        if dd > 0:
            degrees.extend([i] * (dd // i))
            g = _divexact_mod(g, d, p)
            h = _mod_monic(h, g, p) if len(g) > 1 else []
    return degrees


def _subset_sums(degrees: Sequence[int], n: int) -> int:
    mask = 1
    for d in degrees:
        mask |= mask << d
    return mask & ((1 << (n + 1)) - 1)


_SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73)


def is_irreducible(f, disc: int | None = None, primes: int = 5) -> bool:
    """Irreducibility over Q of a squarefree monic integer polynomial.

    Factor-degree patterns modulo ``primes`` small primes give a quick
    certificate; undecided cases fall back to a complete factorization.
    """
    full = f.full() if isinstance(f, MonicPolynomial) else list(f)
    n = len(full) - 1
    if disc is None:
        disc = discriminant(full)
    if disc == 0:
        raise ContractError("is_irreducible expects a squarefree polynomial")
    if n == 1:
        return True
    possible = (1 << (n + 1)) - 1
    used = 0
    for p in _SMALL_PRIMES:
        if disc % p == 0:
            continue
        possible &= _subset_sums(distinct_degree_pattern(full, p), n)
        used += 1
        if possible == (1 | (1 << n)):
            return True
        if used >= primes:
            break
    _, factors = flint.fmpz_poly(full).factor()
    return len(factors) == 1 and factors[0][1] == 1


def factor(f) -> list[tuple[list[int], int]]:
    """Complete factorization over Z as ``[(factor_low_to_high, multiplicity)]``."""
    full = f.full() if isinstance(f, MonicPolynomial) else list(f)
    c, factors = flint.fmpz_poly(full).factor()
    out = [([int(x) for x in g.coeffs()], e) for g, e in factors]
    return sorted(out, key=lambda t: (len(t[0]), t[0]))


# ---------------------------------------------------------------------------
# Step 3: square divisors of the discriminant


@lru_cache(maxsize=None)
def primes_up_to(limit: int) -> tuple[int, ...]:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return tuple(int(p) for p in np.nonzero(sieve)[0])


_CHUNK = 48


@lru_cache(maxsize=None)
def _prime_chunks(limit: int) -> tuple[tuple[int, int, tuple[int, ...]], ...]:
    ps = primes_up_to(limit)
    out = []
    for i in range(0, len(ps), _CHUNK):
        block = ps[i : i + _CHUNK]
        out.append((block[0], math.prod(block), block))
    return tuple(out)


def square_part(d: int, limit: int = 10 ** 6, reject_above=None):
    """Largest ``S`` with ``S^2 | d`` as ``{p: e}``; flag says if complete.

    Trial division stops once the cofactor has no prime factor below its cube
    root, after which a perfect-square test settles it.  The result is only
    partial when a cofactor above ``limit**3`` survives.

    With ``reject_above`` set, returns ``None`` as soon as the part of ``d``
    that no square divisor can remove exceeds it.
    """
    c = abs(d)
    if c == 0:
        raise ContractError("square part of zero")
    out: dict[int, int] = {}
    r = 1
    for first, prod, block in _prime_chunks(limit):
        if first * first * first > c:
            break
        g = math.gcd(c, prod)
        if g == 1:
            continue
        for p in block:
            if g % p:
                continue
            e = 0
            while c % p == 0:
                c //= p
                e += 1
            if e >= 2:
                out[p] = e // 2
            if e & 1:
                r *= p
        if reject_above is not None and r > reject_above:
            return None
    if c == 1:
        return out, True
    r = math.isqrt(c)
    if r * r == c:
        if c < limit ** 3 or flint.fmpz(r).is_prime():
            out[r] = out.get(r, 0) + 1
            return out, True
        for q, e in flint.fmpz(r).factor():
            out[int(q)] = out.get(int(q), 0) + e
        return out, True
    last = primes_up_to(limit)[-1]
    return out, c < last ** 3


def divisors_from_factorization(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for p, e in fac.items():
        divs = [d * p ** i for d in divs for i in range(e + 1)]
    return sorted(divs)


def square_divisor_window(d: int, n: int, B, limit: int = 10 ** 6) -> list[int]:
    """All ``a >= 1`` with ``a^2 | d`` and ``B_O(n)^n < d / a^2 <= B^n``.

    An unresolved large cofactor makes the answer conservative: the returned
    list then also contains ``0`` as a marker that unknown divisors may exist.
    """
    from .bounds import odlyzko_floor

    if d <= 0:
        return []
    bn = Fraction(B) ** n
    lo = odlyzko_floor(n) ** n
    res = square_part(d, limit, reject_above=bn)
    if res is None:
        return []
    fac, exact = res
    out = [a for a in divisors_from_factorization(fac) if lo < Fraction(d, a * a) <= bn]
    if not exact:
        out.insert(0, 0)
    return out


# ---------------------------------------------------------------------------
# parsing and printing


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(x(?:\s*(?:\^|\*\*)\s*(\d+))?)?")


def parse_polynomial(text: str) -> list[int]:
    """Parse ``"x^3 - 3*x + 1"`` or ``"1, 0, -3, 1"`` (leading term first)."""
    text = text.strip()
    if re.fullmatch(r"[\[\(]?\s*-?\d+(\s*,\s*-?\d+)*\s*[\]\)]?", text):
        nums = [int(t) for t in re.findall(r"-?\d+", text)]
        return strip(nums[::-1])
    compact = text.replace(" ", "")
    if not compact:
        raise ValueError("empty polynomial")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(compact):
        m = _TERM.match(compact, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {compact[pos:]!r}")
        sign, num, xpart, exp = m.groups()
        if not num and not xpart:
            raise ValueError(f"cannot parse polynomial near {compact[pos:]!r}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = (int(exp) if exp else 1) if xpart else 0
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
    deg = max(coeffs)
    return strip([coeffs.get(i, 0) for i in range(deg + 1)])


def format_polynomial(full: Sequence[int], var: str = "x") -> str:
    parts = []
    for e in range(len(full) - 1, -1, -1):
        c = full[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
