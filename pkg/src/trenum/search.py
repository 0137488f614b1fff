"""Depth-first coefficient search and the candidate sieve."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import polyarith as pa
from .bounds import (
    Prune,
    SearchPrefix,
    as_fraction,
    next_coefficient_interval,
    odlyzko_floor,
    seed_coefficient_ranges,
    smyth_exceptional_candidates,
)
from .orders import (
    DiscriminantTooLarge,
    IndexUncertain,
    is_isomorphic,
    maximal_order_discriminant,
    polred_canonical,
    subfield_tag,
)
from .polyarith import MonicPolynomial

STAGES = ("easy-factor", "negative-disc", "window", "reducible", "disc-too-big")


@dataclass(frozen=True, order=True)
class FieldRecord:
    degree: int
    disc: int
    poly: MonicPolynomial
    primitive: bool = True
    subfield_degree: int = 1
    subfield_disc: int = 1
    review: bool = False

    def sort_key(self):
        return (self.degree, self.disc, self.poly.coeffs)

    def root_disc(self, digits: int = 20) -> str:
        import mpmath

        with mpmath.workdps(digits + 10):
            return mpmath.nstr(mpmath.root(mpmath.mpf(self.disc), self.degree), digits)


@dataclass(frozen=True)
class SieveOutcome:
    accepted: bool
    stage: str | None = None
    detail: str = ""
    record: FieldRecord | None = None

    @classmethod
    def reject(cls, stage, detail=""):
        return cls(False, stage, str(detail))


@dataclass
class StageCounters:
    tested: int = 0
    rejects: Counter = field(default_factory=Counter)
    accepted: int = 0

    def add(self, outcome: SieveOutcome):
        self.tested += 1
        if outcome.accepted:
            self.accepted += 1
        else:
            self.rejects[outcome.stage] += 1

    def merge(self, other: "StageCounters"):
        self.tested += other.tested
        self.rejects.update(other.rejects)
        self.accepted += other.accepted

    def as_dict(self) -> dict:
        out = {"tested": self.tested, "accepted": self.accepted}
        for s in STAGES:
            out[s] = self.rejects.get(s, 0)
        return out


def sturm_real_root_count(full: Sequence[int]) -> int:
    """Number of distinct real roots of an integer polynomial (Sturm sequence)."""
    p0 = pa.strip(list(full))
    p1 = pa.derivative(p0)
    seq = [p0, p1]
    while len(seq[-1]) > 1:
        a, b = seq[-2], seq[-1]
        r = pa.pseudo_remainder(a, b)
        if not r:
            break
        # keep the sign of -rem(a, b): pseudo-remainder scales by lc(b)^k
        k = len(a) - len(b) + 1
        if b[-1] < 0 and k % 2 == 1:
            r = [-x for x in r]
        c = pa.content(r)
        seq.append([-x // c for x in r])

    def changes(signs):
        s = [x for x in signs if x]
        return sum(1 for u, v in zip(s, s[1:]) if (u > 0) != (v > 0))

    at_neg = [(1 if p[-1] > 0 else -1) * (-1) ** (len(p) - 1) for p in seq]
    at_pos = [1 if p[-1] > 0 else -1 for p in seq]
    return changes(at_neg) - changes(at_pos)


def sieve_candidate(f, n: int, B, disc: int | None = None, screened: bool = False,
                    subfield: tuple | None = None, tag_cache: dict | None = None) -> SieveOutcome:
    """Run the six-step test on a candidate polynomial.

    ``screened`` skips step 1 when the caller already excluded the easy
    factors; ``disc`` may be supplied when it is already known.  Subfield
    tags are memoized in ``tag_cache`` (keyed by canonical polynomial).
    """
    f = f if isinstance(f, MonicPolynomial) else MonicPolynomial.from_full(f)
    full = f.full()
    B = as_fraction(B)
    bn = B ** n
    if not screened:
        fac = pa.easy_reducibility_screen(full)
        if fac is not None:
            return SieveOutcome.reject("easy-factor", pa.format_polynomial(fac))
    d = pa.discriminant(full) if disc is None else disc
    if d <= 0:
        return SieveOutcome.reject("negative-disc", d)
    window = pa.square_divisor_window(d, n, B)
    if not window:
        return SieveOutcome.reject("window", d)
    if sturm_real_root_count(full) != n:
        return SieveOutcome.reject("negative-disc", "not totally real")
    if not pa.is_irreducible(full, d):
        return SieveOutcome.reject("reducible")
    review = False
    try:
        mo = maximal_order_discriminant(full, d, bound=bn, factor_fallback=True)
    except DiscriminantTooLarge:
        return SieveOutcome.reject("disc-too-big")
    except IndexUncertain:
        review = True
        mo = maximal_order_discriminant(full, d, factor_fallback=True)
    if mo.field_disc > bn or mo.field_disc <= odlyzko_floor(n) ** n:
        return SieveOutcome.reject("disc-too-big", mo.field_disc)
    canon = polred_canonical(full, mo)
    if subfield is None:
        if tag_cache is not None and canon in tag_cache:
            sd, sdisc = tag_cache[canon]
        else:
            sd, sdisc, _ = subfield_tag(canon)
            if tag_cache is not None:
                tag_cache[canon] = (sd, sdisc)
    else:
        sd, sdisc = subfield
    rec = FieldRecord(n, mo.field_disc, canon, sd == 1, sd, sdisc, review)
    return SieveOutcome(True, record=rec)


# ---------------------------------------------------------------------------
# work planning


def seed_pairs(n: int, B) -> list[tuple[int, int]]:
    """All ``(a_{n-1}, a_{n-2})`` seeds in canonical order."""
    out = []
    for t in range(n // 2 + 1):
        for a2 in seed_coefficient_ranges(n, B, -t):
            out.append((-t, a2))
    return out


def seed_weight(n: int, pair) -> int:
    """Rough relative cost of a seed: grows with its ``T_2``."""
    a1, a2 = pair
    t2 = a1 * a1 - 2 * a2
    return max(t2, 1) ** max((n * (n + 1) // 2 - 3) // 2, 0)


# ---------------------------------------------------------------------------
# the search


def _leaf_candidates(prefix: SearchPrefix, counters: StageCounters, n: int, B) -> Iterator[tuple[list[int], int]]:
    """Complete polynomials below a level ``n-1`` prefix, with their discriminants."""
    rng = next_coefficient_interval(prefix)
    if not len(rng):
        return
    hi = prefix.coeffs  # a_{n-1}, ..., a_1
    base = [0] + [hi[n - 1 - i] for i in range(1, n)] + [1]
    excluded = pa.easy_screen_exclusions(base)
    if len(rng) > n + 2:
        pencil = pa.discriminant_pencil(base)
    else:
        pencil = None
    for a0 in rng:
        if a0 in excluded:
            counters.add(SieveOutcome.reject("easy-factor"))
            continue
        full = list(base)
        full[0] = a0
        d = pa.horner(pencil, a0) if pencil is not None else pa.discriminant(full)
        yield full, d


def _descend(prefix: SearchPrefix, n: int) -> Iterator[SearchPrefix]:
    """All level ``n-1`` prefixes below ``prefix``."""
    if prefix.level == n - 1:
        yield prefix
        return
    for a in next_coefficient_interval(prefix):
        try:
            child = prefix.extend(a)
        except Prune:
            continue
        yield from _descend(child, n)


def iter_candidates(n: int, B, pairs: Iterable[tuple[int, int]], counters: StageCounters):
    """Candidate polynomials (full coefficient lists) with discriminants."""
    for a1, a2 in pairs:
        if n == 2:
            full = [a2, a1, 1]
            if pa.easy_reducibility_screen(full) is not None:
                counters.add(SieveOutcome.reject("easy-factor"))
                continue
            yield full, pa.discriminant(full)
            continue
        try:
            root = SearchPrefix.seed(n, a1, a2)
        except Prune:
            continue
        for leaf in _descend(root, n):
            yield from _leaf_candidates(leaf, counters, n, B)


def enumerate_primitive(n: int, B, shard=None, counters: StageCounters | None = None) -> list[FieldRecord]:
    """Fields found by the absolute search over one shard (default: everything)."""
    from .runs import plan_shards

    B = as_fraction(B)
    if counters is None:
        counters = StageCounters()
    if shard is None:
        shard = plan_shards(n, B, 1)[0]
    if B <= odlyzko_floor(n):
        return []
    pairs = shard.pairs()
    found: dict = {}
    tags: dict = {}
    for full, d in iter_candidates(n, B, pairs, counters):
        out = sieve_candidate(full, n, B, disc=d, screened=True, tag_cache=tags)
        counters.add(out)
        if out.accepted:
            found[(out.record.disc, out.record.poly)] = out.record
    if shard.includes_exceptional:
        for g in smyth_exceptional_candidates(n):
            out = sieve_candidate(g, n, B, tag_cache=tags)
            counters.add(out)
            if out.accepted:
                found[(out.record.disc, out.record.poly)] = out.record
    return merge_dedup(found.values())


def merge_dedup(records: Iterable[FieldRecord]) -> list[FieldRecord]:
    """One record per field, sorted by (degree, disc, coefficients)."""
    groups: dict = {}
    for r in records:
        groups.setdefault((r.degree, r.disc), []).append(r)
    out = []
    for key in sorted(groups):
        reps: list[FieldRecord] = []
        for r in sorted(groups[key], key=FieldRecord.sort_key):
            dup = None
            for s in reps:
                if s.poly == r.poly or is_isomorphic(s.poly, r.poly):
                    dup = s
                    break
            if dup is None:
                reps.append(r)
            elif r.review and not dup.review:
                continue
        out.extend(reps)
    return sorted(out, key=FieldRecord.sort_key)
