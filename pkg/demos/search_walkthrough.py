"""Walk the coefficient search for cubic fields with root discriminant <= 8.

Prints each seed (a_2, a_1), the interval the Rolle ladder leaves for a_0,
and what the sieve says about every surviving polynomial.
"""

from trenum.bounds import Prune, SearchPrefix, hunter_t2_max, next_coefficient_interval
from trenum.search import enumerate_primitive, seed_pairs, sieve_candidate

n, B = 3, 8

print(f"Hunter bound on T_2 for a_2 = 0: {hunter_t2_max(n, B, 0)}")
for a2, a1 in seed_pairs(n, B):
    try:
        p = SearchPrefix.seed(n, a2, a1)
    except Prune as exc:
        print(f"seed ({a2}, {a1}): pruned ({exc})")
        continue
    rng = next_coefficient_interval(p)
    print(f"seed ({a2}, {a1}): a_0 in [{rng.start}, {rng.stop - 1}]" if len(rng) else f"seed ({a2}, {a1}): empty")
    for a0 in rng:
        out = sieve_candidate([a0, a1, a2, 1], n, B)
        verdict = f"field d_F = {out.record.disc}, {out.record.poly}" if out.accepted else out.stage
        print(f"    x^3 {a2:+d}x^2 {a1:+d}x {a0:+d}: {verdict}")

fields = enumerate_primitive(n, B)
print(f"\n{len(fields)} cubic fields with root discriminant <= {B}:")
for r in fields:
    print(f"  {r.disc:>5}  {r.root_disc(6)}  {r.poly}")
