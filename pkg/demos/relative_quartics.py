"""Quartic fields containing Q(sqrt 5), found by the relative search."""

from trenum.relative import (
    BaseFieldData,
    a_m1_representatives,
    absolute_polynomial,
    enumerate_over_base,
    enumerate_t2_values,
    relative_hunter_bound,
)

B = 9
E = BaseFieldData.from_polynomial("x^2-x-1")
print(f"base field: d_E = {E.disc}, trace form {E.trace_gram}")

for a in a_m1_representatives(E, 2):
    bound = relative_hunter_bound(E, 2, B, a)
    t2s = enumerate_t2_values(E, a, bound, 2, 4)
    print(f"a_1 = {a}: Tr(a^2) = {E.trace_sq(a)}, T_2 <= {bound}, {len(t2s)} values of t_2")

# one relative polynomial and its absolute counterpart
w = (0, 1) if E.trace((0, 1)) == 1 else (1, 0)
print("x^2 - w over E has absolute polynomial", absolute_polynomial(E, [tuple(-c for c in w), (0, 0)]))

recs = sorted(enumerate_over_base(E, 2, B), key=lambda r: r.disc)
print(f"\n{len(recs)} quartic fields over Q(sqrt 5) with root discriminant <= {B}:")
for r in recs:
    print(f"  {r.disc:>6}  {r.root_disc(6)}  {r.poly}")
