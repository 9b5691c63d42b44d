"""
Fundamental intervals and their gaps
====================================

The building blocks of a digit-restricted Cantor set, and how far apart
neighbouring blocks sit.
"""
from luroth import ExplicitScheme, fundamental_interval, neighbor_gaps

scheme = ExplicitScheme((4, 4, 5), 2)

# level one: digits 4..7, each block keeps the children with digit >= 4
for a in range(4, 8):
    j = fundamental_interval((a,), scheme.s_at(2)).interval
    print(f"J({a}) = [{j.lo}, {j.hi}]  diameter {j.diameter}")

# interior digits have closed-form gaps; the extreme digits are farther out
for w in [(4,), (5,), (7,), (5, 6), (4, 4), (7, 7)]:
    rep = neighbor_gaps(w, scheme)
    print(f"{w}: case {rep.case:<3} |J|={rep.diameter}  left={rep.left_gap}  right={rep.right_gap}")
