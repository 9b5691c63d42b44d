"""
Covering exponents of a tower set
=================================

Digits between 4**(2**n) and 2 * 4**(2**n).  The covering exponent at depth n
climbs towards 1/3, tracking the exact ratio sequence.
"""
import time

from luroth import TowerScheme, covering_exponent, s0
from luroth.constructions import tower_ratio_closed_form

tower = TowerScheme(4, 2, 2)
est = s0(tower, 12)

start = time.perf_counter()
for n in range(1, 13):
    enc = covering_exponent(tower, n)
    print(f"n={n:>2}  exponent in [{enc.lo:.10f}, {enc.hi:.10f}]"
          f"  ratio {est.ratios[n - 1]:.10f}  closed form {tower_ratio_closed_form(2, n):.10f}")
print(f"limit 1/3, {time.perf_counter() - start:.2f} s")

# digits get astronomically large but the sums stay in the log domain
print("s_12 has", tower.digit_range(12)[0].bit_length(), "bits")
