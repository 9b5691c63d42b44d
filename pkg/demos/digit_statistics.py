"""
Digit statistics of typical points
==================================

Lebesgue-almost every point sees digit k with frequency 1/(k(k-1)).  Points
are drawn as exact random dyadic cells, refined whenever a cell straddles a
digit boundary.
"""
import numpy as np

from luroth.experiments import frequency_samples

counts, bits = frequency_samples(20_000, 20, seed=3)
total = counts.sum()
k = np.arange(2, 13)
expected = 1 / (k * (k - 1))
observed = counts[2:13] / total
sigma = np.sqrt(expected * (1 - expected) / total)
for kk, o, e, z in zip(k, observed, expected, (observed - expected) / sigma):
    print(f"k={kk:>2}  observed {o:.5f}  expected {e:.5f}  z={z:+.2f}")
print(f"digits above 12: {counts[0] / total:.5f} (expected {1 / 12:.5f}); deepest cell {bits} bits")
