"""
Child sums in the K tree
========================

At exponent s = t/4 + delta1 (t = alpha + eps) the children of a deep node
carry less s-mass than the node itself.  Each check sums a long head exactly
and bounds the tail by an integral.
"""
import random

from luroth import ExponentParams, verify_prop_usgjl

params = ExponentParams(alpha=1.0, eps=0.5, delta1=0.05)
print(f"s = {params.s:.4f}, delta = {params.delta:.4f}, depth threshold {params.n_threshold}")

rng = random.Random(1)
words = [tuple(rng.randint(2, 9) for _ in range(params.n_threshold + k)) for k in range(5)]
words.append((2,) * 20)  # too shallow: reported, not checked

for rep in verify_prop_usgjl(params, words):
    if rep.in_hypothesis:
        print(f"depth {rep.depth}: {rep.verdict.value}, log margin {rep.margin:.3f}")
    else:
        print(f"depth {rep.depth}: below the threshold")

# shrinking delta1 pushes the threshold out and thins the margin
for d1 in (0.1, 0.05, 0.02):
    p = ExponentParams(1.0, 0.5, d1)
    w = (3,) * p.n_threshold
    (rep,) = verify_prop_usgjl(p, [w], head=20_000)
    print(f"delta1={d1}: threshold {p.n_threshold}, margin {rep.margin:.3f}")
