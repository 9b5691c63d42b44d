"""End-to-end acceptance checks, one test per criterion.

Each test is tagged with ``criterion(number, text)``; ``conftest.py`` prints
a PASS/FAIL line for every criterion after the run.  Reference values come
from ``oracles.py`` (which does not import the package) or are closed forms.
"""
import math
import random
import time
from fractions import Fraction

import mpmath
import pytest

from luroth.constructions import ExplicitScheme, ProductMeasureSpec, TowerScheme, sample_words, s0
from luroth.core import continuants, convergent_pairs, digits_of, evaluate_periodic, expand_rational, residual
from luroth.dimension import (
    ExponentParams,
    Verdict,
    covering_exponent,
    covering_sum,
    covering_sum_rational,
    ratio_envelopes,
    theorem_bounds,
    trajectory_ratios,
    verify_prop_usgjl,
)
from luroth.experiments import frequency_samples, run_cf_compare
from luroth.geometry import neighbor_gaps, telescoping_check

from oracles import (
    brute_covering_sum,
    digits_by_floor,
    explicit_words,
    fundamental_endpoints,
    mp_cf,
    mp_digits,
    partial_sums,
)

F = Fraction


def criterion(number, text):
    return pytest.mark.criterion(number, text)


@criterion(1, "exact round trip for every reduced p/q with q <= 2000 in under 60 s")
def test_round_trip_all_small_denominators():
    start = time.perf_counter()
    count = 0
    for q in range(1, 2001):
        for p in range(1, q + 1):
            if math.gcd(p, q) == 1:
                x = F(p, q)
                assert evaluate_periodic(expand_rational(x)) == x, x
                count += 1
    elapsed = time.perf_counter() - start
    print(f"criterion 1: {count} fractions in {elapsed:.1f} s")
    assert count == 1 + sum(sum(1 for p in range(1, q) if math.gcd(p, q) == 1) for q in range(2, 2001))
    assert elapsed < 60


@criterion(2, "residual identity holds exactly on 1000 random rationals, n <= 12")
def test_residual_identity_random_rationals():
    rng = random.Random(20261016)
    for _ in range(1000):
        q = rng.randint(1, 10**12)
        x = F(rng.randint(1, q), q)
        n = rng.randint(1, 12)
        word = digits_by_floor(x, n)
        assert list(digits_of(x, n)) == word
        # n-fold image by the map formula, independently of the package
        y = x
        for _ in range(n):
            k = math.floor(1 / y)
            y = k * (k + 1) * y - k
        p, qn = convergent_pairs(word)[-1]
        assert F(p, qn) == partial_sums(word)[-1]
        assert qn == continuants(word)[-1]
        assert x - F(p, qn) == y / (qn * (word[-1] - 1))
        assert residual(x, word) == y / (qn * (word[-1] - 1))


@criterion(3, "order <= 2 fundamental intervals of (4,4,5), N=2: disjoint, closed-form gaps, wide separations, under 10 s")
def test_geometry_oracle():
    start = time.perf_counter()
    s, N = (4, 4, 5), 2
    scheme = ExplicitScheme(s, N)
    for n in (1, 2):
        lo_n, hi_n = s[n - 1], N * s[n - 1] - 1
        words = explicit_words(s, N, n)
        ivs = {w: fundamental_endpoints(w, s[n]) for w in words}
        # pairwise disjoint (closed intervals, so strict separation)
        items = list(ivs.items())
        for i, (wa, (alo, ahi)) in enumerate(items):
            for wb, (blo, bhi) in items[i + 1:]:
                assert ahi < blo or bhi < alo, (wa, wb)
        order = sorted(items, key=lambda kv: kv[1][0])
        left_of = {order[i + 1][0]: order[i][0] for i in range(len(order) - 1)}
        right_of = {order[i][0]: order[i + 1][0] for i in range(len(order) - 1)}
        for w, (lo, hi) in ivs.items():
            d = hi - lo
            a = w[-1]
            rep = neighbor_gaps(w, scheme)
            assert rep.diameter == d
            if lo_n < a < hi_n:
                right = ivs[w[:-1] + (a - 1,)]
                left = ivs[w[:-1] + (a + 1,)]
                assert right[0] - hi == d * (s[n] - 2)
                assert lo - left[1] == d * F(a - 1, a + 1) * (s[n] - 2)
                assert rep.case == "I" and rep.right_gap == right[0] - hi and rep.left_gap == lo - left[1]
            else:
                assert rep.case == ("II" if a == hi_n else "III")
                neighbours = []
                if w in right_of:
                    neighbours.append(ivs[right_of[w]][0] - hi)
                if w in left_of:
                    neighbours.append(lo - ivs[left_of[w]][1])
                assert neighbours and all(g > d for g in neighbours)
    # order-2 intervals nest in their order-1 parents
    for w in explicit_words(s, N, 2):
        plo, phi = fundamental_endpoints(w[:1], s[1])
        lo, hi = fundamental_endpoints(w, s[2])
        assert plo <= lo < hi <= phi
    assert time.perf_counter() - start < 10


FACTOR_SCHEMES = [
    ((4, 4), 2, 1),
    ((9, 5), 5, 1),
    ((4, 5, 4), 2, 2),
    ((4, 6, 5), 3, 2),
    ((5, 4, 6, 4), 2, 3),
    ((4, 4, 4, 7), 2, 3),
]


@criterion(4, "covering-sum factorization equals brute force, exact at s=1, 1e-12 relative elsewhere")
def test_covering_sum_factorization():
    with mpmath.workdps(40):
        for s, N, n in FACTOR_SCHEMES:
            assert len(explicit_words(s, N, n)) <= 200
            scheme = ExplicitScheme(s, N)
            assert covering_sum_rational(scheme, n) == brute_covering_sum(s, N, n, 1)
            for power in (0.3, 0.5, 0.8):
                ref = brute_covering_sum(s, N, n, mpmath.mpf(power))
                lo, hi = covering_sum(scheme, n, power)
                for v in (lo, hi):
                    assert abs(mpmath.exp(v.log) / ref - 1) <= 1e-12


@criterion(5, "tower (4, 2, 2): ratio sequence matches closed form to 1e-9 for n <= 40, depth-12 exponent within 0.05 of 1/3, under 60 s")
def test_tower_ratio_reproduction():
    start = time.perf_counter()
    tower = TowerScheme(4, 2, 2)
    est = s0(tower, 40)
    assert len(est.ratios) == 40
    for n, r in enumerate(est.ratios, start=1):
        closed = (1 - 2.0**-n) / (1 + 2 - 2 * 2.0**-n)
        assert abs(r - closed) <= 1e-9, n
    enc = covering_exponent(tower, 12)
    print(f"criterion 5: depth-12 covering exponent in [{enc.lo:.12f}, {enc.hi:.12f}]")
    assert abs(enc.lo - 1 / 3) <= 0.05 and abs(enc.hi - 1 / 3) <= 0.05
    assert time.perf_counter() - start < 60


@criterion(6, "upper and lower dimension bounds: values at beta=1, consistency on a log grid, limit 1/2")
def test_theorem_bounds():
    rep = theorem_bounds(1.0)
    assert abs(rep.lower - 2 / (4 + math.sqrt(8))) <= 1e-12
    assert abs(rep.upper - 1 / 3) <= 1e-12
    with mpmath.workdps(50):
        for k in range(50):
            beta = mpmath.mpf(10) ** (-4 + mpmath.mpf(8) * k / 49)
            alpha = 1 / beta
            lam = (1 + alpha + mpmath.sqrt(alpha**2 + 6 * alpha + 1)) / (2 * alpha)
            got = theorem_bounds(float(beta))
            assert abs(got.lower - float(1 / (1 + lam))) <= 1e-12
            assert abs(got.upper - float(1 / (2 + beta))) <= 1e-12
    small = theorem_bounds(1e-6)
    assert abs(small.lower - 0.5) <= 1e-5 and abs(small.upper - 0.5) <= 1e-5


@criterion(7, "100 trajectories in the tower set (c=4, lambda=2, d=3) stay inside the envelopes for n <= 12, depth-12 ratio within 0.1 of 3/2")
def test_trajectory_envelopes():
    tower = TowerScheme(4, 2, 3)
    words = sample_words(ProductMeasureSpec(tower), 13, 100, seed=7)
    assert len(words) == 100
    for w in words:
        assert all(lo <= a <= hi for a, (lo, hi) in zip(w, map(tower.digit_range, range(1, 14))))
        ratios = trajectory_ratios(w)
        qs = continuants(w)
        assert len(ratios) == 12
        for n, r in enumerate(ratios, start=1):
            exact = math.log(qs[n - 1]) / math.log(w[n])
            assert abs(r - exact) <= 1e-12
            lo, hi = ratio_envelopes(n, 4, 3, 2)
            assert lo <= r <= hi, (n, lo, r, hi)
        assert abs(ratios[-1] - 1.5) <= 0.1


@criterion(8, "child-sum inequality holds with positive margin on 100 nodes past the depth threshold, under 60 s")
def test_child_sum_nodes():
    start = time.perf_counter()
    params = ExponentParams(1.0, 0.5, 0.05)
    threshold = params.n_threshold
    d = params.delta
    assert threshold == math.ceil(max(params.t, params.t / d * math.log2(8 / d)))
    rng = random.Random(5)
    words = [tuple(rng.randint(2, 9) for _ in range(rng.randint(threshold, threshold + 13)))
             for _ in range(100)]
    reports = verify_prop_usgjl(params, words)
    assert len(reports) == 100
    assert all(r.in_hypothesis and r.verdict is Verdict.HOLDS and r.margin > 0 for r in reports)
    print(f"criterion 8: min margin {min(r.margin for r in reports):.3f} (log scale)")
    assert time.perf_counter() - start < 60


@criterion(9, "digit frequencies of 1e5 uniform samples at depth 20 within 3 sigma of 1/(k(k-1)) for k <= 12")
def test_digit_statistics():
    samples, depth = 100_000, 20
    counts, _ = frequency_samples(samples, depth, seed=2026)
    positions = samples * depth
    assert int(counts.sum()) == positions
    worst = 0.0
    for k in range(2, 13):
        p = F(1, k * (k - 1))
        expected = positions * float(p)
        sigma = math.sqrt(positions * float(p) * (1 - float(p)))
        z = (int(counts[k]) - expected) / sigma
        worst = max(worst, abs(z))
        assert abs(z) <= 3, (k, z)
    print(f"criterion 9: largest |z| = {worst:.2f}")


@criterion(10, "Lüroth and continued-fraction approximation inequalities for sqrt2-1 and phi-1")
@pytest.mark.parametrize("text, value", [
    ("sqrt2-1", lambda: mpmath.sqrt(2) - 1),
    ("phi-1", lambda: (mpmath.sqrt(5) - 1) / 2),
], ids=["sqrt2-1", "phi-1"])
def test_approximation_inequalities(text, value):
    table = run_cf_compare(text, 10, 20, precision_bits=512)
    rows = table.rows
    lu = [r for r in rows if r["system"] == "luroth"]
    cf = [r for r in rows if r["system"] == "cf"]
    assert len(lu) == 10 and len(cf) == 20
    with mpmath.workdps(800):
        x = value()
        assert [r["digit"] for r in lu] == mp_digits(x, 10)
        assert [r["digit"] for r in cf] == mp_cf(1 / x, 20)
    assert all(r["holds"] and r["margin"] > 0 for r in rows)
    assert table.ok


@criterion(11, "telescoping inequality on 1e4 random inputs with entries up to 2**32")
def test_telescoping_random():
    rng = random.Random(11)
    for _ in range(10_000):
        m = rng.randint(1, 10)
        xs = [rng.randint(2, 2**32) for _ in range(m)]
        ys = [rng.randint(2, 2**32) for _ in range(m)]
        assert telescoping_check(xs, ys)
        # integer oracle: sum_i prod_{j<=i} z_j / x_i < prod z_j
        z = [x * y for x, y in zip(xs, ys)]
        prods = [math.prod(z[: i + 1]) for i in range(m)]
        lcm_sum = sum(F(prods[i], xs[i]) for i in range(m))
        assert lcm_sum < prods[-1]
