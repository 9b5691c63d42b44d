"""Self-check suites run by ``luroth verify``.

Each suite is a list of small, fast checks.  A check returns a detail dict
and raises ``AssertionError`` (or ``ArithmeticError`` from an internal
identity check) on failure.  :func:`run_suite` collects the results into a
JSON-ready report.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .constructions import (
    ExplicitScheme,
    ProductMeasureSpec,
    TowerScheme,
    admissible_words,
    level_mass,
    measure_of_fundamental_interval,
    sample_words,
    s0,
    tower_ratio_closed_form,
)
from .core import (
    continuants,
    digits_of,
    evaluate,
    evaluate_periodic,
    expand_rational,
    log_continuant,
    luroth_map,
    residual,
)
from .dimension import (
    ExplicitTree,
    ExponentParams,
    KTree,
    Verdict,
    check_child_sum,
    covering_sum,
    covering_sum_rational,
    theorem_bounds,
    verify_prop_usgjl,
)
from .geometry import (
    Interval,
    ball_cover_check,
    cylinder,
    fundamental_interval,
    neighbor_gaps,
    tail_union_closure,
    telescoping_check,
)

__all__ = ["SUITES", "run_suite"]


# -- core -----------------------------------------------------------------------


def _round_trip():
    count = 0
    for q in range(1, 201):
        for p in range(1, q + 1):
            if math.gcd(p, q) == 1:
                x = Fraction(p, q)
                assert evaluate_periodic(expand_rational(x)) == x, x
                count += 1
    return {"fractions": count}


def _conjugacy():
    for q in range(2, 60):
        for p in range(1, q + 1):
            x = Fraction(p, q)
            assert expand_rational(luroth_map(x)) == expand_rational(x).shift(), x
    return {}


def _residuals():
    rng = random.Random(0)
    for _ in range(200):
        q = rng.randint(2, 10**6)
        x = Fraction(rng.randint(1, q), q)
        for n in range(1, 13):
            residual(x, digits_of(x, n))
    return {"points": 200, "max_depth": 12}


def _continuant_growth():
    rng = random.Random(1)
    for _ in range(500):
        w = [rng.randint(2, 1 << 64) for _ in range(rng.randint(1, 64))]
        qs = continuants(w)
        assert all(q >= 2**k for k, q in enumerate(qs, start=1))
        exact = math.log(qs[-1])
        assert abs(log_continuant(w).log - exact) <= 1e-9 * exact
    return {"words": 500}


# -- geometry ---------------------------------------------------------------------


def _order2_gaps():
    scheme = ExplicitScheme((4, 4, 5), 2)
    for n in (1, 2):
        s_next = scheme.s_at(n + 1)
        words = list(admissible_words(scheme, n))
        ivs = sorted(((fundamental_interval(w, s_next).interval, w) for w in words),
                     key=lambda p: p[0].lo)
        for (a, wa), (b, wb) in zip(ivs, ivs[1:]):
            assert a.hi < b.lo, (wa, wb)
        for w in words:
            rep = neighbor_gaps(w, scheme)
            gaps = [g for g in (rep.left_gap, rep.right_gap) if g is not None]
            assert all(g > rep.diameter for g in gaps), w
    return {"scheme": scheme.to_dict()}


def _nesting():
    scheme = ExplicitScheme((4, 5, 4, 6, 7), 2)
    for n in range(1, 4):
        s_next = scheme.s_at(n + 1)
        for w in admissible_words(scheme, n):
            j = fundamental_interval(w, s_next).interval
            assert j == tail_union_closure(w, s_next)
            assert cylinder(w).contains_interval(j)
            assert j.contains_interval(cylinder(w + (s_next,)))
    return {}


def _telescoping():
    rng = random.Random(2)
    for _ in range(1000):
        m = rng.randint(1, 8)
        xs = [rng.randint(2, 1 << 32) for _ in range(m)]
        ys = [rng.randint(2, 1 << 32) for _ in range(m)]
        assert telescoping_check(xs, ys)
    return {"cases": 1000}


def _ball_cover():
    for w in [(4,), (5, 7), (2, 4), (3, 9, 4)]:
        assert ball_cover_check(w), w
    return {}


# -- constructions ------------------------------------------------------------------


def _masses():
    for scheme in (ExplicitScheme((4, 5, 6), 3), TowerScheme(4, 2, 3)):
        for n in (1, 2):
            lo, hi = scheme.digit_range(n)
            assert level_mass(scheme, n) * (hi - lo + 1) == 1
    scheme = ExplicitScheme((4, 5, 6), 2)
    for w in admissible_words(scheme, 1):
        lo, hi = scheme.digit_range(2)
        kids = sum(measure_of_fundamental_interval(w + (a,), scheme) for a in range(lo, hi + 1))
        assert kids == measure_of_fundamental_interval(w, scheme)
    return {}


def _tower_ratios():
    est = s0(TowerScheme(4, 2, 2), 40)
    err = max(abs(r - tower_ratio_closed_form(2, n)) for n, r in enumerate(est.ratios, start=1))
    assert err <= 1e-9
    assert all(0 < r < 0.5 for r in est.ratios)
    return {"max_error": err}


def _sampler():
    scheme = ExplicitScheme((4, 6, 5, 8), 2)
    for w in sample_words(ProductMeasureSpec(scheme), 3, 50, seed=3):
        for n in range(1, 3):
            j = fundamental_interval(w[:n], scheme.s_at(n + 1)).interval
            assert j.contains(evaluate(w[: n + 1]))
    return {}


# -- dimension ----------------------------------------------------------------------


def _brute_covering(scheme, n, s):
    s_next = scheme.s_at(n + 1)
    return math.fsum(
        float(fundamental_interval(w, s_next).interval.diameter) ** s
        for w in admissible_words(scheme, n)
    )


def _factorization():
    checked = 0
    for scheme in (ExplicitScheme((4, 4, 5, 4), 2), ExplicitScheme((4, 6, 4, 5), 2)):
        for n in (1, 2, 3):
            words = list(admissible_words(scheme, n))
            if len(words) > 200:
                continue
            exact = sum(fundamental_interval(w, scheme.s_at(n + 1)).interval.diameter for w in words)
            assert covering_sum_rational(scheme, n) == exact
            for s in (0.3, 0.5, 0.8):
                lo, hi = covering_sum(scheme, n, s)
                ref = _brute_covering(scheme, n, s)
                assert abs(float(lo) / ref - 1) <= 1e-12 and lo == hi
            checked += 1
    return {"cases": checked}


def _bounds():
    for k in range(50):
        beta = 10 ** (-3 + 6 * k / 49)
        rep = theorem_bounds(beta)
        assert rep.lower <= rep.upper
    return {"grid": 50}


def _child_sums():
    params = ExponentParams(1.0, 0.5, 0.05)
    words = [(2,) * params.n_threshold, (3, 5, 2) * 25]
    report = verify_prop_usgjl(params, words, head=20_000)
    assert all(r.verdict is Verdict.HOLDS for r in report)
    tree = KTree(1.0, 0.5, head=20_000)
    assert check_child_sum(tree, (2,) * params.n_threshold, 0.01) is Verdict.FAILS
    iv = Interval(Fraction(1, 4), Fraction(1, 2))
    single = ExplicitTree("A", {"A": iv, "B": iv}, {"A": ["B"]})
    assert check_child_sum(single, "A", 0.7) is Verdict.HOLDS
    return {"margins": [r.margin for r in report]}


SUITES = {
    "core": [_round_trip, _conjugacy, _residuals, _continuant_growth],
    "geometry": [_order2_gaps, _nesting, _telescoping, _ball_cover],
    "constructions": [_masses, _tower_ratios, _sampler],
    "dimension": [_factorization, _bounds, _child_sums],
}


def run_suite(name: str) -> dict:
    """Run one suite (or ``"all"``) and return ``{"suite", "passed", "checks"}``."""
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {name!r}")
    checks = []
    for suite in names:
        for fn in SUITES[suite]:
            entry = {"suite": suite, "check": fn.__name__.lstrip("_")}
            try:
                entry["detail"] = fn()
                entry["passed"] = True
            except (AssertionError, ArithmeticError) as exc:
                entry["passed"] = False
                entry["detail"] = {"error": repr(exc)}
            checks.append(entry)
    return {"suite": name, "passed": all(c["passed"] for c in checks), "checks": checks}
