import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from luroth.core import (
    CycleNotFoundError,
    DomainError,
    InfiniteDigitError,
    LogValue,
    PeriodicExpansion,
    continuants,
    convergent_pairs,
    convergents,
    digits_of,
    evaluate,
    evaluate_periodic,
    expand_rational,
    expand_real,
    first_digit,
    log_continuant,
    luroth_map,
    residual,
)
from luroth.reals import EReal, RationalReal, SurdReal, parse_real

from oracles import digits_by_floor, mp_digits, partial_sums

F = Fraction

unit_rationals = st.integers(1, 10**4).flatmap(
    lambda q: st.integers(1, q).map(lambda p: F(p, q))
)
words = st.lists(st.integers(2, 50), min_size=1, max_size=12)


class TestMap:
    @pytest.mark.parametrize("x, image", [(F(0), F(0)), (F(1, 2), F(1)), (F(2, 3), F(1, 3)), (F(1), F(1))])
    def test_values(self, x, image):
        assert luroth_map(x) == image

    @pytest.mark.parametrize("x", [F(-1, 3), F(4, 3)])
    def test_outside_unit_interval(self, x):
        with pytest.raises(DomainError):
            luroth_map(x)

    @pytest.mark.parametrize("x, digit", [(F(1), 2), (F(1, 2), 3), (F(1, 3), 4)])
    def test_first_digit(self, x, digit):
        assert first_digit(x) == digit

    def test_digit_of_zero_is_infinite(self):
        with pytest.raises(InfiniteDigitError):
            first_digit(0)

    @given(unit_rationals)
    def test_image_stays_in_unit_interval(self, x):
        y = luroth_map(x)
        assert 0 <= y <= 1 and y.denominator <= x.denominator

    def test_boundary_point_takes_the_larger_digit(self):
        # 1/x = 4 exactly: floor convention gives digit 5
        assert first_digit(F(1, 4)) == 5
        assert luroth_map(F(1, 4)) == F(1)


class TestExpandRational:
    @pytest.mark.parametrize("x, pre, per", [
        (F(1), (), (2,)),
        (F(1, 2), (3,), (2,)),
        (F(2, 3), (2, 4), (2,)),
    ])
    def test_examples(self, x, pre, per):
        assert expand_rational(x) == PeriodicExpansion(pre, per)

    def test_budget_exhausted(self):
        with pytest.raises(CycleNotFoundError):
            expand_rational(F(2, 3), max_steps=2)

    def test_denominator_budget_always_suffices(self):
        for q in range(1, 120):
            for p in range(1, q + 1):
                expand_rational(F(p, q), max_steps=q)

    @given(unit_rationals)
    def test_round_trip(self, x):
        assert evaluate_periodic(expand_rational(x)) == x

    @given(unit_rationals)
    def test_shift_matches_map(self, x):
        assert expand_rational(luroth_map(x)) == expand_rational(x).shift()

    @given(unit_rationals)
    def test_minimal(self, x):
        pe = expand_rational(x)
        per = pe.period
        # no shorter period divides the cycle
        for d in range(1, len(per)):
            if len(per) % d == 0:
                assert per != per[:d] * (len(per) // d)
        # preperiod cannot be shortened by rolling the period
        if pe.preperiod:
            assert pe.preperiod[-1] != per[-1]

    @given(unit_rationals)
    def test_digits_agree_with_floor_oracle(self, x):
        pe = expand_rational(x)
        n = len(pe.preperiod) + 2 * len(pe.period)
        assert list(pe.digits(n)) == digits_by_floor(x, n)

    def test_serialization(self):
        pe = expand_rational(F(2, 3))
        assert pe.to_dict() == {"preperiod": [2, 4], "period": [2]}
        assert PeriodicExpansion.from_dict(pe.to_dict()) == pe

    def test_empty_period_rejected(self):
        with pytest.raises(DomainError):
            PeriodicExpansion((3,), ())


class TestEvaluation:
    def test_examples(self):
        assert evaluate([3, 2]) == F(5, 12)
        assert evaluate([2]) == F(1, 2)
        assert evaluate_periodic(PeriodicExpansion((3,), (2,))) == F(1, 2)

    @pytest.mark.parametrize("word, qs", [([3, 2, 2], [3, 12, 24]), ([2], [2]), ([4, 2], [4, 24])])
    def test_continuants(self, word, qs):
        assert continuants(word) == qs

    @pytest.mark.parametrize("word, cs", [
        ([3, 2, 2], [F(1, 3), F(5, 12), F(11, 24)]),
        ([2], [F(1, 2)]),
        ([4, 2], [F(1, 4), F(7, 24)]),
    ])
    def test_convergents(self, word, cs):
        assert convergents(word) == cs

    @given(words)
    def test_convergents_are_partial_sums(self, w):
        assert convergents(w) == partial_sums(w)

    @given(words)
    def test_denominators_are_continuants(self, w):
        pairs = convergent_pairs(w)
        assert [q for _, q in pairs] == continuants(w)

    @given(words)
    def test_continuant_growth(self, w):
        assert all(q >= 2**n for n, q in enumerate(continuants(w), start=1))

    def test_non_coprime_numerators_allowed(self):
        # 1/2 + 1/(2*1*3): P_2 = 4, Q_2 = 6
        assert convergent_pairs([2, 3])[-1] == (4, 6)
        assert convergents([2, 3])[-1] == F(2, 3)

    def test_periodic_with_long_cycle(self):
        pe = PeriodicExpansion((5, 7), (3, 2, 9))
        x = evaluate_periodic(pe)
        assert expand_rational(x) == pe

    @pytest.mark.parametrize("bad", [[1], [3, 0]])
    def test_bad_digits(self, bad):
        with pytest.raises(DomainError):
            evaluate(bad)


class TestResidual:
    @pytest.mark.parametrize("x, word, r", [
        (F(1, 2), [3, 2, 2], F(1, 24)),
        (F(1), [2], F(1, 2)),
        (F(2, 3), [2, 4], F(1, 24)),
    ])
    def test_examples(self, x, word, r):
        assert residual(x, word) == r

    def test_inconsistent_word(self):
        with pytest.raises(DomainError):
            residual(F(1, 2), [2, 2])

    @settings(max_examples=200)
    @given(unit_rationals, st.integers(1, 12))
    def test_identity(self, x, n):
        w = digits_of(x, n)
        y = x
        for _ in range(n):
            y = luroth_map(y)
        q = continuants(w)[-1]
        assert x - convergents(w)[-1] == y / (q * (w[-1] - 1)) == residual(x, w)


class TestExpandReal:
    def test_sqrt2(self):
        assert expand_real(parse_real("sqrt2-1"), 2).digits == (3, 3)

    def test_exact_rationals(self):
        assert expand_real(F(3, 10), 1).digits == (4,)
        assert expand_real(parse_real("0.3"), 1).digits == (4,)
        assert expand_real(1, 3).digits == (2, 2, 2)

    @pytest.mark.parametrize("text, value", [
        ("sqrt2-1", lambda: mpmath.sqrt(2) - 1),
        ("phi-1", lambda: (mpmath.sqrt(5) - 1) / 2),
        ("e-2", lambda: mpmath.e - 2),
        ("(sqrt(7)-2)/3", lambda: (mpmath.sqrt(7) - 2) / 3),
    ])
    def test_against_high_precision_oracle(self, text, value):
        with mpmath.workdps(400):
            expected = mp_digits(value(), 16)
        got = expand_real(parse_real(text), 16, precision_bits=512)
        assert got.complete
        assert list(got.digits) == expected

    def test_precision_exhaustion_reports_prefix(self):
        exp = expand_real(parse_real("sqrt2-1"), 200, precision_bits=64)
        assert not exp.complete
        assert 0 < exp.certified_length < 200
        with mpmath.workdps(600):
            ref = mp_digits(mpmath.sqrt(2) - 1, exp.certified_length)
        assert list(exp.digits) == ref

    def test_enclosure_tuple(self):
        assert expand_real((F(2, 5), F(9, 20)), 3).digits == (3,)


class TestReals:
    @pytest.mark.parametrize("text, expected", [
        ("1/2", RationalReal(F(1, 2))),
        ("0.25", RationalReal(F(1, 4))),
        ("sqrt(2)-1", SurdReal(2, 1)),
        ("sqrt2 - 1", SurdReal(2, 1)),
        ("(sqrt(5)-1)/2", SurdReal(5, 1, 2)),
        ("golden-1", SurdReal(5, 1, 2)),
        ("e-2", EReal(2)),
    ])
    def test_parse(self, text, expected):
        assert parse_real(text) == expected

    @pytest.mark.parametrize("text", ["pi-3", "sqrt(2", "1/0", "x", "(sqrt(2)-1"])
    def test_rejected(self, text):
        with pytest.raises(ValueError):
            parse_real(text)

    @pytest.mark.parametrize("x", [SurdReal(2, 1), SurdReal(5, 1, 2), EReal(2), SurdReal(4, 1, 3)])
    @pytest.mark.parametrize("bits", [64, 200])
    def test_enclosures_are_tight_and_correct(self, x, bits):
        lo, hi = x.enclose(bits)
        assert hi - lo <= F(1, 2**bits)
        with mpmath.workdps(100):
            v = mpmath.mpf(lo.numerator) / lo.denominator
            w = mpmath.mpf(hi.numerator) / hi.denominator
            if isinstance(x, SurdReal):
                ref = (mpmath.sqrt(x.k) - x.m) / x.q
            else:
                ref = mpmath.e - x.m
            assert v <= ref <= w


class TestLogValue:
    def test_arithmetic(self):
        a, b = LogValue.of(6), LogValue.of(F(1, 3))
        assert math.isclose(float(a * b), 2.0)
        assert math.isclose(float(a / b), 18.0)
        assert math.isclose(float(a + b), 6 + 1 / 3)
        assert math.isclose(float(a**0.5), math.sqrt(6))
        assert b < a and a >= b

    def test_zero(self):
        z = LogValue.of(0)
        assert z.is_zero
        assert (z + LogValue.of(2)).log == math.log(2)
        assert (z * LogValue.of(5)).is_zero
        with pytest.raises(ZeroDivisionError):
            LogValue.of(1) / z
        with pytest.raises(DomainError):
            LogValue.of(-1)

    def test_huge_sum_does_not_overflow(self):
        big = LogValue(5000.0)
        s = LogValue.sum([big, big, LogValue(4990.0)])
        assert math.isclose(s.log, 5000 + math.log(2 + math.exp(-10)))
        assert float(big) == math.inf

    @pytest.mark.parametrize("word", [[3, 2, 2], [2]])
    def test_log_continuant_small(self, word):
        assert math.isclose(log_continuant(word).log, math.log(continuants(word)[-1]), rel_tol=1e-12)

    def test_log_continuant_tower_digits(self):
        w = [4 ** (2**j) for j in range(1, 7)]
        exact = math.log(continuants(w)[-1])
        assert abs(log_continuant(w).log - exact) <= 1e-9 * exact

    @settings(max_examples=100)
    @given(st.lists(st.integers(2, 2**64), min_size=1, max_size=64))
    def test_log_continuant_property(self, w):
        exact = math.log(continuants(w)[-1])
        assert abs(log_continuant(w).log - exact) <= 1e-9 * exact


def test_separation_of_equal_length_words():
    from luroth.geometry import cylinder

    rng = random.Random(5)
    for _ in range(300):
        n = rng.randint(1, 4)
        a = [rng.randint(2, 9) for _ in range(n)]
        b = list(a)
        b[rng.randrange(n)] += rng.randint(1, 3)
        ca, cb = cylinder(a), cylinder(b)
        # closed cylinders of different words meet at most in one endpoint
        assert ca.hi <= cb.lo or cb.hi <= ca.lo
