"""Exact Lüroth expansions.

Points of the unit interval are carried as :class:`fractions.Fraction`; digit
words are plain tuples of integers ``>= 2``.  Every routine here is a pure
function of immutable values.

>>> expand_rational(Fraction(2, 3))
PeriodicExpansion(preperiod=(2, 4), period=(2,))
>>> convergents([3, 2, 2])
[Fraction(1, 3), Fraction(5, 12), Fraction(11, 24)]
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "DomainError",
    "InfiniteDigitError",
    "CycleNotFoundError",
    "LogValue",
    "PeriodicExpansion",
    "RealExpansion",
    "as_fraction",
    "check_word",
    "luroth_map",
    "first_digit",
    "digits_of",
    "expand_rational",
    "expand_real",
    "evaluate",
    "evaluate_periodic",
    "branch",
    "continuants",
    "convergent_pairs",
    "convergents",
    "residual",
    "log_continuant",
    "fraction_to_str",
]


class DomainError(ValueError):
    """Argument outside the domain of the operation."""


class InfiniteDigitError(DomainError):
    """The digit of 0 is +infinity."""


class CycleNotFoundError(RuntimeError):
    """The rational orbit did not close within the step budget."""


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, floats and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fraction_to_str(x: Fraction) -> str:
    """Serialize as ``"p/q"`` (always with a denominator)."""
    return f"{x.numerator}/{x.denominator}"


def check_word(word: Iterable[int]) -> tuple[int, ...]:
    """Return ``word`` as a tuple, rejecting digits below 2."""
    out = tuple(map(int, word))
    if out and min(out) < 2:
        raise DomainError(f"Lüroth digits must be >= 2, got {min(out)}")
    return out


def _check_unit(x: Fraction) -> None:
    if not 0 <= x <= 1:
        raise DomainError(f"{x} is outside [0, 1]")


# -- the map --------------------------------------------------------------


def luroth_map(x) -> Fraction:
    """Apply the Lüroth map ``[1/x]([1/x]+1)x - [1/x]`` exactly (0 maps to 0)."""
    x = as_fraction(x)
    _check_unit(x)
    if x == 0:
        return Fraction(0)
    k = x.denominator // x.numerator
    return k * (k + 1) * x - k


def first_digit(x) -> int:
    """``floor(1/x) + 1`` for x in (0, 1]."""
    x = as_fraction(x)
    _check_unit(x)
    if x == 0:
        raise InfiniteDigitError("a_1(0) = +inf")
    return x.denominator // x.numerator + 1


def digits_of(x, n: int) -> tuple[int, ...]:
    """First ``n`` digits of a rational x in (0, 1]."""
    x = as_fraction(x)
    out = []
    for _ in range(n):
        out.append(first_digit(x))
        x = luroth_map(x)
    return tuple(out)


@dataclass(frozen=True)
class PeriodicExpansion:
    """Eventually periodic digit sequence ``preperiod + period + period + ...``."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", check_word(self.preperiod))
        object.__setattr__(self, "period", check_word(self.period))
        if not self.period:
            raise DomainError("period must be non-empty")

    def digits(self, n: int) -> tuple[int, ...]:
        out = list(self.preperiod[:n])
        while len(out) < n:
            out.extend(self.period)
        return tuple(out[:n])

    def shift(self) -> "PeriodicExpansion":
        """Left shift of the sequence (the expansion of the image point)."""
        if self.preperiod:
            return PeriodicExpansion(self.preperiod[1:], self.period)
        return PeriodicExpansion((), self.period[1:] + self.period[:1])

    def to_dict(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}

    @classmethod
    def from_dict(cls, d: dict) -> "PeriodicExpansion":
        return cls(tuple(d["preperiod"]), tuple(d["period"]))


def expand_rational(x, max_steps: int | None = None) -> PeriodicExpansion:
    """Eventually periodic expansion of a rational in (0, 1].

    The orbit of ``p/q`` stays on the grid ``{m/q}``, so it closes after at
    most ``q`` steps; that is the default budget.  Repeated states are found
    by exact comparison of grid numerators, which yields the minimal
    preperiod and period.
    """
    x = as_fraction(x)
    if not 0 < x <= 1:
        raise DomainError(f"{x} is outside (0, 1]")
    q = x.denominator
    if max_steps is None:
        max_steps = q + 1
    if max_steps < 1:
        raise DomainError("max_steps must be >= 1")
    m = x.numerator
    seen: dict[int, int] = {}
    digs: list[int] = []
    push = digs.append
    for step in range(max_steps):
        if m in seen:
            break
        seen[m] = step
        k = q // m
        push(k + 1)
        m = k * ((k + 1) * m - q)
    if m in seen:
        start = seen[m]
        return PeriodicExpansion(tuple(digs[:start]), tuple(digs[start:]))
    raise CycleNotFoundError(
        f"no cycle within {max_steps} steps (denominator {q} always suffices)"
    )


# -- evaluation -------------------------------------------------------------


def convergent_pairs(word: Sequence[int]) -> list[tuple[int, int]]:
    """Unreduced pairs ``(P_n, Q_n)`` for every prefix of ``word``."""
    word = check_word(word)
    if not word:
        raise DomainError("word must be non-empty")
    out = []
    p, q = 1, word[0]
    out.append((p, q))
    for prev, a in zip(word, word[1:]):
        q_next = q * (prev - 1) * a
        p = p * (prev - 1) * a + 1
        q = q_next
        out.append((p, q))
    return out


def _last_pair(word: tuple[int, ...]) -> tuple[int, int]:
    # (P_n, Q_n) of an already checked, non-empty word
    p, q = 1, word[0]
    for prev, a in zip(word, word[1:]):
        m = (prev - 1) * a
        p, q = p * m + 1, q * m
    return p, q


def continuants(word: Sequence[int]) -> list[int]:
    """``[Q_1, ..., Q_n]`` with ``Q_1 = a_1`` and ``Q_{k+1} = Q_k (a_k - 1) a_{k+1}``."""
    return [q for _, q in convergent_pairs(word)]


def convergents(word: Sequence[int]) -> list[Fraction]:
    return [Fraction(p, q) for p, q in convergent_pairs(word)]


def evaluate(word: Sequence[int]) -> Fraction:
    """Finite partial sum ``P_n/Q_n`` of the series for ``word``."""
    word = check_word(word)
    if not word:
        raise DomainError("word must be non-empty")
    p, q = _last_pair(word)
    return Fraction(p, q)


def branch(word: Sequence[int]) -> tuple[Fraction, Fraction]:
    """``(slope, intercept)`` of the inverse branch ``S_word``.

    ``S_word(x) = slope * x + intercept`` maps [0, 1] onto the closure of the
    cylinder of ``word``; the empty word gives the identity.
    """
    word = check_word(word)
    if not word:
        return Fraction(1), Fraction(0)
    p, q = _last_pair(word)
    return Fraction(1, q * (word[-1] - 1)), Fraction(p, q)


def evaluate_periodic(pe: PeriodicExpansion) -> Fraction:
    """Exact value of an eventually periodic expansion (geometric tail summed)."""
    p, q = _last_pair(pe.period)
    d = q * (pe.period[-1] - 1)
    # fixed point of y -> y/d + p/q, then y -> y/D + P/Q for the preperiod
    num, den = p * d, q * (d - 1)
    if pe.preperiod:
        pp, qq = _last_pair(pe.preperiod)
        dd = qq * (pe.preperiod[-1] - 1)
        num, den = num * qq + pp * dd * den, dd * qq * den
    return Fraction(num, den)


def residual(x, word: Sequence[int]) -> Fraction:
    """``x - P_n/Q_n``, checked against ``L^n(x) / (Q_n (a_n - 1))``."""
    x = as_fraction(x)
    word = check_word(word)
    if not word:
        raise DomainError("word must be non-empty")
    y = x
    for a in word:
        try:
            d = first_digit(y)
        except InfiniteDigitError:
            d = None
        if d != a:
            raise DomainError(f"{word} is not a prefix of the expansion of {x}")
        y = luroth_map(y)
    p, q = convergent_pairs(word)[-1]
    r = x - Fraction(p, q)
    if r != y / (q * (word[-1] - 1)):
        raise ArithmeticError("residual identity violated")
    return r


# -- certified expansion of reals ----------------------------------------


@dataclass(frozen=True)
class RealExpansion:
    """Digits certified from an enclosure; may be shorter than requested."""

    digits: tuple[int, ...]
    requested: int
    precision_bits: int

    @property
    def certified_length(self) -> int:
        return len(self.digits)

    @property
    def complete(self) -> bool:
        return len(self.digits) >= self.requested


def _enclosure(x, bits: int) -> tuple[Fraction, Fraction]:
    if hasattr(x, "enclose"):
        return x.enclose(bits)
    if isinstance(x, tuple):
        lo, hi = (as_fraction(v) for v in x)
        return lo, hi
    v = as_fraction(x)
    return v, v


def expand_real(x, n: int, precision_bits: int = 256) -> RealExpansion:
    """First ``n`` digits of a real number, each certified.

    ``x`` is a rational (taken exactly), an explicit ``(lo, hi)`` enclosure,
    or any object with an ``enclose(bits) -> (lo, hi)`` method such as the
    values produced by :func:`luroth.reals.parse_real`.  The enclosure is
    pushed through the affine branch of the map exactly; expansion stops
    as soon as its endpoints fall in different digit cells.
    """
    lo, hi = _enclosure(x, precision_bits)
    lo, hi = max(lo, Fraction(0)), min(hi, Fraction(1))
    if lo > hi:
        raise DomainError("enclosure does not meet (0, 1]")
    out: list[int] = []
    while len(out) < n:
        if lo <= 0:
            break
        k_lo = lo.denominator // lo.numerator
        k_hi = hi.denominator // hi.numerator
        if k_lo != k_hi:
            break
        k = k_lo
        out.append(k + 1)
        lo, hi = k * (k + 1) * lo - k, k * (k + 1) * hi - k
    return RealExpansion(tuple(out), n, precision_bits)


# -- log domain -----------------------------------------------------------


@dataclass(frozen=True, order=False)
class LogValue:
    """Nonnegative real stored as its natural log; ``-inf`` encodes zero."""

    log: float

    @classmethod
    def of(cls, x) -> "LogValue":
        """Log of a positive int, Fraction or float (0 allowed)."""
        if x == 0:
            return cls(-math.inf)
        if x < 0:
            raise DomainError("LogValue holds nonnegative quantities only")
        if isinstance(x, Fraction):
            return cls(math.log(x.numerator) - math.log(x.denominator))
        return cls(math.log(x))

    @property
    def is_zero(self) -> bool:
        return self.log == -math.inf

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.is_zero or other.is_zero:
            return ZERO
        return LogValue(self.log + other.log)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.is_zero:
            raise ZeroDivisionError("division by LogValue zero")
        if self.is_zero:
            return ZERO
        return LogValue(self.log - other.log)

    def __add__(self, other: "LogValue") -> "LogValue":
        a, b = self.log, other.log
        if a < b:
            a, b = b, a
        if b == -math.inf:
            return LogValue(a)
        return LogValue(a + math.log1p(math.exp(b - a)))

    def __pow__(self, s: float) -> "LogValue":
        if self.is_zero:
            if s <= 0:
                raise DomainError("0 ** s needs s > 0")
            return ZERO
        return LogValue(self.log * s)

    def __lt__(self, other):
        return self.log < other.log

    def __le__(self, other):
        return self.log <= other.log

    def __gt__(self, other):
        return self.log > other.log

    def __ge__(self, other):
        return self.log >= other.log

    def __float__(self) -> float:
        return math.exp(self.log) if self.log < 709.0 else math.inf

    @staticmethod
    def sum(values: Iterable["LogValue"]) -> "LogValue":
        logs = [v.log for v in values if not v.is_zero]
        if not logs:
            return ZERO
        top = max(logs)
        return LogValue(top + math.log(math.fsum(math.exp(v - top) for v in logs)))


ZERO = LogValue(-math.inf)
ONE = LogValue(0.0)


def log_continuant(word: Sequence[int]) -> LogValue:
    """``log Q_n`` accumulated as a float sum; digits may be arbitrarily large.

    The relative error is a small multiple of ``n`` machine epsilons
    (``math.fsum`` plus one correctly rounded log per term).
    """
    word = check_word(word)
    if not word:
        raise DomainError("word must be non-empty")
    terms = [math.log(a) + math.log(a - 1) for a in word[:-1]]
    terms.append(math.log(word[-1]))
    return LogValue(math.fsum(terms))
