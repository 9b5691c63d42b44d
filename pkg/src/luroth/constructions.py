"""Digit-bound schemes, the restricted sets they define, and their product measure.

A scheme fixes, for each level ``n >= 1``, an inclusive range of admissible
digits.  Two variants exist:

* :class:`ExplicitScheme` -- a finite list ``s = (s_1, ..., s_L)`` and a
  multiplier ``N``; level ``n`` admits ``s_n <= a_n <= N s_n - 1``.
* :class:`TowerScheme` -- parameters ``(c, lam, d)``; level ``n`` admits
  ``c**(lam**n) <= a_n < d * c**(lam**n)``.  Viewed as an explicit scheme it
  has ``s_n = ceil(c**(lam**n))`` and ``N = d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from .core import DomainError, check_word

__all__ = [
    "ExplicitScheme",
    "TowerScheme",
    "BoundScheme",
    "ProductMeasureSpec",
    "S0Estimate",
    "scheme_from_dict",
    "digit_range",
    "membership",
    "admissible_words",
    "sample_word",
    "sample_words",
    "level_mass",
    "measure_of_fundamental_interval",
    "s0",
    "n0_finder",
]

# exact integers are materialized only below this many bits
MAX_EXACT_BITS = 1 << 22


def _exact_number(x) -> Union[int, Fraction]:
    if isinstance(x, bool):
        raise TypeError("boolean is not a number")
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError("non-finite parameter")
        x = Fraction(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@dataclass(frozen=True)
class ExplicitScheme:
    s: tuple[int, ...]
    N: int = 2

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(v) for v in self.s))
        if not self.s:
            raise DomainError("explicit scheme needs at least one level")
        if any(v < 4 for v in self.s):
            raise DomainError("every s_n must be >= 4")
        if self.N < 2:
            raise DomainError("N must be >= 2")

    @property
    def levels(self) -> int | None:
        return len(self.s)

    def s_at(self, n: int) -> int:
        if n < 1:
            raise DomainError("levels start at 1")
        if n > len(self.s):
            raise DomainError(f"scheme defines {len(self.s)} levels, level {n} requested")
        return self.s[n - 1]

    def digit_range(self, n: int) -> tuple[int, int]:
        s = self.s_at(n)
        return s, self.N * s - 1

    def log_s(self, n: int) -> float:
        return math.log(self.s_at(n))

    def to_dict(self) -> dict:
        return {"type": "explicit", "s": list(self.s), "N": self.N}


@dataclass(frozen=True)
class TowerScheme:
    c: int
    lam: Union[int, float, Fraction]
    d: int = 2
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "lam", _exact_number(self.lam))
        if self.c < 2 or self.d < 2:
            raise DomainError("c and d must be >= 2")
        if not self.lam > 1:
            raise DomainError("lambda must be > 1")
        if self.s_at(1) < 4:
            raise DomainError("s_1 = ceil(c**lambda) must be >= 4")

    @property
    def N(self) -> int:
        return self.d

    @property
    def levels(self) -> int | None:
        return None

    @property
    def integer_lambda(self) -> bool:
        return isinstance(self.lam, int)

    def exponent_log(self, n: int) -> float:
        """``lam**n * log(c)`` as a float."""
        return math.exp(n * math.log(self.lam)) * math.log(self.c)

    def digit_range(self, n: int) -> tuple[int, int]:
        if n < 1:
            raise DomainError("levels start at 1")
        if n not in self._cache:
            self._cache[n] = self._range(n)
        return self._cache[n]

    def _range(self, n: int) -> tuple[int, int]:
        bits = self.exponent_log(n) / math.log(2)
        if bits > MAX_EXACT_BITS:
            raise OverflowError(f"level {n} digits have ~{bits:.3g} bits; use log_s")
        if self.integer_lambda:
            lo = self.c ** (self.lam**n)
            return lo, self.d * lo - 1
        lo = _certified_ceil_power(self.c, self.lam, n, 1, int(bits))
        hi = _certified_ceil_power(self.c, self.lam, n, self.d, int(bits)) - 1
        return lo, hi

    def s_at(self, n: int) -> int:
        return self.digit_range(n)[0]

    def log_s(self, n: int) -> float:
        """``log s_n``; exact log of the integer when it is small enough."""
        y = self.exponent_log(n)
        if self.integer_lambda or y > 2000.0:
            # for huge levels ceil() changes the log by less than exp(-2000)
            return y
        return math.log(self.s_at(n))

    def limit_exponent(self) -> float:
        """``1/(1+lam)``, the dimension of the tower set."""
        return 1.0 / (1.0 + float(self.lam))

    def to_dict(self) -> dict:
        lam = self.lam if isinstance(self.lam, int) else float(self.lam)
        return {"type": "tower", "c": self.c, "lambda": lam, "d": self.d}


BoundScheme = Union[ExplicitScheme, TowerScheme]


def _certified_ceil_power(c: int, lam: Fraction, n: int, mult: int, bits: int) -> int:
    """``ceil(mult * c**(lam**n))`` certified by interval evaluation."""
    prec = bits + 128
    for _ in range(8):
        ctx = MPIntervalContext()
        ctx.prec = prec
        lam_iv = ctx.mpf(lam.numerator) / lam.denominator
        v = ctx.mpf(mult) * ctx.mpf(c) ** (lam_iv**n)
        lo, hi = v._mpi_
        clo = int(libmp.to_int(libmp.mpf_ceil(lo)))
        chi = int(libmp.to_int(libmp.mpf_ceil(hi)))
        if clo == chi:
            return clo
        prec *= 2
    raise ArithmeticError("could not certify the integer ceiling")


def scheme_from_dict(d: dict) -> BoundScheme:
    """Inverse of ``to_dict`` for both scheme variants."""
    kind = d.get("type")
    if kind == "explicit":
        return ExplicitScheme(tuple(d["s"]), int(d.get("N", 2)))
    if kind == "tower":
        lam = d["lambda"]
        return TowerScheme(int(d["c"]), lam, int(d.get("d", d.get("N", 2))))
    raise DomainError(f"unknown scheme type {kind!r}")


def digit_range(scheme: BoundScheme, n: int) -> tuple[int, int]:
    return scheme.digit_range(n)


def membership(word: Sequence[int], scheme: BoundScheme) -> bool:
    """True iff every digit lies in its level's admissible range."""
    for n, a in enumerate(word, start=1):
        lo, hi = scheme.digit_range(n)
        if not lo <= a <= hi:
            return False
    return True


def admissible_words(scheme: BoundScheme, n: int):
    """Yield every admissible word of length ``n`` in lexicographic order."""
    ranges = [scheme.digit_range(k) for k in range(1, n + 1)]

    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        lo, hi = ranges[len(prefix)]
        for a in range(lo, hi + 1):
            prefix.append(a)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


# -- measure and sampling ------------------------------------------------


@dataclass(frozen=True)
class ProductMeasureSpec:
    """Uniform product measure on the admissible digits of ``scheme``."""

    scheme: BoundScheme


def level_mass(scheme: BoundScheme, n: int) -> Fraction:
    """Mass of each admissible digit at level ``n``; ``1/((N-1) s_n)`` for integer ``s_n``."""
    lo, hi = scheme.digit_range(n)
    return Fraction(1, hi - lo + 1)


def measure_of_fundamental_interval(word: Sequence[int], scheme: BoundScheme) -> Fraction:
    word = check_word(word)
    if not membership(word, scheme):
        raise DomainError(f"{word} is not admissible")
    out = Fraction(1)
    for n in range(1, len(word) + 1):
        out *= level_mass(scheme, n)
    return out


def _uniform_ints(rng: np.random.Generator, lo: int, hi: int, count: int) -> list[int]:
    width = hi - lo
    if width < (1 << 62):
        return [lo + int(v) for v in rng.integers(0, width + 1, size=count)]
    nbits = width.bit_length()
    nbytes = (nbits + 7) // 8
    extra = 8 * nbytes - nbits
    out = []
    while len(out) < count:
        v = int.from_bytes(rng.bytes(nbytes), "little") >> extra
        if v <= width:
            out.append(lo + v)
    return out


def level_generator(seed: int, level: int) -> np.random.Generator:
    """Independent stream for one level, split from the root seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(level,)))


def sample_words(spec, depth: int, count: int, seed: int) -> list[tuple[int, ...]]:
    """``count`` independent words of length ``depth`` from the product measure."""
    scheme = spec.scheme if isinstance(spec, ProductMeasureSpec) else spec
    if depth < 1 or count < 1:
        raise DomainError("depth and count must be >= 1")
    columns = []
    for n in range(1, depth + 1):
        lo, hi = scheme.digit_range(n)
        columns.append(_uniform_ints(level_generator(seed, n), lo, hi, count))
    return [tuple(col[i] for col in columns) for i in range(count)]


def sample_word(spec, depth: int, seed: int) -> tuple[int, ...]:
    return sample_words(spec, depth, 1, seed)[0]


# -- exponents -------------------------------------------------------------


@dataclass(frozen=True)
class S0Estimate:
    ratios: tuple[float, ...]
    estimate: float
    window: tuple[int, int]
    closed_form: tuple[float, ...] | None = None


def _levels_available(scheme: BoundScheme, needed: int) -> None:
    if scheme.levels is not None and needed > scheme.levels:
        raise DomainError(f"need s_{needed} but the scheme has {scheme.levels} levels")


def tower_ratio_closed_form(lam: float, n: int) -> float:
    """``(1 - lam**-n) / (1 + lam - 2 lam**-n)``."""
    t = lam ** (-n)
    return (1 - t) / (1 + lam - 2 * t)


def s0(scheme: BoundScheme, horizon: int) -> S0Estimate:
    """Finite-n ratios ``log(s_1..s_n) / (2 log(s_1..s_n) + log s_{n+1})``.

    The liminf is estimated by the minimum over ``[horizon//2, horizon]``.
    Schemes whose available levels show no growth at all are rejected, as the
    ratio only means something when ``s_n -> infinity``.
    """
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    _levels_available(scheme, horizon + 1)
    logs = [scheme.log_s(n) for n in range(1, horizon + 2)]
    if isinstance(scheme, ExplicitScheme) and max(logs[1:]) <= logs[0]:
        raise DomainError("s_n shows no growth; the restricted set needs s_n -> infinity")
    ratios = []
    acc = 0.0
    for n in range(1, horizon + 1):
        acc += logs[n - 1]
        ratios.append(acc / (2 * acc + logs[n]))
    lo = max(1, horizon // 2)
    estimate = min(ratios[lo - 1 :])
    closed = None
    if isinstance(scheme, TowerScheme) and scheme.integer_lambda:
        closed = tuple(tower_ratio_closed_form(scheme.lam, n) for n in range(1, horizon + 1))
        for n, (r, cf) in enumerate(zip(ratios, closed), start=1):
            if abs(r - cf) > 1e-9:
                raise ArithmeticError(f"ratio {r} disagrees with closed form {cf} at n={n}")
    return S0Estimate(tuple(ratios), estimate, (lo, horizon), closed)


def mass_exponent_condition(scheme: BoundScheme, n: int, s: float) -> tuple[float, float]:
    """Both sides of ``s * log(s_{n+1} prod (N s_k)^2) <= log prod (N-1) s_k``."""
    N = scheme.N
    total = math.fsum(scheme.log_s(k) for k in range(1, n + 1))
    lhs = s * (scheme.log_s(n + 1) + 2 * (n * math.log(N) + total))
    rhs = n * math.log(N - 1) + total
    return lhs, rhs


def n0_finder(scheme: BoundScheme, s: float, window: int = 32, max_n: int = 4096) -> int:
    """Least ``n0`` with the mass-exponent inequality holding on ``[n0, n0 + window]``."""
    if s < 0:
        raise DomainError("s must be >= 0")
    if s > 0:
        horizon = 64 if scheme.levels is None else scheme.levels - 1
        est = s0(scheme, horizon).estimate
        if s >= est:
            raise DomainError(f"s = {s} is not below the s0 estimate {est}")
    if scheme.levels is not None:
        max_n = min(max_n, scheme.levels - 1)
    ok = []
    for n in range(1, max_n + 1):
        try:
            lhs, rhs = mass_exponent_condition(scheme, n, s)
        except OverflowError:
            break  # tower levels beyond float range
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            break
        ok.append(lhs <= rhs)
    span = window + 1
    for start in range(0, len(ok) - span + 1):
        if all(ok[start : start + span]):
            return start + 1
    raise DomainError("no n0 found within the available levels")
