"""Exact interval geometry of the inverse branches.

Everything is computed from exact endpoints (Fractions).  Closed-form
diameters and gap formulas are checked against those endpoints, never used
in their place.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .constructions import BoundScheme, membership
from .core import DomainError, LogValue, as_fraction, branch, check_word, continuants

__all__ = [
    "Interval",
    "FundamentalInterval",
    "KInterval",
    "GapReport",
    "s_map",
    "cylinder",
    "tail_union_closure",
    "fundamental_interval",
    "diameter_bounds",
    "diameter_bounds_exact",
    "neighbor_gaps",
    "threshold_cut",
    "k_interval",
    "telescoping_check",
    "ball_cover_check",
]


@dataclass(frozen=True)
class Interval:
    """Closed subinterval ``[lo, hi]`` of [0, 1] with exact endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if not 0 <= lo <= hi <= 1:
            raise DomainError(f"[{lo}, {hi}] is not a subinterval of [0, 1]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def diameter(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= as_fraction(x) <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def distance(self, other: "Interval") -> Fraction:
        """Gap between the two intervals (0 if they meet)."""
        return max(Fraction(0), other.lo - self.hi, self.lo - other.hi)

    def disjoint(self, other: "Interval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def to_dict(self) -> dict:
        return {"lo": f"{self.lo.numerator}/{self.lo.denominator}",
                "hi": f"{self.hi.numerator}/{self.hi.denominator}"}

    @classmethod
    def from_dict(cls, d: dict) -> "Interval":
        return cls(Fraction(d["lo"]), Fraction(d["hi"]))


def _image(word: Sequence[int], lo: Fraction, hi: Fraction) -> Interval:
    slope, icpt = branch(word)
    return Interval(slope * lo + icpt, slope * hi + icpt)


def _product(word: Sequence[int]) -> Fraction:
    return branch(word)[0]


def s_map(a: int, x) -> Fraction:
    """First-level inverse branch ``x / (a(a-1)) + 1/a``."""
    (a,) = check_word([a])
    x = as_fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"{x} is outside [0, 1]")
    return x / (a * (a - 1)) + Fraction(1, a)


def cylinder(word: Sequence[int]) -> Interval:
    """Closure of the cylinder of ``word``; its diameter is ``prod 1/(a(a-1))``."""
    word = check_word(word)
    out = _image(word, Fraction(0), Fraction(1))
    if out.diameter != _product(word):
        raise ArithmeticError("cylinder diameter disagrees with the product formula")
    return out


def _cut_closure(word: Sequence[int], cut: int) -> Interval:
    # union of the child cylinders with digit >= cut (cut an integer >= 2)
    return _image(word, Fraction(0), Fraction(1, cut - 1))


def tail_union_closure(word: Sequence[int], r) -> Interval:
    """Closure of the union of the cylinders ``word + (a,)`` over ``a >= r``.

    Integer ``r`` gives ``S_word([0, 1/(r-1)])``; otherwise
    ``S_word([0, 1/floor(r)])``.
    """
    word = check_word(word)
    r = as_fraction(r)
    if r < 2:
        raise DomainError("r must be >= 2")
    if r.denominator == 1:
        return _image(word, Fraction(0), Fraction(1, r.numerator - 1))
    return _image(word, Fraction(0), Fraction(1, math.floor(r)))


@dataclass(frozen=True)
class FundamentalInterval:
    word: tuple[int, ...]
    next_bound: int
    interval: Interval

    @property
    def diameter(self) -> Fraction:
        return self.interval.diameter


def fundamental_interval(word: Sequence[int], s_next: int) -> FundamentalInterval:
    """``J_n(word)``: closure of the child cylinders with digit ``>= s_next``."""
    word = check_word(word)
    if s_next < 2:
        raise DomainError("s_next must be >= 2")
    iv = tail_union_closure(word, s_next)
    if iv.diameter != _product(word) / (s_next - 1):
        raise ArithmeticError("fundamental interval diameter formula violated")
    return FundamentalInterval(word, s_next, iv)


def diameter_bounds_exact(n: int, scheme: BoundScheme) -> tuple[Fraction, Fraction]:
    """``1/(N^(2n+1) (s_1..s_n)^2 s_{n+1})`` and ``2^n/((s_1..s_n)^2 s_{n+1})``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    prod = math.prod(scheme.digit_range(k)[0] for k in range(1, n + 1))
    s_next = scheme.digit_range(n + 1)[0]
    base = prod * prod * s_next
    return Fraction(1, scheme.N ** (2 * n + 1) * base), Fraction(2**n, base)


def diameter_bounds(n: int, scheme: BoundScheme) -> tuple[LogValue, LogValue]:
    """Log-domain version of :func:`diameter_bounds_exact`, usable at any depth."""
    if n < 1:
        raise DomainError("n must be >= 1")
    logs = math.fsum(scheme.log_s(k) for k in range(1, n + 1))
    base = 2 * logs + scheme.log_s(n + 1)
    lower = -((2 * n + 1) * math.log(scheme.N) + base)
    upper = n * math.log(2) - base
    return LogValue(lower), LogValue(upper)


# -- gaps ---------------------------------------------------------------------


@dataclass(frozen=True)
class GapReport:
    """Distances from ``J_n(word)`` to the nearest order-n fundamental intervals.

    ``left_gap`` looks toward 0 (larger last digit), ``right_gap`` toward 1.
    In case II the left gap is measured to the left end of the parent
    cylinder; in case III the right neighbour is found by decrementing the
    last non-minimal digit and maximizing the digits after it.
    """

    word: tuple[int, ...]
    diameter: Fraction
    left_gap: Optional[Fraction]
    right_gap: Optional[Fraction]
    case: str
    left_neighbor: Optional[tuple[int, ...]] = None
    right_neighbor: Optional[tuple[int, ...]] = None
    right_neighbor_admissible: bool = True

    def to_dict(self) -> dict:
        def fr(x):
            return None if x is None else f"{x.numerator}/{x.denominator}"

        return {
            "word": list(self.word),
            "diameter": fr(self.diameter),
            "leftGap": fr(self.left_gap),
            "rightGap": fr(self.right_gap),
            "caseTag": self.case,
            "leftNeighbor": None if self.left_neighbor is None else list(self.left_neighbor),
            "rightNeighbor": None if self.right_neighbor is None else list(self.right_neighbor),
            "rightNeighborAdmissible": self.right_neighbor_admissible,
        }


def neighbor_gaps(word: Sequence[int], scheme: BoundScheme) -> GapReport:
    word = check_word(word)
    n = len(word)
    if n < 1 or not membership(word, scheme):
        raise DomainError(f"{word} is not an admissible word")
    a = word[-1]
    lo, hi = scheme.digit_range(n)
    s_next = scheme.digit_range(n + 1)[0]
    J = fundamental_interval(word, s_next)
    diam = J.diameter
    prefix = word[:-1]
    case = "II" if a == hi else "III" if a == lo else "I"

    right_gap = left_gap = None
    left_nb = right_nb = None
    admissible = True

    if a > lo:
        right_nb = prefix + (a - 1,)
        right_gap = fundamental_interval(right_nb, s_next).interval.lo - J.interval.hi
        if right_gap != diam * (s_next - 2):
            raise ArithmeticError("right gap closed form violated")
    else:
        # last position whose digit can be decreased
        pos = next((i for i in range(n - 2, -1, -1)
                    if word[i] > scheme.digit_range(i + 1)[0]), None)
        if pos is None:
            pos, admissible = 0, False
        right_nb = (word[:pos] + (word[pos] - 1,)
                    + tuple(scheme.digit_range(k)[1] for k in range(pos + 2, n + 1)))
        right_gap = fundamental_interval(right_nb, s_next).interval.lo - J.interval.hi

    if a < hi:
        left_nb = prefix + (a + 1,)
        left_gap = J.interval.lo - fundamental_interval(left_nb, s_next).interval.hi
        if left_gap != diam * Fraction(a - 1, a + 1) * (s_next - 2):
            raise ArithmeticError("left gap closed form violated")
    else:
        left_gap = J.interval.lo - cylinder(prefix).lo

    return GapReport(word, diam, left_gap, right_gap, case, left_nb, right_nb, admissible)


# -- K intervals --------------------------------------------------------------


def _iroot_ceil(x: int, k: int) -> int:
    """Least integer m >= 0 with m**k >= x."""
    if x <= 0:
        return 0
    if k == 1:
        return x
    m = 1 << -(-x.bit_length() // k)  # m**k >= x
    while True:
        nxt = ((k - 1) * m + x // m ** (k - 1)) // k
        if nxt >= m:
            break
        m = nxt
    # m is now floor-root or close; fix up exactly
    while m**k < x:
        m += 1
    while m > 0 and (m - 1) ** k >= x:
        m -= 1
    return m


def _exponent(alpha, eps) -> Fraction:
    t = Fraction(str(alpha)) if isinstance(alpha, float) else Fraction(alpha)
    t += Fraction(str(eps)) if isinstance(eps, float) else Fraction(eps)
    if t <= 0:
        raise DomainError("alpha + eps must be positive")
    return t


def threshold_cut(q: int, t: Fraction) -> tuple[int, bool]:
    """Least integer ``m >= Q**(1/t)`` and whether ``Q**(1/t)`` is an integer.

    Floats passed as ``alpha``/``eps`` are read through their decimal repr,
    so ``t`` is a small rational ``u/v`` and the comparison ``m**u >= Q**v``
    is done in exact integers.
    """
    u, v = t.numerator, t.denominator
    target = q**v
    m = _iroot_ceil(target, u)
    return m, m**u == target


@dataclass(frozen=True)
class KInterval:
    word: tuple[int, ...]
    threshold: float
    cut: int
    integral: bool
    interval: Interval

    @property
    def diameter(self) -> Fraction:
        return self.interval.diameter


def k_interval(word: Sequence[int], alpha, eps) -> KInterval:
    """``K_n(word)``: child cylinders whose digit is at least ``Q_n**(1/(alpha+eps))``."""
    word = check_word(word)
    if not word:
        raise DomainError("word must be non-empty")
    if alpha <= 0 or eps <= 0:
        raise DomainError("alpha and eps must be positive")
    t = _exponent(alpha, eps)
    q = continuants(word)[-1]
    cut, integral = threshold_cut(q, t)
    if cut < 2:
        raise DomainError("threshold below 2")
    # r integer -> 1/(r-1); otherwise 1/floor(r) = 1/(cut-1)
    iv = _cut_closure(word, cut)
    prod = _product(word)
    # |K| = prod/(cut-1) must lie in [prod/R, prod/(R-1)], i.e. cut-1 <= R <= cut
    u, v = t.numerator, t.denominator
    if not ((cut - 1) ** u <= q**v <= cut**u) or iv.diameter != prod / (cut - 1):
        raise ArithmeticError("K interval diameter outside its bracket")
    threshold = math.exp(math.log(q) / float(t))
    return KInterval(word, threshold, cut, integral, iv)


# -- inequalities used in the separation argument -------------------------------


def telescoping_check(xs: Sequence[int], ys: Sequence[int]) -> bool:
    """Strict inequality ``sum_r (1/x_{m-r}) prod_{j<=m-r} z_j < prod_j z_j``.

    Also checks that the reversed-index sum equals the forward one.
    """
    if len(xs) != len(ys) or not xs:
        raise DomainError("xs and ys must have the same positive length")
    if any(v < 2 for v in xs) or any(v < 2 for v in ys):
        raise DomainError("entries must be >= 2")
    z = [x * y for x, y in zip(xs, ys)]
    m = len(z) - 1
    prefix = [1]
    for v in z:
        prefix.append(prefix[-1] * v)
    backward = sum(Fraction(prefix[m - r + 1], xs[m - r]) for r in range(m + 1))
    forward = sum(Fraction(prefix[i + 1], xs[i]) for i in range(m + 1))
    if backward != forward:
        raise ArithmeticError("index reversal identity violated")
    return backward < prefix[-1]


def ball_cover_check(word: Sequence[int]) -> bool:
    """Ball of radius ``|C_{n+1}(word)|`` around any point of the cylinder.

    Returns True when every such ball lies in the union of the cylinders
    with last digit ``a-1, a, a+1, a+2`` (last digit ``a >= 4``).
    """
    word = check_word(word)
    if not word or word[-1] < 4:
        raise DomainError("need a non-empty word whose last digit is >= 4")
    prefix, a = word[:-1], word[-1]
    c = cylinder(word)
    r = c.diameter
    right = cylinder(prefix + (a - 1,)).hi
    left = cylinder(prefix + (a + 2,)).lo
    # cylinders are left-open; the open ball around x > c.lo reaches above c.lo - r
    return c.hi + r <= right and c.lo - r >= left
