"""Whitelisted real inputs with rational enclosures at any precision.

Accepted forms (whitespace ignored)::

    p/q   0.3   sqrt(k)-m   sqrtk-m   (sqrt(k)-m)/q   phi-1   e-m

Each parsed value exposes ``enclose(bits) -> (lo, hi)`` with Fraction
endpoints satisfying ``lo <= x <= hi`` and ``hi - lo <= 2**-bits``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["RationalReal", "SurdReal", "EReal", "parse_real"]


@dataclass(frozen=True)
class RationalReal:
    value: Fraction

    def enclose(self, bits: int) -> tuple[Fraction, Fraction]:
        return self.value, self.value

    @property
    def is_rational(self) -> bool:
        return True

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class SurdReal:
    """``(sqrt(k) - m) / q`` with ``q > 0``."""

    k: int
    m: int
    q: int = 1

    def enclose(self, bits: int) -> tuple[Fraction, Fraction]:
        r = math.isqrt(self.k << (2 * bits))
        scale = 1 << bits
        if r * r == self.k << (2 * bits):
            lo = hi = Fraction(r, scale)
        else:
            lo, hi = Fraction(r, scale), Fraction(r + 1, scale)
        return (lo - self.m) / self.q, (hi - self.m) / self.q

    @property
    def is_rational(self) -> bool:
        return math.isqrt(self.k) ** 2 == self.k

    def __float__(self) -> float:
        return (math.sqrt(self.k) - self.m) / self.q


@dataclass(frozen=True)
class EReal:
    """``e - m``."""

    m: int

    def enclose(self, bits: int) -> tuple[Fraction, Fraction]:
        total, term, j = Fraction(1), Fraction(1), 0
        eps = Fraction(1, 1 << bits)
        while True:
            j += 1
            term /= j
            total += term
            # remaining tail is below term / j
            if term / j < eps:
                return total - self.m, total + term / j - self.m

    @property
    def is_rational(self) -> bool:
        return False

    def __float__(self) -> float:
        return math.e - self.m


_SURD = re.compile(r"^\(?sqrt\(?(\d+)\)?-(\d+)\)?(?:/(\d+))?$")
_E = re.compile(r"^e-(\d+)$")
_DECIMAL = re.compile(r"^\d*\.\d+$|^\d+$")
_RATIO = re.compile(r"^\d+/\d+$")


def parse_real(text: str):
    """Parse one of the whitelisted expressions; raises ``ValueError`` otherwise."""
    s = text.replace(" ", "").lower()
    if s in ("phi-1", "golden-1"):
        return SurdReal(5, 1, 2)
    if _RATIO.match(s) or _DECIMAL.match(s):
        try:
            return RationalReal(Fraction(s))
        except ZeroDivisionError as exc:
            raise ValueError("zero denominator") from exc
    m = _SURD.match(s)
    if m:
        k, sub, q = int(m.group(1)), int(m.group(2)), int(m.group(3) or 1)
        if q == 0:
            raise ValueError("zero denominator")
        if s.startswith("(") != (m.group(3) is not None):
            raise ValueError(f"unbalanced expression {text!r}")
        return SurdReal(k, sub, q)
    m = _E.match(s)
    if m:
        return EReal(int(m.group(1)))
    raise ValueError(f"unsupported real expression {text!r}")
