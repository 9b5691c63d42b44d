"""Covering sums, finite-depth dimension exponents and the related inequalities.

Sums over astronomically many digits are kept in the log domain.  When a
digit range is too long to add term by term, it is bracketed with integral
bounds, so most results here are *enclosures* ``(lo, hi)`` rather than
point values.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .constructions import (
    MAX_EXACT_BITS,
    BoundScheme,
    TowerScheme,
    admissible_words,
    level_mass,
    measure_of_fundamental_interval,
    membership,
)
from .core import DomainError, LogValue, check_word, continuants
from .geometry import Interval, _exponent, cylinder, fundamental_interval, k_interval

__all__ = [
    "DIRECT_LIMIT",
    "DegenerateSchemeError",
    "Enclosure",
    "digit_power_sum",
    "covering_sum",
    "covering_sum_rational",
    "covering_exponent",
    "Verdict",
    "ExplicitTree",
    "FundamentalTree",
    "KTree",
    "check_child_sum",
    "check_tree_conditions",
    "ExponentParams",
    "PropCheck",
    "verify_prop_usgjl",
    "BoundsReport",
    "theorem_bounds",
    "ratio_envelopes",
    "trajectory_ratios",
    "local_dimension",
]

DIRECT_LIMIT = 10**6
# relative slack (in log) added to float-evaluated bounds
_SLACK = 1e-9


class DegenerateSchemeError(ValueError):
    """Covering sum does not cross 1 on (0, 1]."""


@dataclass(frozen=True)
class Enclosure:
    lo: float
    hi: float

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}


# -- inner digit sums ---------------------------------------------------------


def _log_int(x: int) -> float:
    return math.log(x)


def _log_power_integral(x: int, y: int, p: float) -> float:
    """``log of integral_x^y t**-p dt`` for ``1 <= x < y``."""
    L = math.log(y / x)
    z = (1.0 - p) * L
    shape = 1.0 if z == 0 else math.expm1(z) / z
    return (1.0 - p) * _log_int(x) + math.log(L) + math.log(shape)


class _LevelSum:
    """``sum_{a=lo}^{hi} (a(a-1))**-s`` for one digit range, reusable across ``s``."""

    def __init__(self, lo: int, hi: int):
        self.lo, self.hi = lo, hi
        self.direct = hi - lo + 1 <= DIRECT_LIMIT
        if self.direct:
            a = np.arange(lo, hi + 1, dtype=np.float64)
            self.logs = np.log(a) + np.log(a - 1.0)
            self.shift = float(self.logs[0])

    def log_bounds(self, s: float) -> tuple[float, float]:
        if self.direct:
            # factor out the largest term for stability
            total = float(np.exp(-s * (self.logs - self.shift)).sum())
            v = -s * self.shift + math.log(total)
            return v, v
        p = 2.0 * s
        A, B = self.lo, self.hi
        # (a(a-1))**-s lies between a**-p and (a-1)**-p
        lower = _log_power_integral(A, B + 1, p)
        upper = float(np.logaddexp(-p * _log_int(A - 1), _log_power_integral(A - 1, B - 1, p)))
        return lower - _SLACK, upper + _SLACK


def digit_power_sum(lo: int, hi: int, s: float) -> Enclosure:
    """Log-domain enclosure of ``sum_{a=lo}^{hi} (a(a-1))**-s``.

    Ranges of at most ``DIRECT_LIMIT`` terms are summed directly (``lo == hi``
    in the result); longer ranges get monotone integral brackets.
    """
    if lo < 2 or hi < lo:
        raise DomainError("need 2 <= lo <= hi")
    return Enclosure(*_LevelSum(lo, hi).log_bounds(s))


class _CoveringSum:
    def __init__(self, scheme: BoundScheme, n: int):
        if n < 1:
            raise DomainError("n must be >= 1")
        self.levels = [_LevelSum(*scheme.digit_range(j)) for j in range(1, n + 1)]
        try:
            s_next = scheme.digit_range(n + 1)[0]
            self.log_tail = math.log(s_next - 1)
        except OverflowError:
            self.log_tail = scheme.log_s(n + 1)

    def log_bounds(self, s: float) -> tuple[float, float]:
        lo = hi = -s * self.log_tail
        for lvl in self.levels:
            a, b = lvl.log_bounds(s)
            lo += a
            hi += b
        return lo, hi


def covering_sum(scheme: BoundScheme, n: int, s: float) -> tuple[LogValue, LogValue]:
    """Enclosure of ``sum over admissible words of |J_n(word)|**s``.

    Uses the factorization
    ``(s_{n+1}-1)**-s * prod_j sum_{a=s_j}^{N s_j - 1} (a(a-1))**-s``;
    the two values coincide when every level is summed directly.
    """
    if s <= 0:
        raise DomainError("s must be positive")
    lo, hi = _CoveringSum(scheme, n).log_bounds(s)
    return LogValue(lo), LogValue(hi)


def covering_sum_rational(scheme: BoundScheme, n: int) -> Fraction:
    """Exact covering sum at ``s = 1``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    total = Fraction(1, scheme.digit_range(n + 1)[0] - 1)
    for j in range(1, n + 1):
        lo, hi = scheme.digit_range(j)
        if hi - lo < 10_000:
            total *= sum(Fraction(1, a * (a - 1)) for a in range(lo, hi + 1))
        else:
            # telescoping: sum 1/(a(a-1)) = 1/(lo-1) - 1/hi
            total *= Fraction(1, lo - 1) - Fraction(1, hi)
    return total


def _bisect(f, lo: float, hi: float, tol: float, max_iter: int) -> tuple[float, float]:
    flo, fhi = f(lo), f(hi)
    if not (flo > 0 > fhi):
        raise DegenerateSchemeError("covering sum does not cross 1 on [0, 1]")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm > 0:
            lo = mid
        elif fm < 0:
            hi = mid
        else:
            return mid, mid
    return lo, hi


def covering_exponent(scheme: BoundScheme, n: int, tol: float = 1e-12,
                      max_iter: int = 200) -> Enclosure:
    """Root ``s*`` of ``covering_sum(scheme, n, s) = 1``, found by bisection.

    The sum is strictly decreasing in ``s``.  With integral-bracketed levels
    the lower and upper sums give two roots; the returned enclosure spans
    both (``lo`` from the lower sum, ``hi`` from the upper one).
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    cs = _CoveringSum(scheme, n)
    lo, _ = _bisect(lambda s: cs.log_bounds(s)[0], 0.0, 1.0, tol, max_iter)
    _, hi = _bisect(lambda s: cs.log_bounds(s)[1], 0.0, 1.0, tol, max_iter)
    return Enclosure(lo, hi)


# -- tree-like families -------------------------------------------------------


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"


class ExplicitTree:
    """Finite tree given by explicit intervals; ``children`` maps node -> nodes."""

    def __init__(self, root, intervals: dict, children: dict):
        self.root = root
        self.intervals = intervals
        self._children = children

    def interval(self, node) -> Interval:
        return self.intervals[node]

    def children(self, node, limit: Optional[int] = None) -> list:
        kids = list(self._children.get(node, ()))
        return kids if limit is None else kids[:limit]

    def diameter_log(self, node) -> float:
        return LogValue.of(self.intervals[node].diameter).log

    def child_sum_log_bounds(self, node, s: float) -> tuple[float, float]:
        terms = [LogValue.of(self.intervals[k].diameter) ** s for k in self.children(node)]
        v = LogValue.sum(terms).log
        return v, v


class FundamentalTree:
    """Fundamental intervals ``J_n`` of a bound scheme; nodes are admissible words."""

    def __init__(self, scheme: BoundScheme):
        self.scheme = scheme
        self.root = ()

    def interval(self, node) -> Interval:
        s_next = self.scheme.digit_range(len(node) + 1)[0]
        return fundamental_interval(node, s_next).interval

    def children(self, node, limit: Optional[int] = None) -> list:
        lo, hi = self.scheme.digit_range(len(node) + 1)
        if limit is not None:
            hi = min(hi, lo + limit - 1)
        return [tuple(node) + (a,) for a in range(lo, hi + 1)]

    def _log_prod(self, node) -> float:
        return -math.fsum(math.log(a) + math.log(a - 1) for a in node)

    def diameter_log(self, node) -> float:
        s_next = self.scheme.digit_range(len(node) + 1)[0]
        return self._log_prod(node) - math.log(s_next - 1)

    def child_sum_log_bounds(self, node, s: float) -> tuple[float, float]:
        n = len(node)
        s_after = self.scheme.digit_range(n + 2)[0]
        base = s * (self._log_prod(node) - math.log(s_after - 1))
        lo, hi = _LevelSum(*self.scheme.digit_range(n + 1)).log_bounds(s)
        return base + lo, base + hi


class KTree:
    """The intervals ``K_n(b)`` built on cylinders ``b`` (any digits >= 2).

    Children of ``b`` are ``b + (c,)`` for every integer ``c >= Q_n(b)**(1/(alpha+eps))``.
    Child sums are a directly evaluated head of ``head`` terms plus an
    integral tail bound, which exists when ``s (2 + 1/(alpha+eps)) > 1``.
    """

    def __init__(self, alpha, eps, root: Sequence[int] = (2,), head: int = 100_000):
        self.alpha, self.eps = alpha, eps
        self.t = _exponent(alpha, eps)
        self.root = check_word(root)
        self.head = head

    def kint(self, node):
        return k_interval(node, self.alpha, self.eps)

    def interval(self, node) -> Interval:
        return self.kint(node).interval

    def children(self, node, limit: Optional[int] = None) -> list:
        cut = self.kint(node).cut
        count = self.head if limit is None else limit
        return [tuple(node) + (c,) for c in range(cut, cut + count)]

    def diameter_log(self, node) -> float:
        return LogValue.of(self.kint(node).diameter).log

    def child_sum_log_bounds(self, node, s: float) -> tuple[float, float]:
        node = check_word(node)
        ki = self.kint(node)
        q = continuants(node)[-1]
        m = ki.cut
        t = float(self.t)
        log_q = math.log(q)
        log_prod = -(log_q + math.log(node[-1] - 1))
        k = np.arange(self.head, dtype=np.float64)
        log_m = math.log(m)
        log_c = log_m + np.log1p(k / m)
        log_c1 = log_m + np.log1p((k - 1.0) / m)
        # R_{n+1}(node c) = (Q_n (b_n - 1) c)**(1/t)
        log_r = (log_q + math.log(node[-1] - 1) + log_c) / t
        log_r1 = log_r + np.log1p(-np.exp(-log_r))
        base = log_prod - log_c - log_c1
        hi_terms = s * (base - log_r1)
        lo_terms = s * (base - log_r)
        head_hi = float(np.logaddexp.reduce(hi_terms))
        head_lo = float(np.logaddexp.reduce(lo_terms))

        p = s * (2.0 + 1.0 / t)
        if p <= 1.0:
            return head_lo - _SLACK, math.inf
        C = m + self.head  # first child outside the head
        log_rn = log_q / t
        r_min = log_rn + math.log(C) / t
        # term <= (prod / (R_n (1 - 1/R_min)))**s * (c-1)**-p, summed by an integral
        coef = s * (log_prod - log_rn - math.log1p(-math.exp(-r_min)))
        tail = coef + (1.0 - p) * math.log(C - 2) - math.log(p - 1.0)
        total_hi = float(np.logaddexp(head_hi, tail))
        return head_lo - _SLACK, total_hi + _SLACK


def check_child_sum(tree, node, s: float) -> Verdict:
    """Decide ``sum_{B child of A} |B|**s <= |A|**s`` at ``node``."""
    rhs = s * tree.diameter_log(node)
    lo, hi = tree.child_sum_log_bounds(node, s)
    if hi <= rhs:
        return Verdict.HOLDS
    if lo > rhs:
        return Verdict.FAILS
    return Verdict.UNDECIDED


def check_tree_conditions(tree, depth: int, limit: int = 8) -> dict[str, bool]:
    """Check the tree-like conditions on the first ``depth`` levels.

    At most ``limit`` children per node are explored.
    """
    levels = [[tree.root]]
    for _ in range(depth):
        levels.append([k for node in levels[-1] for k in tree.children(node, limit)])
    ivs = [[tree.interval(node) for node in lvl] for lvl in levels]

    def disjoint(lvl):
        srt = sorted(lvl, key=lambda iv: iv.lo)
        return all(a.hi < b.lo for a, b in zip(srt, srt[1:]))

    nested = all(
        tree.interval(node).contains_interval(tree.interval(k))
        for lvl in levels[:-1] for node in lvl for k in tree.children(node, limit)
    )
    max_diam = [max(iv.diameter for iv in lvl) for lvl in ivs]
    return {
        "single_root": len(levels[0]) == 1,
        "nonempty_levels": all(levels),
        "positive_diameters": all(iv.diameter > 0 for lvl in ivs for iv in lvl),
        "disjoint_levels": all(disjoint(lvl) for lvl in ivs),
        "nested": nested,
        "children_exist": all(tree.children(node, 1) for lvl in levels[:-1] for node in lvl),
        "shrinking": all(b < a for a, b in zip(max_diam, max_diam[1:])),
    }


# -- child-sum check at the upper-bound exponent ------------------------------


@dataclass(frozen=True)
class ExponentParams:
    alpha: float
    eps: float
    delta1: float

    def __post_init__(self):
        if self.alpha <= 0 or self.eps <= 0:
            raise DomainError("alpha and eps must be positive")
        if not 0 < self.delta1 < 1.0 / (2.0 + 1.0 / self.t):
            raise DomainError("need 0 < delta1 < 1/(2 + 1/(alpha+eps))")

    @property
    def t(self) -> float:
        return self.alpha + self.eps

    @property
    def s(self) -> float:
        return self.t / (2 * self.t + 1) + self.delta1

    @property
    def delta(self) -> float:
        return self.delta1 * (2 + 1 / self.t)

    @property
    def n_threshold(self) -> int:
        d = self.delta
        return math.ceil(max(self.t, (self.t / d) * math.log2(8 / d)))


@dataclass(frozen=True)
class PropCheck:
    word: tuple[int, ...]
    depth: int
    in_hypothesis: bool
    lhs_log: Optional[Enclosure] = None
    rhs_log: Optional[float] = None
    verdict: Optional[Verdict] = None

    @property
    def margin(self) -> Optional[float]:
        """``log RHS - log(upper bound of LHS)``; positive means the inequality holds."""
        if self.rhs_log is None:
            return None
        return self.rhs_log - self.lhs_log.hi

    def to_dict(self) -> dict:
        return {
            "word_length": self.depth,
            "in_hypothesis": self.in_hypothesis,
            "lhs_log": None if self.lhs_log is None else self.lhs_log.to_dict(),
            "rhs_log": self.rhs_log,
            "margin": self.margin,
            "verdict": None if self.verdict is None else self.verdict.value,
        }


def verify_prop_usgjl(params: ExponentParams, sample_words: Iterable[Sequence[int]],
                      head: int = 100_000) -> list[PropCheck]:
    """Check ``sum_{c >= R_n(b)} |K_{n+1}(bc)|**s <= |K_n(b)|**s`` on sample words.

    Words shorter than the depth threshold are reported as
    outside the hypothesis and not evaluated.
    """
    tree = KTree(params.alpha, params.eps, head=head)
    out = []
    for w in sample_words:
        w = check_word(w)
        if len(w) < params.n_threshold:
            out.append(PropCheck(w, len(w), False))
            continue
        lo, hi = tree.child_sum_log_bounds(w, params.s)
        rhs = params.s * tree.diameter_log(w)
        verdict = check_child_sum(tree, w, params.s)
        out.append(PropCheck(w, len(w), True, Enclosure(lo, hi), rhs, verdict))
    return out


# -- closed forms ---------------------------------------------------------------


@dataclass(frozen=True)
class BoundsReport:
    beta: float
    lower: float
    upper: float
    alpha: float
    lam: float

    def to_dict(self) -> dict:
        return {"beta": self.beta, "lower": self.lower, "upper": self.upper,
                "alpha": self.alpha, "lambda": self.lam}


def _lambda_minus_one(alpha: float) -> float:
    # (1 - alpha + sqrt(alpha^2 + 6 alpha + 1)) / (2 alpha) without cancellation
    root = math.sqrt(alpha * alpha + 6 * alpha + 1)
    if alpha > 1:
        num = 1 + (6 * alpha + 1) / (root + alpha)
    else:
        num = 1 - alpha + root
    return num / (2 * alpha)


def theorem_bounds(beta: float) -> BoundsReport:
    """Lower ``2/(3+b+sqrt(b^2+6b+1))`` and upper ``1/(2+b)`` dimension bounds.

    Also returns ``alpha = 1/beta`` and the tower rate ``lam`` with
    ``alpha = (lam+1)/(lam(lam-1))``; both consistency relations are checked
    to 1e-12.
    """
    if not beta > 0:
        raise DomainError("beta must be positive")
    lower = 2.0 / (3.0 + beta + math.sqrt(beta * beta + 6 * beta + 1))
    upper = 1.0 / (2.0 + beta)
    alpha = 1.0 / beta
    lm1 = _lambda_minus_one(alpha)
    lam = 1.0 + lm1
    if not math.isclose(1.0 / (2.0 + lm1), lower, rel_tol=1e-12, abs_tol=1e-12):
        raise ArithmeticError("lower bound disagrees with 1/(1+lambda)")
    if not math.isclose((lam + 1) / (lam * lm1), alpha, rel_tol=1e-12):
        raise ArithmeticError("lambda does not solve alpha = (lambda+1)/(lambda(lambda-1))")
    if lower > upper:
        raise ArithmeticError("lower bound exceeds upper bound")
    return BoundsReport(beta, lower, upper, alpha, lam)


def ratio_envelopes(n: int, c: int, d: int, lam: float) -> tuple[float, float]:
    """Finite-n bounds ``(lower, upper)`` on ``log Q_n / log a_{n+1}`` over the tower set."""
    if c < 2 or d < 2 or not lam > 1 or n < 1:
        raise DomainError("need c, d >= 2, lam > 1, n >= 1")
    lam = float(lam)
    scale = lam**n * math.log(c)
    ld = math.log(d) / scale
    geo = 2.0 / (lam - 1.0) * (1.0 - lam ** (-(n - 1)))
    upper = (1.0 + ld + 2 * (n - 1) * ld + geo) / lam
    lower = (1.0 + geo - (n - 1) * math.log(2) / scale) / (lam + ld)
    return lower, upper


def trajectory_ratios(word: Sequence[int]) -> list[float]:
    """``log Q_n / log a_{n+1}`` for ``n = 1 .. len(word) - 1``."""
    word = check_word(word)
    out = []
    log_q = math.log(word[0])
    for n in range(1, len(word)):
        out.append(log_q / math.log(word[n]))
        log_q += math.log(word[n - 1] - 1) + math.log(word[n])
    return out


def local_dimension(scheme: BoundScheme, word: Sequence[int]) -> float:
    """``log mu(J_n(word)) / log |J_n(word)|`` computed in the log domain."""
    word = check_word(word)
    if not word:
        raise DomainError("word must be non-empty")
    if not membership(word, scheme):
        raise DomainError(f"{word} is not admissible")
    n = len(word)
    log_mu = math.fsum(math.log(level_mass(scheme, j)) for j in range(1, n + 1))
    try:
        log_tail = math.log(scheme.digit_range(n + 1)[0] - 1)
    except OverflowError:
        log_tail = scheme.log_s(n + 1)
    log_diam = -math.fsum(math.log(a) + math.log(a - 1) for a in word) - log_tail
    return log_mu / log_diam
