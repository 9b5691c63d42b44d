"""Experiment drivers behind the command-line tool.

Every driver returns a :class:`Table`: a fixed list of column names, rows as
dicts, and a ``meta`` dict for run-level facts (parameters, final precision,
notes).  Rendering to CSV or JSON happens in :mod:`luroth.cli`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .constructions import (
    BoundScheme,
    ProductMeasureSpec,
    TowerScheme,
    sample_words,
    s0,
    tower_ratio_closed_form,
)
from .core import (
    DomainError,
    convergent_pairs,
    expand_rational,
    expand_real,
    fraction_to_str,
)
from .dimension import covering_exponent, ratio_envelopes, trajectory_ratios
from .reals import RationalReal, parse_real

__all__ = [
    "Table",
    "run_expand",
    "run_trajectory",
    "run_dimension",
    "frequency_samples",
    "run_frequency",
    "cf_expansion",
    "run_cf_compare",
]


@dataclass
class Table:
    command: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    ok: bool = True


def _num(x) -> str | float | int | None:
    if isinstance(x, Fraction):
        return fraction_to_str(x)
    return x


# -- expand -------------------------------------------------------------------


def run_expand(text: str, depth: int, precision_bits: int = 256) -> Table:
    """Digits, continuants, convergents and residuals of a whitelisted real."""
    if depth < 1:
        raise DomainError("depth must be >= 1")
    x = parse_real(text)
    table = Table("expand", ["n", "digit", "continuant", "convergent", "residual"])
    if isinstance(x, RationalReal):
        value = x.value
        pe = expand_rational(value)
        word = pe.digits(depth)
        table.meta.update(exact=True, expansion=pe.to_dict(), value=fraction_to_str(value))
        residual = lambda p, q: value - Fraction(p, q)  # noqa: E731
        certified = depth
    else:
        exp = expand_real(x, depth, precision_bits)
        word = exp.digits
        certified = exp.certified_length
        lo, hi = x.enclose(precision_bits)
        mid = (lo + hi) / 2
        residual = lambda p, q: float(mid - Fraction(p, q))  # noqa: E731
        table.meta.update(exact=False, value=float(mid))
        if not exp.complete:
            table.meta["note"] = (f"precision exhausted: only {certified} of {depth} "
                                  f"digits certified at {precision_bits} bits")
    table.meta.update(input=text, depth=depth, precision_bits=precision_bits,
                      certified_length=certified)
    for n, ((p, q), a) in enumerate(zip(convergent_pairs(word), word), start=1):
        r = residual(p, q)
        table.rows.append({
            "n": n,
            "digit": a,
            "continuant": q,
            "convergent": fraction_to_str(Fraction(p, q)),
            "residual": _num(r),
        })
    return table


# -- trajectory -----------------------------------------------------------------


def run_trajectory(scheme: TowerScheme, depth: int, samples: int, seed: int) -> Table:
    """``log Q_n / log a_{n+1}`` along sampled points of a tower set, with envelopes."""
    if not isinstance(scheme, TowerScheme):
        raise DomainError("trajectory needs a tower scheme")
    if depth < 1 or samples < 1:
        raise DomainError("depth and samples must be >= 1")
    lam = float(scheme.lam)
    target = (lam + 1) / (lam * (lam - 1))
    env = [ratio_envelopes(n, scheme.c, scheme.d, lam) for n in range(1, depth + 1)]
    words = sample_words(ProductMeasureSpec(scheme), depth + 1, samples, seed)
    table = Table("trajectory", ["sample", "n", "ratio", "lower", "upper", "target"])
    inside = True
    for i, w in enumerate(words):
        for n, ratio in enumerate(trajectory_ratios(w), start=1):
            lo, hi = env[n - 1]
            inside &= lo <= ratio <= hi
            table.rows.append({"sample": i, "n": n, "ratio": ratio,
                               "lower": lo, "upper": hi, "target": target})
    table.ok = inside
    table.meta.update(scheme=scheme.to_dict(), depth=depth, samples=samples, seed=seed,
                      target=target, within_envelopes=inside)
    return table


# -- dimension ------------------------------------------------------------------


def run_dimension(scheme: BoundScheme, max_depth: int, tol: float = 1e-12) -> Table:
    """Covering exponents per depth beside the ``s0`` ratio sequence."""
    if max_depth < 1:
        raise DomainError("depth must be >= 1")
    tower = isinstance(scheme, TowerScheme)
    est = s0(scheme, max_depth)
    table = Table("dimension", ["n", "exponent_lo", "exponent_hi", "s0_ratio",
                                "closed_form", "limit", "trend"])
    prev = None
    trend = []
    for n in range(1, max_depth + 1):
        enc = covering_exponent(scheme, n, tol)
        step = ""
        if prev is not None:
            step = "up" if enc.mid > prev else "down" if enc.mid < prev else "flat"
            trend.append(step)
        prev = enc.mid
        table.rows.append({
            "n": n,
            "exponent_lo": enc.lo,
            "exponent_hi": enc.hi,
            "s0_ratio": est.ratios[n - 1],
            "closed_form": tower_ratio_closed_form(float(scheme.lam), n) if tower else None,
            "limit": scheme.limit_exponent() if tower else None,
            "trend": step,
        })
    monotone = len(set(trend)) <= 1
    table.meta.update(scheme=scheme.to_dict(), depth=max_depth, tol=tol, monotone=monotone,
                      s0_estimate=est.estimate, s0_window=list(est.window))
    if tower:
        table.meta["limit"] = scheme.limit_exponent()
    return table


# -- frequency ------------------------------------------------------------------


def _digit_of_interval(lo: int, hi: int, den: int) -> Optional[int]:
    """Common first digit of all points in ``(lo/den, hi/den]``, or None."""
    if lo == 0:
        return None
    top = den // hi + 1  # digit of the right endpoint
    bottom = -(-den // lo)  # digit of points just above the left endpoint
    return top if top == bottom else None


def frequency_samples(samples: int, depth: int, seed: int, precision_bits: int = 256):
    """Digit counts of ``samples`` Lebesgue-uniform points, ``depth`` digits each.

    Each point starts as a random dyadic cell of width ``2**-precision_bits``.
    The cell is pushed through the Lüroth map exactly; whenever it straddles a
    digit boundary, more random bits are appended, which keeps the point
    uniform.  Returns ``(counts, max_bits)`` with ``counts[k]`` the number of
    positions carrying digit ``k`` (digits above 12 are pooled at index 0).
    """
    rng = np.random.default_rng(seed)
    counts = np.zeros(13, dtype=np.int64)
    max_bits = precision_bits
    nbytes = (precision_bits + 7) // 8

    def bits(b):
        return int.from_bytes(rng.bytes((b + 7) // 8), "little") & ((1 << b) - 1)

    for _ in range(samples):
        den_bits = 8 * nbytes
        den = 1 << den_bits
        lo = bits(den_bits)
        hi = lo + 1
        for _ in range(depth):
            a = _digit_of_interval(lo, hi, den)
            while a is None:
                extra = 64
                width = hi - lo
                lo = (lo << extra) + bits(extra) * width
                hi = lo + width
                den <<= extra
                den_bits += extra
                a = _digit_of_interval(lo, hi, den)
            counts[a if a <= 12 else 0] += 1
            # L(x) = a(a-1)x - (a-1) on the cell of digit a
            m = a * (a - 1)
            lo, hi = m * lo - (a - 1) * den, m * hi - (a - 1) * den
        max_bits = max(max_bits, den_bits)
    return counts, max_bits


def run_frequency(samples: int, depth: int, seed: int, precision_bits: int = 256) -> Table:
    """Empirical digit frequencies against ``1/(k(k-1))`` with 3-sigma bands."""
    if samples < 1000:
        raise DomainError("frequency needs at least 1000 samples")
    if depth < 1:
        raise DomainError("depth must be >= 1")
    counts, max_bits = frequency_samples(samples, depth, seed, precision_bits)
    total = samples * depth
    table = Table("frequency", ["k", "count", "frequency", "expected", "sigma", "z", "within_3sigma"])
    for k in range(2, 13):
        p = 1.0 / (k * (k - 1))
        sigma = math.sqrt(p * (1 - p) / total)
        freq = counts[k] / total
        z = (freq - p) / sigma
        ok = bool(abs(z) <= 3.0)
        table.ok &= ok
        table.rows.append({"k": k, "count": int(counts[k]), "frequency": float(freq),
                           "expected": p, "sigma": sigma, "z": float(z), "within_3sigma": bool(ok)})
    table.meta.update(samples=samples, depth=depth, seed=seed, precision_bits=precision_bits,
                      final_precision_bits=max_bits, positions=total)
    return table


# -- continued fractions ----------------------------------------------------------


@dataclass(frozen=True)
class CFExpansion:
    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    terminated: bool = False


def _cf_quotients(x: Fraction, depth: int) -> tuple[list[int], bool]:
    out = []
    while len(out) < depth:
        a = x.numerator // x.denominator
        out.append(a)
        frac = x - a
        if frac == 0:
            return out, True
        x = 1 / frac
    return out, False


def cf_expansion(x, depth: int, precision_bits: int = 256) -> CFExpansion:
    """Certified regular continued fraction of a value with ``enclose(bits)``.

    Quotients are kept while both ends of the enclosure agree.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    lo, hi = x.enclose(precision_bits)
    ql, tl = _cf_quotients(lo, depth)
    if lo == hi:
        quotients, terminated = ql, tl
    else:
        qh, _ = _cf_quotients(hi, depth)
        quotients = []
        for a, b in zip(ql, qh):
            if a != b:
                break
            quotients.append(a)
        # CF cylinders are intervals, so quotients shared by both ends hold for x
        terminated = False
    conv = []
    p0, q0, p1, q1 = 1, 0, quotients[0], 1
    conv.append((p1, q1))
    for a in quotients[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        conv.append((p1, q1))
    return CFExpansion(tuple(quotients), tuple(conv), terminated)


def run_cf_compare(text: str, depth: int, cf_depth: int | None = None,
                   precision_bits: int = 256) -> Table:
    """Side-by-side approximation quality of Lüroth and continued-fraction convergents.

    For each Lüroth row checks ``|Q_n x - P_n| < 1/(a_n - 1)``; for each CF row
    ``|q_n x - p_n| < 1/q_n``.  Margins are computed from the enclosure of
    ``x`` so a positive margin certifies the strict inequality.
    """
    x = parse_real(text)
    cf_depth = 2 * depth if cf_depth is None else cf_depth
    lo, hi = x.enclose(precision_bits)
    table = Table("cf-compare", ["system", "n", "digit", "denominator", "error", "bound", "margin", "holds"])

    def worst(q, p):
        return max(abs(q * lo - p), abs(q * hi - p))

    lur = expand_real(x, depth, precision_bits)
    for n, ((p, q), a) in enumerate(zip(convergent_pairs(lur.digits), lur.digits), start=1):
        err = worst(q, p)
        bound = Fraction(1, a - 1)
        # a rational orbit reaches 1, where only the non-strict bound is available
        ok = err < bound or (lo == hi and err == bound)
        table.ok &= ok
        table.rows.append({"system": "luroth", "n": n, "digit": a, "denominator": q,
                           "error": float(err), "bound": float(bound),
                           "margin": float(bound - err), "holds": ok})
    cf = cf_expansion(x, cf_depth + 1, precision_bits)
    # row n uses the convergent p_n/q_n with n counted from a_0
    for n, ((p, q), a) in enumerate(zip(cf.convergents, cf.partial_quotients)):
        if n == 0 or n > cf_depth:
            continue
        err = worst(q, p)
        bound = Fraction(1, q)
        ok = err < bound
        table.ok &= ok
        table.rows.append({"system": "cf", "n": n, "digit": a, "denominator": q,
                           "error": float(err), "bound": float(bound),
                           "margin": float(bound - err), "holds": ok})
    table.meta.update(input=text, depth=depth, cf_depth=cf_depth, precision_bits=precision_bits,
                      luroth_certified=lur.certified_length,
                      cf_certified=len(cf.partial_quotients) - 1)
    if lo == hi:
        table.meta["note"] = ("rational input: the continued fraction terminates and the "
                              "Lüroth bound is checked in its non-strict form")
    return table
