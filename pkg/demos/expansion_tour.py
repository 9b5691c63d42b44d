"""
A tour of Lüroth expansions
===========================

Digits, convergents and residuals for rationals and a few irrationals.
"""
from fractions import Fraction

from luroth import (
    continuants,
    convergents,
    evaluate_periodic,
    expand_rational,
    expand_real,
    residual,
)
from luroth.reals import parse_real

# rationals have eventually periodic expansions
for x in (Fraction(1, 2), Fraction(2, 3), Fraction(5, 17)):
    pe = expand_rational(x)
    print(f"{x}: preperiod {pe.preperiod}, period {pe.period}, back to {evaluate_periodic(pe)}")

# the residual shrinks with the continuant
x = Fraction(5, 17)
word = expand_rational(x).digits(6)
for q, c in zip(continuants(word), convergents(word)):
    print(f"Q={q:>8}  convergent={str(c):>14}")
print("residual after 6 digits:", residual(x, word))

# irrationals go through certified rational enclosures
for text in ("sqrt2-1", "phi-1", "e-2"):
    exp = expand_real(parse_real(text), 8, precision_bits=512)
    print(f"{text:>8}: {exp.digits}  (certified {exp.certified_length} of {exp.requested})")
