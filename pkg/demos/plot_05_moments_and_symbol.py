"""
Moments and the Fourier symbol
==============================

D_m annihilates every monomial of degree below 4m except x^2m, which it maps
to (2m)!.  Its symbol is a ratio of a sine power and a cosine polynomial.
"""

from discrete_analogue import check_moments, check_symbols
from discrete_analogue.verify import symbol_closed_form

report = check_moments(3, 1)
for c in report.checks:
    print(c.name, c.parameters["k"], f"{c.residual:.1e}")

print("passed:", check_symbols(3, 1, n=5, seed=1).passed)

# At the Nyquist frequency the m = 2 symbol equals 48
print(float(symbol_closed_form(2, 1, 0.5)))
