"""
Certified roots of E_{2m-2}
===========================

The roots are simple negative reals in reciprocal pairs, so exactly
m - 1 live in (-1, 0).  A scan with exact rational signs proves each bracket
holds one root; Newton steps then polish them at 128 bits.
"""

import mpmath

from discrete_analogue import euler_polynomial, isolate_inner_roots

for m in (2, 3, 6, 12, 20):
    roots = isolate_inner_roots(euler_polynomial(2 * m - 2))
    worst = max(roots.residuals)
    print(f"m={m:2d}  roots={len(roots):2d}  nearest -1: {mpmath.nstr(roots.roots[0], 12):>16}"
          f"  nearest 0: {mpmath.nstr(roots.roots[-1], 6):>12}  worst residual {mpmath.nstr(worst, 3)}")

# For m = 2 the single root is sqrt(3) - 2
with mpmath.workprec(128):
    print(isolate_inner_roots(euler_polynomial(2)).roots[0] - (mpmath.sqrt(3) - 2))
