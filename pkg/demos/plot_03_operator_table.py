"""
The discrete operator D_m
=========================

D_m[beta] is symmetric and decays geometrically at the rate of the largest
inner root.  For m = 1 it is the familiar (1, -2, 1) / h^2 stencil.
"""

import mpmath

from discrete_analogue import build

op = build(1, 1)
print("m=1:", [int(op.value(b)) for b in range(-2, 3)])

op = build(2, 1)
for beta, value in op.table_rows(6):
    print(f"{beta:3d}  {mpmath.nstr(value, 15)}")

# The decay rate is |sqrt(3) - 2|
print("decay", mpmath.nstr(op.decay, 12), "ratio", mpmath.nstr(op.value(6) / op.value(5), 12))

# Halving h multiplies every entry by 2^(2m)
print("h=1/2 over h=1:", mpmath.nstr(build(2, 0.5).value(0) / op.value(0), 12))
