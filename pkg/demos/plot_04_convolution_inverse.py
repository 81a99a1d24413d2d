"""
Inverse of the fundamental solution
===================================

G_m[beta] = |h beta|^(2m-1) / (2 (2m-1)!) is a fundamental solution of
d^2m/dx^2m.  Its discrete convolution with D_m, times h, is the Kronecker
delta.  The infinite sum is truncated where a rigorous tail bound says so.
"""

from discrete_analogue import build, convolve_dg

for m in (1, 2, 4, 6):
    op = build(m, 0.5)
    residual = max(abs(convolve_dg(op, b) - (b == 0)) for b in range(-10, 11))
    print(f"m={m}: max |h D*G - delta| over |beta|<=10 = {float(residual):.2e}")
