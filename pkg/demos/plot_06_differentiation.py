"""
Differentiating sampled data
============================

Applied to samples of sin(x), D_2 approximates the fourth derivative, which
is sin(x) again.  Halving the step cuts the error by about 2^4 = 16.
"""

import numpy as np

from discrete_analogue import DiscreteFunction, apply, build

errors = []
for h in (0.8, 0.4, 0.2):
    f = DiscreteFunction.sample(np.sin, h, -round(20 / h), round(20 / h))
    out = apply(build(2, h), f)
    err = np.max(np.abs(out.values - np.sin(out.indices * h)))
    errors.append(float(err))
    print(f"h={h}: max error {err:.3e} on {len(out)} interior points")

print("ratios:", [round(a / b, 2) for a, b in zip(errors, errors[1:])])
