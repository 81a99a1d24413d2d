"""Discrete analogue D_m[beta] of the differential operator d^(2m)/dx^(2m).

Quick start::

    >>> from discrete_analogue import build
    >>> op = build(2, h=1)
    >>> round(float(op.value(0)), 10)
    14.3538290725
"""

from .errors import (
    ConvergenceFailure,
    DiscreteAnalogueError,
    NonConvergent,
    StructureViolation,
    WindowTooSmall,
)
from .eulerpoly import (
    EulerPolynomial,
    coeffs_by_recurrence,
    coeffs_explicit,
    euler_polynomial,
    evaluate,
    evaluate_derivative,
)
from .operators import (
    DiscreteFunction,
    DiscreteOperator,
    Stencil,
    apply,
    build,
    convolve_dg,
    g_value,
    stencil,
    value_via_property1,
)
from .rootfind import RootSet, isolate_inner_roots, refine_root
from .verify import (
    BernoulliNumber,
    Tolerances,
    VerificationReport,
    bernoulli,
    check_amplitudes,
    check_inverse,
    check_moments,
    check_representations,
    check_roots,
    check_symbol,
    check_symbols,
    run_suite,
)

__version__ = "0.1.0"
