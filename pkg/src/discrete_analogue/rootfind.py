"""Isolation and refinement of the inner roots of E_{2m-2}.

The roots of E_k are simple negative reals, and they come in reciprocal
pairs (E_k is palindromic).  For even k = 2m - 2 none of them equals -1, so
exactly m - 1 lie in (-1, 0).  Finding m - 1 sign changes in that interval
therefore *certifies* the isolation: every bracket holds at least one root,
the reciprocal brackets hold their partners, and the degree leaves no room
for more.

Sign changes are detected with exact rational arithmetic on the integer
coefficients, so the scan itself is free of rounding.  The probes are spaced
uniformly in log|x| because small-m roots cluster geometrically towards 0
(the root nearest 0 of E_38 is about -1.8e-12).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import ConvergenceFailure, StructureViolation
from .eulerpoly import EulerPolynomial, evaluate, evaluate_derivative

__all__ = [
    "RootSet",
    "isolate_inner_roots",
    "refine_root",
    "relative_residual",
    "error_bound",
    "exact_sign",
]

DEFAULT_PRECISION = 128
DEFAULT_ROOT_TOLERANCE = 1e-30
MAX_SCAN_PROBES = 1 << 14


@dataclass(frozen=True)
class RootSet:
    """The m - 1 roots of E_{2m-2} in (-1, 0), ascending.

    ``residuals`` holds the relative residual (see :func:`relative_residual`)
    of each root and ``error_bounds`` an a-posteriori bound on its absolute
    error.  Outer roots are never stored; they are ``1 / root``.
    """

    m: int
    roots: tuple
    precision: int
    residuals: tuple
    error_bounds: tuple = ()

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def outer_roots(self) -> tuple:
        with mp.workprec(self.precision):
            return tuple(1 / r for r in self.roots)

    def reciprocal_residuals(self, poly: EulerPolynomial) -> tuple:
        """Relative residual of E at each paired outer root ``1/root``."""
        return tuple(relative_residual(poly, x, self.precision) for x in self.outer_roots)

    @property
    def magnitude(self):
        """Largest |root|: the geometric decay rate of the operator tail."""
        return max((abs(r) for r in self.roots), default=mpmath.mpf(0))


def exact_sign(poly: EulerPolynomial, x: Fraction) -> int:
    """Sign of ``poly(x)`` for rational ``x``, computed exactly."""
    p, q = x.numerator, x.denominator
    # q^k * poly(p/q) by homogeneous Horner; q > 0 so the sign is unchanged
    total = 0
    q_power = 1
    for a in reversed(poly.coeffs):
        total = total * p + a * q_power
        q_power *= q
    return (total > 0) - (total < 0)


def relative_residual(poly: EulerPolynomial, x, precision: int = DEFAULT_PRECISION):
    """``|E(x)| / sum_s |a_s| |x|^s``: residual measured against evaluation scale."""
    with mp.workprec(precision):
        x = mpmath.mpf(x)
        scale = evaluate(poly, abs(x), precision)
        return abs(evaluate(poly, x, precision)) / scale


def error_bound(poly: EulerPolynomial, x, precision: int = DEFAULT_PRECISION):
    """First-order bound on |x - root| for a simple root near ``x``.

    Horner's rounding error is at most ``2k u E(|x|)`` (u the unit roundoff),
    so any point where the computed value vanishes lies within that divided
    by |E'(x)| of the true root, plus whatever residual is left.
    """
    with mp.workprec(precision + 16):
        x = mpmath.mpf(x)
        u = mpmath.mpf(2) ** -precision
        slack = 2 * max(poly.degree, 1) * u * evaluate(poly, abs(x), precision + 16) \
            + abs(evaluate(poly, x, precision + 16))
        slope = abs(evaluate_derivative(poly, x, precision + 16))
        return 2 * slack / slope


def _scan_brackets(poly: EulerPolynomial, expected: int) -> list[tuple[Fraction, Fraction]]:
    # Cauchy's bound on the reversed polynomial: every root has |x| > 1/(1 + max a_s)
    floor = 1.0 / (1.0 + max(poly.coeffs))
    log_lo = math.log(floor) - 1.0
    n = 4 * max(poly.degree, 1)
    while n <= MAX_SCAN_PROBES:
        probes = [Fraction(-1)]
        probes += [Fraction(-math.exp(log_lo * (i / n))) for i in range(n - 1, 0, -1)]
        probes.append(Fraction(-math.exp(log_lo)))
        # ascending from -1 towards 0
        probes.sort()
        signs = [exact_sign(poly, p) for p in probes]
        brackets = [
            (probes[i], probes[i + 1])
            for i in range(len(probes) - 1)
            if signs[i] * signs[i + 1] < 0
        ]
        if signs[0] == 0:
            raise StructureViolation("polynomial vanishes at -1; not an even-degree E_k")
        if any(s == 0 for s in signs):
            # a probe hit a root exactly; shift the grid
            n += 1
            continue
        if len(brackets) > expected:
            raise StructureViolation(
                f"found {len(brackets)} sign changes in (-1, 0), expected {expected}"
            )
        if len(brackets) == expected:
            return brackets
        n *= 2
    raise StructureViolation(
        f"could not isolate {expected} roots in (-1, 0) with {MAX_SCAN_PROBES} probes"
    )


def refine_root(
    poly: EulerPolynomial,
    bracket,
    precision: int = DEFAULT_PRECISION,
    root_tolerance: float = DEFAULT_ROOT_TOLERANCE,
    max_iter: int | None = None,
):
    """Refine the single root of ``poly`` inside ``bracket = (lo, hi)``.

    Newton steps are taken while they land inside the current bracket and at
    least halve it every two iterations; otherwise the bracket is bisected.
    The bracket is updated from the sign at every iterate, so the root is
    never lost.
    """
    with mp.workprec(precision):
        lo, hi = sorted(_to_mpf(b) for b in bracket)
        f_lo = evaluate(poly, lo, precision)
        f_hi = evaluate(poly, hi, precision)
        if f_lo == 0:
            return _checked(poly, lo, precision, root_tolerance)
        if f_hi == 0:
            return _checked(poly, hi, precision, root_tolerance)
        if (f_lo > 0) == (f_hi > 0):
            raise ValueError("bracket does not contain a sign change")
        lo_positive = f_lo > 0
        dcoeffs = poly.derivative_coeffs()
        eps = mpmath.mpf(2) ** (8 - precision)
        budget = max_iter if max_iter is not None else 4 * precision + 100

        x = (lo + hi) / 2
        prev_width = hi - lo
        for it in range(budget):
            fx = _horner_mp(poly.coeffs, x)
            if fx == 0:
                break
            if (fx > 0) == lo_positive:
                lo = x
            else:
                hi = x
            dfx = _horner_mp(dcoeffs, x)
            candidate = x - fx / dfx if dfx != 0 else None
            stalled = it % 2 == 1 and hi - lo > prev_width / 2
            if it % 2 == 1:
                prev_width = hi - lo
            if candidate is not None and lo < candidate < hi and not stalled:
                converged = abs(candidate - x) <= eps * abs(candidate)
                x = candidate
                if converged:
                    break
            else:
                x = (lo + hi) / 2
                if hi - lo <= eps * abs(x):
                    break
        else:
            raise ConvergenceFailure(
                f"no convergence in {budget} iterations at {precision} bits"
            )
        return _checked(poly, x, precision, root_tolerance)


def _to_mpf(b):
    if isinstance(b, Fraction):
        return mpmath.mpf(b.numerator) / b.denominator
    return mpmath.mpf(b)


def _horner_mp(coeffs, x):
    acc = mpmath.mpf(0)
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def _checked(poly, x, precision, root_tolerance):
    res = relative_residual(poly, x, precision)
    if res > root_tolerance:
        raise ConvergenceFailure(
            f"root {mpmath.nstr(x, 15)} has relative residual "
            f"{mpmath.nstr(res, 5)} > {root_tolerance} at {precision} bits"
        )
    return x


def isolate_inner_roots(
    poly: EulerPolynomial,
    precision: int = DEFAULT_PRECISION,
    root_tolerance: float = DEFAULT_ROOT_TOLERANCE,
) -> RootSet:
    """All roots of ``poly = E_{2m-2}`` inside (-1, 0), ascending."""
    if poly.degree % 2:
        raise StructureViolation(f"expected an even-degree E_(2m-2), got degree {poly.degree}")
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    m = poly.degree // 2 + 1
    if m == 1:
        return RootSet(1, (), precision, (), ())
    brackets = _scan_brackets(poly, m - 1)
    roots = tuple(refine_root(poly, b, precision, root_tolerance) for b in brackets)
    residuals = tuple(relative_residual(poly, r, precision) for r in roots)
    bounds = tuple(error_bound(poly, r, precision) for r in roots)
    return RootSet(m, roots, precision, residuals, bounds)
