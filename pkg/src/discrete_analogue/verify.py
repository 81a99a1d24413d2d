"""Numerical checks of the identities satisfied by D_m.

Every check returns a :class:`VerificationReport`: one :class:`Check` per
identity instance, each with its residual and the tolerance it was held to.
Identities with a zero right-hand side use absolute tolerances (scaled by
the natural magnitude of the quantity when h != 1); the others are relative.

The moment sums ``S_k = sum_beta D_m[beta] (h beta)^k`` are the delicate
part.  For k near 4m they are tiny differences of terms as large as ~1e37
(m = 6), so :func:`check_moments` raises the working precision until the
rounding error sits well below the tolerance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Any

import mpmath
from mpmath import mp

from .eulerpoly import coeffs_explicit, euler_polynomial
from .operators import (
    DEFAULT_TAIL_EPSILON,
    DiscreteOperator,
    amplitudes,
    amplitudes_via_derivative,
    build,
    convolve_dg,
    truncation_radius,
    value_via_property1,
)
from .rootfind import DEFAULT_PRECISION, isolate_inner_roots

__all__ = [
    "BernoulliNumber",
    "Check",
    "Tolerances",
    "VerificationReport",
    "bernoulli",
    "zeta_even",
    "moment_sum",
    "symbol_direct",
    "symbol_closed_form",
    "check_symbol",
    "check_moments",
    "check_symbols",
    "check_inverse",
    "check_representations",
    "check_amplitudes",
    "check_roots",
    "run_suite",
]


# -- Bernoulli numbers -------------------------------------------------------

@dataclass(frozen=True)
class BernoulliNumber:
    index: int
    value: Fraction

    def __float__(self):
        return float(self.value)


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{k} C(k+1, j) B_j = 0 for k >= 1, B_0 = 1
    table = [Fraction(1)]
    for k in range(1, n + 1):
        table.append(-sum(comb(k + 1, j) * table[j] for j in range(k)) / (k + 1))
    return tuple(table)


def bernoulli(index: int) -> BernoulliNumber:
    """Exact B_index for even ``index >= 2``."""
    if index < 2 or index % 2:
        raise ValueError(f"expected an even index >= 2, got {index}")
    return BernoulliNumber(index, _bernoulli_table(index)[index])


def zeta_even(index: int, precision: int = DEFAULT_PRECISION):
    """``sum_{g>=1} g^-index`` from ``(-1)^(m-1) (2 pi)^2m B_2m / (2 (2m)!)``."""
    b = bernoulli(index).value
    m = index // 2
    with mp.workprec(precision):
        return (-1) ** (m - 1) * (2 * mp.pi) ** index * (mpmath.mpf(b.numerator) / b.denominator) \
            / (2 * factorial(index))


# -- report types --------------------------------------------------------------

@dataclass(frozen=True)
class Tolerances:
    absolute: float = 1e-10
    relative: float = 1e-8
    top_moment: float = 1e-8
    imaginary: float = 1e-12
    small_p: float = 1e-2
    representation: float = 1e-20
    amplitude: float = 1e-25
    root: float = 1e-28


@dataclass
class Check:
    name: str
    parameters: dict[str, Any]
    residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.tolerance = float(self.tolerance)
        self.passed = self.residual <= self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "parameters": self.parameters,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    m: int
    h: float
    precision: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name, parameters, residual, tolerance) -> Check:
        check = Check(name, dict(parameters), residual, tolerance)
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.checks.extend(other.checks)
        return self

    def max_residual(self, name: str | None = None) -> float:
        vals = [c.residual for c in self.checks if name is None or c.name == name]
        return max(vals, default=0.0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "h": self.h,
            "precision": self.precision,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _step(h) -> float:
    return float(mpmath.mpf(h))


# -- moments -------------------------------------------------------------------

def moment_sum(op: DiscreteOperator, k: int, epsilon):
    """``S_k = sum_beta D_m[beta] (h beta)^k`` to within ``epsilon`` of the full sum.

    beta and -beta are paired before accumulation, so odd k give exactly 0.
    Returns ``(S_k, radius)``.
    """
    if k % 2:
        return mpmath.mpf(0), 0
    with mp.workprec(op.precision):
        h = op.h
        radius = truncation_radius(
            lambda r: 2 * h**k * op.tail_bound(r, k), epsilon, start=max(2, op.m)
        )
        vals = op.values(radius)
        total = mpmath.fsum(2 * vals[b] * (h * b) ** k for b in range(1, radius + 1))
        if k == 0:
            total += vals[0]
        return total, radius


def _moment_precision(m: int, precision: int, tol: float, k_max: int) -> int:
    """Bits needed so that rounding in S_k stays ~2^-40 below ``tol``.

    Estimated at h = 1; both S_k and its tolerance scale like h^(k-2m).
    """
    if m == 1:
        return precision
    probe = build(m, 1, precision=max(precision, 128))
    r = float(probe.decay)
    c = float(probe.tail_constant)
    log_r = math.log(r)
    needed = precision
    for k in range(0, k_max + 1, 2):
        b_peak = max(2.0, -k / log_r)
        log_peak = math.log(c) + (b_peak - 1) * log_r + k * math.log(b_peak)
        bits = (log_peak - math.log(tol)) / math.log(2) + math.log2(4 * b_peak) + 40
        needed = max(needed, int(math.ceil(bits)))
    # and again for the k = 0 magnitude of the table values themselves
    return max(needed, int(math.ceil(math.log2(max(c, 1.0) / tol))) + 40)


def check_moments(
    m: int,
    h=1,
    precision: int = DEFAULT_PRECISION,
    tolerances: Tolerances | None = None,
    auto_precision: bool = True,
) -> VerificationReport:
    """Check ``S_k`` for ``0 <= k <= 4m`` against the moment identities.

    ``S_k = 0`` for k < 2m and 2m < k < 4m, ``S_2m = (2m)!`` and
    ``S_4m = h^2m (4m)! B_2m / (2m)!``.  With ``auto_precision`` the working
    precision is raised above ``precision`` as far as cancellation requires.
    """
    tol = tolerances or Tolerances()
    hm = mpmath.mpf(h)
    work = _moment_precision(m, precision, min(tol.absolute, tol.relative), 4 * m) \
        if auto_precision else precision
    op = build(m, h, precision=work)
    report = VerificationReport(m, _step(h), work)
    b2m = bernoulli(2 * m).value
    with mp.workprec(work):
        for k in range(4 * m + 1):
            if k == 2 * m:
                expected = mpmath.mpf(factorial(2 * m))
                kind, rel_tol = "moment_normalization", tol.relative
            elif k == 4 * m:
                expected = hm ** (2 * m) * factorial(4 * m) * b2m.numerator \
                    / (mpmath.mpf(b2m.denominator) * factorial(2 * m))
                kind, rel_tol = "moment_bernoulli", tol.top_moment
            else:
                expected = None
                kind = "moment_zero"
            if expected is None:
                # S_k scales like h^(k-2m); keep the tolerance dimensionless
                bound = tol.absolute * hm ** (k - 2 * m)
                total, radius = moment_sum(op, k, bound * 1e-3)
                report.add(kind, {"k": k, "radius": radius, "exact_pairing": k % 2 == 1},
                           abs(total), bound)
            else:
                total, radius = moment_sum(op, k, abs(expected) * rel_tol * 1e-3)
                report.add(kind, {"k": k, "radius": radius, "value": float(total),
                                  "expected": float(expected)},
                           abs(total - expected) / abs(expected), rel_tol)
    return report


# -- symbol --------------------------------------------------------------------

def symbol_closed_form(m: int, h, p, precision: int = DEFAULT_PRECISION):
    """Trigonometric closed form of ``sum_beta D_m[beta] exp(2 pi i h p beta)``."""
    a = coeffs_explicit(2 * m - 2).coeffs
    with mp.workprec(precision):
        h, p = mpmath.mpf(h), mpmath.mpf(p)
        t = 2 * mp.pi * h * p
        denom = 2 * mpmath.fsum(a[k] * mpmath.cos(t * (m - 1 - k)) for k in range(m - 1)) + a[m - 1]
        numer = (-1) ** m * mpmath.mpf(2) ** (2 * m) * factorial(2 * m - 1) \
            * mpmath.sin(mp.pi * h * p) ** (2 * m) / h ** (2 * m)
        return numer / denom


def symbol_direct(op: DiscreteOperator, p, epsilon=DEFAULT_TAIL_EPSILON):
    """Truncated ``sum_beta D_m[beta] exp(2 pi i h p beta)``, unpaired.

    Both signs of beta are accumulated separately so the imaginary part is a
    genuine measure of symmetry.  Returns ``(value, radius)``.
    """
    with mp.workprec(op.precision):
        radius = truncation_radius(lambda r: 2 * op.tail_bound(r), epsilon, start=max(2, op.m))
        vals = op.values(radius)
        t = 2 * mp.pi * op.h * mpmath.mpf(p)
        total = mpmath.fsum(
            vals[abs(b)] * mpmath.expj(t * b) for b in range(-radius, radius + 1)
        )
        return total, radius


@dataclass(frozen=True)
class SymbolComparison:
    p: float
    direct: Any
    closed_form: Any
    residual: float
    imaginary: float
    radius: int
    passed: bool


def check_symbol(m: int, h, p, precision: int = DEFAULT_PRECISION, tolerance: float = 1e-8,
                 op: DiscreteOperator | None = None) -> SymbolComparison:
    """Compare the direct sum with the closed form at frequency ``p``.

    The residual is relative, except at lattice frequencies (``h p`` an
    integer) where both sides vanish and it is the absolute value of the
    direct sum.
    """
    if op is None:
        op = build(m, h, precision=precision)
    with mp.workprec(op.precision):
        closed = symbol_closed_form(m, h, p, op.precision)
        hp = mpmath.mpf(h) * mpmath.mpf(p)
        lattice = hp == mpmath.nint(hp)
        # truncate near working precision; the radius grows only logarithmically
        eps = mpmath.mpf(2) ** (16 - op.precision) * (op.scale if lattice else abs(closed))
        direct, radius = symbol_direct(op, p, eps)
        if lattice:
            residual = abs(direct)
        else:
            residual = abs(direct.real - closed) / abs(closed)
        return SymbolComparison(float(p), direct, closed, float(residual),
                                float(abs(direct.imag)), radius, float(residual) <= tolerance)


def check_symbols(m: int, h=1, n: int = 10, seed: int = 0, precision: int = DEFAULT_PRECISION,
                  tolerances: Tolerances | None = None) -> VerificationReport:
    """Symbol identity at ``n`` seeded frequencies in (0, 1/(2h)), plus the limits."""
    tol = tolerances or Tolerances()
    op = build(m, h, precision=precision)
    report = VerificationReport(m, _step(h), precision)
    rng = random.Random(seed)
    hf = _step(h)
    for _ in range(n):
        p = rng.uniform(0.0, 0.5 / hf)
        cmp = check_symbol(m, h, p, op=op, tolerance=tol.relative)
        report.add("symbol", {"p": p, "radius": cmp.radius}, cmp.residual, tol.relative)
        report.add("symbol_imaginary", {"p": p}, cmp.imaginary, tol.imaginary)
    with mp.workprec(precision):
        p_small = mpmath.mpf("1e-3") / mpmath.mpf(h)
        closed = symbol_closed_form(m, h, p_small, precision)
        limit = (-1) ** m * (2 * mp.pi * p_small) ** (2 * m)
        report.add("symbol_small_p", {"p": float(p_small)}, abs(closed / limit - 1), tol.small_p)
    lattice = check_symbol(m, h, 0, op=op, tolerance=tol.absolute)
    report.add("symbol_lattice_zero", {"p": lattice.p}, lattice.residual, tol.absolute)
    return report


# -- convolution inverse, representations, amplitudes, roots --------------------

def check_inverse(m: int, h=1, beta_max: int = 20, tail_epsilon=DEFAULT_TAIL_EPSILON,
                  tolerance: float = 1e-10, precision: int = DEFAULT_PRECISION,
                  op: DiscreteOperator | None = None) -> VerificationReport:
    """``|h (D_m * G_m)[beta] - delta[beta]|`` for ``|beta| <= beta_max``."""
    if op is None:
        op = build(m, h, precision=precision)
    report = VerificationReport(m, _step(h), op.precision)
    for beta in range(-beta_max, beta_max + 1):
        got = convolve_dg(op, beta, tail_epsilon)
        report.add("inverse", {"beta": beta}, abs(got - (1 if beta == 0 else 0)), tolerance)
    return report


def check_representations(m: int, h=1, beta_max: int = 20, tolerance: float = 1e-20,
                          precision: int = DEFAULT_PRECISION,
                          op: DiscreteOperator | None = None) -> VerificationReport:
    """Closed form of D_m versus its stencil representation, relative deviation."""
    if m < 2:
        raise ValueError("the stencil representation needs m >= 2")
    if op is None:
        op = build(m, h, precision=precision)
    report = VerificationReport(m, _step(h), op.precision)
    with mp.workprec(op.precision):
        floor = op.scale * mpmath.mpf(2) ** -op.precision
        for beta in range(-beta_max, beta_max + 1):
            direct = op.value(beta)
            alt = value_via_property1(m, op.h, beta, op.roots, op.precision)
            report.add("representation", {"beta": beta},
                       abs(direct - alt) / (abs(direct) + floor), tolerance)
    return report


def check_amplitudes(m: int, precision: int = DEFAULT_PRECISION,
                     tolerance: float = 1e-25) -> VerificationReport:
    """Both amplitude formulas agree at every inner root."""
    roots = isolate_inner_roots(euler_polynomial(2 * m - 2), precision)
    report = VerificationReport(m, 1.0, precision)
    with mp.workprec(precision):
        for i, (a, b) in enumerate(zip(amplitudes(m, roots, precision),
                                       amplitudes_via_derivative(m, roots, precision))):
            report.add("amplitude", {"root": i}, abs(a - b) / abs(a), tolerance)
    return report


def check_roots(m: int, precision: int = DEFAULT_PRECISION,
                tolerance: float = 1e-28) -> VerificationReport:
    """Sanity checks on the inner roots of E_{2m-2}, including their reciprocal partners."""
    poly = euler_polynomial(2 * m - 2)
    roots = isolate_inner_roots(poly, precision)
    report = VerificationReport(m, 1.0, precision)
    report.add("root_count", {"expected": m - 1, "found": len(roots)},
               abs(len(roots) - (m - 1)), 0)
    ordered = all(-1 < a < b < 0 for a, b in zip(roots.roots, roots.roots[1:]))
    inside = all(-1 < r < 0 for r in roots.roots)
    report.add("root_order", {}, 0 if ordered and inside else 1, 0)
    for i, (res, rec) in enumerate(zip(roots.residuals, roots.reciprocal_residuals(poly))):
        report.add("root_residual", {"root": i}, res, tolerance)
        report.add("root_reciprocal", {"root": i}, rec, tolerance)
    return report


def run_suite(m: int, h=1, precision: int = DEFAULT_PRECISION,
              tolerances: Tolerances | None = None, beta_max: int = 20,
              n_symbol: int = 10, seed: int = 0) -> VerificationReport:
    """All checks for one (m, h), merged in a fixed order."""
    tol = tolerances or Tolerances()
    op = build(m, h, precision=precision)
    report = VerificationReport(m, _step(h), precision)
    report.extend(check_roots(m, precision, tol.root))
    report.extend(check_amplitudes(m, precision, tol.amplitude))
    report.extend(check_inverse(m, h, beta_max, tol.absolute * 1e-2, tol.absolute, op=op))
    report.extend(check_moments(m, h, precision, tol))
    report.extend(check_symbols(m, h, n_symbol, seed, precision, tol))
    if m >= 2:
        report.extend(check_representations(m, h, beta_max, tol.representation, op=op))
    return report
