"""The discrete analogue D_m[beta] of d^(2m)/dx^(2m) on the lattice h*Z.

D_m is the convolution inverse of ``G_m[beta] = |h beta|^(2m-1) / (2 (2m-1)!)``
in the sense ``h (D_m * G_m)[beta] = delta[beta]``.  In closed form, with
lambda_k the roots of E_{2m-2} in (-1, 0) and amplitudes
``A_k = (1 - lambda_k)^(2m+1) / E_{2m-1}(lambda_k)``::

    D_m[0]      = (2m-1)!/h^2m * (-2^(2m-1) + sum_k A_k / lambda_k)
    D_m[+-1]    = (2m-1)!/h^2m * (1 + sum_k A_k)
    D_m[beta]   = (2m-1)!/h^2m * sum_k A_k lambda_k^(|beta|-1),   |beta| >= 2

The |beta| >= 2 branch is a finite sum of geometric sequences, so
:meth:`DiscreteOperator.value` is exact (to working precision) for any beta.
Truncation only happens when D_m is summed against something infinite, and
every such sum here carries a rigorous tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable

import mpmath
import numpy as np
from mpmath import mp

from .errors import NonConvergent, WindowTooSmall
from .eulerpoly import euler_polynomial, evaluate, evaluate_derivative
from .rootfind import DEFAULT_PRECISION, DEFAULT_ROOT_TOLERANCE, RootSet, isolate_inner_roots

__all__ = [
    "DiscreteOperator",
    "DiscreteFunction",
    "Stencil",
    "build",
    "stencil",
    "g_value",
    "amplitudes",
    "amplitudes_via_derivative",
    "value_via_property1",
    "convolve_dg",
    "truncation_radius",
    "apply",
]

DEFAULT_TAIL_EPSILON = 1e-12
MAX_RADIUS = 1 << 20


def _as_mpf_step(h):
    h = mpmath.mpf(h)
    if not h > 0:
        raise ValueError(f"grid step must be positive, got {h}")
    return h


def _check_order(m):
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValueError(f"m must be an integer >= 1, got {m!r}")


@dataclass(frozen=True)
class Stencil:
    """Symmetric difference of order 2m: ``taps[m + k] = (-1)^(k+m) C(2m, m+k)``."""

    m: int
    taps: tuple[int, ...]

    def __iter__(self):
        return iter(zip(range(-self.m, self.m + 1), self.taps))


def stencil(m: int) -> Stencil:
    _check_order(m)
    return Stencil(m, tuple((-1) ** (k + m) * comb(2 * m, m + k) for k in range(-m, m + 1)))


def g_value(m: int, h, beta: int, precision: int = DEFAULT_PRECISION):
    """Lattice sample of the fundamental solution ``x^(2m-1) sign(x) / (2 (2m-1)!)``."""
    _check_order(m)
    with mp.workprec(precision):
        x = abs(_as_mpf_step(h) * beta)
        return x ** (2 * m - 1) / (2 * factorial(2 * m - 1))


def amplitudes(m: int, roots: RootSet, precision: int = DEFAULT_PRECISION) -> tuple:
    """Tail amplitudes ``(1 - l)^(2m+1) / E_{2m-1}(l)`` for each inner root ``l``."""
    e_odd = euler_polynomial(2 * m - 1)
    with mp.workprec(precision):
        return tuple(
            (1 - lam) ** (2 * m + 1) / evaluate(e_odd, lam, precision) for lam in roots
        )


def amplitudes_via_derivative(m: int, roots: RootSet, precision: int = DEFAULT_PRECISION) -> tuple:
    """The same amplitudes from the residue form ``(1 - l)^2m / (l E'_{2m-2}(l))``.

    Equal to :func:`amplitudes` because ``E_{2m-1}(l) = l (1 - l) E'_{2m-2}(l)``
    whenever ``E_{2m-2}(l) = 0``.
    """
    e_even = euler_polynomial(2 * m - 2)
    with mp.workprec(precision):
        return tuple(
            (1 - lam) ** (2 * m) / (lam * evaluate_derivative(e_even, lam, precision))
            for lam in roots
        )


@dataclass(frozen=True)
class DiscreteOperator:
    """D_m on the lattice with step ``h``.

    ``table[b]`` holds D_m[b] for ``0 <= b <= table_radius``; negative indices
    follow from symmetry.  Values beyond the table come from the geometric tail.
    """

    m: int
    h: mpmath.mpf
    roots: RootSet
    amplitudes: tuple
    table: tuple
    table_radius: int
    precision: int
    scale: mpmath.mpf = field(repr=False)

    @property
    def decay(self):
        """Largest |lambda_k|; ``|D_m[b+1]| / |D_m[b]|`` tends to it."""
        return self.roots.magnitude

    @property
    def tail_constant(self):
        """C with ``|D_m[b]| <= C * decay^(b-1)`` for every ``b >= 2``."""
        with mp.workprec(self.precision):
            return self.scale * mpmath.fsum(abs(a) for a in self.amplitudes)

    def value(self, beta: int):
        b = abs(int(beta))
        if b <= self.table_radius:
            return self.table[b]
        with mp.workprec(self.precision):
            return _closed_form(self.m, self.scale, self.roots.roots, self.amplitudes, b)

    def __getitem__(self, beta: int):
        return self.value(beta)

    def values(self, radius: int) -> list:
        """``[D_m[0], ..., D_m[radius]]``, with the tail generated incrementally."""
        if radius <= self.table_radius:
            return list(self.table[: radius + 1])
        out = list(self.table)
        with mp.workprec(self.precision):
            b = self.table_radius
            powers = [lam ** (b - 1) for lam in self.roots.roots]
            for b in range(self.table_radius + 1, radius + 1):
                powers = [p * lam for p, lam in zip(powers, self.roots.roots)]
                out.append(self.scale * mpmath.fsum(a * p for a, p in zip(self.amplitudes, powers)))
        return out

    def table_rows(self, radius: int | None = None):
        """``(beta, D_m[beta])`` for ``-radius <= beta <= radius``."""
        radius = self.table_radius if radius is None else radius
        vals = self.values(radius)
        return [(beta, vals[abs(beta)]) for beta in range(-radius, radius + 1)]

    def tail_bound(self, radius: int, degree: int = 0, shift=0):
        """Upper bound on ``sum_{b > radius} |D_m[b]| (b + shift)^degree`` (one side).

        Uses ``|D_m[b]| <= C r^(b-1)``; the term ratio
        ``r ((b+1+shift)/(b+shift))^degree`` decreases in b, so the tail is
        dominated by a geometric series once that ratio drops below one.
        Returns ``inf`` while it has not.
        """
        if radius < 1:
            raise ValueError("tail bounds need radius >= 1")
        with mp.workprec(self.precision):
            c = self.tail_constant
            if c == 0:
                return mpmath.mpf(0)
            r = self.decay
            first = radius + 1
            base = first + mpmath.mpf(shift)
            q = r * ((base + 1) / base) ** degree
            if q >= 1:
                return mpmath.inf
            # inflate past rounding so the result stays an upper bound
            slack = 1 + mpmath.mpf(2) ** (16 - self.precision)
            return slack * c * r ** (first - 1) * base**degree / (1 - q)


def _closed_form(m, scale, roots, amps, b):
    if b == 0:
        bracket = -mpmath.mpf(2) ** (2 * m - 1) + mpmath.fsum(a / lam for a, lam in zip(amps, roots))
    elif b == 1:
        bracket = 1 + mpmath.fsum(amps)
    else:
        bracket = mpmath.fsum(a * lam ** (b - 1) for a, lam in zip(amps, roots))
    return scale * bracket


def build(
    m: int,
    h=1,
    table_radius: int = 16,
    precision: int = DEFAULT_PRECISION,
    root_tolerance: float = DEFAULT_ROOT_TOLERANCE,
) -> DiscreteOperator:
    """Assemble D_m from the inner roots of E_{2m-2}."""
    _check_order(m)
    if table_radius < 2:
        raise ValueError("table_radius must be >= 2")
    with mp.workprec(precision):
        h = _as_mpf_step(h)
        roots = isolate_inner_roots(euler_polynomial(2 * m - 2), precision, root_tolerance)
        amps = amplitudes(m, roots, precision)
        scale = factorial(2 * m - 1) / h ** (2 * m)
        table = tuple(_closed_form(m, scale, roots.roots, amps, b) for b in range(table_radius + 1))
    return DiscreteOperator(m, h, roots, amps, table, table_radius, precision, scale)


def value_via_property1(m: int, h, beta: int, roots: RootSet | None = None,
                        precision: int = DEFAULT_PRECISION):
    """D_m[beta] as the order-2m symmetric difference of a pure geometric sequence.

    ``D_m = (2m-1)!/h^2m * Delta^[m] * T`` with
    ``T[g] = sum_k lambda_k^(|g|+m-2) / E'_{2m-2}(lambda_k)``.
    Only defined for m >= 2 (the root sum is empty at m = 1).
    """
    _check_order(m)
    if m < 2:
        raise ValueError("the stencil representation needs m >= 2")
    e_even = euler_polynomial(2 * m - 2)
    if roots is None:
        roots = isolate_inner_roots(e_even, precision)
    with mp.workprec(precision):
        h = _as_mpf_step(h)
        weights = [1 / evaluate_derivative(e_even, lam, precision) for lam in roots]

        def seq(g):
            g = abs(g)
            return mpmath.fsum(w * lam ** (g + m - 2) for w, lam in zip(weights, roots))

        conv = mpmath.fsum(tap * seq(beta - j) for j, tap in stencil(m))
        return factorial(2 * m - 1) / h ** (2 * m) * conv


def truncation_radius(bound: Callable[[int], object], epsilon, start: int = 2,
                      cap: int = MAX_RADIUS) -> int:
    """Smallest radius on a geometric ladder from ``start`` with ``bound(R) <= epsilon``."""
    radius = max(start, 1)
    while True:
        if bound(radius) <= epsilon:
            return radius
        if radius >= cap:
            raise NonConvergent(f"tail bound still above {epsilon} at radius {cap}")
        radius = min(cap, radius + max(1, radius // 4))


def _convolve_dg(op: DiscreteOperator, beta: int, tail_epsilon):
    m, h = op.m, op.h
    d = 2 * m - 1
    with mp.workprec(op.precision):
        g_scale = h**d / (2 * factorial(d))
        weight = 2 * h * g_scale  # two sides, times the leading h
        radius = truncation_radius(
            lambda r: weight * op.tail_bound(r, d, abs(beta)), tail_epsilon, start=max(2, abs(beta))
        )
        vals = op.values(radius)
        total = mpmath.fsum(
            vals[abs(g)] * abs(mpmath.mpf(beta - g)) ** d for g in range(-radius, radius + 1)
        )
        return h * g_scale * total, radius


def convolve_dg(op: DiscreteOperator, beta: int, tail_epsilon=DEFAULT_TAIL_EPSILON):
    """``h * sum_g D_m[g] G_m[beta - g]``, within ``tail_epsilon`` of the infinite sum."""
    if not tail_epsilon > 0:
        raise ValueError("tail_epsilon must be positive")
    return _convolve_dg(op, beta, tail_epsilon)[0]


@dataclass(frozen=True)
class DiscreteFunction:
    """Samples ``values[i]`` at lattice points ``h * (offset + i)``."""

    h: float
    offset: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        if not float(self.h) > 0:
            raise ValueError("h must be positive")
        object.__setattr__(self, "values", vals)

    @classmethod
    def sample(cls, fn, h, first: int, last: int) -> "DiscreteFunction":
        idx = np.arange(first, last + 1)
        return cls(float(h), first, np.array([fn(float(h) * i) for i in idx], dtype=np.float64))

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.values))

    @property
    def window(self) -> tuple[int, int]:
        return self.offset, self.offset + len(self.values) - 1

    def __len__(self):
        return len(self.values)


def apply(op: DiscreteOperator, f: DiscreteFunction,
          tail_epsilon=DEFAULT_TAIL_EPSILON) -> DiscreteFunction:
    """``sum_g D_m[g] f[beta - g]`` on the interior of ``f``'s window.

    The operator is cut at the margin R where its two-sided tail mass falls
    below ``tail_epsilon`` times its l1 norm; only indices at least R away
    from both ends are returned.
    """
    if not math.isclose(float(f.h), float(op.h), rel_tol=1e-12):
        raise ValueError(f"sample step {f.h} does not match operator step {float(op.h)}")
    with mp.workprec(op.precision):
        head = op.values(max(op.m, 1))
        l1 = abs(head[0]) + 2 * mpmath.fsum(abs(v) for v in head[1:])
        margin = truncation_radius(lambda r: 2 * op.tail_bound(r), tail_epsilon * l1,
                                   start=max(op.m, 1))
        n = len(f)
        if n < 2 * margin + 1:
            raise WindowTooSmall(
                f"need at least {2 * margin + 1} samples (margin {margin} on each side), "
                f"got {n}",
                margin,
            )
        kernel = op.values(margin)
        weights = [kernel[abs(g)] for g in range(-margin, margin + 1)]
        samples = [mpmath.mpf(float(v)) for v in f.values]
        out = np.empty(n - 2 * margin, dtype=np.float64)
        # D_m is symmetric, so the correlation equals the convolution
        for i in range(margin, n - margin):
            out[i - margin] = float(mpmath.fdot(weights, samples[i - margin: i + margin + 1]))
    return DiscreteFunction(f.h, f.offset + margin, out)
