"""Euler polynomials E_k(x) with exact integer coefficients.

E_k is defined through ``x E_k(x) = (1 - x)^(k+2) (x d/dx)^k [x / (1 - x)^2]``.
Its coefficients are the Eulerian numbers, e.g. E_4 = 1 + 26x + 66x^2 + 26x^3 + x^4.

Two constructions are provided.  :func:`coeffs_by_recurrence` is the
production path (no cancellation; every intermediate is a positive integer)
and :func:`coeffs_explicit` is Euler's alternating closed-form sum, kept as an
independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import mpmath
from mpmath import mp

__all__ = [
    "EulerPolynomial",
    "coeffs_by_recurrence",
    "coeffs_explicit",
    "euler_polynomial",
    "evaluate",
    "evaluate_derivative",
]


@dataclass(frozen=True)
class EulerPolynomial:
    """Exact coefficients ``a_0 .. a_k`` of E_k, ascending powers."""

    degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError(
                f"degree {self.degree} needs {self.degree + 1} coefficients, "
                f"got {len(self.coeffs)}"
            )

    def derivative_coeffs(self) -> tuple[int, ...]:
        return tuple(s * a for s, a in enumerate(self.coeffs) if s > 0)

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def __call__(self, x, precision: int = 128):
        return evaluate(self, x, precision)


def _check_degree(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise ValueError(f"degree must be a non-negative integer, got {k!r}")


def coeffs_by_recurrence(k: int) -> EulerPolynomial:
    """Build E_k from E_0 = 1 with ``a_s <- (s+1) a_s + (k-s+1) a_{s-1}``.

    This is the coefficient form of
    ``E_k(x) = (k x + 1) E_{k-1}(x) + x (1 - x) E'_{k-1}(x)``.
    """
    _check_degree(k)
    row = [1]
    for n in range(1, k + 1):
        prev = row + [0]
        row = [(s + 1) * prev[s] + (n - s + 1) * (prev[s - 1] if s else 0)
               for s in range(n + 1)]
    return EulerPolynomial(k, tuple(row))


def coeffs_explicit(k: int) -> EulerPolynomial:
    """Euler's formula ``a_s = sum_{j<=s} (-1)^j C(k+2, j) (s+1-j)^(k+1)``."""
    _check_degree(k)
    coeffs = tuple(
        sum((-1) ** j * comb(k + 2, j) * (s + 1 - j) ** (k + 1) for j in range(s + 1))
        for s in range(k + 1)
    )
    return EulerPolynomial(k, coeffs)


@lru_cache(maxsize=None)
def euler_polynomial(k: int) -> EulerPolynomial:
    """Cached E_k (recurrence construction)."""
    return coeffs_by_recurrence(k)


def _horner(coeffs, x):
    acc = mpmath.mpf(0)
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def evaluate(poly: EulerPolynomial, x, precision: int = 128):
    """Evaluate E_k at ``x`` by Horner's scheme with ``precision`` bits."""
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    with mp.workprec(precision):
        return _horner(poly.coeffs, mpmath.mpf(x))


def evaluate_derivative(poly: EulerPolynomial, x, precision: int = 128):
    """Evaluate the formal derivative E_k' at ``x``."""
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    with mp.workprec(precision):
        return _horner(poly.derivative_coeffs(), mpmath.mpf(x))
