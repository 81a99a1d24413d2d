"""The nine acceptance criteria, each at its stated tolerance and time budget."""

import csv
import math
import time
from math import factorial

import mpmath
import pytest

from discrete_analogue import (
    build,
    coeffs_by_recurrence,
    coeffs_explicit,
    euler_polynomial,
    isolate_inner_roots,
    value_via_property1,
)
from discrete_analogue.cli import main
from discrete_analogue.eulerpoly import evaluate
from discrete_analogue.operators import amplitudes, amplitudes_via_derivative, convolve_dg
from discrete_analogue.verify import bernoulli, check_inverse, check_symbols, moment_sum


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start

    @property
    def ok(self):
        return self.elapsed < self.seconds


def test_c1_exact_m1_anchor(acceptance_log):
    with Budget(1.0) as t:
        ok = True
        for h in ("1", "0.5", "0.1"):
            op = build(1, h)
            with mpmath.workprec(op.precision):
                hh = mpmath.mpf(h)
                ok &= op.value(0) == -2 / hh**2
                ok &= op.value(1) == op.value(-1) == 1 / hh**2
                ok &= all(op.value(b) == 0 for b in range(2, 50))
            report = check_inverse(1, h, beta_max=20, op=op)
            ok &= all(c.residual == 0 for c in report.checks)
    passed = ok and t.ok
    acceptance_log("C1 exact m=1 anchor", passed, f"exact values and zero residuals, {t.elapsed:.3f}s")
    assert passed


def test_c2_euler_identities(acceptance_log):
    with Budget(10.0) as t:
        bad = []
        for k in range(41):
            rec, exp = coeffs_by_recurrence(k), coeffs_explicit(k)
            if rec != exp or rec.coeffs != rec.coeffs[::-1] or sum(rec.coeffs) != factorial(k + 1):
                bad.append(k)
    passed = not bad and t.ok
    acceptance_log("C2 Euler identities k<=40", passed, f"failures {bad}, {t.elapsed:.2f}s")
    assert passed


def test_c3_root_certification(acceptance_log):
    worst_inner = worst_outer = 0.0
    counts_ok = True
    with Budget(30.0) as t:
        for m in range(1, 21):
            poly = euler_polynomial(2 * m - 2)
            roots = isolate_inner_roots(poly, 128)
            counts_ok &= len(roots) == m - 1 and all(-1 < r < 0 for r in roots)
            with mpmath.workprec(128):
                for lam, res in zip(roots.roots, roots.residuals):
                    worst_inner = max(worst_inner, float(res))
                    # |E(1/lam)| against the growth |1/lam|^(2m-2) times the inner scale
                    scale = abs(1 / lam) ** (2 * m - 2) * evaluate(poly, abs(lam), 128)
                    worst_outer = max(worst_outer, float(abs(evaluate(poly, 1 / lam, 128)) / scale))
    passed = counts_ok and worst_inner < 1e-28 and worst_outer < 1e-28 and t.ok
    acceptance_log("C3 root certification m<=20", passed,
                   f"inner {worst_inner:.2e}, reciprocal {worst_outer:.2e}, {t.elapsed:.2f}s")
    assert passed


def test_c4_convolution_inverse(acceptance_log):
    worst = 0.0
    with Budget(60.0) as t:
        for m in range(1, 7):
            for h in (1, 0.5):
                op = build(m, h)
                for beta in range(-20, 21):
                    worst = max(worst, float(abs(convolve_dg(op, beta) - (beta == 0))))
    passed = worst < 1e-10 and t.ok
    acceptance_log("C4 convolution inverse m<=6", passed, f"max residual {worst:.2e}, {t.elapsed:.2f}s")
    assert passed


def test_c5_moments(acceptance_log):
    worst_zero = worst_norm = worst_top = 0.0
    with Budget(60.0) as t:
        for m in range(1, 7):
            # extra bits absorb the cancellation in high moments (terms reach ~R^4m)
            op = build(m, 1, precision=128 + 32 * m)
            b = bernoulli(2 * m).value
            with mpmath.workprec(op.precision):
                for k in range(4 * m + 1):
                    if k == 2 * m:
                        s, _ = moment_sum(op, k, 1e-14)
                        worst_norm = max(worst_norm, float(abs(s / factorial(2 * m) - 1)))
                    elif k == 4 * m:
                        want = mpmath.mpf(factorial(4 * m)) * b.numerator / (b.denominator * factorial(2 * m))
                        s, _ = moment_sum(op, k, abs(want) * 1e-10)
                        worst_top = max(worst_top, float(abs(s / want - 1)))
                    else:
                        s, _ = moment_sum(op, k, 1e-12)
                        worst_zero = max(worst_zero, float(abs(s)))
        m1_top = moment_sum(build(1, 1), 4, 1e-20)[0]
    passed = (worst_zero < 1e-9 and worst_norm < 1e-8 and worst_top < 1e-6
              and m1_top == 2 and t.ok)
    acceptance_log("C5 moments m<=6", passed,
                   f"zero {worst_zero:.2e}, normalization {worst_norm:.2e}, "
                   f"top {worst_top:.2e}, S_4(m=1)={m1_top}, {t.elapsed:.2f}s")
    assert passed


def test_c6_symbol(acceptance_log):
    rel = imag = small = 0.0
    with Budget(30.0) as t:
        for m in range(1, 6):
            report = check_symbols(m, 1, n=10, seed=2024)
            rel = max(rel, report.max_residual("symbol"))
            imag = max(imag, report.max_residual("symbol_imaginary"))
            small = max(small, report.max_residual("symbol_small_p"))
            assert sum(c.name == "symbol" for c in report.checks) == 10
    passed = rel < 1e-8 and imag < 1e-12 and small < 1e-2 and t.ok
    acceptance_log("C6 symbol m<=5", passed,
                   f"relative {rel:.2e}, imaginary {imag:.2e}, small-p {small:.2e}, {t.elapsed:.2f}s")
    assert passed


def test_c7_representation_equality(acceptance_log):
    worst = 0.0
    with Budget(10.0) as t:
        for m in range(2, 9):
            op = build(m, 1, precision=128)
            with mpmath.workprec(128):
                for beta in range(-20, 21):
                    a = op.value(beta)
                    b = value_via_property1(m, 1, beta, op.roots, 128)
                    worst = max(worst, float(abs(a - b) / abs(a)))
    passed = worst < 1e-20 and t.ok
    acceptance_log("C7 representation equality m=2..8", passed,
                   f"max relative {worst:.2e}, {t.elapsed:.2f}s")
    assert passed


def test_c8_amplitude_identity(acceptance_log):
    worst = 0.0
    with Budget(5.0) as t:
        for m in range(2, 13):
            roots = isolate_inner_roots(euler_polynomial(2 * m - 2), 128)
            with mpmath.workprec(128):
                for a, b in zip(amplitudes(m, roots), amplitudes_via_derivative(m, roots)):
                    worst = max(worst, float(abs(a - b) / abs(a)))
    passed = worst < 1e-25 and t.ok
    acceptance_log("C8 amplitude identity m<=12", passed, f"max relative {worst:.2e}, {t.elapsed:.2f}s")
    assert passed


def _apply_error(tmp_path, h, capsys):
    n = round(20 / h)
    src = tmp_path / f"sin_{h}.csv"
    dst = tmp_path / f"out_{h}.csv"
    with open(src, "w") as fh:
        fh.write("index,value\n")
        for i in range(-n, n + 1):
            fh.write(f"{i},{math.sin(i * h)!r}\n")
    code = main(["apply", "--m", "2", "--h", str(h), "--input", str(src), "--output", str(dst)])
    capsys.readouterr()
    assert code == 0
    with open(dst) as fh:
        rows = list(csv.DictReader(fh))
    # fourth derivative of sin is sin
    return max(abs(float(r["value"]) - math.sin(int(r["index"]) * h)) for r in rows)


def test_c9_convergence_order(acceptance_log, tmp_path, capsys):
    with Budget(10.0) as t:
        coarse = _apply_error(tmp_path, 0.4, capsys)
        fine = _apply_error(tmp_path, 0.2, capsys)
    ratio = coarse / fine
    passed = 12 <= ratio <= 20 and t.ok
    acceptance_log("C9 convergence order m=2", passed,
                   f"errors {coarse:.3e} / {fine:.3e} = {ratio:.2f}, {t.elapsed:.2f}s")
    assert passed
