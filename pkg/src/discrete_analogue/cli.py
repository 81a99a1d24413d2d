"""Command-line front end.

    discrete-analogue table  --m 2 --h 1 --radius 5 [--format csv|json]
    discrete-analogue verify --m 3 --h 1 [--tol 1e-10]
    discrete-analogue apply  --m 2 --h 0.1 --input samples.csv
    discrete-analogue symbol --m 2 --h 1 --p 0.1 0.25 0.5

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numeric failure.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import mpmath
from mpmath import mp

from .errors import DiscreteAnalogueError, WindowTooSmall
from .operators import DEFAULT_TAIL_EPSILON, DiscreteFunction, apply, build
from .verify import Tolerances, check_symbol, run_suite

__all__ = ["RunConfig", "ConfigError", "main", "canonical_json", "format_number"]

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    m: int = 1
    h: str = "1"
    radius: int = 10
    precision_bits: int = 128
    tol: float | None = None
    format: str = "csv"
    digits: int | None = None
    input: str | None = None
    output: str | None = None
    tail_eps: float = DEFAULT_TAIL_EPSILON
    p: list[str] = field(default_factory=list)
    beta_max: int = 20
    seed: int = 0

    def validate(self) -> None:
        if self.m < 1:
            raise ConfigError(f"--m must be >= 1, got {self.m}")
        if self.precision_bits < 64:
            raise ConfigError(f"--precision must be >= 64 bits, got {self.precision_bits}")
        if self.radius < 0:
            raise ConfigError(f"--radius must be >= 0, got {self.radius}")
        if self.digits is not None and self.digits < 1:
            raise ConfigError("--digits must be positive")
        if not self.tail_eps > 0:
            raise ConfigError("--tail-eps must be positive")
        try:
            h = mpmath.mpf(self.h)
        except (ValueError, TypeError):
            raise ConfigError(f"--h is not a number: {self.h!r}") from None
        if not (h > 0 and mpmath.isfinite(h)):
            raise ConfigError(f"--h must be positive, got {self.h}")
        if self.command == "apply" and self.input is None:
            raise ConfigError("apply needs --input")
        if self.command == "symbol" and not self.p:
            raise ConfigError("symbol needs at least one --p value")

    @property
    def step(self):
        with mp.workprec(self.precision_bits):
            return mpmath.mpf(self.h)


def format_number(x, digits: int | None = None) -> str:
    """Shortest round-trip float64 text, or ``digits`` significant digits."""
    if digits is None:
        return repr(float(x))
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpf(x)
    return mpmath.nstr(x, digits, strip_zeros=False)


def _json_number(x, digits):
    return float(x) if digits is None else format_number(x, digits)


def canonical_json(obj) -> str:
    """Sorted keys, fixed indentation, shortest round-trip floats, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# -- commands ------------------------------------------------------------------

def cmd_table(cfg: RunConfig) -> int:
    op = build(cfg.m, cfg.step, table_radius=max(2, cfg.radius), precision=cfg.precision_bits)
    rows = op.table_rows(cfg.radius)
    meta = {
        "m": cfg.m,
        "h": float(op.h),
        "precision": cfg.precision_bits,
        "radius": cfg.radius,
        "lambdas": [_json_number(x, cfg.digits) for x in op.roots.roots],
        "amplitudes": [_json_number(a, cfg.digits) for a in op.amplitudes],
    }
    if cfg.format == "json":
        payload = {
            "meta": meta,
            "rows": [{"beta": b, "value": _json_number(v, cfg.digits)} for b, v in rows],
        }
        _emit(canonical_json(payload), cfg.output)
    else:
        lines = [f"# {key}={json.dumps(meta[key])}" for key in sorted(meta)]
        body = _csv_text(["beta", "value"], [(b, format_number(v, cfg.digits)) for b, v in rows])
        _emit("\n".join(lines) + "\n" + body, cfg.output)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    tol = Tolerances() if cfg.tol is None else Tolerances(absolute=cfg.tol)
    report = run_suite(cfg.m, cfg.step, cfg.precision_bits, tol, beta_max=cfg.beta_max,
                       seed=cfg.seed)
    if cfg.format == "csv":
        rows = [(c.name, json.dumps(c.parameters, sort_keys=True), repr(c.residual),
                 repr(c.tolerance), str(c.passed).lower()) for c in report.checks]
        _emit(_csv_text(["name", "parameters", "residual", "tolerance", "passed"], rows),
              cfg.output)
    else:
        _emit(canonical_json(report.to_dict()), cfg.output)
    failed = report.failures
    if failed:
        print(f"{len(failed)} of {len(report.checks)} checks failed", file=sys.stderr)
        for c in failed:
            print(f"  {c.name} {c.parameters}: residual {c.residual:.3e} > {c.tolerance:.3e}",
                  file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def read_samples(path: str, h) -> DiscreteFunction:
    """Read an ``index,value`` CSV on consecutive integer indices."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(row for row in fh if not row.startswith("#"))
        if reader.fieldnames is None or not {"index", "value"} <= set(reader.fieldnames):
            raise ConfigError(f"{path}: expected an 'index,value' header")
        try:
            pairs = sorted((int(r["index"]), float(r["value"])) for r in reader)
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    if not pairs:
        raise ConfigError(f"{path}: no samples")
    idx = [i for i, _ in pairs]
    if idx != list(range(idx[0], idx[0] + len(idx))):
        raise ConfigError(f"{path}: indices must be consecutive integers")
    return DiscreteFunction(float(h), idx[0], [v for _, v in pairs])


def cmd_apply(cfg: RunConfig) -> int:
    f = read_samples(cfg.input, cfg.step)
    op = build(cfg.m, cfg.step, precision=cfg.precision_bits)
    out = apply(op, f, cfg.tail_eps)
    rows = [(int(i), format_number(v, cfg.digits)) for i, v in zip(out.indices, out.values)]
    _emit(_csv_text(["index", "value"], rows), cfg.output)
    return EXIT_OK


def cmd_symbol(cfg: RunConfig) -> int:
    op = build(cfg.m, cfg.step, precision=cfg.precision_bits)
    rows = []
    with mp.workprec(cfg.precision_bits):
        for text in cfg.p:
            p = mpmath.mpf(text)
            cmp = check_symbol(cfg.m, op.h, p, op=op, tolerance=cfg.tol or Tolerances().relative)
            rows.append((text, cmp.direct.real, cmp.closed_form, cmp.residual))
    if cfg.format == "json":
        payload = [
            {"p": float(mpmath.mpf(p)), "direct_sum": _json_number(d, cfg.digits),
             "closed_form": _json_number(c, cfg.digits), "residual": r}
            for p, d, c, r in rows
        ]
        _emit(canonical_json({"m": cfg.m, "h": float(op.h), "rows": payload}), cfg.output)
    else:
        _emit(_csv_text(["p", "direct_sum", "closed_form", "residual"],
                        [(p, format_number(d, cfg.digits), format_number(c, cfg.digits),
                          repr(r)) for p, d, c, r in rows]), cfg.output)
    return EXIT_OK


COMMANDS = {"table": cmd_table, "verify": cmd_verify, "apply": cmd_apply, "symbol": cmd_symbol}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discrete-analogue",
        description="Discrete analogue of d^2m/dx^2m: tables, verification, application.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, required=True, help="half order (operator order 2m)")
    common.add_argument("--h", default="1", help="grid step (default 1)")
    common.add_argument("--precision", dest="precision_bits", type=int, default=128,
                        help="working precision in bits (default 128)")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--digits", type=int, default=None,
                        help="significant digits in output (default: shortest round-trip)")
    common.add_argument("--output", "-o", default=None, help="output path (default stdout)")

    sub = parser.add_subparsers(dest="command", required=True)
    p_table = sub.add_parser("table", parents=[common], help="emit D_m[beta] for |beta| <= radius")
    p_table.add_argument("--radius", type=int, default=10)

    p_verify = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p_verify.add_argument("--beta-max", type=int, default=20)
    p_verify.add_argument("--seed", type=int, default=0)

    p_apply = sub.add_parser("apply", parents=[common], help="apply D_m to sampled data")
    p_apply.add_argument("--input", "-i", required=True, help="CSV with index,value columns")
    p_apply.add_argument("--tail-eps", type=float, default=DEFAULT_TAIL_EPSILON)

    p_symbol = sub.add_parser("symbol", parents=[common], help="evaluate the Fourier symbol")
    p_symbol.add_argument("--p", nargs="+", required=True, help="frequencies")
    return parser


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if v is not None}
    if "format" not in values:
        values["format"] = "json" if ns.command == "verify" else "csv"
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WindowTooSmall as exc:
        print(f"error: {exc} (required margin {exc.required_margin})", file=sys.stderr)
        return EXIT_NUMERIC
    except DiscreteAnalogueError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
