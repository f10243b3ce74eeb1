"""Command-line front end: ``thuemorse <command> [options]``.

Exit status is 0 on success, 1 when a verification check fails and 2 on
usage errors or exceeded resource caps.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .entropy import ConvergenceError, energy_exponent, entropy_series, information_dimension
from .figures import FIGURES, figure_data, render_figure
from .measure import ResourceError, cylinder_mass, gibbs_upper_check, local_dimension_estimate, beta_estimate
from .potential import psi_n
from .pressure import birkhoff_spectrum, dimension_spectrum, pressure_curve, restricted_pressure_curve
from .symbolic import as_word, format_rational, parse_rational

__all__ = ["main", "parse_range", "build_parser"]


class UsageError(ValueError):
    pass


def parse_range(text: str) -> np.ndarray:
    """``"start:stop:step"`` with ``stop`` included when it lies on the grid."""
    try:
        start, stop, step = (float(s) for s in text.split(":"))
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected start:stop:step") from None
    if not step > 0 or stop < start:
        raise UsageError(f"empty range {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


def _threads(value: str):
    if value == "auto":
        return os.cpu_count() or 1
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1 or 'auto'")
    return n


def _num(x):
    """Floats to 17 significant digits; non-finite values as strings."""
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isfinite(x):
            return format(x, ".17g")
        return "-inf" if x < 0 else ("inf" if x > 0 else "nan")
    return x


def _json_value(x):
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else _num(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return x


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(_json_value(obj), indent=2) + "\n"


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, newline="")
    else:
        sys.stdout.write(text)


def _table(args, header, columns):
    rows = zip(*columns)
    if args.format == "json":
        _emit(_json_text([dict(zip(header, r)) for r in rows]), args.out)
    else:
        _emit(_csv_text(header, rows), args.out)


def _record(args, record: dict):
    if args.format == "csv":
        _emit(_csv_text(list(record), [list(record.values())]), args.out)
    else:
        _emit(_json_text(record), args.out)


def cmd_pressure(args) -> int:
    t = parse_range(args.t)
    if args.restricted is not None:
        curve = restricted_pressure_curve(args.restricted, args.n, t)
    else:
        curve = pressure_curve(args.n, t)
    _table(args, ["t", "p"], [curve.t, curve.p])
    return 0


def cmd_spectrum(args) -> int:
    alpha = parse_range(args.alpha or ("-1.5:0.5:0.005" if args.kind == "birkhoff" else "0:3:0.005"))
    curve = pressure_curve(args.n, parse_range(args.t))
    fn = birkhoff_spectrum if args.kind == "birkhoff" else dimension_spectrum
    spec = fn(args.n, alpha, curve=curve)
    _table(args, ["alpha", "value"], [spec.alpha, spec.value])
    return 0


def cmd_entropy(args) -> int:
    r = entropy_series(args.digits)
    _record(
        args,
        {
            "h": float(r.h),
            "h_decimal": r.h_decimal,
            "D1": information_dimension(r),
            "energy_exponent": energy_exponent(),
            "S": float(r.S),
            "digits_validated": r.digits_validated,
        },
    )
    return 0


def cmd_localdim(args) -> int:
    x = parse_rational(args.x)
    if not 0 <= x < 1:
        raise UsageError("x must lie in [0, 1)")
    value, singular = local_dimension_estimate(x, args.n)
    _record(
        args,
        {
            "x": format_rational(x),
            "n": args.n,
            "psi_n": psi_n(x, args.n),
            "beta": beta_estimate(x, args.n),
            "local_dimension": value,
            "singular": singular,
        },
    )
    return 0


def cmd_measure(args) -> int:
    w = as_word(args.word)
    mass = cylinder_mass(w, args.level).mass
    bound, passed = None, None
    if args.level >= w.n:
        _, bound, passed = gibbs_upper_check(w, args.level)
    _record(args, {"word": w.bits, "level": args.level, "mass": mass, "gibbs_bound": bound, "pass": passed})
    return 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    report = run_suite(args.suite, threads=args.threads)
    for c in report.checks:
        print(c.line(), file=sys.stderr)
    header = ["name", "expected", "observed", "tolerance", "pass"]
    if args.format == "json":
        d = report.as_dict()
        for c in d["checks"]:
            c.pop("seconds")
        _emit(_json_text(d), args.out)
    else:
        rows = [[c.name, c.expected, c.observed, c.tolerance, c.passed] for c in report.checks]
        _emit(_csv_text(header, rows), args.out)
    return 0 if report.overall else 1


def cmd_figures(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = FIGURES if args.figure == "all" else (args.figure,)
    for name in names:
        header, columns = figure_data(name, n=args.n)
        (out / f"{name}.csv").write_text(_csv_text(header, zip(*columns)), newline="")
        if not args.no_png:
            render_figure(name, header, columns, out / f"{name}.png")
        print(out / f"{name}.csv", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thuemorse", description="Thermodynamic formalism for the Thue-Morse Riesz product.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--threads", type=_threads, default=None, help="worker cap (integer or 'auto')")
    sub = p.add_subparsers(dest="command", required=True)

    def io_flags(sp, default_format="csv"):
        sp.add_argument("--format", choices=("csv", "json"), default=default_format)
        sp.add_argument("--out", default=None, help="output file (default stdout)")

    sp = sub.add_parser("pressure", help="pressure curve p(t), full or restricted to X_m")
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--t", default="0:40:0.1", help="start:stop:step")
    sp.add_argument("--restricted", type=int, default=None, metavar="M")
    io_flags(sp)
    sp.set_defaults(func=cmd_pressure)

    sp = sub.add_parser("spectrum", help="Birkhoff or dimension spectrum via Legendre transform")
    sp.add_argument("--kind", choices=("birkhoff", "dimension"), default="birkhoff")
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--alpha", default=None, help="start:stop:step")
    sp.add_argument("--t", default="0:40:0.1", help="t grid of the underlying pressure")
    io_flags(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("entropy", help="metric entropy, information dimension, energy exponent")
    sp.add_argument("--digits", type=int, default=10)
    io_flags(sp, "json")
    sp.set_defaults(func=cmd_entropy)

    sp = sub.add_parser("localdim", help="finite-n local dimension and Birkhoff exponent at a rational")
    sp.add_argument("--x", required=True, help="rational p/q in [0, 1)")
    sp.add_argument("--n", type=int, default=200)
    io_flags(sp, "json")
    sp.set_defaults(func=cmd_localdim)

    sp = sub.add_parser("measure", help="cylinder mass and Gibbs upper bound")
    sp.add_argument("--word", required=True)
    sp.add_argument("--level", type=int, required=True)
    io_flags(sp, "json")
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=("all", "symbolic", "potential", "measure", "pressure", "entropy", "acceptance"), default="all")
    io_flags(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("figures", help="write figure datasets (CSV) and renderings (PNG)")
    sp.add_argument("--figure", choices=("all",) + FIGURES, default="all")
    sp.add_argument("--out-dir", default="figures")
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--no-png", action="store_true", help="write the CSV datasets only")
    sp.set_defaults(func=cmd_figures)
    return p


_VALUE_FLAGS = ("--t", "--alpha", "--x")
_NEGATIVE = re.compile(r"^-[\d.]")


def _attach_negative_values(argv):
    """Let ``--alpha -1.5:0.5:0.005`` through argparse by rewriting it as ``--alpha=...``."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"thuemorse {args.command}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ResourceError) as exc:
        print(f"thuemorse {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
