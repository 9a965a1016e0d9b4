"""``qps`` command line.

Exit codes: 0 success, 1 a verified property failed, 2 bad input
(flags, state file contents), 3 file I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .field import validate_dimension
from .io import StateFileError, format_grid, load_state, write_text
from .kirkwood import kirkwood
from .mub import mub_family
from .operators import DEFAULT_TOL
from .probe import ProbeConfig, SimulatedProbes, reconstruct_wigner
from .verify import format_report, run_suite
from .wigner import wigner_transform

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _dimension(text: str):
    try:
        return validate_dimension(int(text))
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _nonneg(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qps", description="Discrete Wigner / Kirkwood phase-space tools for prime dimension.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def grid_command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("state", help="state file (JSON)")
        p.add_argument("-o", "--output", default="-", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--tol", type=_positive, default=DEFAULT_TOL, help="density-matrix validation tolerance")
        return p

    grid_command("wigner", "Wigner grid W(q, p) of a state")
    grid_command("kirkwood", "Kirkwood grid K(p, q) of a state")
    rec = grid_command("reconstruct", "Wigner grid rebuilt from simulated two-probe correlations")
    rec.add_argument("--eps1", type=_nonneg, default=1e-3, help="probe-1 coupling (0 = exact limit)")
    rec.add_argument("--eps2", type=_positive, default=1.0, help="probe-2 coupling")
    rec.add_argument("--sigma2", type=_positive, default=1.0, help="probe-1 momentum variance")
    rec.add_argument("--single-eps", type=_positive, default=1.0, help="coupling of the single-probe runs")
    rec.add_argument("--extrapolate", action="store_true",
                     help="Richardson-extrapolate with a second run at eps1/2")
    rec.add_argument("--report", help="report path (default: OUTPUT.report.json, or stderr for stdout)")

    ver = sub.add_parser("verify", help="run every property suite")
    ver.add_argument("--n", type=_dimension, required=True)
    ver.add_argument("--trials", type=_positive_int, default=20)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--tol", type=_positive, default=DEFAULT_TOL)

    mub = sub.add_parser("mub", help="emit all mutually unbiased basis states")
    mub.add_argument("--n", type=_dimension, required=True)
    mub.add_argument("-o", "--output", default="-")
    return parser


def cmd_wigner(args, out) -> int:
    rho = load_state(args.state, args.tol)
    write_text(format_grid(wigner_transform(rho), args.format), args.output, out)
    return EXIT_OK


def cmd_kirkwood(args, out) -> int:
    rho = load_state(args.state, args.tol)
    write_text(format_grid(kirkwood(rho), args.format), args.output, out)
    return EXIT_OK


def cmd_reconstruct(args, out) -> int:
    rho = load_state(args.state, args.tol)
    config = ProbeConfig(args.eps1, args.eps2, args.sigma2)
    rec = reconstruct_wigner(SimulatedProbes(rho), config, extrapolate=args.extrapolate,
                             single_eps=args.single_eps)
    dev = np.abs(rec.values - wigner_transform(rho).values)
    report = {
        "dim": rho.dim.n,
        "eps1": config.eps1,
        "eps2": config.eps2,
        "sigma2": config.sigma_p1_sq,
        "single_eps": args.single_eps,
        "extrapolate": bool(args.extrapolate),
        "max_abs_dev": float(dev.max()),
        "mean_abs_dev": float(dev.mean()),
    }
    write_text(format_grid(rec, args.format), args.output, out)
    text = json.dumps(report, indent=2) + "\n"
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    elif args.output == "-":
        sys.stderr.write(text)
    else:
        Path(str(args.output) + ".report.json").write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    results = run_suite(args.n, args.trials, args.seed, args.tol)
    out.write(format_report(args.n, args.trials, args.seed, results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_mub(args, out) -> int:
    fam = mub_family(args.n)
    bases = []
    for b in fam.indices:
        states = [{"m": m, "amplitudes": [[float(z.real), float(z.imag)] for z in fam.state(m, b)]}
                  for m in range(args.n.n)]
        bases.append({"basis": b.label, "states": states})
    write_text(json.dumps({"dim": args.n.n, "bases": bases}) + "\n", args.output, out)
    return EXIT_OK


COMMANDS = {
    "wigner": cmd_wigner,
    "kirkwood": cmd_kirkwood,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
    "mub": cmd_mub,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except StateFileError as exc:
        print(f"qps: invalid state ({exc.invariant}): {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"qps: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"qps: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
