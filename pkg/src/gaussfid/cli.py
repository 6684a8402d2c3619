"""Command-line front end.

Exit codes: 0 ok, 2 usage or domain error, 3 unsupported closed-form regime,
4 I/O failure, 5 inconsistent benchmark statistics, 6 state estimation failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import bench, figures, ingest, oracles
from .errors import (
    DomainError,
    GaussfidError,
    IndeterminateGainError,
    InconsistentStatisticsError,
    TruncationError,
)
from .fidelity import classical_fidelity, quantum_fidelity
from .state import GaussianState, is_physical, squeezing_parameter

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3
EXIT_IO = 4
EXIT_INCONSISTENT = 5
EXIT_ESTIMATION = 6

STATS_HEADER = "mean_plus,mean_minus,var_plus,var_minus"
REPORT_TOL = 1e-3


class UsageError(Exception):
    pass


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _fix(x: float) -> str:
    return f"{x:.9f}"


def _sig(x: float) -> str:
    return format(x, ".9g")


# -- fidelity -----------------------------------------------------------------


def _state_from_args(args, k: int) -> GaussianState:
    iso = getattr(args, f"v{k}")
    plus, minus = getattr(args, f"v{k}_plus"), getattr(args, f"v{k}_minus")
    if iso is not None:
        if plus is not None or minus is not None:
            raise UsageError(f"--v{k} cannot be combined with --v{k}-plus/--v{k}-minus")
        plus = minus = iso
    if plus is None or minus is None:
        raise UsageError(f"state {k} needs --v{k} or both --v{k}-plus and --v{k}-minus")
    return GaussianState(
        plus, minus, getattr(args, f"phi{k}"), getattr(args, f"d{k}_re"), getattr(args, f"d{k}_im")
    )


def cmd_fidelity(args, out) -> int:
    s1, s2 = _state_from_args(args, 1), _state_from_args(args, 2)
    kinds = ["quantum", "classical"] if args.kind == "both" else [args.kind]
    lines = []
    for kind in kinds:
        if kind == "quantum":
            result = quantum_fidelity(s1, s2)
            if not result.supported and not args.oracle:
                print(
                    "error: no closed form for separated states with misaligned axes; "
                    "rerun with --oracle for the Fock-basis value",
                    file=sys.stderr,
                )
                return EXIT_UNSUPPORTED
            oracle = oracles.fock_fidelity(s1, s2).value if args.oracle else None
        else:
            result = classical_fidelity(s1, s2)
            oracle = oracles.classical_fidelity_grid(s1, s2) if args.oracle else None
        text = _fix(result.value) if result.supported else "unsupported"
        if oracle is not None:
            text += f" oracle={_fix(oracle)}"
        lines.append(text)
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


# -- figure -------------------------------------------------------------------


def cmd_figure(args, out) -> int:
    spec = figures.FigureSpec(args.figure_id, args.start, args.stop, args.steps)
    text = figures.to_csv(figures.sweep(spec))
    if args.out is None or args.out == "-":
        out.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# -- bench --------------------------------------------------------------------


def read_stats(path) -> bench.QuadratureStats:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.rstrip("\r") for ln in text.split("\n") if ln.strip()]
    if not lines or lines[0] != STATS_HEADER:
        raise ValueError(f"{path}:1: expected header {STATS_HEADER!r}")
    if len(lines) != 2:
        raise ValueError(f"{path}: expected exactly one data row, got {len(lines) - 1}")
    fields = lines[1].split(",")
    if len(fields) != 4:
        raise ValueError(f"{path}:2: expected 4 fields, got {len(fields)}")
    try:
        values = [float(f) for f in fields]
    except ValueError:
        raise ValueError(f"{path}:2: non-numeric field") from None
    if not all(math.isfinite(v) for v in values):
        raise ValueError(f"{path}:2: non-finite field")
    return bench.QuadratureStats(*values)


def write_stats(stats: bench.QuadratureStats, fh) -> None:
    fh.write(STATS_HEADER + "\n")
    fh.write(
        ",".join(_sig(v) for v in (stats.mean_plus, stats.mean_minus, stats.var_plus, stats.var_minus))
        + "\n"
    )


def cmd_bench(args, out) -> int:
    try:
        inp, outp = read_stats(args.input_stats), read_stats(args.output_stats)
    except OSError as exc:
        print(f"error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        tf = bench.estimate_transfer(inp, outp)
    except (IndeterminateGainError, InconsistentStatisticsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    naive = bench.naive_fidelity(inp.to_state(), outp.to_state())
    reference = bench.reference_fidelity(tf)
    rows = [
        ("gain_plus", _sig(tf.gain_plus)),
        ("gain_minus", _sig(tf.gain_minus)),
        ("noise_plus", _sig(tf.noise_plus)),
        ("noise_minus", _sig(tf.noise_minus)),
        ("naive_fidelity", _fix(naive)),
        ("reference_fidelity", _fix(reference)),
    ]
    for key, value in rows:
        out.write(f"{key} {value}\n")
    if abs(naive - reference) > REPORT_TOL:
        out.write("note: naive and reference fidelities differ; compare experiments by the reference value\n")
    return EXIT_OK


# -- estimate / sample / simulate ---------------------------------------------


def cmd_estimate(args, out) -> int:
    try:
        est = ingest.estimate_state(ingest.load_samples(args.samples))
    except GaussfidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    s = est.state
    rows = [
        ("v_plus", _sig(s.v_plus)),
        ("v_minus", _sig(s.v_minus)),
        ("phi", _sig(s.phi)),
        ("delta_re", _sig(s.delta_re)),
        ("delta_im", _sig(s.delta_im)),
        ("purity", _sig(1.0 / math.sqrt(s.breadth))),
        ("physical", "yes" if is_physical(s) else "no"),
        ("r", _sig(squeezing_parameter(s))),
        ("residual", _sig(est.residual)),
    ]
    for key, value in rows:
        out.write(f"{key} {value}\n")
    return EXIT_OK


def cmd_sample(args, out) -> int:
    state = GaussianState(args.v_plus, args.v_minus, args.phi, args.d_re, args.d_im)
    if args.angles < 1 or args.per_angle < 2:
        raise UsageError("--angles must be >= 1 and --per-angle >= 2")
    angles = np.linspace(0.0, math.pi, args.angles, endpoint=False)
    samples = ingest.sample_quadratures(state, angles, args.per_angle, np.random.default_rng(args.seed))
    try:
        ingest.save_samples(samples, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    state = GaussianState(args.v, args.v, 0.0, args.d_re, args.d_im)
    stats = bench.simulate_heterodyne_teleport(state, args.n_samples, args.seed)
    write_stats(stats, out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussfid", description="Gaussian-state fidelity toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", help="fidelity between two Gaussian states")
    for k in (1, 2):
        p.add_argument(f"--v{k}", type=_finite, help=f"isotropic variance of state {k}")
        p.add_argument(f"--v{k}-plus", type=_finite)
        p.add_argument(f"--v{k}-minus", type=_finite)
        p.add_argument(f"--phi{k}", type=_finite, default=0.0)
        p.add_argument(f"--d{k}-re", type=_finite, default=0.0)
        p.add_argument(f"--d{k}-im", type=_finite, default=0.0)
    p.add_argument("--kind", choices=("quantum", "classical", "both"), default="quantum")
    p.add_argument("--oracle", action="store_true", help="also print the brute-force oracle value")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("figure", help="write a figure sweep as CSV")
    p.add_argument("figure_id", choices=figures.FIGURE_IDS)
    p.add_argument("--start", type=_finite)
    p.add_argument("--stop", type=_finite)
    p.add_argument("--steps", type=int)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("bench", help="compare naive and reference fidelity from measured stats")
    p.add_argument("input_stats")
    p.add_argument("output_stats")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("estimate", help="estimate a Gaussian state from homodyne samples")
    p.add_argument("samples")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sample", help="write synthetic homodyne samples of a state")
    p.add_argument("--v-plus", type=_finite, required=True)
    p.add_argument("--v-minus", type=_finite, required=True)
    p.add_argument("--phi", type=_finite, default=0.0)
    p.add_argument("--d-re", type=_finite, default=0.0)
    p.add_argument("--d-im", type=_finite, default=0.0)
    p.add_argument("--angles", type=int, default=12)
    p.add_argument("--per-angle", type=int, default=10_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("simulate", help="Monte-Carlo measure-and-prepare channel; prints output stats")
    p.add_argument("--v", type=_finite, default=1.0, help="input thermal variance")
    p.add_argument("--d-re", type=_finite, default=0.0)
    p.add_argument("--d-im", type=_finite, default=0.0)
    p.add_argument("--n-samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TruncationError as exc:
        print(f"error: oracle failed: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
