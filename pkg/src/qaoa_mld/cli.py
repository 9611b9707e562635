"""Command-line front end: ``qaoa-mld <subcommand> ...``.

Data goes to files or standard output, diagnostics to standard error.
Exit status is 0 on success, 1 on a runtime failure and 2 on a usage error
or a malformed instance file.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .adiabatic import spectrum_trace, trotter_evolve
from .complexity import complexity_report
from .detect import DetectorKind, TrialConfig, detect_cml, detect_mmse, run_ber, run_qml
from .encoding import FORMS, ChannelInstance, encode_mimo
from .errors import InstanceFormatError
from .optimize import OptimizerConfig, minimize_fp
from .qaoa import landscape


class UsageError(Exception):
    """Bad flag values detected after parsing; reported with exit status 2."""


def parse_snr(text: str) -> tuple:
    """``a:b:step`` (both ends included when ``step`` divides ``b - a``) or ``a,b,...``."""
    try:
        if ":" in text:
            a, b, step = (float(v) for v in text.split(":"))
            if step <= 0 or b < a:
                raise ValueError
            count = int(np.floor((b - a) / step + 1e-9)) + 1
            return tuple(round(a + i * step, 12) for i in range(count))
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid SNR sweep {text!r}; use a:b:step with step > 0 or a comma list"
        ) from None


def parse_detectors(text: str) -> tuple:
    try:
        return tuple(dict.fromkeys(DetectorKind(v.strip().lower()) for v in text.split(",")))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid detector list {text!r}; choose from cml, mmse, qml"
        ) from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        value = 0
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _nonnegative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        value = -1.0
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text!r}")
    return value


def _load(path) -> ChannelInstance:
    if not Path(path).is_file():
        raise UsageError(f"instance file not found: {path}")
    return ChannelInstance.load(path)


def _emit(text: str, output) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _dumps(record) -> str:
    return json.dumps(record, indent=2) + "\n"


def _optimizer(args) -> OptimizerConfig:
    return OptimizerConfig(multistarts=args.starts, max_evals_per_start=args.max_evals,
                           seed=args.seed)


# -- subcommands -------------------------------------------------------------

def cmd_encode(args) -> int:
    inst = _load(args.instance)
    record = {form: encode_mimo(inst, form).to_dict() for form in FORMS}
    _emit(_dumps(record), args.output)
    return 0


def cmd_spectrum(args) -> int:
    trace = spectrum_trace(encode_mimo(_load(args.instance), args.form), args.grid)
    _emit(trace.to_csv(), args.output)
    summary = f"min_gap {trace.min_gap:.6f} at tau {trace.gap_location:.6f}\n"
    # keep stdout clean when it already carries the CSV
    (sys.stdout if args.output is not None else sys.stderr).write(summary)
    return 0


def cmd_trotter(args) -> int:
    model = encode_mimo(_load(args.instance), args.form)
    res = trotter_evolve(model, args.time, args.slices, args.substeps)
    record = {
        "total_time": res.total_time,
        "slices": res.slices,
        "substeps": res.trotter_substeps,
        "ground_overlap": res.ground_overlap,
    }
    _emit(_dumps(record), args.output)
    return 0


def cmd_landscape(args) -> int:
    grid = landscape(encode_mimo(_load(args.instance), args.form), points=args.grid)
    _emit(grid.to_csv(), args.output)
    return 0


def cmd_optimize(args) -> int:
    model = encode_mimo(_load(args.instance), args.form)
    res = minimize_fp(model, args.level, _optimizer(args), record_trace=False)
    record = {
        "level": args.level,
        "gammas": list(res.best_params.gammas),
        "betas": list(res.best_params.betas),
        "value": res.best_value,
        "evaluations": res.evaluations,
        "best_start": res.best_start,
    }
    _emit(_dumps(record), args.output)
    return 0


def cmd_detect(args) -> int:
    inst = _load(args.instance)
    kind = DetectorKind(args.detector)
    if kind is DetectorKind.CML:
        symbols = detect_cml(inst)
    elif kind is DetectorKind.MMSE:
        symbols = detect_mmse(inst)
    else:
        symbols = run_qml(inst, args.level, _optimizer(args), args.shots, args.seed).symbols
    _emit(json.dumps([int(v) for v in symbols], separators=(",", ":")) + "\n", args.output)
    return 0


def cmd_ber(args) -> int:
    config = TrialConfig(
        system_size=args.n,
        snr_db_list=args.snr,
        trials_per_snr=args.trials,
        qaoa_level=args.level,
        shots=args.shots,
        optimizer=_optimizer(args),
        master_seed=args.seed,
    )
    report = run_ber(config, args.detectors, workers=args.workers)
    _emit(report.to_csv(), args.output)
    if args.output is not None:
        Path(args.output).with_suffix(".json").write_text(report.metadata_json())
    return 0


def cmd_complexity(args) -> int:
    _emit(_dumps(complexity_report(args.n, args.level)), args.output)
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qaoa-mld",
        description="QAOA-based maximum-likelihood MIMO detection toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name, func, help_text, instance=True, form=None):
        p = sub.add_parser(name, help=help_text, description=help_text)
        if instance:
            p.add_argument("instance", help="channel instance JSON file")
        if form is not None:
            p.add_argument("--form", choices=FORMS, default=form,
                           help=f"Ising form of the problem Hamiltonian (default: {form})")
        p.add_argument("-o", "--output", default=None,
                       help="output file (default: standard output)")
        p.set_defaults(func=func)
        return p

    def add_qaoa_flags(p, level_default):
        p.add_argument("--level", type=_positive_int, default=level_default,
                       help="QAOA level p" + (" (default: 1)" if level_default else
                                              " (default: 1 for N <= 2, else 3)"))
        p.add_argument("--starts", type=_positive_int, default=None,
                       help="optimizer multistarts (default: 9 for p = 1, else 25)")
        p.add_argument("--max-evals", type=_positive_int, default=None,
                       help="evaluation budget per start (default: 200 p)")
        p.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")

    add("encode", cmd_encode, "Write the full and simplified Ising models as JSON.")

    p = add("spectrum", cmd_spectrum,
            "Eigenvalues of the adiabatic interpolation on a tau grid (CSV) and the minimum gap.",
            form="full")
    p.add_argument("--grid", type=_positive_int, default=201,
                   help="number of tau points in [0, 1] (default: 201)")

    p = add("trotter", cmd_trotter,
            "Trotterised adiabatic sweep; reports the ground-state overlap as JSON.",
            form="full")
    p.add_argument("--time", type=_nonnegative_float, required=True, help="total time T")
    p.add_argument("--slices", type=_positive_int, required=True, help="schedule slices p")
    p.add_argument("--substeps", type=_positive_int, default=1,
                   help="Trotter substeps r per slice (default: 1)")

    p = add("landscape", cmd_landscape,
            "Level-1 energy on a gamma x beta grid over [0, pi]^2 (CSV).", form="simplified")
    p.add_argument("--grid", type=_positive_int, default=101,
                   help="points per axis (default: 101)")

    p = add("optimize", cmd_optimize,
            "Minimise the level-p energy; writes the best angles and value as JSON.",
            form="simplified")
    add_qaoa_flags(p, 1)

    p = add("detect", cmd_detect, "Detect the transmitted symbols; prints them as JSON.")
    p.add_argument("--detector", choices=[k.value for k in DetectorKind], required=True,
                   help="detector to run")
    add_qaoa_flags(p, None)
    p.add_argument("--shots", type=_positive_int, default=1024,
                   help="measurement shots for qml (default: 1024)")

    p = add("ber", cmd_ber,
            "Monte-Carlo bit error rates (CSV); with --output also writes a sibling .json "
            "of metadata.", instance=False)
    p.add_argument("--n", type=_positive_int, required=True,
                   help="number of transmit and receive antennas")
    p.add_argument("--snr", type=parse_snr, required=True,
                   help="SNR sweep in dB: a:b:step (inclusive) or a comma list")
    p.add_argument("--trials", type=_positive_int, default=1000,
                   help="trials per SNR point (default: 1000)")
    p.add_argument("--detectors", type=parse_detectors, default=tuple(DetectorKind),
                   help="comma-separated subset of cml,mmse,qml (default: all)")
    add_qaoa_flags(p, None)
    p.add_argument("--shots", type=_positive_int, default=1024,
                   help="measurement shots per qml trial (default: 1024)")
    p.add_argument("--workers", type=_positive_int, default=1,
                   help="worker processes; results do not depend on it (default: 1)")

    p = add("complexity", cmd_complexity, "Gate, memory and optimizer cost report as JSON.",
            instance=False)
    p.add_argument("--n", type=_positive_int, required=True, help="number of qubits N")
    p.add_argument("--level", type=_positive_int, required=True, help="QAOA level p")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    try:
        return args.func(args)
    except InstanceFormatError as exc:
        print(f"{parser.prog} {args.command}: malformed instance: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
