"""Command-line pipeline: simulate -> fit -> estimate/analyze -> sweep.

Every command writes a ``<out>.manifest.json`` beside its output recording
the resolved flags, seed, tool version, and wall-clock duration.  Exit
codes: 0 success, 1 usage error, 2 data error, 3 fit failure under
``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

from . import __version__
from .analysis import (
    AnalysisError,
    PARAMETERS,
    build_report,
    fit_log_trend,
    sweep_point,
)
from .data_io import (
    FormatError,
    format_field,
    read_params,
    read_raw,
    write_params,
    write_raw,
    write_report,
)
from .estimator import FitConfig, FitError, empirical_estimates, fit_chip
from .model import ParameterError
from .presets import PRESETS, preset_truth
from .simulator import CoverageError, DesignError, RawCounts, SweepDesign, field_grid, simulate_chip
from .topology import ChimeraSpec, TopologyError, parse_chip

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_FIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_manifest(out_path, command, flags, seed, started):
    manifest = {
        "command": command,
        "flags": {k: v for k, v in flags.items() if k not in ("func", "command")},
        "seed": seed,
        "tool_version": __version__,
        "duration_s": round(time.monotonic() - started, 3),
    }
    with open(str(out_path) + ".manifest.json", "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_truth(text, spec):
    if text.startswith("preset:"):
        return preset_truth(text[len("preset:"):], spec)
    return {q: r.params for q, r in read_params(text).items()}


def _infer_spec(ids, convention):
    top = max(ids)
    n = 1
    while 8 * n * n <= top:
        n += 1
    return ChimeraSpec(grid=n, operational=frozenset(ids), vertical_low_k=(convention == "vertical-low-k"))


def cmd_simulate(args, started):
    spec = parse_chip(args.chip)
    truth = _load_truth(args.truth, spec)
    fields = field_grid(args.h_min, args.h_max, args.h_step)
    design = SweepDesign(fields=fields, samples_per_field=args.samples, seed=args.seed, label=args.label)
    operational = spec.operational if args.truth.startswith("preset:") else sorted(truth)
    counts = simulate_chip(truth, design, operational=operational)
    write_raw(counts, args.out)
    _write_manifest(args.out, "simulate", vars(args), args.seed, started)
    return EXIT_OK


def cmd_fit(args, started):
    counts = read_raw(args.infile)
    if args.qubits:
        keep = set(args.qubits)
        unknown = keep - set(counts.counts)
        if unknown:
            raise FormatError(f"qubits not in input: {sorted(unknown)}")
        counts = RawCounts(counts.h, counts.samples, {q: counts.counts[q] for q in keep})
    workers = args.workers or int(os.environ.get("QASA_WORKERS", "1"))
    config = FitConfig(n_starts=args.starts)
    results, failures = fit_chip(counts, config, workers=workers)
    spec = _infer_spec(counts.qubit_ids, args.orientation_convention)
    write_params(results, spec, args.out)
    _write_manifest(args.out, "fit", vars(args), None, started)
    if failures:
        for q, msg in sorted(failures.items()):
            print(f"fit failed for qubit {q}: {msg}", file=sys.stderr)
        if args.strict:
            return EXIT_FIT
    return EXIT_OK


def cmd_estimate(args, started):
    counts = read_raw(args.infile)
    estimates = empirical_estimates(counts, args.qubit, args.confidence)
    with open(args.out, "w", newline="\n") as fh:
        fh.write("h,mean,h_eff,ci_low,ci_high\n")
        for e in estimates:
            fh.write(
                f"{format_field(e.h)},{e.mean!r},{e.h_eff!r},{e.ci_low!r},{e.ci_high!r}\n"
            )
    _write_manifest(args.out, "estimate", vars(args), None, started)
    return EXIT_OK


def cmd_analyze(args, started):
    results = read_params(args.params)
    spec = parse_chip(args.chip)
    spec = ChimeraSpec(
        grid=spec.grid,
        operational=frozenset(results),
        vertical_low_k=(args.orientation_convention == "vertical-low-k"),
    )
    report = build_report(results, spec, bins=args.bins)
    write_report(report, args.out)
    _write_manifest(args.out, "analyze", vars(args), None, started)
    return EXIT_OK


def cmd_sweep(args, started):
    points = []
    with open(args.manifest, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header[:2]] != ["anneal_time_us", "params_file"]:
            raise FormatError(f"{args.manifest}:1: header must be 'anneal_time_us,params_file'")
        base = os.path.dirname(os.path.abspath(args.manifest))
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                t = float(row[0])
            except ValueError:
                raise FormatError(f"{args.manifest}:{line_no}: bad anneal time {row[0]!r}")
            path = row[1] if os.path.isabs(row[1]) else os.path.join(base, row[1])
            points.append(sweep_point(t, read_params(path)))
    if len({pt.anneal_time_us for pt in points}) < 2:
        raise FormatError("sweep needs >= 2 datasets with distinct anneal times")
    trend = fit_log_trend(points, args.parameter)
    with open(args.out, "w", newline="\n") as fh:
        fh.write("anneal_time_us,mean,std\n")
        for pt in points:
            fh.write(f"{pt.anneal_time_us!r},{pt.means[args.parameter]!r},{pt.stds[args.parameter]!r}\n")
        fh.write(f"trend_c0,{trend.c0!r}\n")
        fh.write(f"trend_c1,{trend.c1!r}\n")
        fh.write(f"trend_residual_rms,{trend.residual_rms!r}\n")
    _write_manifest(args.out, "sweep", vars(args), None, started)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="qasa", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate synthetic raw counts for a chip")
    p.add_argument("--chip", required=True, help="chip spec, e.g. chimera:16")
    p.add_argument("--truth", required=True,
                   help=f"params CSV path or preset:<name> ({', '.join(PRESETS)})")
    p.add_argument("--h-min", type=float, default=-1.0, help="lowest input field (default -1)")
    p.add_argument("--h-max", type=float, default=1.0, help="highest input field (default 1)")
    p.add_argument("--h-step", type=float, default=0.025, help="field grid step (default 0.025)")
    p.add_argument("--samples", type=int, default=5_000_000,
                   help="samples per field (default 5000000)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--label", default="1us", help="free-form dataset annotation (default 1us)")
    p.add_argument("--out", required=True, help="output raw CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit model parameters for every qubit in a raw CSV")
    p.add_argument("--in", dest="infile", required=True, help="input raw CSV")
    p.add_argument("--out", required=True, help="output params CSV path")
    p.add_argument("--qubits", type=int, nargs="+", help="restrict to these qubit ids")
    p.add_argument("--workers", type=int, default=0,
                   help="parallel workers (default QASA_WORKERS env or 1)")
    p.add_argument("--starts", type=int, default=4, help="multi-start count (default 4)")
    p.add_argument("--confidence", type=float, default=0.997,
                   help="CI coverage recorded in the manifest (default 0.997)")
    p.add_argument("--orientation-convention", choices=["vertical-low-k", "horizontal-low-k"],
                   default="vertical-low-k",
                   help="which intra-cell index half is vertical (default vertical-low-k)")
    p.add_argument("--strict", action="store_true", help="exit 3 if any qubit fails to fit")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("estimate", help="empirical effective-field curve for one qubit")
    p.add_argument("--in", dest="infile", required=True, help="input raw CSV")
    p.add_argument("--qubit", type=int, required=True, help="qubit id")
    p.add_argument("--confidence", type=float, default=0.997,
                   help="two-sided CI coverage (default 0.997)")
    p.add_argument("--out", required=True, help="output curve CSV path")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("analyze", help="distribution/orientation/spatial report from a params CSV")
    p.add_argument("--params", required=True, help="input params CSV")
    p.add_argument("--chip", required=True, help="chip spec, e.g. chimera:16")
    p.add_argument("--out", required=True, help="output report JSON path")
    p.add_argument("--bins", type=int, default=50, help="histogram bins (default 50)")
    p.add_argument("--orientation-convention", choices=["vertical-low-k", "horizontal-low-k"],
                   default="vertical-low-k",
                   help="which intra-cell index half is vertical (default vertical-low-k)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="trend of a parameter across anneal-time datasets")
    p.add_argument("--manifest", required=True,
                   help="CSV of anneal_time_us,params_file rows")
    p.add_argument("--parameter", choices=list(PARAMETERS), required=True)
    p.add_argument("--out", required=True, help="output trend CSV path")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        return args.func(args, started)
    except (FormatError, TopologyError, CoverageError, DesignError,
            ParameterError, FitError, AnalysisError, ValueError, OSError) as exc:
        print(f"qasa: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
