"""Command-line entry point: ``sigjeff {run,simulate,compare,fdr}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from .errors import SigJEffError
from .evaluate import fdp_curve, lda_error, true_nonnull_curve
from .fdr import estimate_fdr
from .io import load_csv, write_csv
from .pipeline import (PipelineConfig, load_result, run_pipeline, write_curves_csv,
                       write_fdr_csv, write_report)
from .simdata import DESIGNS, GroundTruth, SimSpec, generate

log = logging.getLogger("sigjeff")


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="data CSV with a header row")
    p.add_argument("--labels", default="label",
                   help="label column name, or a file with one label per line")
    p.add_argument("--label-map", help="e.g. 'mutant=+1,wildtype=-1'")
    p.add_argument("--permutations", type=int, default=1000)
    p.add_argument("--pvalue", choices=("empirical", "gaussian", "robust"),
                   default="empirical")
    p.add_argument("--d0", type=int, default=200, help="active-set size for fast partition")
    p.add_argument("--exhaustive-limit", type=int, default=1000,
                   help="largest d partitioned exhaustively")
    p.add_argument("--sd-threshold", type=float, default=0.0,
                   help="drop variables with overall sd <= this (0 disables)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--from-manifest", help="rerun with the config stored in a manifest.json")


def _config(args) -> PipelineConfig:
    if args.from_manifest:
        manifest = json.loads(Path(args.from_manifest).read_text(encoding="utf-8"))
        return PipelineConfig.from_manifest(manifest, workers=args.workers)
    if not args.input:
        raise SystemExit("--input is required unless --from-manifest is given")
    names = {f.name for f in fields(PipelineConfig)}
    return PipelineConfig(**{k: v for k, v in vars(args).items() if k in names})


def cmd_run(args) -> None:
    report = run_pipeline(_config(args))
    write_report(report, args.out_dir)


def cmd_compare(args) -> None:
    report = run_pipeline(_config(args))
    out = Path(args.out_dir)
    write_report(report, out, compare=True)
    sig, marg = report.variable_ranking, report.marginal_ranking
    max_k = min(args.max_k, sig.size)
    cols = {"overlap": np.array([np.intersect1d(sig[:k], marg[:k]).size
                                 for k in range(1, max_k + 1)])}
    if args.truth:
        idx = json.loads(Path(args.truth).read_text(encoding="utf-8"))
        mask = np.zeros(report.data.d, dtype=bool)
        mask[idx] = True
        truth = GroundTruth(mask)
        cols["sigjeff_true_nonnull"] = true_nonnull_curve(sig, truth, max_k)
        cols["marginal_true_nonnull"] = true_nonnull_curve(marg, truth, max_k)
        cols["sigjeff_fdp"] = fdp_curve(sig, truth, max_k)
        cols["marginal_fdp"] = fdp_curve(marg, truth, max_k)
    if args.test_input:
        test = load_csv(args.test_input, report.config.labels, report.config.label_map)
        cols["sigjeff_lda_error"] = np.array(
            [lda_error(report.data, test, sig[:k]) for k in range(1, max_k + 1)])
        cols["marginal_lda_error"] = np.array(
            [lda_error(report.data, test, marg[:k]) for k in range(1, max_k + 1)])
    write_curves_csv(out / "comparison.csv", cols)


def cmd_simulate(args) -> None:
    spec = SimSpec(design=args.design, d=args.d, n_per_class=args.n_per_class,
                   rho=args.rho, signal=args.signal, seed=args.seed,
                   squared_signal=args.squared_signal)
    data, truth = generate(spec)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, data)
    truth_path = Path(args.truth) if args.truth else out.with_suffix(".truth.json")
    truth_path.write_text(json.dumps(truth.indices.tolist()) + "\n", encoding="utf-8")


def cmd_fdr(args) -> None:
    result = load_result(args.run_dir)
    cutoffs = None
    if args.cutoffs:
        cutoffs = [float(c) for c in args.cutoffs.split(",") if c.strip()]
    table = estimate_fdr(result, cutoffs)
    write_fdr_csv(table, args.out or Path(args.run_dir) / "fdr.csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigjeff", description="Permutation significance of joint pairwise effects.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="rank variable pairs and write a report bundle")
    _add_run_args(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="run and compare against the marginal t ranking")
    _add_run_args(p)
    p.add_argument("--truth", help="JSON list of true non-null variable indices")
    p.add_argument("--test-input", help="test CSV for LDA misclassification curves")
    p.add_argument("--max-k", type=int, default=50)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="generate a simulation data set")
    p.add_argument("--design", choices=DESIGNS, default="ar1")
    p.add_argument("--d", type=int, default=500)
    p.add_argument("--n-per-class", type=int, default=50)
    p.add_argument("--rho", type=float, default=-0.8)
    p.add_argument("--signal", type=float, default=2.5)
    p.add_argument("--squared-signal", action="store_true",
                   help="calibrate the squared Mahalanobis distance to --signal")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output data CSV")
    p.add_argument("--truth", help="truth JSON path (default: <out>.truth.json)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fdr", help="recompute the FDR table of a finished run")
    p.add_argument("--run-dir", required=True)
    p.add_argument("--cutoffs", help="comma-separated cutoffs (default: observed values)")
    p.add_argument("--out", help="output CSV (default: <run-dir>/fdr.csv)")
    p.set_defaults(func=cmd_fdr)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (SigJEffError, ValueError, OSError) as exc:
        print(f"sigjeff {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
