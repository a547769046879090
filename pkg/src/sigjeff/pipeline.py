"""End-to-end run: prescreen, partition, permute, rank, FDR, report files."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SigJEffError
from .fdr import FDR_COLUMNS, FdrTable, estimate_fdr
from .io import load_csv
from .marginal import prescreen_by_sd, rank_marginal
from .partition import Partition, partition
from .permutation import (PermutationConfig, PermutationResult, RankedList,
                          _pvalues, rank_pairs, run_permutations)
from .stats import LabeledMatrix, TwoSampleSummary, summarize

log = logging.getLogger(__name__)

# Fields that change scheduling only, never results; kept out of the manifest.
_RUNTIME_ONLY = ("workers",)


class StageError(SigJEffError):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.__cause__ = cause


@dataclass(frozen=True)
class PipelineConfig:
    input: str | None = None
    labels: str = "label"
    label_map: str | None = None
    permutations: int = 1000
    pvalue: str = "empirical"
    d0: int = 200
    exhaustive_limit: int = 1000
    sd_threshold: float = 0.0
    seed: int = 0
    workers: int = 1

    @classmethod
    def from_manifest(cls, manifest: dict, **overrides) -> "PipelineConfig":
        names = {f.name for f in fields(cls)}
        cfg = {k: v for k, v in manifest["config"].items() if k in names}
        cfg.update(overrides)
        return cls(**cfg)


@dataclass(frozen=True, eq=False)
class Report:
    """Everything a run produces.  Variable indices are in input coordinates."""

    config: PipelineConfig
    data: LabeledMatrix
    kept: np.ndarray
    summary: TwoSampleSummary
    partition: Partition
    result: PermutationResult
    ranked: RankedList
    fdr: FdrTable
    marginal: np.ndarray

    @property
    def variable_ranking(self) -> np.ndarray:
        """SigJEff variable ranking in input column indices."""
        return self.kept[self.ranked.variables]

    @property
    def marginal_ranking(self) -> np.ndarray:
        return self.kept[self.marginal]

    def manifest(self) -> dict:
        cfg = {k: v for k, v in asdict(self.config).items() if k not in _RUNTIME_ONLY}
        part = self.partition
        return {
            "package": "sigjeff",
            "version": __version__,
            "config": cfg,
            "n": self.data.n,
            "n1": self.data.n1,
            "n2": self.data.n2,
            "d_input": self.data.d,
            "d_tested": int(self.kept.size),
            "partition": {
                "mode": part.mode,
                "d0": part.d0,
                "n_pairs": len(part),
                "singleton": None if part.leftover is None else int(self.kept[part.leftover]),
                "n_evaluated": part.n_evaluated,
                "peak_active_pairs": part.peak_active_pairs,
            },
            "pvalue_method": self.result.method,
            "n_fallback": int(self.result.fallback.sum()),
            "pi0": self.fdr.pi0,
        }


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except Exception as exc:  # noqa: BLE001 - re-raised with stage context
        raise StageError(name, exc) from exc


def run_pipeline(config: PipelineConfig, data: LabeledMatrix | None = None) -> Report:
    """Run every stage on ``data`` (or on ``config.input`` when omitted)."""
    if data is None:
        if config.input is None:
            raise ValueError("no data given and config.input is unset")
        data = _stage("load", load_csv, config.input, config.labels, config.label_map)
    if config.sd_threshold > 0:
        screened, kept = _stage("prescreen", prescreen_by_sd, data, config.sd_threshold)
        log.info("prescreen kept %d of %d variables", kept.size, data.d)
    else:
        screened, kept = data, np.arange(data.d)
    summary = _stage("summarize", summarize, screened)
    part = _stage("partition", partition, summary, config.d0, config.exhaustive_limit)
    log.info("%s partition: %d pairs, %d statistics evaluated",
             part.mode, len(part), part.n_evaluated)
    perm_cfg = _stage("permutation", PermutationConfig, config.permutations,
                      config.pvalue, config.seed, config.workers)
    result = _stage("permutation", run_permutations, screened, part, perm_cfg)
    ranked = rank_pairs(result)
    table = _stage("fdr", estimate_fdr, result)
    return Report(config=config, data=data, kept=kept, summary=summary,
                  partition=part, result=result, ranked=ranked, fdr=table,
                  marginal=rank_marginal(summary))


# ------------------------------------------------------------------ #
# report files
# ------------------------------------------------------------------ #

RANKED_COLUMNS = ("rank", "unit", "index_i", "index_j", "name_i", "name_j", "m",
                  "p_value", "null_mean", "null_std", "null_median", "null_mad",
                  "fallback")


def _writer(path: Path):
    fh = open(path, "w", newline="", encoding="utf-8")
    return fh, csv.writer(fh, lineterminator="\n")


def write_fdr_csv(table: FdrTable, path) -> None:
    fh, w = _writer(Path(path))
    with fh:
        w.writerow(FDR_COLUMNS)
        for row in table.rows():
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])


def write_curves_csv(path, columns: dict[str, np.ndarray]) -> None:
    """Columns of equal length with a leading 1-based ``k``."""
    fh, w = _writer(Path(path))
    length = len(next(iter(columns.values())))
    with fh:
        w.writerow(["k", *columns])
        for k in range(length):
            w.writerow([k + 1, *(np.asarray(c)[k].item() for c in columns.values())])


def write_report(report: Report, out_dir, compare: bool = False) -> list[Path]:
    """Write the report bundle into ``out_dir``; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    res, ranked, kept, names = report.result, report.ranked, report.kept, report.data.names
    written = []

    path = out / "ranked_pairs.csv"
    stats = (res.null_mean, res.null_std, res.null_median, res.null_mad)
    fh, w = _writer(path)
    with fh:
        w.writerow(RANKED_COLUMNS)
        for r, u in enumerate(ranked.order):
            gi, gj = int(kept[res.i[u]]), int(kept[res.j[u]])
            w.writerow([r + 1, int(u), gi, gj, names[gi], names[gj],
                        repr(float(res.observed[u])), repr(float(res.p_values[u])),
                        *(repr(float(s[u])) for s in stats), int(res.fallback[u])])
    written.append(path)

    path = out / "variable_ranking.csv"
    fh, w = _writer(path)
    with fh:
        w.writerow(["rank", "index", "name"])
        for r, v in enumerate(report.variable_ranking):
            w.writerow([r + 1, int(v), names[v]])
    written.append(path)

    path = out / "fdr.csv"
    write_fdr_csv(report.fdr, path)
    written.append(path)

    path = out / "null_stats.npy"
    np.save(path, np.ascontiguousarray(res.null))
    written.append(path)

    if compare:
        path = out / "marginal_ranking.csv"
        fh, w = _writer(path)
        with fh:
            w.writerow(["rank", "index", "name", "t"])
            for r, v in enumerate(report.marginal):
                g = int(kept[v])
                w.writerow([r + 1, g, names[g], repr(float(report.summary.t[v]))])
        written.append(path)

    path = out / "manifest.json"
    path.write_text(json.dumps(report.manifest(), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    written.append(path)
    return written


def load_result(run_dir) -> PermutationResult:
    """Rebuild a :class:`PermutationResult` from a written report bundle."""
    run_dir = Path(run_dir)
    manifest = json.loads((run_dir / "manifest.json").read_text(encoding="utf-8"))
    null = np.load(run_dir / "null_stats.npy")
    K = null.shape[1]
    i = np.empty(K, dtype=np.intp)
    j = np.empty(K, dtype=np.intp)
    observed = np.empty(K)
    with open(run_dir / "ranked_pairs.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            u = int(row["unit"])
            i[u], j[u], observed[u] = int(row["index_i"]), int(row["index_j"]), float(row["m"])
    method = manifest["pvalue_method"]
    p, fb = _pvalues(observed, null, method)
    return PermutationResult(i=i, j=j, observed=observed, null=null,
                             p_values=p, fallback=fb, method=method)
