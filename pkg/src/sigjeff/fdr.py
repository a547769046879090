"""Permutation-based FDR estimates for the ranked pairs.

For each cutoff ``c`` the number of observed pairs with ``m > c`` is
compared with the median (and 90th percentile) of the same count across
permutations, scaled by an estimate of the null proportion ``pi0``.
Only genuine pairs enter; an odd-dimension singleton is ignored because
its one-variable statistic is not on the same scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .permutation import PermutationResult

FDR_COLUMNS = ("cutoff", "n_called", "median_null_called", "p90_null_called",
               "pi0", "fdr_median", "fdr_p90")


def _nearest_rank(sorted_values: np.ndarray, q: float, axis: int = 0):
    """Nearest-rank percentile ``q`` in (0, 100] along a sorted axis."""
    n = sorted_values.shape[axis]
    k = max(1, math.ceil(q / 100.0 * n)) - 1
    return np.take(sorted_values, k, axis=axis)


def estimate_pi0(observed_stats, null_stats) -> float:
    """Estimate the proportion of true-null pairs.

    ``q50`` is the median of all permuted statistics; the estimate is
    ``#{observed < q50} / (0.5 * K)`` truncated at 1, with ``K`` the
    number of pairs.
    """
    observed = np.asarray(observed_stats, dtype=float).ravel()
    null = np.asarray(null_stats, dtype=float)
    if observed.size == 0 or null.size == 0:
        raise ValueError("observed and null statistics must be non-empty")
    q50 = np.median(null)
    pi0 = np.count_nonzero(observed < q50) / (0.5 * observed.size)
    return float(min(pi0, 1.0))


@dataclass(frozen=True, eq=False)
class FdrTable:
    """One row per cutoff.

    ``fdr_median_raw`` / ``fdr_p90_raw`` keep the untruncated ratios;
    ``fdr_median`` / ``fdr_p90`` are capped at 1 for reporting.
    """

    cutoff: np.ndarray
    n_called: np.ndarray
    median_null_called: np.ndarray
    p90_null_called: np.ndarray
    pi0: float
    fdr_median_raw: np.ndarray
    fdr_p90_raw: np.ndarray

    @property
    def fdr_median(self) -> np.ndarray:
        return np.minimum(self.fdr_median_raw, 1.0)

    @property
    def fdr_p90(self) -> np.ndarray:
        return np.minimum(self.fdr_p90_raw, 1.0)

    def __len__(self) -> int:
        return len(self.cutoff)

    def rows(self):
        for k in range(len(self)):
            yield (float(self.cutoff[k]), int(self.n_called[k]),
                   float(self.median_null_called[k]), float(self.p90_null_called[k]),
                   self.pi0, float(self.fdr_median[k]), float(self.fdr_p90[k]))


def estimate_fdr(result: PermutationResult, cutoffs=None) -> FdrTable:
    """FDR table over ``cutoffs`` (default: sorted unique observed statistics)."""
    pair = result.is_pair
    observed = result.observed[pair]
    null = result.null[:, pair]
    if observed.size == 0:
        raise ValueError("no pairs to assess")
    if cutoffs is None:
        cutoffs = np.unique(observed)
    cutoffs = np.asarray(cutoffs, dtype=float).ravel()
    if cutoffs.size == 0:
        raise ValueError("cutoff list is empty")

    pi0 = estimate_pi0(observed, null)
    obs_sorted = np.sort(observed)
    n_called = observed.size - np.searchsorted(obs_sorted, cutoffs, side="right")

    null_sorted = np.sort(null, axis=1)
    # counts[p, c] = #{null[p, :] > cutoff c}
    counts = null.shape[1] - np.stack(
        [np.searchsorted(row, cutoffs, side="right") for row in null_sorted])
    counts = np.sort(counts, axis=0)
    med = _nearest_rank(counts, 50.0).astype(float)
    p90 = _nearest_rank(counts, 90.0).astype(float)

    false_med = pi0 * med
    false_p90 = pi0 * p90
    with np.errstate(divide="ignore", invalid="ignore"):
        fdr_med = np.where(n_called > 0, false_med / n_called, 0.0)
        fdr_p90 = np.where(n_called > 0, false_p90 / n_called, 0.0)
    return FdrTable(cutoff=cutoffs, n_called=n_called, median_null_called=med,
                    p90_null_called=p90, pi0=pi0, fdr_median_raw=fdr_med,
                    fdr_p90_raw=fdr_p90)
