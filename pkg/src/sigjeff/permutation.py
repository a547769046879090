"""Label-permutation null distributions and p-values for partitioned pairs.

Only the pairs of a fixed :class:`~sigjeff.partition.Partition` are
re-evaluated under each permutation; the permuted data are never
re-partitioned.

Per-permutation work is ``O(n1 * d)``: the data are centred once, the
label-invariant cross-products ``sum_k x_ki x_kj`` are computed once per
pair, and each permutation only needs the class +1 column sums.  The
within-class covariance then follows from

    (n - 2) s_ij = sum_k x_ki x_kj - n1 mu1_i mu1_j - n2 mu2_i mu2_j.

Reproducibility
~~~~~~~~~~~~~~~
Permutation ``p`` draws its shuffle from its own generator seeded with
``SeedSequence(seed, spawn_key=(p,))``.  Work is cut into fixed-size
blocks of permutations that do not depend on ``workers``, so any worker
count yields bit-identical results.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .partition import Partition
from .stats import LabeledMatrix, check_finite, mahalanobis_1d, mahalanobis_2x2

PVALUE_METHODS = ("empirical", "gaussian", "robust_gaussian")
MAD_SCALE = 1.4826
BLOCK_SIZE = 64


@dataclass(frozen=True)
class PermutationConfig:
    n_permutations: int = 1000
    pvalue_method: str = "empirical"
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.n_permutations < 1:
            raise ValueError("n_permutations must be >= 1")
        method = {"robust": "robust_gaussian"}.get(self.pvalue_method,
                                                   self.pvalue_method)
        if method not in PVALUE_METHODS:
            raise ValueError(f"unknown p-value method {self.pvalue_method!r}")
        object.__setattr__(self, "pvalue_method", method)
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True, eq=False)
class PermutationResult:
    """Observed statistics, null samples and p-values for every tested unit.

    Units are the partition pairs in promotion order followed by the odd
    leftover singleton, if any (``i == j``).  ``null`` has shape
    ``(n_permutations, n_units)``.
    """

    i: np.ndarray
    j: np.ndarray
    observed: np.ndarray
    null: np.ndarray
    p_values: np.ndarray
    fallback: np.ndarray
    method: str

    @property
    def n_permutations(self) -> int:
        return self.null.shape[0]

    @property
    def is_pair(self) -> np.ndarray:
        return self.i != self.j

    @property
    def null_mean(self) -> np.ndarray:
        return self.null.mean(axis=0)

    @property
    def null_std(self) -> np.ndarray:
        return self.null.std(axis=0, ddof=1) if self.n_permutations > 1 else \
            np.zeros(self.null.shape[1])

    @property
    def null_median(self) -> np.ndarray:
        return np.median(self.null, axis=0)

    @property
    def null_mad(self) -> np.ndarray:
        """Median absolute deviation, scaled to estimate a normal sd."""
        med = np.median(self.null, axis=0)
        return MAD_SCALE * np.median(np.abs(self.null - med), axis=0)

    def with_method(self, method: str) -> "PermutationResult":
        """Same null sample, p-values recomputed with another estimator."""
        method = PermutationConfig(pvalue_method=method).pvalue_method
        p, fb = _pvalues(self.observed, self.null, method)
        return PermutationResult(self.i, self.j, self.observed, self.null,
                                 p, fb, method)


# ------------------------------------------------------------------ #
# p-value estimators
# ------------------------------------------------------------------ #


def pvalue_empirical(observed: float, null_sample) -> float:
    """Fraction of null draws strictly greater than ``observed``."""
    null_sample = np.asarray(null_sample, dtype=float)
    if null_sample.size == 0:
        raise ValueError("null sample is empty")
    return float(np.count_nonzero(null_sample > observed) / null_sample.size)


def pvalue_gaussian(observed: float, null_sample, robust: bool = False) -> float:
    """Upper-tail normal approximation ``1 - Phi(z)``.

    ``z`` standardises ``observed`` by the null (mean, sd) or, with
    ``robust=True``, by (median, 1.4826 * MAD).  A zero scale falls back
    to :func:`pvalue_empirical`.
    """
    null_sample = np.asarray(null_sample, dtype=float)
    if null_sample.size < 2:
        raise ValueError("Gaussian fit needs at least 2 null draws")
    p, _ = _pvalues(np.array([observed]), null_sample[:, None],
                    "robust_gaussian" if robust else "gaussian")
    return float(p[0])


def _pvalues(observed: np.ndarray, null: np.ndarray, method: str):
    P = null.shape[0]
    empirical = np.count_nonzero(null > observed[None, :], axis=0) / P
    if method == "empirical":
        return empirical, np.zeros(observed.shape, dtype=bool)
    if method == "gaussian":
        center = null.mean(axis=0)
        scale = null.std(axis=0, ddof=1) if P > 1 else np.zeros_like(center)
    else:
        center = np.median(null, axis=0)
        scale = MAD_SCALE * np.median(np.abs(null - center), axis=0)
    fallback = ~(scale > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (observed - center) / scale
    p = np.where(fallback, empirical, norm.sf(z))
    return p, fallback


# ------------------------------------------------------------------ #
# permutation engine
# ------------------------------------------------------------------ #


class _Moments:
    """Label-invariant pieces needed to evaluate units under any labelling."""

    def __init__(self, data: LabeledMatrix, i: np.ndarray, j: np.ndarray):
        cols, inv = np.unique(np.concatenate([i, j]), return_inverse=True)
        X = data.values[:, cols]
        X = X - X.mean(axis=0)
        self.X = np.ascontiguousarray(X)
        self.total = X.sum(axis=0)
        self.a = inv[: i.size]
        self.b = inv[i.size:]
        XT = np.ascontiguousarray(X.T)
        self.sq = (XT * XT).sum(axis=1)
        self.cross = (XT[self.a] * XT[self.b]).sum(axis=1)
        self.n = data.n
        self.n1 = data.n1
        self.is_pair = i != j

    def stats(self, class1_sums: np.ndarray) -> np.ndarray:
        """Statistics for a batch of labellings given class +1 column sums."""
        n, n1 = self.n, self.n1
        n2 = n - n1
        mu1 = class1_sums / n1
        mu2 = (self.total - class1_sums) / n2
        delta = mu1 - mu2
        var = (self.sq - n1 * mu1 * mu1 - n2 * mu2 * mu2) / (n - 2)
        a, b = self.a, self.b
        cov = (self.cross - n1 * mu1[:, a] * mu1[:, b]
               - n2 * mu2[:, a] * mu2[:, b]) / (n - 2)
        m = mahalanobis_2x2(delta[:, a], delta[:, b], var[:, a], var[:, b], cov)
        if not np.all(self.is_pair):
            single = mahalanobis_1d(delta[:, a], var[:, a])
            m = np.where(self.is_pair, m, single)
        return m

    def class1_sums(self, positive: np.ndarray) -> np.ndarray:
        return self.X[positive].sum(axis=0)


def _permutation_rng(seed: int, p: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(p,)))


def run_permutations(data: LabeledMatrix, partition: Partition,
                     config: PermutationConfig = PermutationConfig()
                     ) -> PermutationResult:
    """Build per-unit null distributions by shuffling the class labels.

    Each shuffle preserves the class sizes.  Permutations that need the
    singular-block ridge are kept, never skipped.
    """
    if partition.d != data.d:
        raise ValueError(f"partition covers {partition.d} variables, "
                         f"data has {data.d}")
    i, j = partition.units()
    mom = _Moments(data, i, j)
    labels = np.asarray(data.labels)
    P = config.n_permutations

    observed = mom.stats(mom.class1_sums(labels == 1)[None, :])[0]
    check_finite(observed, i, j)

    def block(start: int) -> np.ndarray:
        stop = min(start + BLOCK_SIZE, P)
        sums = np.empty((stop - start, mom.X.shape[1]))
        for r, p in enumerate(range(start, stop)):
            shuffled = _permutation_rng(config.seed, p).permutation(labels)
            sums[r] = mom.class1_sums(shuffled == 1)
        m = mom.stats(sums)
        if not np.all(np.isfinite(m)):
            row = int(np.flatnonzero(~np.all(np.isfinite(m), axis=1))[0])
            check_finite(m[row], i, j, permutation=start + row)
        return m

    starts = range(0, P, BLOCK_SIZE)
    if config.workers == 1 or len(starts) == 1:
        blocks = [block(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            blocks = list(pool.map(block, starts))
    null = np.concatenate(blocks, axis=0)

    p_values, fallback = _pvalues(observed, null, config.pvalue_method)
    for a in (i, j, observed, null, p_values, fallback):
        a.setflags(write=False)
    return PermutationResult(i=i, j=j, observed=observed, null=null,
                             p_values=p_values, fallback=fallback,
                             method=config.pvalue_method)


# ------------------------------------------------------------------ #
# ranking
# ------------------------------------------------------------------ #


@dataclass(frozen=True, eq=False)
class RankedList:
    """Units sorted by ascending p-value.

    ``order`` indexes into the :class:`PermutationResult` units.
    ``variables`` lists each ranked unit's variables in pair order.
    """

    order: np.ndarray
    i: np.ndarray
    j: np.ndarray
    observed: np.ndarray
    p_values: np.ndarray
    variables: np.ndarray

    def __len__(self) -> int:
        return len(self.order)


def rank_pairs(result: PermutationResult) -> RankedList:
    """Sort by (p ascending, observed m descending, (i, j) lexicographic)."""
    order = np.lexsort((result.j, result.i, -result.observed, result.p_values))
    i, j = result.i[order], result.j[order]
    variables = np.column_stack([i, j]).ravel()
    keep = np.ones(variables.size, dtype=bool)
    keep[1::2] = i != j
    return RankedList(order=order, i=i, j=j, observed=result.observed[order],
                      p_values=result.p_values[order], variables=variables[keep])
