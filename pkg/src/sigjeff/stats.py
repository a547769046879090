"""Two-sample summaries and the two-variable Mahalanobis statistic.

Everything downstream (partitioning, permutation, FDR) is built on the
squared Mahalanobis distance between the two class means restricted to a
pair of variables::

    m(i, j) = delta_S' Sigma_SS^{-1} delta_S,   S = (i, j)

where ``delta`` is the class-1 minus class-2 mean difference and ``Sigma``
the pooled within-class covariance (divisor ``n - 2``).  The full ``d x d``
covariance is never formed; 2x2 blocks are assembled on demand from the
class-centred columns, so memory stays ``O(n d)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import IllPosedInputError, NumericalError

# A 2x2 block is treated as singular when det <= DET_RTOL * s_ii * s_jj.
DET_RTOL = 1e-12
# Ridge added to both diagonal entries of a singular block, relative to
# the mean of the two variances.
RIDGE_SCALE = 1e-8

_PAIR_CHUNK = 65536


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LabeledMatrix:
    """An ``n x d`` data matrix with binary class labels in {+1, -1}.

    Parameters
    ----------
    values : array_like, shape (n, d)
        Real-valued observations, one row per sample.
    labels : array_like, shape (n,)
        Class labels; every entry must be exactly +1 or -1.
    names : sequence of str, optional
        Variable names, used only for reporting.  Defaults to
        ``x1 .. xd``.
    """

    values: np.ndarray
    labels: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        labels = np.asarray(self.labels)
        if values.ndim != 2:
            raise IllPosedInputError(f"values must be 2-D, got shape {values.shape}")
        n, d = values.shape
        if d < 1:
            raise IllPosedInputError("data has no variables")
        if labels.shape != (n,):
            raise IllPosedInputError(
                f"labels have shape {labels.shape}, expected ({n},)")
        if not np.all(np.isin(labels, (1, -1))):
            bad = labels[~np.isin(labels, (1, -1))][0]
            raise IllPosedInputError(f"label {bad!r} is not +1 or -1")
        if not np.all(np.isfinite(values)):
            r, c = np.argwhere(~np.isfinite(values))[0]
            raise IllPosedInputError(f"non-finite value at row {r}, column {c}")
        labels = labels.astype(np.int8)
        n1 = int(np.count_nonzero(labels == 1))
        if n1 < 2 or n - n1 < 2:
            raise IllPosedInputError(
                f"each class needs at least 2 samples (got n1={n1}, n2={n - n1})")
        names = tuple(self.names) if len(self.names) else tuple(
            f"x{k + 1}" for k in range(d))
        if len(names) != d:
            raise IllPosedInputError(f"{len(names)} names given for {d} variables")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "labels", _readonly(labels))
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def n1(self) -> int:
        return int(np.count_nonzero(self.labels == 1))

    @property
    def n2(self) -> int:
        return self.n - self.n1

    def select_columns(self, columns: Sequence[int]) -> "LabeledMatrix":
        columns = np.asarray(columns, dtype=np.intp)
        return LabeledMatrix(self.values[:, columns], self.labels,
                             tuple(self.names[k] for k in columns))


class PairStat(NamedTuple):
    """Squared Mahalanobis distance for variables ``(i, j)``.

    A single-variable statistic is stored with ``j == i``.
    """

    i: int
    j: int
    m: float


def mahalanobis_2x2(di, dj, sii, sjj, sij):
    """Vectorised ``delta' Sigma^{-1} delta`` for 2x2 blocks.

    Uses the closed-form inverse.  Blocks with
    ``det <= DET_RTOL * sii * sjj`` get a ridge of
    ``RIDGE_SCALE * (sii + sjj) / 2`` on the diagonal first.  Inputs
    broadcast; no finiteness check is made here.
    """
    di, dj, sii, sjj, sij = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (di, dj, sii, sjj, sij)))
    det = sii * sjj - sij * sij
    singular = det <= DET_RTOL * sii * sjj
    if np.any(singular):
        ridge = np.where(singular, RIDGE_SCALE * 0.5 * (sii + sjj), 0.0)
        sii = sii + ridge
        sjj = sjj + ridge
        det = sii * sjj - sij * sij
    with np.errstate(divide="ignore", invalid="ignore"):
        return (di * di * sjj - 2.0 * di * dj * sij + dj * dj * sii) / det


def mahalanobis_1d(di, sii):
    """Vectorised univariate analogue ``delta_i**2 / sigma_ii``."""
    di = np.asarray(di, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return di * di / np.asarray(sii, dtype=float)


def check_finite(m: np.ndarray, i: np.ndarray, j: np.ndarray,
                 permutation: int | None = None) -> None:
    """Raise :class:`NumericalError` naming the first non-finite pair."""
    bad = ~np.isfinite(m)
    if np.any(bad):
        k = np.unravel_index(np.flatnonzero(bad)[0], m.shape)[-1]
        pair = (int(i[k]), int(j[k]))
        where = "" if permutation is None else f" in permutation {permutation}"
        raise NumericalError(
            f"non-finite Mahalanobis statistic for variables {pair}{where}; "
            "constant columns should be removed first (see prescreen_by_sd)",
            pair=pair, permutation=permutation)


@dataclass(frozen=True, eq=False)
class TwoSampleSummary:
    """Per-variable two-sample summaries plus on-demand 2x2 covariance blocks.

    Attributes
    ----------
    delta : ndarray, shape (d,)
        Class +1 mean minus class -1 mean.
    pooled_var : ndarray, shape (d,)
        Pooled within-class variances, divisor ``n - 2``.
    t : ndarray, shape (d,)
        Two-sample t statistics ``delta / sqrt(var * (1/n1 + 1/n2))``.
    """

    delta: np.ndarray
    pooled_var: np.ndarray
    t: np.ndarray
    n1: int
    n2: int
    centered: np.ndarray = field(repr=False)  # (d, n), class-centred, C order

    @property
    def d(self) -> int:
        return self.delta.shape[0]

    def pair_cov(self, i, j) -> np.ndarray:
        """Pooled within-class covariances for index arrays ``i`` and ``j``.

        Each entry is reduced over one contiguous row pair, so the value
        for a given ``(i, j)`` does not depend on what else is in the batch.
        """
        i = np.asarray(i, dtype=np.intp)
        j = np.asarray(j, dtype=np.intp)
        out = np.empty(i.shape, dtype=float)
        flat_i, flat_j, flat_out = i.ravel(), j.ravel(), out.reshape(-1)
        dof = self.n1 + self.n2 - 2
        for start in range(0, flat_i.size, _PAIR_CHUNK):
            sl = slice(start, start + _PAIR_CHUNK)
            prod = self.centered[flat_i[sl]] * self.centered[flat_j[sl]]
            flat_out[sl] = prod.sum(axis=1) / dof
        return out

    def pair_values(self, i, j) -> np.ndarray:
        """Mahalanobis statistics ``m(i[k], j[k])`` for index arrays.

        Raises
        ------
        NumericalError
            If any statistic is non-finite after regularization.
        """
        i = np.asarray(i, dtype=np.intp)
        j = np.asarray(j, dtype=np.intp)
        if i.size == 0:
            return np.empty(i.shape)
        m = mahalanobis_2x2(self.delta[i], self.delta[j], self.pooled_var[i],
                            self.pooled_var[j], self.pair_cov(i, j))
        check_finite(m, i, j)
        return m


def summarize(data: LabeledMatrix) -> TwoSampleSummary:
    """Compute mean differences, pooled variances and t statistics."""
    X = data.values
    pos = data.labels == 1
    n1, n2 = int(pos.sum()), int((~pos).sum())
    if n1 < 2 or n2 < 2:
        raise IllPosedInputError(
            f"each class needs at least 2 samples (got n1={n1}, n2={n2})")
    mu1 = X[pos].mean(axis=0)
    mu2 = X[~pos].mean(axis=0)
    centered = X - np.where(pos[:, None], mu1, mu2)
    centered = np.ascontiguousarray(centered.T)
    pooled_var = (centered * centered).sum(axis=1) / (n1 + n2 - 2)
    delta = mu1 - mu2
    se = np.sqrt(pooled_var * (1.0 / n1 + 1.0 / n2))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(delta == 0, 0.0, delta / se)
    return TwoSampleSummary(delta=_readonly(delta), pooled_var=_readonly(pooled_var),
                            t=_readonly(t), n1=n1, n2=n2,
                            centered=_readonly(centered))


def mahalanobis_pair(summary: TwoSampleSummary, i: int, j: int) -> PairStat:
    """Squared Mahalanobis distance between class means on variables (i, j)."""
    if i == j:
        raise ValueError("mahalanobis_pair needs two distinct variables; "
                         "use mahalanobis_single")
    a, b = (i, j) if i < j else (j, i)
    m = summary.pair_values(np.array([a]), np.array([b]))[0]
    return PairStat(a, b, float(m))


def mahalanobis_single(summary: TwoSampleSummary, i: int) -> PairStat:
    """Univariate statistic ``delta_i**2 / sigma_ii``, stored with ``j == i``."""
    m = mahalanobis_1d(summary.delta[i], summary.pooled_var[i])
    idx = np.array([i])
    check_finite(np.atleast_1d(m), idx, idx)
    return PairStat(i, i, float(m))
