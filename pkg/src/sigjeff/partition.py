"""Greedy disjoint pairing of variables by pairwise Mahalanobis distance.

Two strategies produce the same kind of :class:`Partition`:

``partition_exhaustive``
    Evaluates all ``d(d-1)/2`` pairs, then repeatedly takes the remaining
    pair with the largest statistic and retires both of its variables.

``partition_fast``
    Active-set strategy for large ``d``.  Variables are queued by
    decreasing ``|t|``; only pairs among at most ``d0`` active variables
    are ever evaluated.  After each promotion the two freed slots are
    refilled from the queue and only the new pairs are computed, so the
    total work is ``d0(d0-1)/2 + (2 d0 - 3) * floor((d - d0) / 2)`` pair
    evaluations and the pair store never exceeds ``d0(d0-1)/2`` entries.

Ties in the max-statistic selection go to the lexicographically smallest
``(i, j)`` in both strategies, which makes ``partition_fast(d0=d)``
reproduce ``partition_exhaustive`` exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .stats import TwoSampleSummary


@dataclass(frozen=True, eq=False)
class Partition:
    """Ordered disjoint pairs covering every variable exactly once.

    Attributes
    ----------
    pairs : ndarray, shape (d // 2, 2)
        Pairs ``(i, j)`` with ``i < j`` in promotion order.
    m : ndarray, shape (d // 2,)
        Statistic of each pair at the time it was promoted.
    leftover : int or None
        The unpaired variable when ``d`` is odd.
    mode : {"exhaustive", "fast"}
    d0 : int or None
        Active-set size used by the fast strategy.
    n_evaluated : int
        Number of pair statistics computed while partitioning.
    peak_active_pairs : int
        Largest number of pair statistics held at once.
    """

    pairs: np.ndarray
    m: np.ndarray
    leftover: int | None
    mode: str
    d: int
    d0: int | None = None
    n_evaluated: int = 0
    peak_active_pairs: int = 0

    def __len__(self) -> int:
        return len(self.pairs)

    def units(self) -> tuple[np.ndarray, np.ndarray]:
        """Index arrays ``(i, j)`` of all tested units.

        Pairs come first in promotion order; an odd leftover variable is
        appended as a singleton with ``j == i``.
        """
        i, j = self.pairs[:, 0], self.pairs[:, 1]
        if self.leftover is not None:
            i = np.append(i, self.leftover)
            j = np.append(j, self.leftover)
        return i.astype(np.intp), j.astype(np.intp)

    def variables(self) -> np.ndarray:
        """All variables flattened in pair order (leftover last)."""
        out = self.pairs.ravel()
        if self.leftover is not None:
            out = np.append(out, self.leftover)
        return out.astype(np.intp)


def _finish(pairs, ms, leftover, **kw) -> Partition:
    pairs = np.asarray(pairs, dtype=np.intp).reshape(-1, 2)
    ms = np.asarray(ms, dtype=float)
    pairs.setflags(write=False)
    ms.setflags(write=False)
    return Partition(pairs=pairs, m=ms, leftover=leftover, **kw)


def partition_exhaustive(summary: TwoSampleSummary) -> Partition:
    """Greedy max-statistic pairing over all ``d(d-1)/2`` pairs."""
    d = summary.d
    if d < 2:
        raise ValueError("partitioning needs at least 2 variables")
    i, j = np.triu_indices(d, k=1)
    m = summary.pair_values(i, j)
    # greedy max with lexicographic tie-break == scan in (-m, i, j) order
    order = np.lexsort((j, i, -m))
    used = np.zeros(d, dtype=bool)
    pairs, ms = [], []
    need = d // 2
    for k in order:
        a, b = i[k], j[k]
        if used[a] or used[b]:
            continue
        used[a] = used[b] = True
        pairs.append((a, b))
        ms.append(m[k])
        if len(pairs) == need:
            break
    leftover = int(np.flatnonzero(~used)[0]) if d % 2 else None
    return _finish(pairs, ms, leftover, mode="exhaustive", d=d,
                   n_evaluated=int(m.size), peak_active_pairs=int(m.size))


def partition_fast(summary: TwoSampleSummary, d0: int) -> Partition:
    """Active-set greedy pairing restricted to the top-``d0`` variables by |t|.

    Parameters
    ----------
    summary : TwoSampleSummary
    d0 : int
        Active-set size.  Odd values are rounded up; values above ``d``
        are clamped to ``d`` with a warning.
    """
    d = summary.d
    if d < 2:
        raise ValueError("partitioning needs at least 2 variables")
    if d0 < 2:
        raise ValueError(f"d0 must be at least 2, got {d0}")
    if d0 > d:
        warnings.warn(f"d0={d0} exceeds d={d}; using d0={d}", stacklevel=2)
        d0 = d
    if d0 % 2 and d0 < d:
        d0 += 1

    absT = np.abs(np.asarray(summary.t, dtype=float))
    absT = np.where(np.isnan(absT), -np.inf, absT)
    waiting = np.lexsort((np.arange(d), -absT))

    slot_var = np.full(d0, -1, dtype=np.intp)
    M = np.full((d0, d0), -np.inf)
    n_eval = 0

    def add(slot: int, var: int) -> None:
        nonlocal n_eval
        others = np.flatnonzero(slot_var >= 0)
        slot_var[slot] = var
        if others.size:
            ov = slot_var[others]
            vals = summary.pair_values(np.minimum(ov, var), np.maximum(ov, var))
            M[slot, others] = vals
            M[others, slot] = vals
            n_eval += others.size

    # initial active set, evaluated as one batch
    init = waiting[:d0]
    slot_var[:] = init
    iu, ju = np.triu_indices(d0, k=1)
    vals = summary.pair_values(np.minimum(init[iu], init[ju]),
                               np.maximum(init[iu], init[ju]))
    M[iu, ju] = vals
    M[ju, iu] = vals
    n_eval += vals.size
    peak = int(vals.size)
    next_w = d0

    pairs, ms = [], []
    n_active = d0
    while n_active >= 2:
        best = M.max()
        sa, sb = np.nonzero(M == best)
        va, vb = slot_var[sa], slot_var[sb]
        lo, hi = np.minimum(va, vb), np.maximum(va, vb)
        k = np.lexsort((hi, lo))[0]
        pairs.append((lo[k], hi[k]))
        ms.append(best)
        for s in (sa[k], sb[k]):
            M[s, :] = -np.inf
            M[:, s] = -np.inf
            slot_var[s] = -1
        n_active -= 2
        for s in (sa[k], sb[k]):
            if next_w < d:
                add(s, waiting[next_w])
                next_w += 1
                n_active += 1
        peak = max(peak, n_active * (n_active - 1) // 2)

    leftover = None
    if n_active == 1:
        leftover = int(slot_var[slot_var >= 0][0])
    return _finish(pairs, ms, leftover, mode="fast", d=d, d0=d0,
                   n_evaluated=n_eval, peak_active_pairs=peak)


def pair_count_fast(d: int, d0: int) -> int:
    """Closed-form number of pair evaluations made by :func:`partition_fast`.

    Exact when ``d - d0`` is even.
    """
    if not 2 <= d0 <= d:
        raise ValueError(f"need 2 <= d0 <= d, got d={d}, d0={d0}")
    return d0 * (d0 - 1) // 2 + (1 + 2 * (d0 - 2)) * ((d - d0) // 2)


def partition(summary: TwoSampleSummary, d0: int | None = None,
              exhaustive_limit: int = 1000) -> Partition:
    """Exhaustive pairing when ``d <= exhaustive_limit`` (or no d0), else fast."""
    if d0 is None or summary.d <= exhaustive_limit:
        return partition_exhaustive(summary)
    return partition_fast(summary, d0)
