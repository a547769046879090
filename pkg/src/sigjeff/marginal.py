"""Marginal two-sample t ranking and label-blind variance pre-screening.

The marginal comparator is the plain two-sample t statistic; SAM's
resampled statistic with a fudge factor is deliberately not reproduced.
"""

from __future__ import annotations

import numpy as np

from .errors import IllPosedInputError
from .stats import LabeledMatrix, TwoSampleSummary


def rank_marginal(summary: TwoSampleSummary) -> np.ndarray:
    """Variable indices by decreasing ``|t|``; ties keep index order."""
    absT = np.abs(summary.t)
    return np.lexsort((np.arange(absT.size), -absT))


def prescreen_by_sd(data: LabeledMatrix, threshold: float = 0.5
                    ) -> tuple[LabeledMatrix, np.ndarray]:
    """Drop variables whose overall sample sd is ``<= threshold``.

    Labels are not used.  Returns the reduced data and the original
    column index of each kept variable.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    sd = data.values.std(axis=0, ddof=1)
    kept = np.flatnonzero(sd > threshold)
    if kept.size == 0:
        raise IllPosedInputError(
            f"no variable has standard deviation above {threshold}; "
            "lower the threshold")
    return data.select_columns(kept), kept
