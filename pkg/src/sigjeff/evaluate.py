"""Selection-quality curves and LDA test error for a ranked variable list."""

from __future__ import annotations

import warnings

import numpy as np

from .simdata import GroundTruth
from .stats import LabeledMatrix

LDA_RIDGE = 1e-6


def true_nonnull_curve(ranked_vars, truth: GroundTruth, max_k: int) -> np.ndarray:
    """``curve[k-1] = |top-k ∩ non-null|`` for ``k = 1..max_k``."""
    ranked = np.asarray(ranked_vars, dtype=np.intp)[:max_k]
    hits = np.asarray(truth.non_null_mask)[ranked]
    return np.cumsum(hits, dtype=np.intp)


def fdp_curve(ranked_vars, truth: GroundTruth, max_k: int) -> np.ndarray:
    """False discovery proportion of the top-k set, ``k = 1..max_k``."""
    counts = true_nonnull_curve(ranked_vars, truth, max_k)
    k = np.arange(1, counts.size + 1)
    return 1.0 - counts / k


def lda_fit(data: LabeledMatrix):
    """Pooled-covariance LDA; returns ``(w, b)`` with score ``X @ w + b``.

    Positive score predicts class +1.  A ridge of ``1e-6`` times the mean
    variance is added when the pooled covariance is singular or the
    number of variables exceeds ``n - 2``.
    """
    X, y = data.values, data.labels
    pos = y == 1
    n1, n2 = int(pos.sum()), int((~pos).sum())
    mu1, mu2 = X[pos].mean(axis=0), X[~pos].mean(axis=0)
    R = np.vstack([X[pos] - mu1, X[~pos] - mu2])
    S = R.T @ R / (n1 + n2 - 2)
    k = S.shape[0]
    ridge = k > n1 + n2 - 2
    if ridge:
        warnings.warn(f"{k} variables exceed n - 2 = {n1 + n2 - 2}; "
                      "adding a ridge to the pooled covariance", stacklevel=2)
    elif np.linalg.cond(S) > 1e12:
        ridge = True
    if ridge:
        S = S + LDA_RIDGE * np.mean(np.diag(S)) * np.eye(k)
    w = np.linalg.solve(S, mu1 - mu2)
    b = -0.5 * w @ (mu1 + mu2) + np.log(n1 / n2)
    return w, b


def lda_predict(w, b, X) -> np.ndarray:
    return np.where(np.asarray(X) @ w + b > 0, 1, -1).astype(np.int8)


def lda_error(train: LabeledMatrix, test: LabeledMatrix, selected_vars) -> float:
    """Test misclassification rate of LDA fitted on ``selected_vars``."""
    sel = np.asarray(selected_vars, dtype=np.intp)
    if sel.size == 0:
        raise ValueError("selected_vars is empty")
    w, b = lda_fit(train.select_columns(sel))
    pred = lda_predict(w, b, test.values[:, sel])
    return float(np.mean(pred != test.labels))
