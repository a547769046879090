"""Simulation designs with a calibrated mean shift on the first 50 variables.

Three covariance designs are provided:

* ``ar1`` - stationary AR(1) rows, unit marginal variance, lag-1
  correlation ``rho``;
* ``block_diagonal`` - five copies of a random 10x10 block with four
  negative off-diagonal correlations, identity elsewhere;
* ``independent`` - identity covariance.

Class +1 gets the mean ``c * (sqrt(50), sqrt(49), ..., sqrt(1), 0, ...)``
and class -1 mean zero, where ``c`` makes the population Mahalanobis
distance between the class means equal to ``signal`` (or its square,
with ``squared_signal=True``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .stats import LabeledMatrix

N_SIGNAL = 50
BLOCK_SIZE = 10
N_BLOCKS = 5
DESIGNS = ("ar1", "block_diagonal", "independent")


@dataclass(frozen=True)
class SimSpec:
    design: str = "ar1"
    d: int = 500
    n_per_class: int = 50
    rho: float = -0.8
    signal: float = 2.5
    seed: int = 0
    squared_signal: bool = False

    def __post_init__(self):
        if self.design not in DESIGNS:
            raise ValueError(f"unknown design {self.design!r}; expected one of {DESIGNS}")
        if not abs(self.rho) < 1:
            raise ValueError(f"|rho| must be < 1, got {self.rho}")
        if self.signal <= 0:
            raise ValueError("signal must be positive")
        if self.d < N_SIGNAL:
            raise ValueError(f"d must be at least {N_SIGNAL}")
        if self.n_per_class < 2:
            raise ValueError("n_per_class must be at least 2")


@dataclass(frozen=True, eq=False)
class GroundTruth:
    non_null_mask: np.ndarray

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.non_null_mask)


def signal_pattern(d: int) -> np.ndarray:
    """Unscaled mean shift ``(sqrt(50), ..., sqrt(1), 0, ..., 0)``."""
    v = np.zeros(d)
    v[:N_SIGNAL] = np.sqrt(np.arange(N_SIGNAL, 0, -1))
    return v


def ar1_quadratic_form(v: np.ndarray, rho: float) -> float:
    """``v' Sigma^{-1} v`` for the AR(1) correlation matrix, in O(d).

    Uses the tridiagonal inverse: diagonal ``(1, 1+rho^2, ..., 1+rho^2, 1)``
    and off-diagonal ``-rho``, all over ``1 - rho^2``.
    """
    v = np.asarray(v, dtype=float)
    q = v @ v + rho * rho * (v[1:-1] @ v[1:-1]) - 2.0 * rho * (v[:-1] @ v[1:])
    return float(q / (1.0 - rho * rho))


def block_sigma0(rng: np.random.Generator, rho: float = -0.8) -> np.ndarray:
    """Random 10x10 block: four upper off-diagonal entries set to ``rho``.

    The diagonal is then raised by ``|min(lambda_min, 0)| + 0.05`` and the
    whole matrix divided by one plus that shift.
    """
    S = np.eye(BLOCK_SIZE)
    iu, ju = np.triu_indices(BLOCK_SIZE, k=1)
    pick = rng.choice(iu.size, size=4, replace=False)
    S[iu[pick], ju[pick]] = rho
    S[ju[pick], iu[pick]] = rho
    shift = abs(min(np.linalg.eigvalsh(S)[0], 0.0)) + 0.05
    S[np.diag_indices(BLOCK_SIZE)] += shift
    return S / (1.0 + shift)


def _calibrate(quad: float, spec: SimSpec) -> float:
    target = spec.signal if spec.squared_signal else spec.signal ** 2
    return float(np.sqrt(target / quad))


def _assemble(X_pos: np.ndarray, X_neg: np.ndarray, shift: np.ndarray, d: int):
    X = np.vstack([X_pos + shift, X_neg])
    n = X_pos.shape[0]
    labels = np.r_[np.ones(n, dtype=np.int8), -np.ones(n, dtype=np.int8)]
    mask = np.zeros(d, dtype=bool)
    mask[:N_SIGNAL] = True
    return LabeledMatrix(X, labels), GroundTruth(mask)


def generate_ar1(spec: SimSpec):
    """AR(1) design; returns ``(LabeledMatrix, GroundTruth)``."""
    if spec.design != "ar1":
        raise ValueError("spec.design must be 'ar1'")
    rng = np.random.default_rng(spec.seed)
    rho, d, n = spec.rho, spec.d, spec.n_per_class
    s = np.sqrt(1.0 - rho * rho)
    e = rng.standard_normal((2 * n, d))
    # x_1 = e_1 (stationary start), x_k = rho x_{k-1} + s e_k
    e[:, 0] /= s
    X = lfilter([s], [1.0, -rho], e, axis=1)
    v = signal_pattern(d)
    c = _calibrate(ar1_quadratic_form(v, rho), spec)
    return _assemble(X[:n], X[n:], c * v, d)


def _blockwise(spec: SimSpec, sigma0: np.ndarray | None):
    rng = np.random.default_rng(spec.seed)
    if sigma0 is None:
        sigma0 = block_sigma0(rng, spec.rho)
    d, n = spec.d, spec.n_per_class
    L = np.linalg.cholesky(sigma0)
    Z = rng.standard_normal((2 * n, d))
    Z[:, :N_SIGNAL] = (Z[:, :N_SIGNAL].reshape(2 * n, N_BLOCKS, BLOCK_SIZE)
                       @ L.T).reshape(2 * n, N_SIGNAL)
    v = signal_pattern(d)
    vb = v[:N_SIGNAL].reshape(N_BLOCKS, BLOCK_SIZE)
    quad = float(np.sum(vb * np.linalg.solve(sigma0, vb.T).T))
    c = _calibrate(quad, spec)
    return _assemble(Z[:n], Z[n:], c * v, d)


def generate_block_diagonal(spec: SimSpec):
    """Block-diagonal design; the block is drawn from ``spec.seed``."""
    if spec.design != "block_diagonal":
        raise ValueError("spec.design must be 'block_diagonal'")
    return _blockwise(spec, None)


def generate_independent(spec: SimSpec):
    """Identity-covariance design (marginal effects only)."""
    if spec.design != "independent":
        raise ValueError("spec.design must be 'independent'")
    return _blockwise(spec, np.eye(BLOCK_SIZE))


def generate(spec: SimSpec):
    """Dispatch on ``spec.design``."""
    return {"ar1": generate_ar1, "block_diagonal": generate_block_diagonal,
            "independent": generate_independent}[spec.design](spec)


def design_covariance(spec: SimSpec) -> np.ndarray:
    """Dense population covariance of ``spec`` (for checks at small ``d``)."""
    d = spec.d
    if spec.design == "ar1":
        k = np.arange(d)
        return spec.rho ** np.abs(k[:, None] - k[None, :])
    S = np.eye(d)
    if spec.design == "block_diagonal":
        sigma0 = block_sigma0(np.random.default_rng(spec.seed), spec.rho)
        for b in range(N_BLOCKS):
            sl = slice(b * BLOCK_SIZE, (b + 1) * BLOCK_SIZE)
            S[sl, sl] = sigma0
    return S


def mean_shift(spec: SimSpec) -> np.ndarray:
    """Population class +1 minus class -1 mean used by the generator."""
    v = signal_pattern(spec.d)
    if spec.design == "ar1":
        quad = ar1_quadratic_form(v, spec.rho)
    else:
        S = design_covariance(spec)[:N_SIGNAL, :N_SIGNAL]
        quad = float(v[:N_SIGNAL] @ np.linalg.solve(S, v[:N_SIGNAL]))
    return _calibrate(quad, spec) * v
