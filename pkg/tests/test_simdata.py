import numpy as np
import pytest

from sigjeff import SimSpec, generate
from sigjeff.simdata import (ar1_quadratic_form, block_sigma0, design_covariance,
                             generate_ar1, generate_block_diagonal, mean_shift,
                             signal_pattern)


@pytest.mark.parametrize("rho", [0.0, -0.8, 0.5])
def test_ar1_quadratic_form_matches_dense_solve(rho):
    d = 80
    k = np.arange(d)
    S = rho ** np.abs(k[:, None] - k[None, :])
    v = signal_pattern(d)
    assert ar1_quadratic_form(v, rho) == pytest.approx(v @ np.linalg.solve(S, v), rel=1e-10)


def test_rho_zero_calibration():
    c = mean_shift(SimSpec("ar1", d=60, rho=0.0))[0] / np.sqrt(50)
    assert c == pytest.approx(2.5 / np.sqrt(1275), rel=1e-12)


@pytest.mark.parametrize("design", ["ar1", "block_diagonal", "independent"])
@pytest.mark.parametrize("seed", [0, 7])
def test_population_distance_equals_signal(design, seed):
    spec = SimSpec(design, d=120, seed=seed)
    mu = mean_shift(spec)
    S = design_covariance(spec)
    assert np.sqrt(mu @ np.linalg.solve(S, mu)) == pytest.approx(2.5, rel=1e-10)


def test_squared_signal_flag():
    spec = SimSpec("independent", d=60, signal=2.5, squared_signal=True)
    mu = mean_shift(spec)
    assert mu @ mu == pytest.approx(2.5, rel=1e-12)


def test_generated_shift_is_calibrated():
    # the generator's mean shift equals the analytic one: compare via zero-noise limit
    spec = SimSpec("ar1", d=100, n_per_class=4000, seed=3)
    data, _ = generate_ar1(spec)
    X, y = np.asarray(data.values), np.asarray(data.labels)
    diff = X[y == 1].mean(0) - X[y == -1].mean(0)
    assert np.max(np.abs(diff - mean_shift(spec))) < 5 * np.sqrt(2 / 4000)


def test_ar1_marginal_variance_and_lag_correlation():
    data, _ = generate(SimSpec("ar1", d=60, n_per_class=1000, seed=1))
    X, y = np.asarray(data.values), np.asarray(data.labels)
    R = np.vstack([X[y == 1] - X[y == 1].mean(0), X[y == -1] - X[y == -1].mean(0)])
    assert np.all(np.abs(R.var(axis=0) - 1) < 0.1)
    long_path = generate(SimSpec("ar1", d=20000, n_per_class=2, seed=2))[0].values[-1]
    assert np.corrcoef(long_path[:-1], long_path[1:])[0, 1] == pytest.approx(-0.8, abs=0.05)


def test_rho_validation():
    with pytest.raises(ValueError):
        SimSpec("ar1", rho=1.0)
    with pytest.raises(ValueError):
        SimSpec("ar1", d=10)
    with pytest.raises(ValueError):
        SimSpec("nope")


def test_block_sigma0():
    for seed in range(20):
        S = block_sigma0(np.random.default_rng(seed))
        np.testing.assert_array_equal(S, S.T)
        assert np.linalg.eigvalsh(S)[0] > 0
        np.testing.assert_allclose(np.diag(S), 1.0)
        assert np.count_nonzero(np.triu(S, 1)) == 4


def test_block_shift_when_already_psd():
    # with rho = -0.01 the block stays positive definite: shift 0.05
    S = block_sigma0(np.random.default_rng(0), rho=-0.01)
    off = S[np.triu_indices(10, 1)]
    assert off[off != 0] == pytest.approx(-0.01 / 1.05)


def test_block_design_structure():
    spec = SimSpec("block_diagonal", d=200, n_per_class=2000, seed=4)
    S = design_covariance(spec)
    assert np.linalg.eigvalsh(S)[0] > 0
    data, _ = generate_block_diagonal(spec)
    X = np.asarray(data.values)[np.asarray(data.labels) == -1]
    C = np.corrcoef(X.T)
    assert np.max(np.abs(C[:50, 50:])) < 5 / np.sqrt(2000)
    assert np.max(np.abs(C[:50, :50] - S[:50, :50])) < 5 / np.sqrt(2000)


def test_independent_null_variables_centered():
    data, truth = generate(SimSpec("independent", d=300, n_per_class=50, seed=5))
    from sigjeff import summarize
    t = summarize(data).t
    assert abs(t[50:].mean()) < 3 / np.sqrt(250)
    assert truth.indices.tolist() == list(range(50))


@pytest.mark.parametrize("design", ["ar1", "block_diagonal", "independent"])
def test_determinism_and_sizes(design):
    a, ta = generate(SimSpec(design, d=70, n_per_class=13, seed=3))
    b, _ = generate(SimSpec(design, d=70, n_per_class=13, seed=3))
    c, _ = generate(SimSpec(design, d=70, n_per_class=13, seed=4))
    np.testing.assert_array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)
    assert (a.n1, a.n2) == (13, 13)
    assert ta.non_null_mask.sum() == 50
