import warnings

import numpy as np
import pytest

from sigjeff import LabeledMatrix, SimSpec, fdp_curve, generate, lda_error, true_nonnull_curve
from sigjeff.evaluate import lda_fit, lda_predict
from sigjeff.simdata import GroundTruth


def truth(d=500, k=50):
    m = np.zeros(d, bool)
    m[:k] = True
    return GroundTruth(m)


def test_perfect_ranking():
    ranked = np.arange(500)
    np.testing.assert_array_equal(true_nonnull_curve(ranked, truth(), 50), np.arange(1, 51))
    np.testing.assert_array_equal(fdp_curve(ranked, truth(), 50), 0.0)


def test_null_ranking():
    ranked = np.arange(499, -1, -1)
    np.testing.assert_array_equal(true_nonnull_curve(ranked, truth(), 30), 0)
    np.testing.assert_array_equal(fdp_curve(ranked, truth(), 30), 1.0)


def test_random_ranking_hypergeometric(rng):
    curves = np.array([true_nonnull_curve(rng.permutation(500), truth(), 40)
                       for _ in range(400)])
    k = np.arange(1, 41)
    se = curves.std(axis=0, ddof=1) / np.sqrt(400)
    assert np.all(np.abs(curves.mean(axis=0) - k / 10) <= 3 * se + 1e-12)


def test_fdp_identity(rng):
    for _ in range(20):
        ranked = rng.permutation(500)
        c = true_nonnull_curve(ranked, truth(), 100)
        f = fdp_curve(ranked, truth(), 100)
        k = np.arange(1, 101)
        np.testing.assert_array_equal(f, 1 - c / k)
        np.testing.assert_allclose(f, (k - c) / k, rtol=0, atol=1e-15)


class TestLda:
    def test_perfect_separation(self, rng):
        X = np.c_[np.r_[np.full(10, 5.0), np.full(10, -5.0)] + rng.normal(0, 0.1, 20),
                  rng.standard_normal(20)]
        data = LabeledMatrix(X, [1] * 10 + [-1] * 10)
        assert lda_error(data, data, [0]) == 0.0

    def test_no_signal(self, rng):
        errs = []
        for _ in range(30):
            train = LabeledMatrix(rng.standard_normal((40, 5)), [1] * 20 + [-1] * 20)
            test = LabeledMatrix(rng.standard_normal((400, 5)), [1] * 200 + [-1] * 200)
            errs.append(lda_error(train, test, [0, 1, 2, 3, 4]))
        assert np.mean(errs) == pytest.approx(0.5, abs=0.05)

    def test_ar1_true_variables(self):
        errs = []
        for r in range(10):
            train, _ = generate(SimSpec("ar1", d=500, seed=r))
            test, _ = generate(SimSpec("ar1", d=500, n_per_class=500, seed=1000 + r))
            errs.append(lda_error(train, test, np.arange(10)))
        assert np.mean(errs) <= 0.4

    def test_affine_equivariance(self, rng):
        train = LabeledMatrix(rng.standard_normal((30, 4)) + [[1, 0, 0, 0]] * np.r_[np.ones(15), np.zeros(15)][:, None],
                              [1] * 15 + [-1] * 15)
        test = rng.standard_normal((100, 4))
        a, b = rng.uniform(0.5, 3, 4), rng.normal(0, 5, 4)
        w, c = lda_fit(train)
        w2, c2 = lda_fit(LabeledMatrix(train.values * a + b, train.labels))
        np.testing.assert_array_equal(lda_predict(w, c, test), lda_predict(w2, c2, test * a + b))

    def test_ridge_when_too_many_variables(self, rng):
        train = LabeledMatrix(rng.standard_normal((10, 30)), [1] * 5 + [-1] * 5)
        with pytest.warns(UserWarning, match="ridge"):
            err = lda_error(train, train, np.arange(30))
        assert 0 <= err <= 1

    def test_empty_selection(self, rng):
        data = LabeledMatrix(rng.standard_normal((10, 3)), [1] * 5 + [-1] * 5)
        with pytest.raises(ValueError):
            lda_error(data, data, [])
