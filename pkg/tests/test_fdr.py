import numpy as np
import pytest

from conftest import null_data
from sigjeff import (PermutationConfig, SimSpec, estimate_fdr, estimate_pi0, generate,
                     partition_exhaustive, run_permutations, summarize)
from sigjeff.fdr import _nearest_rank
from sigjeff.permutation import PermutationResult


def make_result(observed, null):
    observed = np.asarray(observed, float)
    K = observed.size
    i = np.arange(0, 2 * K, 2)
    return PermutationResult(i, i + 1, observed, np.asarray(null, float),
                             np.zeros(K), np.zeros(K, bool), "empirical")


class TestPi0:
    def test_all_above_median(self):
        assert estimate_pi0([5, 6, 7], [[0, 1, 2], [1, 2, 3]]) == 0.0

    def test_truncated(self):
        # 10 pairs, 7 below q50 -> 7 / 5 -> 1
        obs = [0.1] * 7 + [9.0] * 3
        null = np.tile(np.linspace(0, 2, 10), (4, 1))
        assert estimate_pi0(obs, null) == 1.0

    def test_half_below(self):
        obs = [0.1, 0.2, 5.0, 6.0, 7.0, 8.0]
        null = np.tile([0.5, 1.0, 1.5], (3, 2))
        assert estimate_pi0(obs, null) == pytest.approx(2 / 3)

    def test_empty(self):
        with pytest.raises(ValueError):
            estimate_pi0([], [[1.0]])

    def test_pure_null_close_to_one(self):
        vals = []
        for r in range(50):
            data = null_data(np.random.default_rng(r), 40)
            res = run_permutations(data, partition_exhaustive(summarize(data)),
                                   PermutationConfig(300, seed=r))
            vals.append(estimate_pi0(res.observed, res.null))
        assert np.mean(vals) >= 0.9


class TestNearestRank:
    def test_values(self):
        a = np.arange(1, 11)
        assert _nearest_rank(a, 50) == 5
        assert _nearest_rank(a, 90) == 9
        assert _nearest_rank(a, 100) == 10
        assert _nearest_rank(np.array([4]), 90) == 4


class TestEstimateFdr:
    def setup_method(self):
        rng = np.random.default_rng(11)
        self.res = make_result(rng.gamma(2, size=25) + np.r_[np.zeros(20), 6 * np.ones(5)],
                               rng.gamma(2, size=(200, 25)))

    def test_default_cutoffs(self):
        tab = estimate_fdr(self.res)
        np.testing.assert_array_equal(tab.cutoff, np.unique(self.res.observed))
        assert np.all(np.diff(tab.n_called) <= 0)
        assert 0 <= tab.pi0 <= 1

    def test_above_max(self):
        tab = estimate_fdr(self.res, [1e9])
        assert tab.n_called[0] == 0
        assert tab.fdr_median[0] == 0 and tab.fdr_p90[0] == 0

    def test_below_min(self):
        tab = estimate_fdr(self.res, [-1.0])
        assert tab.n_called[0] == 25 == tab.median_null_called[0]
        assert tab.fdr_median[0] == pytest.approx(tab.pi0)

    def test_counts_by_hand(self):
        c = 3.0
        tab = estimate_fdr(self.res, [c])
        counts = np.sort((self.res.null > c).sum(axis=1))
        assert tab.n_called[0] == np.count_nonzero(self.res.observed > c)
        assert tab.median_null_called[0] == counts[99]
        assert tab.p90_null_called[0] == counts[179]
        assert tab.fdr_median_raw[0] == pytest.approx(tab.pi0 * counts[99] / tab.n_called[0])

    def test_median_below_p90(self):
        tab = estimate_fdr(self.res)
        assert np.all(tab.fdr_median <= tab.fdr_p90)

    def test_capped(self):
        res = make_result([1.0, 0.0], np.full((10, 2), 5.0))
        tab = estimate_fdr(res, [0.5])
        assert tab.fdr_median_raw[0] > 1 or tab.pi0 == 0
        assert np.all(tab.fdr_median <= 1)

    def test_monotone_transform_invariance(self):
        a = estimate_fdr(self.res)
        t = make_result(np.log1p(self.res.observed), np.log1p(self.res.null))
        b = estimate_fdr(t, np.log1p(a.cutoff))
        np.testing.assert_array_equal(a.n_called, b.n_called)
        np.testing.assert_array_equal(a.fdr_median, b.fdr_median)
        np.testing.assert_array_equal(a.fdr_p90, b.fdr_p90)

    def test_empty_cutoffs(self):
        with pytest.raises(ValueError):
            estimate_fdr(self.res, [])

    def test_singleton_excluded(self):
        res = PermutationResult(np.array([0, 2, 4]), np.array([1, 3, 4]),
                                np.array([1.0, 2.0, 3.0]), np.ones((5, 3)),
                                np.zeros(3), np.zeros(3, bool), "empirical")
        assert estimate_fdr(res, [-1.0]).n_called[0] == 2

    def test_rows(self):
        rows = list(estimate_fdr(self.res, [1.0, 2.0]).rows())
        assert len(rows) == 2 and len(rows[0]) == 7


def test_strong_signal_low_fdr():
    fdrs = []
    for r in range(10):
        data, _ = generate(SimSpec("ar1", d=500, seed=r))
        res = run_permutations(data, partition_exhaustive(summarize(data)),
                               PermutationConfig(300, seed=r))
        c = np.sort(res.observed[res.is_pair])[::-1][9]
        fdrs.append(estimate_fdr(res, [c]).fdr_median[0])
    assert np.all(np.array(fdrs) < 0.5)


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason=(
    "greedy pairing selects large observed statistics but permuted data are "
    "not re-partitioned; top cutoffs get FDR estimates < 0.5 in most null "
    "replications (~37% pass vs 80% required; ~81% with a fixed partition)"))
def test_pure_null_looks_false():
    ok = 0
    for r in range(100):
        data = null_data(np.random.default_rng(r), 40)
        res = run_permutations(data, partition_exhaustive(summarize(data)),
                               PermutationConfig(500, seed=r))
        obs = np.sort(res.observed)[::-1]
        K = obs.size
        tab = estimate_fdr(res, obs[1:K // 2 + 1])  # cutoff calling k = 1..K/2 pairs
        ok += bool(np.all(tab.fdr_median >= 0.5))
    assert ok / 100 >= 0.8
