import numpy as np
import pytest

from sigjeff import LabeledMatrix


class MatrixSummary:
    """Stand-in summary serving pair statistics from an explicit M matrix.

    Counts every pair evaluation so tests can check evaluation budgets.
    """

    def __init__(self, M, t=None):
        self.M = np.asarray(M, dtype=float)
        self.d = self.M.shape[0]
        self.t = np.arange(self.d, 0, -1, dtype=float) if t is None else np.asarray(t)
        self.calls = 0

    def pair_values(self, i, j):
        i, j = np.asarray(i), np.asarray(j)
        self.calls += i.size
        return self.M[i, j]


def random_m_matrix(rng, d):
    A = rng.random((d, d))
    M = np.triu(A, 1)
    return M + M.T


def null_data(rng, d, n_per_class=30):
    X = rng.standard_normal((2 * n_per_class, d))
    y = np.r_[np.ones(n_per_class), -np.ones(n_per_class)]
    return LabeledMatrix(X, y)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome
    elif "test_acceptance" in report.nodeid and report.failed:
        _acceptance[report.nodeid.split("::")[-1]] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
