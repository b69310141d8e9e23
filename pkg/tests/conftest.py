import numpy as np
import pytest

from graphonlab.core import WeightedGrid, make_graphon

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def g2():
    return make_graphon(WeightedGrid([0.5, 0.5]), [[0.0, 1.0], [1.0, 0.0]])


def random_graphon(n, seed, uniform=False, binary=False):
    rng = np.random.default_rng(seed)
    k = rng.random((n, n))
    if binary:
        k = (k < 0.5).astype(float)
    k = np.triu(k) + np.triu(k, 1).T
    w = np.full(n, 1.0 / n) if uniform else rng.random(n) + 0.1
    return make_graphon(WeightedGrid(w / w.sum()), k)


@pytest.fixture
def acceptance_log():
    def log(criterion, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
