import numpy as np
import pytest

from igmahp import JudgmentScale, random_prm, validate_prm

A1_ROWS = [
    [1, 2, 4, 8],
    [1 / 2, 1, 2, 4],
    [1 / 4, 1 / 2, 1, 2],
    [1 / 8, 1 / 4, 1 / 2, 1],
]

# high-school selection example
A2_ROWS = [
    [1, 4, 3, 1, 3, 4],
    [1 / 4, 1, 7, 3, 1 / 5, 1],
    [1 / 3, 1 / 7, 1, 1 / 5, 1 / 5, 1 / 6],
    [1, 1 / 3, 5, 1, 1, 1 / 3],
    [1 / 3, 5, 5, 1, 1, 3],
    [1 / 4, 1, 6, 3, 1 / 3, 1],
]

A1_WEIGHTS = np.array([8, 4, 2, 1]) / 15

# Exact WLS optimum of A2, from solving the Lagrange stationarity system in
# rational arithmetic (symbolic differentiation of the objective, no Gram
# matrices involved).
A2_EXACT_WEIGHTS = np.array([
    0.4150330679611732268876216,
    0.09355771931445558932353966,
    0.03477107437487792586384339,
    0.1123014415474575162808831,
    0.2189881419015395151590139,
    0.1253485549004962264850984,
])
A2_EXACT_OBJECTIVE = 0.6334885091570394563925958
# multiplier of the raw Lagrangian; the Gram-system multiplier is half of it
A2_EXACT_RAW_MULTIPLIER = -1.266977018314078912785192
# e Gbar^-1, exact
A2_EXACT_REDUCED_ROW_SUMS = np.array([
    0.65515484805469149512, 0.14768652937201577090, 0.054888247967033456073,
    0.17727463075359178241, 0.34568605228994479744, 0.19787028981361173157,
])


@pytest.fixture
def a1():
    return validate_prm(A1_ROWS)


@pytest.fixture
def a2():
    return validate_prm(A2_ROWS)


@pytest.fixture
def saaty9():
    return JudgmentScale.saaty(9)


def random_prms(count, n_min=3, n_max=15, seed=0):
    rng = np.random.default_rng(seed)
    scale = JudgmentScale.saaty(9)
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        yield random_prm(n, scale, int(rng.integers(2**32)))


def random_weights(rng, n, low=0.01):
    w = rng.uniform(low, 1.0, n)
    return w / w.sum()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
