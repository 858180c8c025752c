import numpy as np
import pytest

from srglure.lti import TransferFunction
from srglure.nonlinearity import PiecewiseLinearNl

ACCEPTANCE_LINES = []


@pytest.fixture
def worked_plant():
    # 3 / ((s - 2)(s/10 + 1)) = 3 / (0.1 s^2 + 0.8 s - 2)
    return TransferFunction([3.0], [-2.0, 0.8, 0.1])


@pytest.fixture
def slope_switch_nl():
    # slope 2 for |x| > 1, slope 1 inside
    return PiecewiseLinearNl([(-1.0, -1.0), (1.0, 1.0)], 2.0, 2.0)


@pytest.fixture
def pitfall_plant():
    return TransferFunction([-2.0], [1.0, 1.0, 1.0])


@pytest.fixture
def first_order():
    return TransferFunction([1.0], [1.0, 1.0])


def random_stable_tf(rng, order=None, strictly_proper=True):
    """Random real-rational stable transfer function built from its poles."""
    order = order or int(rng.integers(1, 4))
    poles = []
    while len(poles) < order:
        if order - len(poles) >= 2 and rng.random() < 0.5:
            re, im = -10 ** rng.uniform(-0.7, 0.7), 10 ** rng.uniform(-0.5, 0.7)
            poles += [complex(re, im), complex(re, -im)]
        else:
            poles.append(complex(-10 ** rng.uniform(-0.7, 0.7), 0))
    den = np.real(np.poly(poles))[::-1]
    n_num = order if not strictly_proper else int(rng.integers(0, order))
    zeros = rng.uniform(-3, 3, n_num)
    num = np.atleast_1d(np.real(np.poly(zeros)))[::-1] * rng.uniform(0.5, 3) * rng.choice([-1, 1])
    return TransferFunction(num, den)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
