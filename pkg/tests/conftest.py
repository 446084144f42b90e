from fractions import Fraction

import numpy as np
import pytest

from primspec.core import make_semigroup
from primspec.systems import MapSpec, build_koopman, build_rotation

FIX_B = [[0, 0.5, 0.5], [0, 1, 0], [0, 0, 1]]
FIX_B_Q = [[0, "1/2", "1/2"], [0, 1, 0], [0, 0, 1]]


@pytest.fixture
def fix_b():
    return make_semigroup([FIX_B])


@pytest.fixture
def fix_b_q():
    return make_semigroup([FIX_B_Q], "rational")


@pytest.fixture
def swap():
    return build_rotation(2, 1)


@pytest.fixture
def swap_q():
    return build_rotation(2, 1, "rational")


@pytest.fixture
def identity3():
    return make_semigroup([np.eye(3)])


@pytest.fixture
def tail_cycle():
    return build_koopman(MapSpec(4, (1, 2, 3, 2)))


@pytest.fixture
def fixed_plus_swap():
    return build_koopman(MapSpec(3, (0, 2, 1)))


def q(*vals):
    return [Fraction(v) for v in vals]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
