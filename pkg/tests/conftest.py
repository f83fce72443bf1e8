import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qhstar import example  # noqa: E402

# lines appended by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LOG: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def hopf3():
    return example("group_hopf_star", 3)


@pytest.fixture(scope="session")
def dual3():
    return example("dual_group_cocycle", 3)


@pytest.fixture(scope="session")
def char4():
    return example("char_twisted_star", 4)


@pytest.fixture(scope="session")
def char4_plain():
    return example("char_twisted_star", 4, 0, False)


@pytest.fixture(scope="session")
def z2():
    return example("z2_triangular")


@pytest.fixture(scope="session")
def bic31():
    return example("bicharacter_qt", 3, 1)


@pytest.fixture(scope="session")
def real3():
    return example("real_bicharacter_qt", 3)


@pytest.fixture(scope="session")
def s3_full():
    return example("symmetric_group_star", 1, 2, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
