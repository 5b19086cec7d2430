import numpy as np
import pytest

from polycomplex.core import GF, QQ

ACCEPTANCE_LINES = []


@pytest.fixture(params=[GF, QQ], ids=["gf", "qq"])
def field(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
