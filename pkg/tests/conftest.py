import numpy as np
import pytest

from fuzzywsn import rulebases
from fuzzywsn.radio import RadioParams

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion; echoed in the terminal summary."""

    def record(number, title, passed, detail=""):
        line = f"ACCEPTANCE {number} {'PASS' if passed else 'FAIL'}: {title}"
        if detail:
            line += f" [{detail}]"
        _ACCEPTANCE.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def radio():
    return RadioParams()


@pytest.fixture(scope="session")
def election_rb():
    return rulebases.election_base()


@pytest.fixture(scope="session")
def relay_rb():
    return rulebases.relay_base()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
