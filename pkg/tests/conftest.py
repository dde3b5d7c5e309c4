import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from toriscan.numtheory import cubic_field_vector

# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def spiral_sq():
    """The (1/s, 1/s^2) vector whose resonance-order ladder is tabulated."""
    w, exact = cubic_field_vector("spiral", "sq")
    return w


@pytest.fixture(scope="session")
def d49_freq():
    w, exact = cubic_field_vector("d49", "freq")
    return w, exact


@pytest.fixture(scope="session")
def artifacts_dir():
    out = Path(__file__).parent.parent / "outputs"
    out.mkdir(exist_ok=True)
    return out
