import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bandsamp.image import Image  # noqa: E402
from bandsamp.testimages import natural_image  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def natural64():
    return natural_image(64, 64, seed=7, beta=2.4)


def random_image(rng, h, w, lo=0.0, hi=255.0):
    return Image(rng.uniform(lo, hi, size=(h, w)))


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
