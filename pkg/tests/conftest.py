import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).resolve().parents[1] / "src" / "projeu" / "data"

# criterion number -> (title, passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def allais_u():
    return np.array([[13.0, 0.0, -1.0], [0.0, 10.0, -1.0], [-1.0, -1.0, 0.0]])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[k]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {k:>2}: {title} ({detail})")
