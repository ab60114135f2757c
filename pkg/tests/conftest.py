import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

GOLDEN = Path(__file__).parent / "golden"


def golden(name: str):
    return json.loads((GOLDEN / name).read_text(encoding="utf-8"))


def frac(c) -> Fraction:
    return Fraction(str(c))


@pytest.fixture(scope="session")
def kv6():
    from artifact.apps import solve_kv
    return solve_kv(6)


@pytest.fixture(scope="session")
def phi6():
    from artifact.dk import solve_associator
    return solve_associator(6)[0]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
