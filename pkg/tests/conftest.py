import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ratiocut.flow import FlowNetwork
from ratiocut.graph import WeightedGraph


@pytest.fixture
def path4():
    return WeightedGraph.build(4, [(1, 2, 3), (2, 3, 1), (3, 4, 3)])


@pytest.fixture
def path3():
    return WeightedGraph.build(3, [(1, 2, 2), (2, 3, 2)])


@pytest.fixture
def triangle():
    return WeightedGraph.build(3, [(1, 2, 1), (1, 3, 1), (2, 3, 1)])


@pytest.fixture
def diamond():
    # s=0, a=1, b=2, t=3
    return FlowNetwork.build(4, 0, 3, [(0, 1, 3), (0, 2, 2), (1, 3, 2), (2, 3, 3), (1, 2, 1)])


def F(x) -> Fraction:
    return Fraction(x)


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
