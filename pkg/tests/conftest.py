import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sunlab.numerics import Point  # noqa: E402
from sunlab.scenario_lab import generate  # noqa: E402
from sunlab.set_model import AxisBox, SetModel, SinglePoint, make_segment  # noqa: E402


def P(text):
    return Point.parse(text)


@pytest.fixture
def cross():
    return generate("main_cross", 0, dim=3, extent=4)


@pytest.fixture
def box():
    return SetModel((AxisBox(P("0,0,0"), P("1,1,1")),), "unit_box")


@pytest.fixture
def cocross():
    return generate("main_cocross", 0, dim=3, extent=2)


@pytest.fixture
def slab_cocross():
    return generate("remark_r4", 0, extent=2)


@pytest.fixture
def far_points():
    return SetModel((SinglePoint(P("0,0,0")), SinglePoint(P("4,0,0"))), "two_points")


@pytest.fixture
def detached_cross():
    return SetModel((make_segment(P("-4,0,0"), P("4,0,0")), make_segment(P("0,1,0"), P("0,4,0")),
                     make_segment(P("0,0,-4"), P("0,0,4"))), "detached_cross")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, (_, line) in sorted(mod.RESULTS.items()):
        terminalreporter.write_line(line)
