import pathlib

import pytest

from epcheck import explore, parse_model

ROOT = pathlib.Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"


def load(name):
    model = parse_model((MODELS / name).read_text(encoding="utf-8"))
    return model, explore(model)


@pytest.fixture(scope="session")
def uav():
    return load("uav.epc")


@pytest.fixture(scope="session")
def demo3():
    return load("demo3.epc")


@pytest.fixture(scope="session")
def demo3_all():
    return load("demo3_all.epc")


def demo3_reference_strategy():
    """Coalition {1,2} plays tau(1,2) until agent 2 can output on b."""
    from epcheck.parser import parse_label
    from epcheck.strategy import PartialStrategy
    sync, out_b = parse_label("tau(1,2)"), parse_label("'b<t2>@2")
    choice = {s: sync for s in ("s0", "s1", "s5", "s6", "s9")}
    choice.update({s: out_b for s in ("s2", "s8", "s10")})
    return PartialStrategy.of({"1", "2"}, choice)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
