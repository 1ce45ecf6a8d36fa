from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from geosynth.figure import Layout, parse_figure
from geosynth.hypergraph import saturate_figure
from geosynth.pipeline import run
from geosynth.rules import RuleConfig

DATA = Path(__file__).resolve().parent.parent / "data"
FIG1 = DATA / "fig1.fig"
FIG1_RULES = DATA / "fig1.rules"

sys.path.insert(0, str(Path(__file__).resolve().parent))

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow],
                          derandomize=True)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def fig1():
    return parse_figure(FIG1.read_text())


@pytest.fixture(scope="session")
def fig1_cfg():
    return RuleConfig.parse(FIG1_RULES.read_text())


@pytest.fixture(scope="session")
def fig1_lay(fig1):
    return Layout(fig1)


@pytest.fixture(scope="session")
def fig1_h(fig1_lay, fig1_cfg):
    return saturate_figure(fig1_lay, fig1_cfg)


@pytest.fixture(scope="session")
def fig1_run(fig1, fig1_cfg):
    return run(fig1, fig1_cfg)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
