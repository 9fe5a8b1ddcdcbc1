"""Shared fixtures: cached graph/summary builders and the acceptance report hook."""

import numpy as np
import pytest

import spaflow as sf

# fixtures whose bipartite form passes every applicability check; parametric
# families k4 / dipole3 are included by hand since the registry only lists
# fixed names
APPLICABLE = [
    "k4",
    "dipole3",
    "petersen",
    "example_5_2",
    "example_5_3",
    "fig5_a",
    "fig5_b",
    "fig5_c",
    "ts53_girth8",
    "ts53_girth8_block_order",
    "ts53_girth6",
    "ts62",
    "cover2_dipole3",
    "cover3_girth4",
    "cover3_two2cycles",
    "cover3_three2cycles",
]

_bip_cache: dict = {}
_struct_cache: dict = {}
_summary_cache: dict = {}


def bipartite(name):
    if name not in _bip_cache:
        _bip_cache[name] = sf.to_bipartite(sf.generate(name))
    return _bip_cache[name]


def structural(name):
    if name not in _struct_cache:
        _struct_cache[name] = sf.build_structural(bipartite(name))
    return _struct_cache[name]


def summary(name):
    if name not in _summary_cache:
        _summary_cache[name] = sf.perron(structural(name))
    return _summary_cache[name]


@pytest.fixture
def bip():
    return bipartite


@pytest.fixture
def struct():
    return structural


@pytest.fixture
def summ():
    return summary


# ---------------------------------------------------------------------------
# acceptance reporting: tests append one line per criterion and the terminal
# summary prints them even when capture is on

_acceptance_lines: list = []


@pytest.fixture(scope="session")
def acceptance_report():
    def record(criterion: int, ok: bool, detail: str):
        _acceptance_lines.append((criterion, ok, detail))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in sorted(_acceptance_lines):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {criterion:2d} {status}: {detail}")


def rng(seed):
    return np.random.default_rng(seed)
