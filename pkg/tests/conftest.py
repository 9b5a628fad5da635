from __future__ import annotations

from pathlib import Path

import pytest

import opdyn
from opdyn.serialization import load_system

FIXTURES = Path(opdyn.__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


def load(name: str):
    return load_system(fixture_path(name))


@pytest.fixture
def sys_a():
    return load("sys_a")


@pytest.fixture
def sys_b():
    return load("sys_b")


@pytest.fixture
def sys_d():
    return load("sys_d")


# acceptance criteria record one line each; printed at the end of the run
ACCEPTANCE: dict[int, str] = {}
_SESSION: dict[str, float] = {}


def pytest_sessionstart(session):
    import time
    _SESSION["start"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    import time
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
    elapsed = time.perf_counter() - _SESSION.get("start", time.perf_counter())
    verdict = "PASS" if elapsed < 60 else "FAIL"
    terminalreporter.write_line(f"suite wall time {elapsed:.1f} s (limit 60 s): {verdict}")
