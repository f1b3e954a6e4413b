from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
BENCHMARK = ROOT / "benchmark"


@pytest.fixture
def benchmark_dir():
    return BENCHMARK


@pytest.fixture(scope="session")
def benchmark_run():
    from kwopt.config import load_run_config

    return load_run_config(BENCHMARK / "config.json")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[3:s.index("]")])):
            terminalreporter.write_line(line)
