import numpy as np
import pytest

from cmbarrow.nonlocal_lattice import Lattice


@pytest.fixture
def lat8():
    return Lattice(8, 8, 0.125, 0.1)


@pytest.fixture
def lat16():
    return Lattice.unit_box(16)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collects one pass/fail line per acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, title, ok, detail):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} :: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
