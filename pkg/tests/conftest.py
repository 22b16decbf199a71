import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hierarchy_lab import gates as G  # noqa: E402
from hierarchy_lab.hierarchy import HierarchyEngine  # noqa: E402


@pytest.fixture
def engine():
    return HierarchyEngine(max_qubits=4)


@pytest.fixture(scope="session")
def std():
    return {
        "I": G.identity(1),
        "X": G.pauli_x(),
        "Y": G.pauli_y(),
        "Z": G.pauli_z(),
        "H": G.hadamard(),
        "S": G.s_gate(),
        "T": G.t_gate(),
    }


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def log(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        lines.append(line)
        print(line)
        assert ok, line

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
