from __future__ import annotations

from pathlib import Path

import pytest

from ittm.assembler import assemble

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def load(name: str):
    path = PROGRAMS / f"{name}.itm"
    return assemble(path.read_text(), name)


@pytest.fixture
def program():
    return load


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
