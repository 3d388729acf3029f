from __future__ import annotations

import pytest

from pointedhopf import FieldSpec


@pytest.fixture
def Q():
    return FieldSpec()


@pytest.fixture
def Qt():
    return FieldSpec(1, ("t1",))


@pytest.fixture
def Q5():
    return FieldSpec(5, ())


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, line = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {line}")
