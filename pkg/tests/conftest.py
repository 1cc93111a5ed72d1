"""Shared fixtures and the acceptance report hook.

Acceptance tests record one line per criterion through `record_criterion`;
the terminal-summary hook prints them after the run so the pass/fail lines
land in captured output even when pytest swallows per-test stdout.
"""
import numpy as np
import pytest

import swarmsim

CRITERION_LINES: list[str] = []


def record_criterion(name: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}: {name}"
    if detail:
        line += f"  [{detail}]"
    CRITERION_LINES.append(line)
    print(line)


def record_note(text: str) -> None:
    """Free-form line for the summary block (measured baselines, timings)."""
    CRITERION_LINES.append(f"      {text}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _float32_default():
    # tests that need float64 use the precision() context themselves
    swarmsim.set_default_dtype(np.float32)
    yield
    swarmsim.set_default_dtype(np.float32)
