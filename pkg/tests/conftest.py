"""Shared fixtures: a check log that survives output capture.

Acceptance tests report one human-readable verdict line per checked claim;
collecting them here and replaying them in the terminal summary keeps the
lines visible even for passing tests, where pytest normally swallows stdout.
"""

import pytest

_LINES: list[str] = []


@pytest.fixture
def check_log():
    def _log(line: str) -> None:
        _LINES.append(line)
        print(line)

    return _log


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance checks")
        for line in _LINES:
            terminalreporter.write_line(line)
