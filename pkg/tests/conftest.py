"""Shared pytest hooks.

Collects the one-line verdicts emitted by the acceptance tests and
replays them after the run, outside pytest's output capture, so they
are visible even when every test passes.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
