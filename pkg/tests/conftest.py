"""Shared pytest wiring.

The acceptance tests register one verdict line each; printing them through
the terminal reporter at the end keeps them visible in the run log even
though output capture is on.
"""

_VERDICT_LINES: list[str] = []


def record_verdict(line: str) -> None:
    _VERDICT_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _VERDICT_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in _VERDICT_LINES:
            terminalreporter.write_line(line)
