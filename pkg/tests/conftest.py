"""Shared fixtures plus a terminal summary for the acceptance criteria."""

ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def record_acceptance(name: str, status: str = "PASS") -> None:
    ACCEPTANCE_RESULTS.append((name, status))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{status}  {name}")
