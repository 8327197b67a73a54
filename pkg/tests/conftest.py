"""Re-emit the acceptance verdict lines in the terminal summary.

The criterion tests print one ``ACCEPTANCE n: ...`` line each; capture
swallows those on success, so this hook lifts them off the test reports
and prints them at the end where they survive any capture mode.
"""

import pytest

_verdicts = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.name.startswith("test_criterion_"):
        for line in (getattr(report, "capstdout", "") or "").splitlines():
            if line.startswith("ACCEPTANCE"):
                _verdicts.append(line)


def pytest_terminal_summary(terminalreporter):
    if _verdicts:
        terminalreporter.section("acceptance criteria")
        for line in _verdicts:
            terminalreporter.write_line(line)
