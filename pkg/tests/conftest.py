import re

import pytest

_CRITERIA = {}
_NAME = re.compile(r"test_criterion_(\d+)")


@pytest.fixture
def criterion(request):
    """Attach a one-line summary to an acceptance test; the verdict is the test outcome."""

    def record(detail: str):
        request.node.user_properties.append(("criterion", detail))

    return record


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if m is None or (report.when != "call" and report.passed):
        return
    details = [v for k, v in report.user_properties if k == "criterion"]
    status = "PASS" if report.passed else "FAIL"
    detail = details[-1] if details else ""
    if not report.passed:
        detail = (detail + " " if detail else "") + f"[{report.when} failed]"
    _CRITERIA[int(m.group(1))] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {status} {detail}".rstrip())
