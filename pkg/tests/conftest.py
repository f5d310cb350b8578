import pytest

ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of an acceptance criterion for the summary."""
    def _mark(number: int, title: str):
        ACCEPTANCE[number] = (title, "FAIL")
        request.node.user_properties.append(("criterion", number))
        return number
    return _mark


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for key, number in report.user_properties:
        if key == "criterion" and number in ACCEPTANCE:
            title, _ = ACCEPTANCE[number]
            ACCEPTANCE[number] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, status = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
