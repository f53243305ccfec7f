import pytest

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when not in ("setup", "call"):
        return
    number, bound, title = mark.args
    if report.when == "setup" and report.passed:
        return
    _CRITERIA[number] = (title, report.passed, report.duration, bound)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed, duration, bound = _CRITERIA[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(
            f"criterion {number}: {verdict}  ({duration:.2f} s, bound {bound:g} s)  {title}"
        )
