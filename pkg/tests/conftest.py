import pytest

_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__ != "test_acceptance" or report.when != "call":
        return
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    _criteria[item.name] = (doc, report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        doc, passed = _criteria[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {doc}")
