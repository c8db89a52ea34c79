import pytest

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key, text): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criteria.append((marker.args[0], marker.args[1], "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for key, text, verdict in _criteria:
        terminalreporter.write_line(f"{verdict}  [{key}] {text}")
