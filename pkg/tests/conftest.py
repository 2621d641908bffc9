import pytest

_results: dict[int, tuple[str, str, float]] = {}
_setup_time: dict[str, float] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "setup":
        _setup_time[item.nodeid] = report.duration
        if report.failed:
            _results[mark.args[0]] = ("FAIL", mark.args[1], report.duration)
    elif report.when == "call":
        number, title = mark.args
        duration = report.duration + _setup_time.get(item.nodeid, 0.0)
        _results[number] = ("PASS" if report.passed else "FAIL", title, duration)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        status, title, duration = _results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}  ({duration:.1f}s)")
