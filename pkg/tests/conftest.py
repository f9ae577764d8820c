import pytest

_RESULTS = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail"):
            status = "XFAIL"
        else:
            status = "PASS" if rep.passed else "FAIL"
        elapsed = dict(item.user_properties).get("elapsed")
        _RESULTS.append((marker.args, status, elapsed))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, limit): acceptance criterion with its time limit")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title, limit), status, elapsed in _RESULTS:
        took = "" if elapsed is None else f" in {elapsed:.2f} s"
        cap = "no time limit" if limit is None else f"limit {limit} s"
        terminalreporter.write_line(f"criterion {number}: {status}{took} ({cap}) {title}")
