import pytest

_RESULTS: list[tuple[int, str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    _RESULTS.append((number, title, "PASS" if report.passed else "FAIL", detail))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, verdict, detail in sorted(_RESULTS):
        line = f"criterion {number} ({title}): {verdict}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
