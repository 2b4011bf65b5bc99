import pytest

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria.append((marker.args[0], marker.args[1], rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    grouped = {}
    for number, title, outcome in _criteria:
        grouped.setdefault((number, title), []).append(outcome == "passed")
    terminalreporter.section("acceptance criteria")
    for (number, title), oks in sorted(grouped.items()):
        status = "PASS" if all(oks) else "FAIL"
        cases = f" ({sum(oks)}/{len(oks)} cases)" if len(oks) > 1 else ""
        terminalreporter.write_line(f"[{status}] criterion {number:>2}: {title}{cases}")
