import pytest

_CRITERIA: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            status = "FAIL (known discrepancy: " + rep.wasxfail + ")"
        else:
            status = "PASS" if rep.passed else "FAIL"
        _CRITERIA.setdefault(n, []).append((title, f"{item.name}: {status}"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        parts = _CRITERIA[n]
        overall = "PASS" if all(s.endswith(": PASS") for _, s in parts) else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2} [{overall}] {parts[0][0]}")
        for _, s in parts:
            terminalreporter.write_line(f"      {s}")
