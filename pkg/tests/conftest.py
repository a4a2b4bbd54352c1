import pytest

_ACCEPTANCE_RESULTS: dict[str, bool] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): marks a test as one acceptance criterion"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        marker = item.get_closest_marker("acceptance")
        if marker is not None:
            name = marker.kwargs.get("name", item.name)
            _ACCEPTANCE_RESULTS[name] = rep.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, ok in _ACCEPTANCE_RESULTS.items():
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")
