import pytest


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


_acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if "test_acceptance.py" not in item.nodeid:
        return
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    label = f"{doc} [{item.callspec.id}]" if hasattr(item, "callspec") else doc
    if report.when == "call":
        _acceptance.append((label, report.outcome, report.duration))
    elif report.when == "setup" and report.skipped:
        _acceptance.append((label, "skipped", 0.0))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, duration in _acceptance:
        status = {"passed": "PASS", "failed": "FAIL"}.get(outcome, "SKIP")
        terminalreporter.write_line(f"{status}  {label}  ({duration:.2f} s)")
