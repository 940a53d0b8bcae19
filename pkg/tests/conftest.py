import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, label): exit criterion, reported in the terminal summary")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    cid, label = marker.args
    results = item.config._acceptance
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = results.get(cid, (label, "PASS"))[1]
        status = "PASS" if report.passed and prev == "PASS" else "FAIL"
        results[cid] = (label, status)


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(results, key=lambda c: int(c.lstrip("AC"))):
        label, status = results[cid]
        terminalreporter.write_line(f"{status}  {cid}  {label}")
