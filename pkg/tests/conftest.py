import pytest


def pytest_addoption(parser):
    parser.addoption("--nightly", action="store_true", default=False, help="run long-running golden checks")
    parser.addoption("--update-golden", action="store_true", default=False, help="rewrite golden JSON reports")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--nightly"):
        return
    skip = pytest.mark.skip(reason="nightly tier; run with --nightly")
    for item in items:
        if "nightly" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, what, failures = RESULTS[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({what})"
        if failures:
            line += " -- " + "; ".join(failures)
        terminalreporter.write_line(line)
