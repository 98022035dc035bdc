import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)$")
_outcomes: dict[int, str] = {}
_titles: dict[int, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = _CRITERION.search(item.nodeid)
        if m:
            doc = (item.function.__doc__ or "").strip()
            _titles[int(m.group(1))] = doc.splitlines()[0] if doc else ""


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.failed:
        _outcomes[n] = "FAIL"
    elif report.when == "call" and n not in _outcomes:
        _outcomes[n] = "PASS" if report.passed else "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        terminalreporter.write_line(f"criterion {n}: {_outcomes[n]}  {_titles.get(n, '')}")
