# Collects outcomes of tests marked ``acceptance(number, title)`` and prints
# one PASS/FAIL line per criterion at the end of the run.

_CRITERIA = {}
_RESULTS = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            _CRITERIA[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    info = _CRITERIA.get(report.nodeid)
    if info is None or (report.when != "call" and report.passed):
        return
    number, title = info
    ok = _RESULTS.get(number, (title, True))[1]
    _RESULTS[number] = (title, ok and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
