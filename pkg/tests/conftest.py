import re
from collections import defaultdict

_criteria = defaultdict(list)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+?)(\[|$)", report.nodeid)
    if m and (report.when == "call" or report.failed):
        _criteria[int(m.group(1))].append((m.group(2), report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _criteria[n]
        ok = all(passed for _, passed in results)
        name = results[0][0].replace("_", " ")
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {name}")
