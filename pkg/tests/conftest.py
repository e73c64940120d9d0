import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA = {}


def _criterion(nodeid):
    name = nodeid.split("::")[-1]
    if "test_acceptance.py" not in nodeid or not name.startswith("test_criterion_"):
        return None
    return name[len("test_criterion_"):].split("[")[0]


def pytest_runtest_logreport(report):
    key = _criterion(report.nodeid)
    if key is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        ok = _CRITERIA.get(key, True) and report.outcome == "passed"
        _CRITERIA[key] = ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        num, _, label = key.partition("_")
        status = "PASS" if _CRITERIA[key] else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {int(num):2d}: {label.replace('_', ' ')}")
    passed = sum(_CRITERIA.values())
    terminalreporter.write_line(f"{passed}/{len(_CRITERIA)} criteria passed")
