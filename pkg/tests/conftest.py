"""Collects outcomes of tests marked ``criterion`` and prints one line per criterion."""

from collections import OrderedDict

_CRITERIA = OrderedDict()
_ITEMS = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is None:
            continue
        number, text = mark.args
        _ITEMS[item.nodeid] = number
        entry = _CRITERIA.setdefault(number, {"text": text, "failed": [], "ran": 0})
    # keep numeric order for the summary
    ordered = sorted(_CRITERIA.items(), key=lambda kv: kv[0])
    _CRITERIA.clear()
    _CRITERIA.update(ordered)


def pytest_runtest_logreport(report):
    number = _ITEMS.get(report.nodeid)
    if number is None:
        return
    entry = _CRITERIA[number]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry["ran"] += 1
    if report.failed:
        name = report.nodeid.split("::")[-1]
        if name not in entry["failed"]:
            entry["failed"].append(name)


def pytest_terminal_summary(terminalreporter):
    ran = {k: v for k, v in _CRITERIA.items() if v["ran"]}
    if not ran:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, entry in ran.items():
        status = "FAIL" if entry["failed"] else "PASS"
        line = f"criterion {number:>2}: {status}  {entry['text']}"
        if entry["failed"]:
            line += f"  [failing: {', '.join(entry['failed'])}]"
        tr.write_line(line)

