"""Shared fixtures and the acceptance summary hook.

Every test named test_criterion_<n>_* feeds one aggregated PASS/FAIL line per
criterion number into the terminal summary, so a bare `pytest` run ends with a
readable scoreboard of the advertised guarantees.
"""

import re

_CRITERIA = {
    1: "single-site chain matches the analytic stationary state",
    2: "N=2,3 match the dense second-space kernel on both parameter panels",
    3: "first-space and second-space oracles agree at N<=3",
    4: "boundary-driven chain: odd-N correlation vanishes, even-N decays exponentially",
    5: "degenerate points are rejected as non-unique",
    6: "randomized property suite (10 invariants x 100 cases)",
    7: "N=4 reconstructed state matches the dense kernel end to end",
    8: "runtime grows sub-exponentially with chain length (non-binding)",
}

_NODE_RE = re.compile(r"test_criterion_(\d+)")
_outcomes = {}


def pytest_runtest_logreport(report):
    m = _NODE_RE.search(report.nodeid)
    if m is None:
        return
    n = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes.setdefault(n, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    seen = {n: v for n, v in _outcomes.items() if v}
    if not seen:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for n in sorted(seen):
        ok = all(o == "passed" for o in seen[n])
        label = _CRITERIA.get(n, "unknown criterion")
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {label}")
    _outcomes.clear()
