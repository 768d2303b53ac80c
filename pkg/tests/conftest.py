"""Shared fixtures, plus a per-criterion PASS/FAIL summary for the acceptance module."""

from __future__ import annotations

from collections import OrderedDict

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CRITERIA = OrderedDict([
    (1, "soundness fuzz: 1000 programs x 10 seeds x fuel 500, no violation"),
    (2, "chained-condition precision (one pass and iterated)"),
    (3, "signed/unsigned reduced product on the straddling program"),
    (4, "checker rejects perturbed fixpoints, no false accept"),
    (5, "garbage iterator falls back to top, still sound"),
    (6, "domain laws and brute-force operator soundness"),
    (7, "10,000-instruction nested-loop function under 60 s"),
    (8, "bounded-variable rule"),
])

_outcomes: "OrderedDict[int, list]" = OrderedDict((k, []) for k in CRITERIA)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _outcomes[marker.args[0]].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not any(_outcomes.values()):
        return
    terminalreporter.section("acceptance criteria")
    for k, text in CRITERIA.items():
        results = _outcomes[k]
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {k} {status}: {text}")
