"""Checks of the self-test harness itself.

The expensive suites already run in the acceptance gate; here we verify
the harness machinery: fault injection is actually detected and blamed
on the right route, rendering is stable, and the summary counts add up.
"""

import json

import pytest

from qplancherel import asymptotics, selftest
from qplancherel.ratfunc import QPoly, QRat


def mutated_closed_form(k: int, l: int) -> QRat:
    # off-by-one exponent in the prefactor
    honest = asymptotics.cov_double_sum
    return honest(k, l) * QRat(QPoly.monomial(1))


def test_fault_injection_names_the_mutated_route(monkeypatch):
    monkeypatch.setattr(asymptotics, "cov_closed_form", mutated_closed_form)
    result = selftest.check_three_route_covariance()
    assert not result.passed
    assert "'closed'" in result.detail
    assert "(k,l)=(2,2)" in result.detail


def test_fault_injection_other_route(monkeypatch):
    monkeypatch.setattr(
        asymptotics, "cov_double_sum", lambda k, l: QRat(0)
    )
    result = selftest.check_three_route_covariance()
    assert not result.passed
    assert "'doublesum'" in result.detail


def test_unmutated_routes_pass():
    assert selftest.check_three_route_covariance().passed


def test_render_is_reproducible():
    results = [
        selftest.check_measure_normalization(),
        selftest.check_product_worked_example(),
    ]
    again = [
        selftest.check_measure_normalization(),
        selftest.check_product_worked_example(),
    ]
    assert selftest.render(results, "text") == selftest.render(again, "text")
    assert selftest.render(results, "json") == selftest.render(again, "json")


def test_render_text_format():
    results = [
        selftest.CheckResult("good", True, "fine"),
        selftest.CheckResult("bad", False, "broken"),
    ]
    text = selftest.render(results, "text")
    lines = text.strip().splitlines()
    assert lines[0].startswith("PASS  good")
    assert lines[1].startswith("FAIL  bad")
    assert lines[-1] == "1 passed, 1 failed"


def test_render_json_format():
    results = [selftest.CheckResult("good", True, "fine")]
    payload = json.loads(selftest.render(results, "json"))
    assert payload["ok"] is True
    assert payload["passed"] == 1
    assert payload["failed"] == 0
    assert payload["checks"][0]["name"] == "good"


def test_summary_counts():
    results = [
        selftest.CheckResult("a", True),
        selftest.CheckResult("b", False, "x"),
        selftest.CheckResult("c", False, "y"),
    ]
    s = selftest.summary(results)
    assert (s["passed"], s["failed"], s["ok"]) == (1, 2, False)


def test_registries_are_disjoint_and_named():
    names = [fn.__name__ for fn in selftest.SYMBOLIC_CHECKS + selftest.FULL_CHECKS]
    assert len(names) == len(set(names))
    assert all(n.startswith("check_") for n in names)


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError):
        selftest.render([], "yaml")
