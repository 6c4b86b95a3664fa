import json
from fractions import Fraction

import pytest

from width_lab.axioms import (
    galois_suite,
    norm_axiom_suite,
    norm_constant,
    radius_norm,
    standard_q_towers,
    valuation_norm,
    valuation_suite,
)
from width_lab.ratfunc import RationalFunction
from width_lab.towers import QT_TOWER
from width_lab.valuations import INFINITY, LogNorm, ValuationValue, base_valuation_map

t = RationalFunction.t_power(1)
T_ADIC = base_valuation_map("t_adic")


def test_t_adic_suite_passes():
    reports = valuation_suite("t_adic", samples=60, seed=1, validation_samples=100)
    assert len(reports) == 3
    for report in reports:
        assert report.passed, report.violations[:3]
        witness = next(c for c in report.checks if c.axiom == "v")
        assert witness.verdict == "pass"


def test_p_adic_suite_passes():
    for p in (2, 3):
        reports = valuation_suite("p_adic", p=p, samples=40, seed=2, validation_samples=100)
        assert all(r.passed for r in reports)


def test_galois_suite_passes():
    report = galois_suite(samples=25, seed=3)
    assert report.passed, report.violations[:3]
    unit = next(c for c in report.checks if c.axiom == "unit")
    assert unit.verdict == "pass"
    assert next(c for c in report.checks if c.axiom == "v").verdict == "pass"


def test_norm_constant():
    assert norm_constant(radius_norm()) == 2
    assert norm_constant(valuation_norm(T_ADIC)) == 4


def test_trivial_norm_fails_the_witness_check():
    def trivial(x):
        return LogNorm(INFINITY if x == 0 else ValuationValue.of(0))

    report = norm_axiom_suite(trivial, lambda rng: (t, t + 1), t**-1, samples=5, name="trivial")
    assert [c.axiom for c in report.violations] == ["v"]


def test_flipped_sign_breaks_subadditivity():
    def flipped(x):
        w = T_ADIC(x)
        return LogNorm(w if w.is_infinite else ValuationValue.of(-w.value))

    report = norm_axiom_suite(flipped, lambda rng: (t, t * t - t), t, samples=3, name="flipped")
    assert {c.axiom for c in report.violations} == {"ii"}
    assert len(report.violations) == 3


def test_report_records_are_ordered_jsonl():
    report = norm_axiom_suite(valuation_norm(T_ADIC), lambda rng: (t, t**-2), QT_TOWER.coerce(t**-1), samples=2)
    lines = report.to_jsonl().splitlines()
    assert len(lines) == len(report.checks) == 2 + 4 * 2
    first = json.loads(lines[0])
    assert first["index"] == -1
    assert set(first) == {"axiom", "index", "inputs", "verdict", "enclosures"}


def test_standard_q_towers_degrees():
    assert [k.degree for k in standard_q_towers()] == [2, 4, 8, 2]


def test_unit_norm_is_one_under_both():
    assert radius_norm()(Fraction(1)).contains(1)
    assert valuation_norm(T_ADIC)(1).neg_log == 0


@pytest.mark.slow
def test_t_adic_suite_at_full_size():
    reports = valuation_suite("t_adic", samples=1000)
    assert all(r.passed for r in reports)
    assert all(len(r.checks) == 2 + 4 * 1000 for r in reports)


@pytest.mark.slow
def test_p_adic_suite_at_full_size():
    reports = valuation_suite("p_adic", p=2, samples=1000)
    assert all(r.passed for r in reports)


@pytest.mark.slow
def test_galois_suite_at_full_size():
    report = galois_suite(samples=1000)
    assert report.passed, report.violations[:3]
    assert report.counts()["pass"] > report.counts()["inconclusive"]
