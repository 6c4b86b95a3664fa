import dataclasses
from fractions import Fraction

import numpy as np
import pytest

from width_lab.bset import (
    complement_acceptance_rate,
    complement_census,
    complement_portion,
    corollary4_build,
    counting_check,
    lemma3_positivity,
    lemma3_search,
    lemma3_success_bound,
    additive_factor_E12,
    sample_complement,
    schwartz_zippel_rate,
    sz_failure_bound,
    verify_stratification,
)
from width_lab.certificates import word_evaluate
from width_lab.errors import BudgetExhausted, CapExceeded, PreconditionViolation
from width_lab.finite_fields import finite_field_embed, finite_field_make
from width_lab.matrices import E
from width_lab.multipoly import MPoly, PolySet, default_family, substitute_set

P_X1 = PolySet.of([MPoly.variable(1, 1, 2)], 1, 1, 2)


@pytest.fixture(scope="module")
def built():
    family = default_family(2, 2)
    return corollary4_build(2, family, 2, 3, seed=7), family


def test_census_values():
    assert complement_census(2, 1, 2).portion == Fraction(1, 2)
    assert complement_census(3, 1, 2).portion == Fraction(2, 3)
    census = complement_census(2, 2, 2)
    assert census.portion == complement_portion(2, 2, 2).exact == Fraction(3, 8)


def test_census_cap():
    with pytest.raises(CapExceeded):
        complement_census(2, 3, 3, cap=1000)


def test_portion_lower_bounds():
    assert complement_portion(2, 1, 2).lower == Fraction(1, 4)
    assert complement_portion(3, 2, 3).lower == Fraction(1, 2)
    for p in (5, 7, 11):
        bound = complement_portion(p, 3, 3)
        assert bound.lower**(p - 1) <= Fraction(1, 4)
        assert bound.holds


def test_sampled_rate_matches_exact():
    report = complement_acceptance_rate(2, 3, 2, trials=2000, seed=5)
    assert report.within_3_sigma
    assert report.above_lower


def test_sample_complement_checks_shapes():
    emb = finite_field_embed(finite_field_make(2, 2), finite_field_make(2, 4))
    with pytest.raises(PreconditionViolation):
        sample_complement(2, 3, emb, np.random.default_rng(0))


def test_sz_failure_bound():
    assert sz_failure_bound(3, 1, 3, 2, 2, p=2) == 6
    assert sz_failure_bound(1, 4, 2, 1, 1, p=2) == Fraction(1, 4)
    assert sz_failure_bound(0, 2, 2, 3, 2, p=3) == 0


def test_success_bound_counts_substitutions():
    emb = finite_field_embed(finite_field_make(2, 3, seed=1), finite_field_make(2, 9, seed=1))
    E_ = [emb(b) for b in emb.source.power_basis()]
    P_E = substitute_set(P_X1, E_, emb.target)
    bound = lemma3_success_bound(P_X1, P_E, 3, 3)
    assert bound.d_lower == Fraction(1, 4)
    assert bound.failure_exact == Fraction(6, 64)
    assert bound.failure_coarse == Fraction(4 * 6, 64)
    assert bound.success_exact > 0


def test_lemma3_search_is_seeded():
    emb = finite_field_embed(finite_field_make(2, 3, seed=2), finite_field_make(2, 6, seed=2))
    E_ = [emb(b) for b in emb.source.power_basis()]
    a = lemma3_search(P_X1, E_, 3, 2, 200, (1, 2), embedding=emb)
    b = lemma3_search(P_X1, E_, 3, 2, 200, (1, 2), embedding=emb)
    assert not a.exhausted
    assert a.sample == b.sample
    assert all(not x.in_subfield(3) for x in a.sample.elements)


def test_lemma3_search_budget_zero():
    emb = finite_field_embed(finite_field_make(2, 1), finite_field_make(2, 2))
    outcome = lemma3_search(P_X1, [emb.target.one()], 1, 2, 0, embedding=emb)
    assert outcome.exhausted and outcome.trials == 0


def test_positivity():
    assert lemma3_positivity(P_X1, 3, 3, seed=1).passed
    not_applicable = lemma3_positivity(P_X1, 1, 2)
    assert not not_applicable.applicable and not_applicable.passed


def test_build_levels(built):
    state, _ = built
    assert [lv.b for lv in state.levels] == [3, 6, 12]
    assert state.depth == 2
    assert state.levels[1].f == 2
    for i in range(2):
        assert set(state.basis_in(i, i + 1)) <= set(state.levels[i + 1].basis)


def test_build_is_deterministic(built):
    state, family = built
    again = corollary4_build(2, family, 2, 3, seed=7)
    assert again.to_json() == state.to_json()


def test_stratification_passes(built):
    state, family = built
    report = verify_stratification(state, family, 0)
    assert report.passed
    assert report.checks > 0
    assert [r["level"] for r in report.per_level] == [1, 2]


def test_corrupted_state_is_caught(built):
    state, family = built
    top = state.levels[2]
    new = list(top.new)
    # s * s^-1 = 1 lands in every subfield
    new[1] = new[0].inverse()
    basis = tuple(x for x in top.basis if x not in top.new) + tuple(new)
    bad = dataclasses.replace(state, levels=state.levels[:2] + [dataclasses.replace(top, basis=basis, new=tuple(new))])
    report = verify_stratification(bad, family, 0)
    assert not report.passed
    assert any(v["kind"] == "stratification" and v["level"] == 2 for v in report.violations)


def test_duplicated_basis_element_is_caught(built):
    state, family = built
    top = state.levels[2]
    basis = list(top.basis)
    basis[-1] = state.embed(state.levels[1].basis[0], 1, 2)
    bad = dataclasses.replace(state, levels=state.levels[:2] + [dataclasses.replace(top, basis=tuple(basis))])
    assert any(v["kind"] == "basis" for v in verify_stratification(bad, family, 0).violations)


def test_stratification_cap(built):
    state, family = built
    with pytest.raises(CapExceeded):
        verify_stratification(state, family, 0, cap=10)


def test_counting(built):
    state, family = built
    report = counting_check(state, family[-1])
    assert report.passed
    assert report.separating_level == 2
    assert report.rows[2]["bound"] == 5 * 144


def test_counting_single_variable():
    state = corollary4_build(2, [P_X1], 1, 3, seed=1)
    row = counting_check(state, P_X1).rows[0]
    assert (row["count"], row["bound"], row["field_size"], row["separating"]) == (3, 3, 8, True)


def test_build_preconditions():
    with pytest.raises(PreconditionViolation):
        corollary4_build(2, [P_X1], 0, 3)
    with pytest.raises(PreconditionViolation):
        corollary4_build(2, [P_X1], 2, 3)


def test_build_budget_exhausted():
    with pytest.raises(BudgetExhausted) as info:
        corollary4_build(2, [P_X1], 1, 3, budget=0)
    assert info.value.history


def test_schwartz_zippel_rate():
    report = schwartz_zippel_rate(2, 2, 2, 1, 1, trials=1000, seed=3)
    assert report.bound == Fraction(1, 4)
    assert report.within_bound


def test_additive_factor(built):
    state, _ = built
    field = state.levels[1].field
    alpha = field.generator() ** 5 + 1
    word = additive_factor_E12(alpha, state, 1)
    assert word_evaluate(word) == E(alpha)
    assert {f[0, 1] for f in word.factors} <= set(state.levels[1].basis)
