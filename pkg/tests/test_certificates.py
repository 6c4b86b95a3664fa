from fractions import Fraction

import pytest

from width_lab.certificates import (
    GeneratorSpec,
    Word,
    certify,
    check_entry_growth,
    conjugate,
    conjugation_convention_check,
    elementary_decomposition,
    entry_growth_bound,
    factor_E12,
    factor_glN,
    factor_slN,
    is_in_S,
    two_factor_witness,
    width_lower_bound,
    word_evaluate,
)
from width_lab.errors import DimensionMismatch, LambdaNotUniformizer, NotSL, PreconditionViolation
from width_lab.matrices import D, E, GroupMatrix, diagonal, elementary, identity, so2
from width_lab.ratfunc import RationalFunction

t = RationalFunction.t_power(1)
one = RationalFunction.constant(1)
SPEC = GeneratorSpec.valuation_ball()
GL_SPEC = GeneratorSpec.valuation_ball(group_tag="GL", extra_gl_diagonals=True)


def qt_identity(n=2):
    return identity(n, one)


def test_membership():
    assert is_in_S(D(t), SPEC)
    assert not is_in_S(E(t**2), SPEC)
    assert is_in_S(qt_identity(), SPEC)
    assert is_in_S(qt_identity(), GeneratorSpec.radius_ball())


def test_radius_ball_membership():
    spec = GeneratorSpec.radius_ball(2)
    assert is_in_S(so2(Fraction(3, 5), Fraction(4, 5)), spec)
    big = GroupMatrix.of([[Fraction(3), Fraction(0)], [Fraction(0), Fraction(1, 3)]])
    assert not is_in_S(big, spec)


def test_spec_preconditions():
    with pytest.raises(PreconditionViolation):
        GeneratorSpec.valuation_ball(r=Fraction(1, 2))
    with pytest.raises(PreconditionViolation):
        GeneratorSpec.radius_ball(1)


def test_conjugation_convention():
    records = conjugation_convention_check(samples=12, seed=4)
    assert all(r["verified"] for r in records)
    assert conjugate(E(one), D(t)) == E(t**2)
    assert conjugate(E(t**-2), D(t)) == E(one)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_conjugation_by_products(m):
    lams = [t, 2 * t, t**-1, RationalFunction.from_coeffs([1, 1])][:m]
    h, prod = D(lams[0]), lams[0]
    for lam in lams[1:]:
        h, prod = h @ D(lam), prod * lam
    mu = RationalFunction.t_power(-3, 5)
    assert conjugate(E(mu), h) == E(prod * prod * mu)


def test_factor_E12_t5():
    word = factor_E12(t**5, t, SPEC)
    assert len(word) == 5
    assert word.factors[2] == E(t)
    assert word_evaluate(word) == E(t**5)
    assert all(is_in_S(g, SPEC) for g in word.factors)


def test_factor_E12_small_and_zero():
    assert factor_E12(t**-1, t, SPEC).factors == (E(t**-1),)
    zero = factor_E12(RationalFunction.constant(0), t, SPEC)
    assert len(zero) == 1 and zero.factors[0].is_identity()


def test_factor_E12_needs_uniformizer():
    with pytest.raises(LambdaNotUniformizer):
        factor_E12(t**3, t**2, SPEC)


@pytest.mark.parametrize("k", range(-12, 13))
def test_word_length_tracks_valuation(k):
    alpha = RationalFunction.t_power(k, 3)
    word = factor_E12(alpha, t, SPEC)
    assert word_evaluate(word) == E(alpha)
    assert len(word) in (abs(k), abs(k) + 1)
    assert width_lower_bound(E(alpha), SPEC) <= len(word)


def test_lower_bound_examples():
    assert width_lower_bound(E(t**-5), SPEC) == 5
    assert width_lower_bound(qt_identity(), SPEC) == 0
    spec = GeneratorSpec.radius_ball(2)
    g = diagonal([Fraction(2**16), Fraction(1, 2**16)], "SL")
    assert width_lower_bound(g, spec) == 9


def test_positive_valuations_do_not_bound_width():
    cert = two_factor_witness(5)
    assert cert.verified()
    assert len(cert.upper_word) == 2
    assert width_lower_bound(E(t**5), SPEC) == 0


def test_decomposition_examples():
    assert elementary_decomposition(qt_identity()) == []
    assert elementary_decomposition(E(t**3)) == [(1, 2, t**3)]
    F = Fraction
    ops = elementary_decomposition(GroupMatrix.of([[F(0), F(1)], [F(-1), F(0)]]))
    assert ops == [(1, 2, 1), (2, 1, -1), (1, 2, 1)]


def test_decomposition_round_trip_sl3():
    F = Fraction
    g = elementary(1, 3, F(2), 3) @ elementary(3, 2, F(-1), 3) @ elementary(2, 1, F(5), 3) @ elementary(1, 2, F(7), 3)
    ops = elementary_decomposition(g)
    assert len(ops) <= 3 * 3 + 4 * 3
    prod = identity(3)
    for i, j, mu in ops:
        prod = prod @ elementary(i, j, mu, 3)
    assert prod == g


def test_decomposition_rejects_non_sl():
    with pytest.raises(NotSL):
        elementary_decomposition(diagonal([Fraction(2), Fraction(1)]))


def test_factor_slN():
    g = elementary(1, 3, t**4, 3)
    word = factor_slN(g, SPEC, t)
    assert len(word) <= 5
    assert word_evaluate(word) == g
    assert len(factor_slN(D(t**-1), SPEC, t)) == 1
    assert len(factor_slN(qt_identity(3), SPEC, t)) == 0


def test_factor_slN_general_matrix():
    g = E(t**-3) @ elementary(2, 1, t**4) @ D(t**2)
    word = factor_slN(g, SPEC, t)
    assert word_evaluate(word) == g
    assert all(is_in_S(f, SPEC) for f in word.factors)
    assert width_lower_bound(g, SPEC) <= len(word)


def test_factor_glN():
    g = diagonal([t**3, one])
    word = factor_glN(g, GL_SPEC, t)
    assert len(word) == 3
    assert all(f == diagonal([t, one]) for f in word.factors)
    assert word_evaluate(word) == g
    assert len(factor_glN(diagonal([RationalFunction.constant(3), one]), GL_SPEC, t)) == 1


def test_factor_glN_on_sl_matches_slN():
    g = E(t**4)
    assert factor_glN(g.retag("GL"), GL_SPEC, t).texts() == factor_slN(g, SPEC, t).texts()


def test_word_evaluate():
    assert word_evaluate(Word.of([], n=2)).is_identity()
    assert word_evaluate(Word.of([D(t), D(t)])) == D(t**2)
    with pytest.raises(DimensionMismatch):
        word_evaluate(Word((D(t), identity(3, one)), 2, one))


def test_certificate_serialization():
    cert = certify(E(t**-3), SPEC, factor_E12(t**-3, t, SPEC))
    out = cert.as_dict()
    assert out["lower_bound"] == 3
    assert out["verified"] is True
    assert len(out["word"]) == len(cert.upper_word)


def test_certificate_rejects_wrong_word():
    # E(a)E(b) = E(a + b), so three copies of E(t^-1) give E(3t^-1)
    wrong_product = certify(E(t**-3), SPEC, Word.of([E(t**-1)] * 3))
    assert not wrong_product.verified()
    too_short = certify(E(t**-3), SPEC, Word.of([E(t**-3)]))
    assert not too_short.verified()


def test_growth_bound_formulas():
    spec = GeneratorSpec.radius_ball(2)
    assert entry_growth_bound(1, spec).value == 2
    assert entry_growth_bound(3, spec).value == 32
    assert entry_growth_bound(2, spec, n=3, D_const=1).value == 972
    assert entry_growth_bound(4, SPEC).value == 4


@pytest.mark.parametrize("k", [1, 4, 9, 16])
def test_ultrametric_growth(k):
    report = check_entry_growth(SPEC, k, samples=30, seed=k)
    assert report.passed
    assert report.worst <= k


def test_archimedean_growth():
    report = check_entry_growth(GeneratorSpec.radius_ball(2), 5, samples=40)
    assert report.passed
