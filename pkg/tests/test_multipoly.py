import pytest

from width_lab.errors import PreconditionViolation
from width_lab.finite_fields import finite_field_make
from width_lab.multipoly import MPoly, PolySet, default_family, monomials, substitute_set

F8 = finite_field_make(2, 3, seed=1)
X1, X2 = MPoly.variable(1, 2, 2), MPoly.variable(2, 2, 2)
X1X2 = MPoly.monomial((1, 1), 2)


def test_coefficients_are_reduced_mod_p():
    r = MPoly.from_dict({(1, 0): 3, (0, 1): 2}, 2, 2)
    assert r == X1
    assert MPoly.from_dict({(1, 0): 2}, 2, 2).terms == ()


def test_degree_and_free_variables():
    assert X1X2.total_degree == 2
    assert X2.free_variables() == (1,)
    assert MPoly.monomial((0, 0), 2).is_constant()


def test_text():
    assert X1X2.text() == "X1*X2"
    assert MPoly.monomial((2, 0), 3, coeff=2).text() == "2*X1^2"


def test_substitute_and_evaluate():
    g = F8.generator()
    r = X1X2.lift(F8).substitute({0: g})
    assert r.free_variables() == (1,)
    assert r.evaluate({1: g}) == g * g
    assert X1X2.lift(F8).evaluate([g, g + 1]) == g * (g + 1)


def test_polyset_validation():
    with pytest.raises(PreconditionViolation):
        PolySet.of([MPoly.monomial((0, 0), 2)], 2, 2, 2)
    with pytest.raises(PreconditionViolation):
        PolySet.of([X1X2], 2, 1, 2)
    with pytest.raises(PreconditionViolation):
        PolySet.of([MPoly.variable(1, 1, 2)], 2, 2, 2)


def test_substitute_set_examples():
    one = F8.one()
    out = substitute_set(PolySet.of([X1X2], 2, 2, 2), [one])
    assert [r.text() for r in out] == ["X1*X2", "X2", "X1"]
    single = substitute_set(PolySet.of([MPoly.variable(1, 1, 2)], 1, 1, 2), [F8.zero()])
    assert [r.text() for r in single] == ["X1"]
    assert len(substitute_set(PolySet.of([], 2, 2, 2), [one])) == 0


def test_substitute_set_size():
    E = F8.power_basis()
    out = substitute_set(PolySet.of([X1X2], 2, 2, 2), E)
    # X1*X2, then e*X2 and e*X1 for each of the three basis elements
    assert len(out) == 1 + 3 + 3


def test_monomials_order():
    assert [r.text() for r in monomials(2, 2, 2)] == ["X1", "X2", "X1^2", "X1*X2", "X2^2"]


def test_default_family():
    fam = default_family(3, 2)
    assert [len(P) for P in fam] == [1, 5, 5]
    assert [P.m for P in fam] == [1, 2, 2]
