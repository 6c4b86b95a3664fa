from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from width_lab.errors import DivisionByZero, MixedFieldHandles, NotPrime
from width_lab.fields import QQ, field_arith, field_of, multiplicity, rational_sqrt, require_prime, to_text
from width_lab.ratfunc import QT, RationalFunction
from width_lab.towers import Q_TOWER, tower_adjoin_sqrt

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)


def test_rational_add():
    assert field_arith(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)


def test_rational_function_inverse_cancels():
    t = RationalFunction.t_power(1)
    a = t / (t + 1)
    b = (t + 1) / t
    assert field_arith(a, b, "mul") == QT.one()


def test_difference_of_squares_in_tower():
    root2 = tower_adjoin_sqrt(Q_TOWER, 2).root
    assert field_arith(root2 + 1, root2 - 1, "mul") == 1


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        field_arith(Fraction(1), Fraction(0), "div")


def test_mixed_handles():
    with pytest.raises(MixedFieldHandles):
        field_arith(Fraction(1), RationalFunction.t_power(1), "add")


def test_zero_is_canonical():
    assert to_text(Fraction(0, 7)) == "0"
    assert Fraction(-2, -4) == Fraction(1, 2)


def test_field_of():
    assert field_of(3) is QQ
    assert field_of(RationalFunction.t_power(2)) == QT


def test_require_prime():
    assert require_prime(13) == 13
    with pytest.raises(NotPrime):
        require_prime(12)


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-1)) is None


def test_multiplicity():
    assert multiplicity(50, 5) == 2
    assert multiplicity(-12, 2) == 2
    assert multiplicity(7, 3) == 0


@given(rationals, rationals, rationals)
def test_rational_axioms(a, b, c):
    assert field_arith(field_arith(a, b, "add"), c, "add") == field_arith(a, field_arith(b, c, "add"), "add")
    assert a * (b + c) == a * b + a * c
    if b != 0:
        assert field_arith(field_arith(a, b, "div"), b, "mul") == a
