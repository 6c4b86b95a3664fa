from fractions import Fraction

import pytest

from width_lab.errors import DivisionByZero
from width_lab.ratfunc import QT, RationalFunction

t = RationalFunction.t_power(1)


def test_reduced_form():
    f = RationalFunction.from_coeffs([0, 0, 2], [0, 4])
    assert f == RationalFunction.t_power(1, Fraction(1, 2))
    assert f.den.is_monic()


def test_common_factor_cancels():
    f = (t * t - 1) / (t - 1)
    assert f == t + 1
    assert f.den.degree == 0


def test_negative_powers():
    assert RationalFunction.t_power(-3) * RationalFunction.t_power(3) == QT.one()
    assert t**-2 == RationalFunction.t_power(-2)


def test_order_at_zero():
    assert (t**5 / (1 + t)).order_at_zero() == 5
    assert RationalFunction.t_power(-2, 7).order_at_zero() == -2


def test_sqrt():
    assert ((t + 1) ** 2 / t**4).sqrt() == (t + 1) / t**2
    assert (1 - t**-4).sqrt() is None


def test_zero_denominator():
    with pytest.raises(DivisionByZero):
        t / QT.zero()


def test_constant_value():
    assert RationalFunction.constant(3).constant_value() == 3
    assert t.constant_value() is None


@pytest.mark.parametrize("c", [0, 3, Fraction(-1, 2)])
def test_constants_hash_like_scalars(c):
    r = RationalFunction.constant(c)
    assert r == c
    assert hash(r) == hash(Fraction(c)) == hash(c)
    assert Fraction(c) in {r}


def test_non_constant_hash_is_stable():
    assert hash(1 + t) == hash(t + 1)
    assert len({t, t * 1, t**2}) == 2
