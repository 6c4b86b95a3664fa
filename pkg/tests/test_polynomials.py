from fractions import Fraction

import pytest

from width_lab.errors import DivisionByZero
from width_lab.fields import QQ
from width_lab.polynomials import UniPolynomial


def P(*coeffs):
    return UniPolynomial(tuple(Fraction(c) for c in coeffs), QQ)


def test_trailing_zeros_are_stripped():
    assert P(1, 2, 0, 0).coeffs == (1, 2)
    assert P(0, 0).is_zero()
    assert P(0, 0).degree == -1


def test_arithmetic():
    a, b = P(1, 2, 3), P(2, 3, 4)
    assert a + b == P(3, 5, 7)
    assert b - a == P(1, 1, 1)
    assert a * b == P(2, 7, 16, 17, 12)
    assert a(2) == 17


def test_divmod():
    q, r = divmod(P(-1, 0, 1), P(-1, 1))
    assert q == P(1, 1)
    assert r.is_zero()
    with pytest.raises(DivisionByZero):
        divmod(P(1), P())


def test_gcd_is_monic():
    g = P(-2, 0, 2).gcd(P(2, 2))
    assert g == P(1, 1)


def test_from_roots():
    assert UniPolynomial.from_roots([1, -1], QQ) == P(-1, 0, 1)


def test_order_and_shift():
    f = P(0, 0, 3, 1)
    assert f.order_at_zero() == 2
    assert f.shift(-2) == P(3, 1)
    assert f.shift(1) == P(0, 0, 0, 3, 1)


def test_text():
    assert P(1, Fraction(-1, 2)).text() == "[1, -1/2]"
