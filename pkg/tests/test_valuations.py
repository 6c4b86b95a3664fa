from fractions import Fraction

import numpy as np
import pytest

from width_lab.errors import NonUniqueExtension, NotPrime, PreconditionViolation
from width_lab.ratfunc import RationalFunction
from width_lab.towers import Q_TOWER, QT_TOWER, tower_adjoin_sqrt
from width_lab.valuations import (
    INFINITY,
    LogNorm,
    Membership,
    ValuationValue,
    base_valuation_map,
    extend_to_tower,
    norm_compare,
    p_adic_valuation,
    t_adic_valuation,
    tower_valuation,
)

t = RationalFunction.t_power(1)
T_ADIC = base_valuation_map("t_adic")


def test_t_adic_examples():
    assert t_adic_valuation(t) == 1
    assert t_adic_valuation(RationalFunction.constant(2)) == 0
    assert t_adic_valuation(t**5 / (1 + t)) == 5
    assert t_adic_valuation(RationalFunction.constant(0)) is INFINITY


def test_p_adic_examples():
    assert p_adic_valuation(Fraction(3, 4), 2) == -2
    assert p_adic_valuation(1, 3) == 0
    assert p_adic_valuation(Fraction(50, 7), 5) == 2
    assert p_adic_valuation(0, 5).is_infinite
    with pytest.raises(NotPrime):
        p_adic_valuation(3, 6)


def test_valuation_value_ordering():
    assert ValuationValue.of(1) < INFINITY
    assert min(INFINITY, ValuationValue.of(-3)) == -3
    assert (INFINITY + ValuationValue.of(2)).is_infinite
    assert ValuationValue.of(Fraction(3, 2)).text() == "3/2"
    assert INFINITY.text() == "inf"


def test_log_norm_order_is_reversed():
    big, small = LogNorm(ValuationValue.of(-1)), LogNorm(ValuationValue.of(1))
    assert small < big
    assert big.exceeds_one()
    assert LogNorm(INFINITY).is_zero()


def test_ramified_extension_over_qt():
    K = tower_adjoin_sqrt(QT_TOWER, t**3).tower
    w = extend_to_tower(T_ADIC, K)
    assert w.per_level_uniqueness[0].kind == "ramified"
    assert w(K.generator()) == Fraction(3, 2)
    assert w(1 + K.generator()) == 0


def test_inert_extension_over_qt():
    K = tower_adjoin_sqrt(QT_TOWER, 1 - t**-4).tower
    w = extend_to_tower(T_ADIC, K)
    assert w.per_level_uniqueness[0].kind == "inert"
    assert w(K.generator()) == -2


def test_ramified_extension_p_adic():
    K = tower_adjoin_sqrt(Q_TOWER, 2).tower
    w = extend_to_tower(base_valuation_map("p_adic", p=2), K)
    assert w(K.generator()) == Fraction(1, 2)
    assert w.granularity() == 1


def test_equal_branches_fall_back_to_norm():
    K = tower_adjoin_sqrt(QT_TOWER, 1 - t**-4).tower
    w = extend_to_tower(T_ADIC, K)
    g = K.generator()
    # w(t^-2) = w(g) = -2; the norm 2t^-4 - 1 decides
    assert w(t**-2 + g) == -2
    assert w((t**-2 + g) * (t**-2 - g)) == -4


def test_zero_is_infinite():
    assert tower_valuation(T_ADIC, RationalFunction.constant(0)).is_infinite


def test_surjective_on_base():
    for vmap in (T_ADIC, base_valuation_map("p_adic", p=3)):
        for k in range(-8, 9):
            assert vmap(vmap.element_with_value(k)) == k


def test_norm_compare():
    one = ValuationValue.of(1)
    assert norm_compare(T_ADIC, t, LogNorm(one)) is Membership.INSIDE
    assert norm_compare(T_ADIC, t**2, LogNorm(one)) is Membership.OUTSIDE
    assert norm_compare(T_ADIC, RationalFunction.constant(1), 0) is Membership.INSIDE
    with pytest.raises(PreconditionViolation):
        norm_compare(T_ADIC, t, -1)


def test_additive_and_ultrametric_on_two_level_tower():
    K = tower_adjoin_sqrt(tower_adjoin_sqrt(QT_TOWER, t).tower, t**3 + 2).tower
    w = extend_to_tower(T_ADIC, K, samples=200, seed=3)
    rng = np.random.default_rng(17)
    for _ in range(200):
        x, y = K.random_element(rng, height=2), K.random_element(rng, height=2)
        assert w(x * y) == w(x) + w(y)
        s = w(x + y)
        assert s >= min(w(x), w(y))
        if w(x) != w(y):
            assert s == min(w(x), w(y))


@pytest.mark.parametrize("radicand", [9 * (1 + t), 4 + t**2, t**2 * (1 + t), 1 + t])
def test_split_radicand_over_qt_is_rejected(radicand):
    K = tower_adjoin_sqrt(QT_TOWER, radicand).tower
    with pytest.raises(NonUniqueExtension) as info:
        extend_to_tower(T_ADIC, K)
    assert info.value.level == 1


@pytest.mark.parametrize("p, d", [(3, 7), (3, 9 * 7), (5, 11), (2, 17), (2, -7), (2, 4 * 17)])
def test_split_radicand_p_adic_is_rejected(p, d):
    K = tower_adjoin_sqrt(Q_TOWER, d).tower
    with pytest.raises(NonUniqueExtension):
        extend_to_tower(base_valuation_map("p_adic", p=p), K)


def test_non_split_radicands_still_extend():
    assert extend_to_tower(base_valuation_map("p_adic", p=3), tower_adjoin_sqrt(Q_TOWER, 2).tower).per_level_uniqueness[0].kind == "inert"
    two_adic = extend_to_tower(base_valuation_map("p_adic", p=2), tower_adjoin_sqrt(Q_TOWER, 3).tower, samples=100)
    assert two_adic.per_level_uniqueness[0].kind == "validated_by_sampling"
