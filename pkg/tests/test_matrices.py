from fractions import Fraction

import pytest

from width_lab.errors import DimensionMismatch, NotSL, PreconditionViolation, Singular
from width_lab.matrices import D, E, GroupMatrix, diagonal, elementary, identity, so2
from width_lab.ratfunc import RationalFunction
from width_lab.towers import Q_TOWER, tower_adjoin_sqrt

t = RationalFunction.t_power(1)
F = Fraction


def test_elementary_and_diagonal():
    assert E(t).rows == ((1, t), (0, 1))
    assert D(t) @ D(t) == D(t * t)
    assert elementary(2, 1, F(3)) @ elementary(2, 1, F(-3)) == identity(2)


def test_inverse_and_det():
    g = GroupMatrix.of([[F(2), F(1)], [F(1), F(1)]])
    assert (g @ g.inverse()).is_identity()
    h = GroupMatrix.of([[F(2), F(0), F(1)], [F(1), F(1), F(0)], [F(0), F(3), F(1)]], "GL")
    assert h.det() == 5
    assert (h.inverse() @ h).is_identity()


def test_group_checks():
    with pytest.raises(NotSL):
        GroupMatrix.of([[F(2), F(0)], [F(0), F(1)]])
    with pytest.raises(Singular):
        GroupMatrix.of([[F(1), F(1)], [F(1), F(1)]], "GL")
    with pytest.raises(PreconditionViolation):
        GroupMatrix.of([[F(1), F(1)], [F(-1), F(1)]], "SO2")
    with pytest.raises(DimensionMismatch):
        GroupMatrix(((F(1), F(0)),))


def test_singular_inverse():
    with pytest.raises(Singular):
        diagonal([F(0), F(1)]).inverse()


def test_so2_over_a_tower():
    # a = 1/2, b = sqrt(3)/2
    adj = tower_adjoin_sqrt(Q_TOWER, 3)
    g = so2(adj.tower.coerce(F(1, 2)), adj.root * F(1, 2))
    g.check()
    assert (g @ g @ g @ g @ g @ g).is_identity()
    assert g.inverse() == g.transpose()


def test_transvections_need_distinct_positions():
    with pytest.raises(PreconditionViolation):
        elementary(1, 1, t)


def test_text():
    assert E(F(1, 2)).text() == "[[1, 1/2], [0, 1]]"
