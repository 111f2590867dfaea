from fractions import Fraction

import pytest

from equitrans import Affine, Compose, Exp, InexactEvaluation, Neg, ParseError, PiecewiseLinear, PowerOddInt, Sum
from equitrans.scalarmap import IDENTITY, affine_through, approximate, enclose, evaluate, map_from_json, structurally_equal

F = Fraction


def test_evaluation():
    assert Affine(2, 1)(3) == 7
    assert PowerOddInt(3)(F(-1, 2)) == F(-1, 8)
    assert Compose(Affine(2, 0), PowerOddInt(3))(2) == 16
    assert Sum((PowerOddInt(3), Affine(1, 0)))(2) == 10
    assert Neg(PowerOddInt(3))(2) == -8


def test_piecewise_linear_extrapolates():
    m = PiecewiseLinear((0, 1, 2), (0, 2, 3))
    assert [m(x) for x in (-1, 0, F(1, 2), 1, 2, 4)] == [-2, 0, 1, 2, 3, 5]
    with pytest.raises(ValueError):
        PiecewiseLinear((0, 0), (1, 2))


def test_power_must_be_odd():
    with pytest.raises(ValueError):
        PowerOddInt(2)


def test_exp_is_inexact_but_enclosed():
    with pytest.raises(InexactEvaluation):
        evaluate(Exp(), F(0))
    box = enclose(Exp(), F(1))
    assert F(2718281828459045235, 10**18) < box.lo <= box.hi < F(2718281828459045236, 10**18)
    assert box.hi - box.lo < F(1, 2**100)
    assert abs(approximate(Exp(), F(0)) - 1) == 0


def test_enclosure_of_exact_map_is_a_point():
    box = enclose(PowerOddInt(3), F(2, 3))
    assert box.lo == box.hi == F(8, 27)


@pytest.mark.parametrize(
    "m, canon",
    [
        (Compose(Affine(2, 1), Affine(3, 0)), Affine(6, 1)),
        (Compose(Affine(1, 0), PowerOddInt(3)), PowerOddInt(3)),
        (Neg(Affine(2, 1)), Affine(-2, -1)),
        (Sum((Affine(1, 1), Affine(2, 0))), Affine(3, 1)),
        (PowerOddInt(1), IDENTITY),
        (PiecewiseLinear((0, 1, 3), (1, 2, 4)), Affine(1, 1)),
        (Sum((PowerOddInt(3), Neg(Neg(PowerOddInt(3))))), Sum((PowerOddInt(3), PowerOddInt(3)))),
    ],
)
def test_canonical_forms(m, canon):
    assert m.canonical() == canon


def test_canonical_sum_is_order_independent():
    a = Sum((PowerOddInt(3), PowerOddInt(5), Affine(1, 2)))
    b = Sum((Affine(1, 2), PowerOddInt(5), PowerOddInt(3)))
    assert structurally_equal([a, b])


def test_json_round_trip():
    m = Compose(Sum((PowerOddInt(3), Neg(Exp()))), PiecewiseLinear(("0", "1/2"), (1, 2)))
    assert map_from_json(m.to_json()) == m


@pytest.mark.parametrize("obj", [{}, {"affine": {}}, {"pow": 2}, {"log": {}}, {"compose": [{"exp": {}}]}, []])
def test_bad_json(obj):
    with pytest.raises(ParseError):
        map_from_json(obj)


def test_affine_through():
    assert affine_through(PowerOddInt(3), F(0), F(1)) == Affine(1, 0)
    assert affine_through(Affine(3, -2), F(-2), F(3)) == Affine(3, -2)
