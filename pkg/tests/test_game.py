from fractions import Fraction

import pytest

from equitrans import (
    BudgetExceeded,
    DimensionError,
    Game,
    MixedProfile,
    enumerate_pure_nash,
    expected_utility,
    is_best_response,
    is_nash,
    pure_best_responses,
)
from equitrans.game import format_fraction, is_pure_nash, response_values, to_fraction

HALF = Fraction(1, 2)

PENNIES = Game.from_tensors([[[1, -1], [-1, 1]], [[-1, 1], [1, -1]]])
PRISONERS = Game.from_tensors([[[3, 0], [5, 1]], [[3, 5], [0, 1]]])


def test_from_tensors_is_row_major():
    g = Game.from_tensors([[[1, 2], [3, 4]], [[5, 6], [7, 8]]])
    assert g.shape == (2, 2)
    assert g.payoffs[0] == (1, 2, 3, 4)
    assert g.payoff(1, (1, 0)) == 7


def test_three_player_indexing():
    g = Game((2, 3, 2), tuple(tuple(range(12)) for _ in range(3)))
    assert g.strides == (6, 2, 1)
    assert g.payoff(0, (1, 2, 1)) == 11
    assert g.opponent_shape(1) == (2, 2)


def test_payoffs_are_exact():
    g = Game((2, 2), (("1/3", 0, 1, 2), (0, 0, 0, 0)))
    assert g.payoffs[0][0] == Fraction(1, 3)
    with pytest.raises(TypeError):
        Game((2, 2), ((0.5, 0, 0, 0), (0, 0, 0, 0)))


@pytest.mark.parametrize(
    "shape, payoffs",
    [((2,), ((0, 0),)), ((1, 2), ((0, 0), (0, 0))), ((2, 2), ((0, 0, 0),) * 2), ((2, 2), ((0,) * 4,))],
)
def test_malformed_games(shape, payoffs):
    with pytest.raises(DimensionError):
        Game(shape, payoffs)


def test_mixed_profile_validation():
    with pytest.raises(ValueError):
        MixedProfile(((HALF, HALF), (1, 1)))
    with pytest.raises(ValueError):
        MixedProfile(((2, -1), (1, 0)))
    s = MixedProfile((("1/2", "1/2"), (0, 1)))
    assert s.support(0) == {0, 1}
    assert s.as_pure() is None
    assert MixedProfile.pure((2, 3), (1, 2)).as_pure() == (1, 2)


def test_expected_utility_pennies():
    s = MixedProfile(((HALF, HALF), (Fraction(1, 3), Fraction(2, 3))))
    assert expected_utility(PENNIES, 0, s) == 0
    s = MixedProfile(((1, 0), (Fraction(1, 4), Fraction(3, 4))))
    assert expected_utility(PENNIES, 0, s) == Fraction(-1, 2)
    assert expected_utility(PENNIES, 1, s) == Fraction(1, 2)


def test_response_values_scaled():
    values, scale = response_values(PENNIES, 0, ((Fraction(1, 4), Fraction(3, 4)),))
    assert [Fraction(v, scale) for v in values] == [Fraction(-1, 2), Fraction(1, 2)]


def test_best_responses_pennies():
    assert pure_best_responses(PENNIES, 0, ((HALF, HALF),)).pure_responses == {0, 1}
    assert pure_best_responses(PENNIES, 0, ((1, 0),)).pure_responses == {0}
    assert pure_best_responses(PENNIES, 1, ((1, 0),)).pure_responses == {1}


def test_best_response_shape_errors():
    with pytest.raises(DimensionError):
        pure_best_responses(PENNIES, 0, ((1, 0, 0),))
    with pytest.raises(DimensionError):
        pure_best_responses(PENNIES, 2, ((1, 0),))


def test_nash_checks():
    half = MixedProfile(((HALF, HALF), (HALF, HALF)))
    assert is_nash(PENNIES, half)
    assert not is_nash(PENNIES, MixedProfile.pure((2, 2), (0, 0)))
    assert is_nash(PRISONERS, MixedProfile.pure((2, 2), (1, 1)))
    assert not is_best_response(PRISONERS, 0, MixedProfile.pure((2, 2), (0, 1)))


def test_enumerate_pure_nash():
    assert enumerate_pure_nash(PENNIES) == frozenset()
    assert enumerate_pure_nash(PRISONERS) == {(1, 1)}
    assert enumerate_pure_nash(Game.constant((2, 3, 2), 5)) == frozenset(Game.constant((2, 3, 2), 5).profiles())
    with pytest.raises(BudgetExceeded):
        enumerate_pure_nash(PRISONERS, budget=3)


def test_approximate_ties():
    eps = Fraction(1, 10**30)
    g = Game((2, 2), ((1, 0, 1 + eps, 0), (0, 0, 0, 0)), approximate=True)
    assert pure_best_responses(g, 0, ((1, 0),)).pure_responses == {0, 1}
    assert is_pure_nash(g, (0, 0))
    exact = Game(g.shape, g.payoffs)
    assert pure_best_responses(exact, 0, ((1, 0),)).pure_responses == {1}


def test_fraction_helpers():
    assert to_fraction(" 3/6 ") == HALF
    with pytest.raises(TypeError):
        to_fraction(True)
    assert format_fraction(Fraction(4, 2)) == 2
    assert format_fraction(Fraction(-1, 3)) == "-1/3"
