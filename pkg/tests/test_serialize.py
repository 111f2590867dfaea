import json

import pytest

from equitrans import Game, GameTransformation, ParseError, PatSpec, PowerOddInt
from equitrans.serialize import (
    any_transformation_from_json,
    dumps,
    game_from_json,
    game_to_json,
    pat_from_json,
    pat_to_json,
    read_json,
    transformation_from_json,
    transformation_to_json,
)


def test_game_round_trip():
    g = Game((2, 3), ((1, "1/2", 0, -3, 2, "7/3"), (0,) * 6))
    data = game_to_json(g)
    assert data["payoffs"][0] == [1, "1/2", 0, -3, 2, "7/3"]
    assert game_from_json(json.loads(dumps(data))) == g


def test_transformation_round_trip():
    h = GameTransformation.identity((2, 2)).replace(0, (1, 1), PowerOddInt(3))
    assert transformation_from_json(transformation_to_json(h)) == h


def test_pat_round_trip_and_defaults():
    p = PatSpec.bimatrix((2, 2), 2, (1, 0))
    assert pat_from_json(pat_to_json(p)) == p
    sparse = {"shape": [2, 2], "pat": {"player 1": {"alpha": 2, "constants": [1, 0]}}}
    assert pat_from_json(sparse) == p


@pytest.mark.parametrize(
    "obj",
    [
        [],
        {"shape": [2, 2], "payoffs": [[1, 2, 3, 4]]},
        {"shape": [2, 2], "payoffs": [[1, 2, 3, 0.5], [0, 0, 0, 0]]},
        {"shape": [2, 2], "payoffs": [[1, 2, 3, "x"], [0, 0, 0, 0]]},
        {"players": 3, "shape": [2, 2], "payoffs": [[0] * 4] * 2},
        {"shape": "2x2", "payoffs": []},
    ],
)
def test_bad_games(obj):
    with pytest.raises(ParseError):
        game_from_json(obj)


@pytest.mark.parametrize(
    "obj",
    [
        {"shape": [2, 2], "maps": []},
        {"shape": [2, 2], "maps": {"player 1": [{"pow": 3}] * 4}},
        {"shape": [2, 2], "maps": {"player 1": [{"pow": 3}] * 4, "player 2": [{"pow": 3}] * 3}},
        {"shape": [2, 2], "maps": {"player 1": [{"pow": 3}] * 4, "player 2": [{"pow": 3}] * 4, "player 3": []}},
        {"shape": [2, 2], "pat": {"player 1": {"alpha": 0}}},
        {"shape": [2, 2], "pat": {"player 1": {"constants": [1]}}},
    ],
)
def test_bad_transformations(obj):
    with pytest.raises(ParseError):
        any_transformation_from_json(obj)


def test_read_json_errors(tmp_path):
    with pytest.raises(ParseError):
        read_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ParseError):
        read_json(bad)
