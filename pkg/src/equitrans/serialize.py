"""JSON file formats for games, transformations and PATs.

Rationals are written as integers or ``"p/q"`` strings.  Payoff tensors and
map tables are flat arrays in row-major order, last player fastest.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import DimensionError, ParseError
from .game import Game, format_fraction, to_fraction
from .scalarmap import map_from_json
from .transforms import GameTransformation, PatSpec, pat_to_transformation


def _rational(value, where: str):
    if isinstance(value, float) or isinstance(value, bool):
        raise ParseError(f"{where}: rationals must be integers or 'p/q' strings, got {value!r}")
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: bad rational {value!r}") from exc


def _shape(obj, where: str) -> tuple[int, ...]:
    shape = obj.get("shape")
    if not isinstance(shape, list) or not all(isinstance(m, int) and not isinstance(m, bool) for m in shape):
        raise ParseError(f"{where}: 'shape' must be a list of integers")
    return tuple(shape)


def _player_key(i: int) -> str:
    return f"player {i + 1}"


def game_to_json(g: Game) -> dict:
    out = {
        "players": g.num_players,
        "shape": list(g.shape),
        "payoffs": [[format_fraction(v) for v in table] for table in g.payoffs],
    }
    if g.approximate:
        out["approximate"] = True
    return out


def game_from_json(obj) -> Game:
    if not isinstance(obj, dict):
        raise ParseError("a game file holds a JSON object")
    shape = _shape(obj, "game")
    players = obj.get("players", len(shape))
    if players != len(shape):
        raise ParseError(f"'players' is {players} but shape has {len(shape)} entries")
    payoffs = obj.get("payoffs")
    if not isinstance(payoffs, list) or not all(isinstance(t, list) for t in payoffs):
        raise ParseError("game: 'payoffs' must be a list of flat arrays")
    tables = tuple(
        tuple(_rational(v, f"payoffs[{i}][{k}]") for k, v in enumerate(table)) for i, table in enumerate(payoffs)
    )
    try:
        return Game(shape, tables, bool(obj.get("approximate", False)))
    except DimensionError as exc:
        raise ParseError(f"game: {exc}") from exc


def transformation_to_json(h: GameTransformation) -> dict:
    return {
        "shape": list(h.shape),
        "maps": {_player_key(i): [m.to_json() for m in table] for i, table in enumerate(h.maps)},
    }


def transformation_from_json(obj) -> GameTransformation:
    if not isinstance(obj, dict):
        raise ParseError("a transformation file holds a JSON object")
    shape = _shape(obj, "transformation")
    maps = obj.get("maps")
    if not isinstance(maps, dict):
        raise ParseError("transformation: 'maps' must be an object keyed 'player i'")
    tables = []
    for i in range(len(shape)):
        table = maps.get(_player_key(i))
        if not isinstance(table, list):
            raise ParseError(f"transformation: missing map list for {_player_key(i)!r}")
        tables.append(tuple(map_from_json(m) for m in table))
    unknown = set(maps) - {_player_key(i) for i in range(len(shape))}
    if unknown:
        raise ParseError(f"transformation has maps for unknown players {sorted(unknown)}")
    try:
        return GameTransformation(shape, tuple(tables))
    except DimensionError as exc:
        raise ParseError(f"transformation: {exc}") from exc


def pat_to_json(p: PatSpec) -> dict:
    return {
        "shape": list(p.shape),
        "pat": {
            _player_key(i): {"alpha": str(a), "constants": [str(c) for c in table]}
            for i, (a, table) in enumerate(zip(p.slopes, p.constants))
        },
    }


def pat_from_json(obj) -> PatSpec:
    """Players missing from ``"pat"`` get slope 1 and zero constants."""
    if not isinstance(obj, dict) or not isinstance(obj.get("pat"), dict):
        raise ParseError("a PAT file holds an object with a 'pat' member")
    shape = _shape(obj, "pat")
    size = math.prod(shape)
    slopes, constants = [], []
    for i, m in enumerate(shape):
        entry = obj["pat"].get(_player_key(i), {})
        if not isinstance(entry, dict):
            raise ParseError(f"pat: entry for {_player_key(i)!r} must be an object")
        slopes.append(_rational(entry.get("alpha", 1), f"{_player_key(i)}.alpha"))
        raw = entry.get("constants", [0] * (size // m))
        if not isinstance(raw, list):
            raise ParseError(f"pat: constants of {_player_key(i)!r} must be a list")
        constants.append(tuple(_rational(c, f"{_player_key(i)}.constants") for c in raw))
    try:
        return PatSpec(shape, tuple(slopes), tuple(constants))
    except ValueError as exc:
        raise ParseError(f"pat: {exc}") from exc


def any_transformation_from_json(obj) -> GameTransformation:
    """Accept either a transformation file or a PAT file."""
    if isinstance(obj, dict) and "pat" in obj:
        return pat_to_transformation(pat_from_json(obj))
    return transformation_from_json(obj)


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"
