"""Scenario-wise game transformations and positive affine transformations.

A transformation holds, for every player and every pure profile, a scalar
map applied to that player's payoff in that profile.  A positive affine
transformation (PAT) uses one positive slope per player and an additive
constant that depends only on the opponents' pure choices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .errors import DimensionError
from .game import Game, PureProfile, to_fraction
from .scalarmap import IDENTITY, Affine, ScalarMap, approximate, evaluate

NON_AFFINE = "non_affine"
NON_POSITIVE_SLOPE = "non_positive_slope"
SLOPE_MISMATCH = "slope_mismatch"
OWN_STRATEGY_DEPENDENT = "own_strategy_dependent"


def _strides(shape: Sequence[int]) -> tuple[int, ...]:
    strides = [1] * len(shape)
    for j in range(len(shape) - 2, -1, -1):
        strides[j] = strides[j + 1] * shape[j + 1]
    return tuple(strides)


def _flat(shape: Sequence[int], profile: Sequence[int]) -> int:
    if len(profile) != len(shape) or any(not 0 <= k < m for k, m in zip(profile, shape)):
        raise DimensionError(f"profile {tuple(profile)} out of bounds for shape {tuple(shape)}")
    return sum(k * s for k, s in zip(profile, _strides(shape)))


def split_profile(profile: Sequence[int], player: int) -> tuple[int, PureProfile]:
    """``(own index, opponent indices)`` of a full pure profile."""
    return profile[player], tuple(profile[:player]) + tuple(profile[player + 1:])


def join_profile(own: int, opponents: Sequence[int], player: int) -> PureProfile:
    return tuple(opponents[:player]) + (own,) + tuple(opponents[player:])


@dataclass(frozen=True)
class GameTransformation:
    shape: tuple[int, ...]
    maps: tuple[tuple[ScalarMap, ...], ...]

    def __post_init__(self):
        shape = tuple(int(m) for m in self.shape)
        size = math.prod(shape)
        maps = tuple(tuple(t) for t in self.maps)
        if len(maps) != len(shape):
            raise DimensionError(f"expected maps for {len(shape)} players, got {len(maps)}")
        for i, table in enumerate(maps):
            if len(table) != size:
                raise DimensionError(f"player {i} has {len(table)} maps, expected {size}")
            if not all(isinstance(m, ScalarMap) for m in table):
                raise TypeError("transformation entries must be ScalarMap instances")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "maps", maps)

    @classmethod
    def uniform(cls, shape: Sequence[int], m: ScalarMap) -> GameTransformation:
        size = math.prod(shape)
        return cls(tuple(shape), tuple((m,) * size for _ in shape))

    @classmethod
    def identity(cls, shape: Sequence[int]) -> GameTransformation:
        return cls.uniform(shape, IDENTITY)

    @classmethod
    def from_function(cls, shape: Sequence[int], fn: Callable[[int, PureProfile], ScalarMap]) -> GameTransformation:
        profiles = list(itertools.product(*(range(m) for m in shape)))
        return cls(tuple(shape), tuple(tuple(fn(i, p) for p in profiles) for i in range(len(shape))))

    @property
    def num_players(self) -> int:
        return len(self.shape)

    @property
    def exact(self) -> bool:
        return all(m.exact for table in self.maps for m in table)

    def profiles(self) -> Iterator[PureProfile]:
        return itertools.product(*(range(m) for m in self.shape))

    def map_at(self, player: int, profile: Sequence[int]) -> ScalarMap:
        return self.maps[player][_flat(self.shape, profile)]

    def replace(self, player: int, profile: Sequence[int], m: ScalarMap) -> GameTransformation:
        table = list(self.maps[player])
        table[_flat(self.shape, profile)] = m
        maps = list(self.maps)
        maps[player] = tuple(table)
        return GameTransformation(self.shape, tuple(maps))

    def then(self, outer: Callable[[int, PureProfile, ScalarMap], ScalarMap]) -> GameTransformation:
        """Rebuild every map as ``outer(player, profile, current_map)``."""
        return GameTransformation.from_function(self.shape, lambda i, p: outer(i, p, self.map_at(i, p)))


@dataclass(frozen=True)
class PatSpec:
    """Per player: a positive slope and one constant per opponent pure profile.

    ``constants[i]`` is flat in row-major order over the opponents' shape
    (players in their natural order with player ``i`` removed).
    """

    shape: tuple[int, ...]
    slopes: tuple[Fraction, ...]
    constants: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        shape = tuple(int(m) for m in self.shape)
        slopes = tuple(to_fraction(a) for a in self.slopes)
        constants = tuple(tuple(to_fraction(c) for c in table) for table in self.constants)
        if len(slopes) != len(shape) or len(constants) != len(shape):
            raise DimensionError("a PAT needs one slope and one constant table per player")
        for i, (a, table) in enumerate(zip(slopes, constants)):
            if a <= 0:
                raise ValueError(f"slope of player {i} must be positive, got {a}")
            expected = math.prod(shape) // shape[i]
            if len(table) != expected:
                raise DimensionError(f"player {i} needs {expected} constants, got {len(table)}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "constants", constants)

    @classmethod
    def identity(cls, shape: Sequence[int]) -> PatSpec:
        size = math.prod(shape)
        return cls(tuple(shape), (Fraction(1),) * len(shape), tuple((Fraction(0),) * (size // m) for m in shape))

    @classmethod
    def bimatrix(cls, shape: Sequence[int], alpha=1, a=None, beta=1, b=None) -> PatSpec:
        """``A' = alpha*A + 1 a^T`` and ``B' = beta*B + b 1^T``.

        ``a`` is indexed by the column player's choice, ``b`` by the row
        player's choice.
        """
        m, n = shape
        a = tuple(a) if a is not None else (0,) * n
        b = tuple(b) if b is not None else (0,) * m
        return cls((m, n), (alpha, beta), (a, b))

    def opponent_shape(self, player: int) -> tuple[int, ...]:
        return self.shape[:player] + self.shape[player + 1:]

    def constant(self, player: int, opponents: Sequence[int]) -> Fraction:
        return self.constants[player][_flat(self.opponent_shape(player), opponents)]


def apply_transformation(h: GameTransformation, g: Game) -> Game:
    """Apply every per-profile map to the matching payoff.

    When a map has no exact rational value (``exp``) the result is a game
    flagged ``approximate`` whose payoffs are 2**-160-rounded enclosures.
    """
    if h.shape != g.shape:
        raise DimensionError(f"transformation shape {h.shape} does not match game shape {g.shape}")
    if h.exact:
        payoffs = tuple(
            tuple(evaluate(m, v) for m, v in zip(maps, table)) for maps, table in zip(h.maps, g.payoffs)
        )
        return Game(g.shape, payoffs, g.approximate)
    payoffs = tuple(
        tuple(approximate(m, v) for m, v in zip(maps, table)) for maps, table in zip(h.maps, g.payoffs)
    )
    return Game(g.shape, payoffs, approximate=True)


def pat_to_transformation(p: PatSpec) -> GameTransformation:
    def make(i: int, profile: PureProfile) -> ScalarMap:
        _, opp = split_profile(profile, i)
        return Affine(p.slopes[i], p.constant(i, opp))

    return GameTransformation.from_function(p.shape, make)


def apply_pat(p: PatSpec, g: Game) -> Game:
    return apply_transformation(pat_to_transformation(p), g)


def compose_pats(first: PatSpec, second: PatSpec) -> PatSpec:
    """The PAT equal to applying ``first`` and then ``second``."""
    if first.shape != second.shape:
        raise DimensionError("PATs of different shapes do not compose")
    slopes = tuple(a2 * a1 for a1, a2 in zip(first.slopes, second.slopes))
    constants = tuple(
        tuple(a2 * c1 + c2 for c1, c2 in zip(t1, t2))
        for a2, t1, t2 in zip(second.slopes, first.constants, second.constants)
    )
    return PatSpec(first.shape, slopes, constants)


@dataclass(frozen=True)
class PatRefutation:
    """Why a transformation is not a PAT.

    ``profile`` is the 0-based full pure profile of the offending map;
    ``other`` is the profile it was compared with, if any.
    """

    reason: str
    player: int
    profile: PureProfile
    other: PureProfile | None = None
    detail: str = ""

    def message(self) -> str:
        def fmt(p):
            return f"({self.player + 1}; {','.join(str(k + 1) for k in p)})"

        if self.reason == NON_AFFINE:
            text = f"non-affine map at {fmt(self.profile)}"
        elif self.reason == NON_POSITIVE_SLOPE:
            text = f"non-positive slope at {fmt(self.profile)}"
        elif self.reason == SLOPE_MISMATCH:
            text = f"slope mismatch between {fmt(self.profile)} and {fmt(self.other)}"
        else:
            text = f"own-strategy-dependent constant between {fmt(self.profile)} and {fmt(self.other)}"
        return f"{text}: {self.detail}" if self.detail else text


def detect_pat(h: GameTransformation) -> PatSpec | PatRefutation:
    """Extract the PAT behind ``h`` or explain why there is none.

    Works on canonical forms, so the answer is structural: a map that is
    affine only semantically (say ``exp`` composed with ``log``) is refuted.
    """
    slopes = []
    constants = []
    for i in range(h.num_players):
        profiles = list(h.profiles())
        canon = []
        for p in profiles:
            m = h.map_at(i, p).canonical()
            if not isinstance(m, Affine):
                return PatRefutation(NON_AFFINE, i, p, detail=str(m))
            canon.append(m)
        for p, m in zip(profiles, canon):
            if m.a <= 0:
                return PatRefutation(NON_POSITIVE_SLOPE, i, p, detail=f"slope {m.a}")
        for p, m in zip(profiles, canon):
            if m.a != canon[0].a:
                return PatRefutation(SLOPE_MISMATCH, i, p, profiles[0], detail=f"{m.a} vs {canon[0].a}")
        table: dict[PureProfile, tuple[Fraction, PureProfile]] = {}
        for p, m in zip(profiles, canon):
            _, opp = split_profile(p, i)
            if opp in table and table[opp][0] != m.c:
                return PatRefutation(
                    OWN_STRATEGY_DEPENDENT, i, p, table[opp][1], detail=f"{m.c} vs {table[opp][0]}"
                )
            table.setdefault(opp, (m.c, p))
        opp_shape = h.shape[:i] + h.shape[i + 1:]
        order = itertools.product(*(range(m) for m in opp_shape))
        slopes.append(canon[0].a)
        constants.append(tuple(table[o][0] for o in order))
    return PatSpec(h.shape, tuple(slopes), tuple(constants))


def depends_only_on_opponents(h: GameTransformation, player: int) -> bool:
    """Whether the maps of ``player`` are structurally identical across their own choices."""
    seen: dict[PureProfile, ScalarMap] = {}
    for p in h.profiles():
        _, opp = split_profile(p, player)
        m = h.map_at(player, p).canonical()
        if seen.setdefault(opp, m) != m:
            return False
    return True
