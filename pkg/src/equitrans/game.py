"""Normal-form games with exact rational payoffs.

Pure strategies are 0-based indices.  A payoff tensor is stored flat in
row-major order (the last player's index varies fastest), which is also the
layout of the JSON file format.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded, DimensionError

DEFAULT_PROFILE_BUDGET = 10**6

# Ties in games built from ``exp`` evaluations are decided up to this slack.
APPROX_TOL = Fraction(1, 10**18)

PureProfile = tuple[int, ...]
Strategy = tuple[Fraction, ...]
OpponentProfile = tuple[Strategy, ...]


def to_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected so that no binary rounding leaks into exact data.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not payoffs")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected int, Fraction or 'p/q' string, got {type(value).__name__}")


def format_fraction(x: Fraction) -> int | str:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _flatten(tensor, depth: int) -> list:
    if depth == 0:
        return [tensor]
    out = []
    for sub in tensor:
        out.extend(_flatten(sub, depth - 1))
    return out


@dataclass(frozen=True)
class Game:
    """An N-player game given by one flat payoff tensor per player.

    ``approximate`` marks games whose payoffs are rounded images of
    irrational values (e.g. after applying ``exp``); best responses in such
    games treat values within ``APPROX_TOL`` of the maximum as ties.
    """

    shape: tuple[int, ...]
    payoffs: tuple[tuple[Fraction, ...], ...]
    approximate: bool = False

    def __post_init__(self):
        shape = tuple(int(m) for m in self.shape)
        if len(shape) < 2:
            raise DimensionError("a game needs at least two players")
        if any(m < 2 for m in shape):
            raise DimensionError(f"every player needs at least two strategies, got {shape}")
        if len(self.payoffs) != len(shape):
            raise DimensionError(f"expected {len(shape)} payoff tensors, got {len(self.payoffs)}")
        size = math.prod(shape)
        payoffs = []
        for i, table in enumerate(self.payoffs):
            table = tuple(to_fraction(v) for v in table)
            if len(table) != size:
                raise DimensionError(f"payoff tensor of player {i} has {len(table)} entries, expected {size}")
            payoffs.append(table)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "payoffs", tuple(payoffs))

    @classmethod
    def from_tensors(cls, tensors: Sequence, approximate: bool = False) -> Game:
        """Build a game from nested (N-dimensional) payoff arrays."""
        first = tensors[0]
        shape = []
        probe = first
        while isinstance(probe, (list, tuple)):
            shape.append(len(probe))
            probe = probe[0]
        flat = [_flatten(t, len(shape)) for t in tensors]
        return cls(tuple(shape), tuple(tuple(t) for t in flat), approximate)

    @classmethod
    def constant(cls, shape: Sequence[int], value) -> Game:
        size = math.prod(shape)
        z = to_fraction(value)
        return cls(tuple(shape), tuple((z,) * size for _ in shape))

    @property
    def num_players(self) -> int:
        return len(self.shape)

    @property
    def num_profiles(self) -> int:
        return math.prod(self.shape)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        strides = [1] * len(self.shape)
        for j in range(len(self.shape) - 2, -1, -1):
            strides[j] = strides[j + 1] * self.shape[j + 1]
        return tuple(strides)

    def profiles(self) -> Iterator[PureProfile]:
        """All pure profiles in storage order."""
        return itertools.product(*(range(m) for m in self.shape))

    def index(self, profile: Sequence[int]) -> int:
        if len(profile) != len(self.shape):
            raise DimensionError(f"profile {tuple(profile)} does not match shape {self.shape}")
        flat = 0
        for k, m, stride in zip(profile, self.shape, self.strides):
            if not 0 <= k < m:
                raise DimensionError(f"profile {tuple(profile)} out of bounds for shape {self.shape}")
            flat += k * stride
        return flat

    def payoff(self, player: int, profile: Sequence[int]) -> Fraction:
        return self.payoffs[player][self.index(profile)]

    def matrix(self, player: int) -> list[list[Fraction]]:
        """Payoffs of ``player`` as a row/column matrix (two-player games only)."""
        if self.num_players != 2:
            raise DimensionError("matrix view needs a two-player game")
        m, n = self.shape
        table = self.payoffs[player]
        return [list(table[r * n:(r + 1) * n]) for r in range(m)]

    def opponent_shape(self, player: int) -> tuple[int, ...]:
        return self.shape[:player] + self.shape[player + 1:]

    @cached_property
    def _integer_payoffs(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        # Common denominator so best-response comparisons run on Python ints.
        den = 1
        for table in self.payoffs:
            for v in table:
                den = math.lcm(den, v.denominator)
        scaled = tuple(tuple(v.numerator * (den // v.denominator) for v in table) for table in self.payoffs)
        return den, scaled


@dataclass(frozen=True)
class MixedProfile:
    """One probability vector per player."""

    strategies: tuple[Strategy, ...]

    def __post_init__(self):
        strategies = tuple(_as_strategy(s) for s in self.strategies)
        object.__setattr__(self, "strategies", strategies)

    @classmethod
    def pure(cls, shape: Sequence[int], profile: Sequence[int]) -> MixedProfile:
        return cls(tuple(basis_vector(m, k) for m, k in zip(shape, profile)))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.strategies)

    def opponents(self, player: int) -> OpponentProfile:
        return self.strategies[:player] + self.strategies[player + 1:]

    def support(self, player: int) -> frozenset[int]:
        return frozenset(k for k, p in enumerate(self.strategies[player]) if p)

    def as_pure(self) -> PureProfile | None:
        """The pure profile this equals, if every strategy is a basis vector."""
        out = []
        for s in self.strategies:
            if max(s) != 1:
                return None
            out.append(s.index(1))
        return tuple(out)


def basis_vector(m: int, k: int) -> Strategy:
    return tuple(Fraction(int(j == k)) for j in range(m))


def _as_strategy(vec: Iterable) -> Strategy:
    if isinstance(vec, tuple) and all(type(p) is Fraction for p in vec):
        s = vec
    else:
        s = tuple(to_fraction(p) for p in vec)
    if not s:
        raise ValueError("empty mixed strategy")
    den = 1
    for p in s:
        den = math.lcm(den, p.denominator)
    nums = [p.numerator * (den // p.denominator) for p in s]
    if any(n < 0 for n in nums):
        raise ValueError(f"negative probability in {s}")
    if sum(nums) != den:
        raise ValueError(f"probabilities sum to {sum(s)}, not 1")
    return s


def with_strategy(opp: OpponentProfile, player: int, strategy: Sequence) -> tuple[Strategy, ...]:
    """Insert ``strategy`` for ``player`` into an opponent profile."""
    return tuple(opp[:player]) + (_as_strategy(strategy),) + tuple(opp[player:])


@dataclass(frozen=True)
class BestResponseSet:
    player: int
    pure_responses: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "pure_responses", frozenset(self.pure_responses))
        if not self.pure_responses:
            raise ValueError("a best-response set is never empty")

    def sorted(self) -> list[int]:
        return sorted(self.pure_responses)


def _check_profile(g: Game, s: MixedProfile) -> None:
    if s.shape != g.shape:
        raise DimensionError(f"profile shape {s.shape} does not match game shape {g.shape}")


def _check_opponents(g: Game, player: int, opp: Sequence[Sequence]) -> OpponentProfile:
    if not 0 <= player < g.num_players:
        raise DimensionError(f"no player {player} in a {g.num_players}-player game")
    opp = tuple(_as_strategy(s) for s in opp)
    if tuple(len(s) for s in opp) != g.opponent_shape(player):
        raise DimensionError(
            f"opponent strategies of shape {tuple(len(s) for s in opp)} do not match {g.opponent_shape(player)}"
        )
    return opp


def expected_utility(g: Game, player: int, s: MixedProfile) -> Fraction:
    """Expected payoff of ``player`` under ``s``, summed over every pure profile."""
    _check_profile(g, s)
    table = g.payoffs[player]
    total = Fraction(0)
    for flat, profile in enumerate(g.profiles()):
        weight = Fraction(1)
        for strategy, k in zip(s.strategies, profile):
            weight *= strategy[k]
            if not weight:
                break
        if weight:
            total += weight * table[flat]
    return total


def response_values(g: Game, player: int, opp: Sequence[Sequence]) -> tuple[list[int], int]:
    """Payoff of each pure response against ``opp``, scaled to integers.

    Returns ``(values, scale)`` where ``values[k] / scale`` is the expected
    payoff of pure strategy ``k``.
    """
    opp = _check_opponents(g, player, opp)
    den, scaled = g._integer_payoffs
    table = scaled[player]
    strides = g.strides
    others = [j for j in range(g.num_players) if j != player]
    scale = den
    weights = []
    for vec in opp:
        d = 1
        for p in vec:
            d = math.lcm(d, p.denominator)
        weights.append([(k, p.numerator * (d // p.denominator)) for k, p in enumerate(vec) if p])
        scale *= d
    m = g.shape[player]
    own_stride = strides[player]
    values = [0] * m
    for combo in itertools.product(*weights):
        base = 0
        w = 1
        for j, (k, wk) in zip(others, combo):
            base += k * strides[j]
            w *= wk
        for k in range(m):
            values[k] += w * table[base + k * own_stride]
    return values, scale


def pure_best_responses(g: Game, player: int, opp: Sequence[Sequence]) -> BestResponseSet:
    values, scale = response_values(g, player, opp)
    best = max(values)
    if g.approximate:
        slack = APPROX_TOL * scale
        members = [k for k, v in enumerate(values) if best - v <= slack]
    else:
        members = [k for k, v in enumerate(values) if v == best]
    return BestResponseSet(player, frozenset(members))


def is_best_response(g: Game, player: int, s: MixedProfile) -> bool:
    _check_profile(g, s)
    pbr = pure_best_responses(g, player, s.opponents(player)).pure_responses
    return s.support(player) <= pbr


def is_nash(g: Game, s: MixedProfile) -> bool:
    _check_profile(g, s)
    return all(is_best_response(g, i, s) for i in range(g.num_players))


def is_pure_nash(g: Game, profile: Sequence[int]) -> bool:
    flat = g.index(profile)
    for i, table in enumerate(g.payoffs):
        current = table[flat]
        stride = g.strides[i]
        base = flat - profile[i] * stride
        best = max(table[base + k * stride] for k in range(g.shape[i]))
        if g.approximate:
            if best - current > APPROX_TOL:
                return False
        elif current != best:
            return False
    return True


def enumerate_pure_nash(g: Game, budget: int = DEFAULT_PROFILE_BUDGET) -> frozenset[PureProfile]:
    if g.num_profiles > budget:
        raise BudgetExceeded(f"{g.num_profiles} pure profiles exceed the budget of {budget}")
    return frozenset(p for p in g.profiles() if is_pure_nash(g, p))
