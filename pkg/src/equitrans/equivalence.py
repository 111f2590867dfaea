"""Compare best-response and Nash sets of a game and its transform."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bimatrix import DEFAULT_SUPPORT_CAP, enumerate_bimatrix_nash
from .errors import DimensionError
from .game import (
    DEFAULT_PROFILE_BUDGET,
    Game,
    OpponentProfile,
    basis_vector,
    enumerate_pure_nash,
    format_fraction,
    pure_best_responses,
)
from .transforms import GameTransformation, apply_transformation

MAX_DYADIC_EXPONENT = 8


def br_sets_equal(g1: Game, g2: Game, player: int, opp: Sequence[Sequence]) -> bool:
    """Equal pure best responses, which is equivalent to equal mixed best-response sets."""
    if g1.shape != g2.shape:
        raise DimensionError(f"games of shapes {g1.shape} and {g2.shape} cannot be compared")
    br1 = pure_best_responses(g1, player, opp).pure_responses
    br2 = pure_best_responses(g2, player, opp).pure_responses
    return br1 == br2


def pure_nash_sets_equal(g1: Game, g2: Game, budget: int = DEFAULT_PROFILE_BUDGET) -> bool:
    if g1.shape != g2.shape:
        raise DimensionError(f"games of shapes {g1.shape} and {g2.shape} cannot be compared")
    return enumerate_pure_nash(g1, budget) == enumerate_pure_nash(g2, budget)


def random_dyadic_strategy(rng: random.Random, m: int) -> tuple[Fraction, ...]:
    """A random point of the simplex whose entries share a denominator 2**k, k <= 8."""
    total = 2 ** rng.randint(1, MAX_DYADIC_EXPONENT)
    cuts = sorted(rng.randint(0, total) for _ in range(m - 1))
    bounds = [0, *cuts, total]
    return tuple(Fraction(hi - lo, total) for lo, hi in zip(bounds, bounds[1:]))


def pure_opponent_profiles(shape: Sequence[int], player: int):
    opp_shape = tuple(shape[:player]) + tuple(shape[player + 1:])
    for combo in itertools.product(*(range(m) for m in opp_shape)):
        yield tuple(basis_vector(m, k) for m, k in zip(opp_shape, combo))


def encode_strategies(strategies: Sequence[Sequence[Fraction]]) -> list[list]:
    return [[format_fraction(p) for p in s] for s in strategies]


@dataclass(frozen=True)
class BrCheck:
    player: int
    profile: OpponentProfile
    equal: bool
    br1: tuple[int, ...]
    br2: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "player": self.player,
            "profile": encode_strategies(self.profile),
            "equal": self.equal,
            "br1": list(self.br1),
            "br2": list(self.br2),
        }


@dataclass(frozen=True)
class EquivalenceReport:
    pure_ne_equal: bool
    bimatrix_ne_equal: bool | None
    br_checks: tuple[BrCheck, ...]
    seed: int
    samples: int
    pure_ne_original: tuple = field(default=())
    pure_ne_transformed: tuple = field(default=())
    mixed_ne_certified: bool = False

    @property
    def passed(self) -> bool:
        return self.pure_ne_equal and self.bimatrix_ne_equal is not False and all(c.equal for c in self.br_checks)

    @property
    def failures(self) -> list[BrCheck]:
        return [c for c in self.br_checks if not c.equal]

    def to_json(self) -> dict:
        out = {
            "pure_ne_equal": self.pure_ne_equal,
            "bimatrix_ne_equal": self.bimatrix_ne_equal,
            "br_checks": [c.to_json() for c in self.br_checks],
            "seed": self.seed,
            "samples": self.samples,
            "passed": self.passed,
            "mixed_ne_certified": self.mixed_ne_certified,
        }
        if not self.pure_ne_equal:
            out["pure_ne_original"] = [list(p) for p in self.pure_ne_original]
            out["pure_ne_transformed"] = [list(p) for p in self.pure_ne_transformed]
        return out


def equivalence_report(
    g: Game,
    h: GameTransformation,
    samples: int = 100,
    seed: int = 0,
    budget: int = DEFAULT_PROFILE_BUDGET,
    support_cap: int = DEFAULT_SUPPORT_CAP,
) -> EquivalenceReport:
    """Check ``g`` against ``h(g)``.

    Best responses are compared at every pure opponent profile and at
    ``samples`` seeded dyadic mixed profiles per player.  Nash sets are
    compared exactly over pure profiles and, for small two-player games,
    over the isolated mixed equilibria from support enumeration.  Only the
    two-player nondegenerate case certifies equality of the full mixed Nash
    set; everything else is evidence.
    """
    transformed = apply_transformation(h, g)
    rng = random.Random(seed)
    checks = []
    for i in range(g.num_players):
        opp_shape = g.opponent_shape(i)
        profiles = list(pure_opponent_profiles(g.shape, i))
        profiles += [tuple(random_dyadic_strategy(rng, m) for m in opp_shape) for _ in range(samples)]
        for opp in profiles:
            br1 = pure_best_responses(g, i, opp).sorted()
            br2 = pure_best_responses(transformed, i, opp).sorted()
            checks.append(BrCheck(i, opp, br1 == br2, tuple(br1), tuple(br2)))
    ne1 = enumerate_pure_nash(g, budget)
    ne2 = enumerate_pure_nash(transformed, budget)
    bimatrix_equal = None
    certified = False
    if g.num_players == 2 and max(g.shape) <= support_cap and not transformed.approximate:
        sol1 = enumerate_bimatrix_nash(g, support_cap)
        sol2 = enumerate_bimatrix_nash(transformed, support_cap)
        bimatrix_equal = (
            set(sol1.equilibria) == set(sol2.equilibria)
            and set(sol1.degenerate_supports) == set(sol2.degenerate_supports)
        )
        certified = bimatrix_equal and not sol1.is_degenerate and not sol2.is_degenerate
    return EquivalenceReport(
        pure_ne_equal=ne1 == ne2,
        bimatrix_ne_equal=bimatrix_equal,
        br_checks=tuple(checks),
        seed=seed,
        samples=samples,
        pure_ne_original=tuple(sorted(ne1)),
        pure_ne_transformed=tuple(sorted(ne2)),
        mixed_ne_certified=certified,
    )
