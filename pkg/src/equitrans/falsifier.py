"""Witness games for transformations that are not positive affine.

The probes mirror the constructions that show any best-response-preserving
transformation is a PAT, run in contrapositive:

* ``probe_constant_game``: a constant game, where every pure response is a
  best response, exposes maps that depend on the player's own choice.
* ``probe_distance_relation``: a two-cell game against a half/half opponent
  mix ties row 0's membership in the best-response set to
  ``z - w >= z' - w'``; a transformation must preserve that comparison
  between distances.
* ``probe_monotonicity`` and ``probe_translation_invariance`` test single
  maps for strict increase and for distances that do not depend on the base
  point.  Their violations are lifted into distance-relation witnesses.

Every witness is re-verified before it is returned.  Comparisons that
involve ``exp`` are decided on certified intervals and skipped when the
interval does not settle the sign.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .equivalence import br_sets_equal, encode_strategies
from .errors import DimensionError
from .game import (
    BestResponseSet,
    Game,
    OpponentProfile,
    PureProfile,
    basis_vector,
    format_fraction,
    pure_best_responses,
    response_values,
)
from .scalarmap import Interval, ScalarMap, enclose, evaluate
from .serialize import game_to_json, pat_to_json
from .transforms import (
    NON_AFFINE,
    NON_POSITIVE_SLOPE,
    SLOPE_MISMATCH,
    GameTransformation,
    PatRefutation,
    PatSpec,
    apply_transformation,
    depends_only_on_opponents,
    detect_pat,
    join_profile,
)

DEFAULT_GRID = tuple(Fraction(v) for v in ("-2", "-1", "-1/2", "0", "1/2", "1", "2", "3"))
DEFAULT_BUDGET = 10**5

CONSTANT_GAME = "constant_game"
DISTANCE_RELATION = "distance_relation"
MONOTONICITY = "monotonicity"
TRANSLATION_INVARIANCE = "translation_invariance"


def refine_grid(grid: Sequence[Fraction], times: int) -> tuple[Fraction, ...]:
    """Insert midpoints between neighbours ``times`` times."""
    pts = sorted(set(Fraction(v) for v in grid))
    for _ in range(times):
        mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
        pts = sorted(set(pts) | set(mids))
    return tuple(pts)


@lru_cache(maxsize=1 << 14)
def _canonical(m: ScalarMap) -> ScalarMap:
    return m.canonical()


def signed_sum_sign(terms: Sequence[tuple[Fraction, ScalarMap, Fraction]]) -> int | None:
    """Certified sign of ``sum(c * m(x))``.

    Identical ``(map, argument)`` pairs cancel symbolically before anything
    is evaluated, so exact ties survive even for ``exp``.
    """
    acc: dict[tuple[ScalarMap, Fraction], Fraction] = {}
    for c, m, x in terms:
        key = (_canonical(m), x)
        acc[key] = acc.get(key, Fraction(0)) + c
    exact = Fraction(0)
    approx = Interval.point(Fraction(0))
    for (m, x), c in acc.items():
        if not c:
            continue
        if m.exact:
            exact += c * evaluate(m, x)
        else:
            approx = approx + enclose(m, x).scale(c)
    return (approx + Interval.point(exact)).sign()


def _weighted_opponents(g: Game, player: int, opp: OpponentProfile) -> list[tuple[Fraction, PureProfile]]:
    out = []
    for combo in itertools.product(*[[(k, p) for k, p in enumerate(s) if p] for s in opp]):
        w = Fraction(1)
        for _, p in combo:
            w *= p
        out.append((w, tuple(k for k, _ in combo)))
    return out


def _response_terms(h: GameTransformation, g: Game, player: int, opp: OpponentProfile, k: int):
    for w, q in _weighted_opponents(g, player, opp):
        profile = join_profile(k, q, player)
        yield w, h.map_at(player, profile), g.payoff(player, profile)


def certified_best_responses(
    h: GameTransformation, g: Game, player: int, opp: Sequence[Sequence]
) -> frozenset[int] | None:
    """Pure best responses of ``player`` in ``h(g)``, or None if undecidable.

    Exact transformations are applied outright; otherwise each pairwise
    comparison of responses is decided by ``signed_sum_sign``.
    """
    if h.exact and not g.approximate:
        return pure_best_responses(apply_transformation(h, g), player, opp).pure_responses
    opp = tuple(tuple(Fraction(p) for p in s) for s in opp)
    m = g.shape[player]
    terms = [list(_response_terms(h, g, player, opp, k)) for k in range(m)]
    best = set(range(m))
    for k in range(m):
        for j in range(m):
            if j == k:
                continue
            diff = terms[k] + [(-c, f, x) for c, f, x in terms[j]]
            sign = signed_sum_sign(diff)
            if sign is None:
                return None
            if sign < 0:
                best.discard(k)
    return frozenset(best)


@dataclass(frozen=True)
class TranscriptRow:
    response: int
    original: Fraction
    transformed: Fraction | Interval

    def to_json(self) -> dict:
        t = self.transformed
        if isinstance(t, Interval):
            t = {"lo": format_fraction(t.lo), "hi": format_fraction(t.hi), "approx": float(t.mid)}
        else:
            t = format_fraction(t)
        return {"response": self.response, "original": format_fraction(self.original), "transformed": t}


@dataclass(frozen=True)
class Witness:
    """A game and opponent profile where ``h`` changes a best-response set."""

    game: Game
    player: int
    opponent_profile: OpponentProfile
    br_original: BestResponseSet
    br_transformed: BestResponseSet
    probe: str
    inputs: tuple[tuple[str, object], ...]
    transcript: tuple[TranscriptRow, ...]
    certificate: str

    def to_json(self) -> dict:
        inputs = {}
        for name, value in self.inputs:
            if isinstance(value, Fraction):
                value = format_fraction(value)
            elif isinstance(value, tuple):
                value = list(value)
            inputs[name] = value
        return {
            "probe": self.probe,
            "player": self.player,
            "inputs": inputs,
            "opponent_profile": encode_strategies(self.opponent_profile),
            "br_original": self.br_original.sorted(),
            "br_transformed": self.br_transformed.sorted(),
            "certificate": self.certificate,
            "game": game_to_json(self.game),
            "transcript": [row.to_json() for row in self.transcript],
        }


@dataclass(frozen=True)
class Violation:
    """A single map failing strict monotonicity or translation invariance."""

    probe: str
    player: int
    opponents: PureProfile
    own: int
    inputs: tuple[tuple[str, Fraction], ...]

    def value(self, name: str) -> Fraction:
        return dict(self.inputs)[name]


@dataclass(frozen=True)
class IsPat:
    pat: PatSpec

    def to_json(self) -> dict:
        return {"verdict": "is_pat", **pat_to_json(self.pat)}


@dataclass(frozen=True)
class NoRefutation:
    probes: int
    reason: PatRefutation
    grid: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "verdict": "no_refutation_found",
            "structural_reason": self.reason.message(),
            "probes": self.probes,
            "grid": [format_fraction(v) for v in self.grid],
        }


def _transcript(h, g, player, opp) -> tuple[tuple[TranscriptRow, ...], str]:
    values, scale = response_values(g, player, opp)
    rows = []
    exact = True
    for k in range(g.shape[player]):
        terms = list(_response_terms(h, g, player, opp, k))
        if all(f.exact for _, f, _ in terms):
            t = sum((c * evaluate(f, x) for c, f, x in terms), Fraction(0))
        else:
            exact = False
            t = Interval.point(Fraction(0))
            for c, f, x in terms:
                t = t + enclose(f, x).scale(c)
        rows.append(TranscriptRow(k, Fraction(values[k], scale), t))
    return tuple(rows), "exact" if exact else "interval"


def make_witness(
    h: GameTransformation, g: Game, player: int, opp: OpponentProfile, probe: str, inputs
) -> Witness | None:
    """Build a verified witness, or None if ``h`` keeps the best responses here.

    The transformed best responses are computed twice: once certified
    (exact or interval) and once through ``br_sets_equal`` on the applied
    game.  Both have to report a change.
    """
    br_o = pure_best_responses(g, player, opp)
    certified = certified_best_responses(h, g, player, opp)
    if certified is None or certified == br_o.pure_responses:
        return None
    transformed = apply_transformation(h, g)
    if br_sets_equal(g, transformed, player, opp):
        return None
    if pure_best_responses(transformed, player, opp).pure_responses != certified:
        return None
    transcript, certificate = _transcript(h, g, player, opp)
    return Witness(
        game=g,
        player=player,
        opponent_profile=tuple(tuple(s) for s in opp),
        br_original=br_o,
        br_transformed=BestResponseSet(player, certified),
        probe=probe,
        inputs=tuple(inputs),
        transcript=transcript,
        certificate=certificate,
    )


def _check(h: GameTransformation, player: int):
    if not 0 <= player < h.num_players:
        raise DimensionError(f"no player {player} in a {h.num_players}-player transformation")


def _opponent_shape(h: GameTransformation, player: int) -> tuple[int, ...]:
    return h.shape[:player] + h.shape[player + 1:]


def _pure_opponents(h: GameTransformation, player: int, k_minus_i: Sequence[int]) -> OpponentProfile:
    shape = _opponent_shape(h, player)
    if len(k_minus_i) != len(shape) or any(not 0 <= k < m for k, m in zip(k_minus_i, shape)):
        raise DimensionError(f"opponent profile {tuple(k_minus_i)} does not fit {shape}")
    return tuple(basis_vector(m, k) for m, k in zip(shape, k_minus_i))


def probe_constant_game(
    h: GameTransformation, player: int, k_minus_i: Sequence[int], z
) -> Witness | None:
    """Constant game ``u == z``: every response is a best response before the transformation."""
    _check(h, player)
    z = Fraction(z)
    opp = _pure_opponents(h, player, k_minus_i)
    maps = [h.map_at(player, join_profile(l, k_minus_i, player)) for l in range(h.shape[player])]
    if all(_canonical(m) == _canonical(maps[0]) for m in maps):
        return None
    g = Game.constant(h.shape, z)
    return make_witness(h, g, player, opp, CONSTANT_GAME, [("z", z), ("k_minus_i", tuple(k_minus_i))])


def _position(player: int, r: int) -> int:
    return r if r < player else r - 1


def distance_relation_game(
    shape: Sequence[int], player: int, r: int, l: Sequence[int], z, w, z2, w2
) -> tuple[Game, OpponentProfile]:
    """The game and half/half opponent mix of the distance-relation argument.

    Opponent profile ``l`` has a nonzero entry for player ``r``; ``l1`` is
    ``l`` with that entry set to 0.  Row 0 earns ``z`` at ``l`` and ``w2``
    at ``l1``; every other row earns ``w`` at ``l`` and ``z2`` at ``l1``.
    All remaining payoffs are 0.
    """
    pos = _position(player, r)
    l = tuple(l)
    l1 = l[:pos] + (0,) + l[pos + 1:]
    size = math.prod(shape)
    strides = [math.prod(shape[j + 1:]) for j in range(len(shape))]

    def flat(profile):
        return sum(k * s for k, s in zip(profile, strides))

    table = [Fraction(0)] * size
    table[flat(join_profile(0, l, player))] = Fraction(z)
    table[flat(join_profile(0, l1, player))] = Fraction(w2)
    for j in range(1, shape[player]):
        table[flat(join_profile(j, l, player))] = Fraction(w)
        table[flat(join_profile(j, l1, player))] = Fraction(z2)
    zeros = (Fraction(0),) * size
    payoffs = tuple(tuple(table) if i == player else zeros for i in range(len(shape)))
    opp_shape = tuple(shape[:player]) + tuple(shape[player + 1:])
    opp = []
    for q, (m, k) in enumerate(zip(opp_shape, l)):
        if q == pos:
            vec = [Fraction(0)] * m
            vec[0] += Fraction(1, 2)
            vec[k] += Fraction(1, 2)
            opp.append(tuple(vec))
        else:
            opp.append(basis_vector(m, k))
    return Game(tuple(shape), payoffs), tuple(opp)


def probe_distance_relation(
    h: GameTransformation, player: int, r: int, l: Sequence[int], z, w, z2, w2
) -> Witness | None:
    """Check ``z - w >= z2 - w2`` against the same comparison after ``h``.

    Before the transformation row 0 is a best response exactly when
    ``z - w >= z2 - w2``.  Afterwards it is one exactly when
    ``h_l(z) + h_l1(w2) >= h_l(w) + h_l1(z2)`` for every other row.  A
    disagreement is a witness.
    """
    _check(h, player)
    if r == player or not 0 <= r < h.num_players:
        raise DimensionError(f"r must be an opponent of player {player}, got {r}")
    pos = _position(player, r)
    l = tuple(l)
    opp_shape = _opponent_shape(h, player)
    if len(l) != len(opp_shape) or any(not 0 <= k < m for k, m in zip(l, opp_shape)):
        raise DimensionError(f"opponent profile {l} does not fit {opp_shape}")
    if l[pos] == 0:
        raise DimensionError("the compared opponent profile needs a nonzero entry for player r")
    z, w, z2, w2 = (Fraction(v) for v in (z, w, z2, w2))
    l1 = l[:pos] + (0,) + l[pos + 1:]
    before = z - w >= z2 - w2
    after = True
    row0 = [(Fraction(1), h.map_at(player, join_profile(0, l, player)), z),
            (Fraction(1), h.map_at(player, join_profile(0, l1, player)), w2)]
    for j in range(1, h.shape[player]):
        rowj = [(Fraction(-1), h.map_at(player, join_profile(j, l, player)), w),
                (Fraction(-1), h.map_at(player, join_profile(j, l1, player)), z2)]
        sign = signed_sum_sign(row0 + rowj)
        if sign is None:
            return None
        if sign < 0:
            after = False
            break
    if before == after:
        return None
    g, opp = distance_relation_game(h.shape, player, r, l, z, w, z2, w2)
    inputs = [("z", z), ("w", w), ("z'", z2), ("w'", w2), ("r", r), ("l", l)]
    return make_witness(h, g, player, opp, DISTANCE_RELATION, inputs)


def probe_translation_invariance(
    h: GameTransformation, player: int, k_minus_i: Sequence[int], z, z2, lam, own: int = 0
) -> Violation | None:
    """Does ``h(z+lam) - h(z) == h(z2+lam) - h(z2)`` fail for the map at ``(own, k_minus_i)``?"""
    _check(h, player)
    z, z2, lam = Fraction(z), Fraction(z2), Fraction(lam)
    m = h.map_at(player, join_profile(own, k_minus_i, player))
    one = Fraction(1)
    sign = signed_sum_sign([(one, m, z + lam), (-one, m, z), (-one, m, z2 + lam), (one, m, z2)])
    if sign is None or sign == 0:
        return None
    return Violation(
        TRANSLATION_INVARIANCE, player, tuple(k_minus_i), own, (("z", z), ("z'", z2), ("lambda", lam))
    )


def probe_monotonicity(
    h: GameTransformation, player: int, k_minus_i: Sequence[int], z, w, own: int = 0
) -> Violation | None:
    """Does the map at ``(own, k_minus_i)`` fail ``h(z) > h(w)`` for ``z > w``?"""
    _check(h, player)
    z, w = Fraction(z), Fraction(w)
    if not z > w:
        raise ValueError(f"monotonicity probe needs z > w, got {z} <= {w}")
    m = h.map_at(player, join_profile(own, k_minus_i, player))
    sign = signed_sum_sign([(Fraction(1), m, z), (Fraction(-1), m, w)])
    if sign is None or sign > 0:
        return None
    return Violation(MONOTONICITY, player, tuple(k_minus_i), own, (("z", z), ("w", w)))


def _partner(h: GameTransformation, player: int, p: PureProfile) -> tuple[int, PureProfile, bool]:
    """Pick ``(r, l, p_is_l_side)`` so that ``p`` is one of the two compared profiles."""
    nonzero = [q for q, k in enumerate(p) if k]
    if nonzero:
        pos = nonzero[0]
        l = p
        p_is_l = True
    else:
        pos = 0
        l = p[:pos] + (1,) + p[pos + 1:]
        p_is_l = False
    r = pos if pos < player else pos + 1
    return r, l, p_is_l


def lift_violation(h: GameTransformation, v: Violation) -> Witness | None:
    """Turn a single-map violation into a distance-relation witness.

    The map of ``v`` is compared against its neighbouring opponent profile.
    For monotonicity the neighbour gets two equal arguments, so its
    distance is exactly zero.  For translation invariance the two
    equal-length distances ``a`` and ``b`` cannot both match the
    neighbour's distance, so one of the tried assignments disagrees.
    """
    r, l, p_is_l = _partner(h, v.player, v.opponents)
    zero = Fraction(0)
    if v.probe == MONOTONICITY:
        pairs = [((v.value("z"), v.value("w")), (zero, zero))]
    else:
        lam = v.value("lambda")
        a = (v.value("z") + lam, v.value("z"))
        b = (v.value("z'") + lam, v.value("z'"))
        pairs = [(a, a), (b, a), (a, b), (b, b)]
    for mine, theirs in pairs:
        for flip in (False, True):
            m = mine[::-1] if flip else mine
            t = theirs[::-1] if flip else theirs
            (z, w), (z2, w2) = (m, t) if p_is_l else (t, m)
            found = probe_distance_relation(h, v.player, r, l, z, w, z2, w2)
            if found is not None:
                return found
    return None


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> bool:
        if self.used >= self.limit:
            return False
        self.used += 1
        return True


class _Exhausted(Exception):
    pass


def _opponent_profiles(h: GameTransformation, player: int) -> Iterator[PureProfile]:
    return itertools.product(*(range(m) for m in _opponent_shape(h, player)))


def _constant_stage(h, player, grid, budget):
    for k in _opponent_profiles(h, player):
        for z in grid:
            yield lambda k=k, z=z: probe_constant_game(h, player, k, z)


def _monotonicity_stage(h, player, grid, budget):
    for k in _opponent_profiles(h, player):
        for z, w in itertools.product(grid, grid):
            if z > w:
                yield lambda k=k, z=z, w=w: _lifted(h, probe_monotonicity(h, player, k, z, w), budget)


def _translation_stage(h, player, grid, budget):
    for k in _opponent_profiles(h, player):
        for z, z2, lam in itertools.product(grid, grid, grid):
            if lam and z != z2:
                yield lambda k=k, z=z, z2=z2, lam=lam: _lifted(
                    h, probe_translation_invariance(h, player, k, z, z2, lam), budget
                )


def _distance_stage(h, player, grid, budget):
    for r in range(h.num_players):
        if r == player:
            continue
        pos = _position(player, r)
        for l in _opponent_profiles(h, player):
            if l[pos] == 0:
                continue
            for z, w, z2, w2 in itertools.product(grid, repeat=4):
                yield lambda r=r, l=l, z=z, w=w, z2=z2, w2=w2: probe_distance_relation(h, player, r, l, z, w, z2, w2)


def _lifted(h, violation, budget):
    if violation is None:
        return None
    if not budget.spend():
        raise _Exhausted
    return lift_violation(h, violation)


_STAGES = {
    CONSTANT_GAME: _constant_stage,
    MONOTONICITY: _monotonicity_stage,
    TRANSLATION_INVARIANCE: _translation_stage,
    DISTANCE_RELATION: _distance_stage,
}


def probe_plan(h: GameTransformation, reason: PatRefutation) -> list[tuple[int, str]]:
    """Ordered ``(player, probe)`` stages, led by the structural refutation."""
    players = [reason.player] + [i for i in range(h.num_players) if i != reason.player]
    plan = []
    for i in players:
        order = []
        if not depends_only_on_opponents(h, i):
            order.append(CONSTANT_GAME)
        if i == reason.player:
            if reason.reason == NON_POSITIVE_SLOPE:
                order += [MONOTONICITY]
            elif reason.reason == NON_AFFINE:
                order += [MONOTONICITY, TRANSLATION_INVARIANCE]
            elif reason.reason == SLOPE_MISMATCH:
                order += [DISTANCE_RELATION]
        for stage in (CONSTANT_GAME, MONOTONICITY, TRANSLATION_INVARIANCE, DISTANCE_RELATION):
            if stage not in order:
                order.append(stage)
        plan += [(i, stage) for stage in order]
    return plan


def falsify(
    h: GameTransformation,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    grid: Sequence[Fraction] = DEFAULT_GRID,
    grid_refine: int = 0,
) -> Witness | IsPat | NoRefutation:
    """Refute ``h`` with a verified witness, or report it is a PAT.

    The search is a fixed lexicographic sweep over ``grid`` (refined
    ``grid_refine`` times), so the first violating tuple wins and the result
    depends only on the inputs.  ``seed`` is accepted for interface
    stability; the sweep itself draws no random numbers.  Running out of
    ``budget`` probes yields ``NoRefutation``, never a claim of preservation.
    """
    del seed
    found = detect_pat(h)
    if isinstance(found, PatSpec):
        return IsPat(found)
    pts = refine_grid(grid, grid_refine)
    counter = _Budget(budget)
    try:
        for player, stage in probe_plan(h, found):
            for probe in _STAGES[stage](h, player, pts, counter):
                if not counter.spend():
                    raise _Exhausted
                witness = probe()
                if witness is not None:
                    return witness
    except _Exhausted:
        pass
    return NoRefutation(counter.used, found, pts)
