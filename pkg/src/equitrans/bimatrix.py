"""Support enumeration for two-player games in exact arithmetic.

For a pair of candidate supports ``(I, J)`` the row strategy ``x`` must make
every column in ``J`` a best response of the column player, and ``y`` must
make every row in ``I`` a best response of the row player.  The two
conditions decouple, so the equilibria with supports inside ``(I, J)`` form
the product of two polytopes.  A pair whose polytopes are both single points
yields a candidate equilibrium; a pair where either polytope has more than
one vertex contains a continuum and is reported as degenerate instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, DimensionError
from .game import Game, MixedProfile, is_nash
from .linalg import polytope_vertices

DEFAULT_SUPPORT_CAP = 5

Support = tuple[int, ...]


@dataclass(frozen=True)
class BimatrixSolution:
    equilibria: tuple[MixedProfile, ...]
    degenerate_supports: tuple[tuple[Support, Support], ...]

    @property
    def is_degenerate(self) -> bool:
        return bool(self.degenerate_supports)


def _subsets(m: int):
    for size in range(1, m + 1):
        yield from itertools.combinations(range(m), size)


def _side(payoff_rows: list[list[Fraction]], own: Support, forced: Support, others: Support):
    """Vertices for one player's mixture.

    ``payoff_rows[c][k]`` is the opponent's payoff of their action ``c``
    when this player plays ``k``.  Variables are the weights on ``own``
    followed by the common value of the ``forced`` opponent actions.
    """
    width = len(own) + 1
    eq_rows = [[payoff_rows[c][k] for k in own] + [Fraction(-1)] for c in forced]
    eq_rows.append([Fraction(1)] * len(own) + [Fraction(0)])
    eq_rhs = [Fraction(0)] * len(forced) + [Fraction(1)]
    le_rows = [[payoff_rows[c][k] for k in own] + [Fraction(-1)] for c in others]
    le_rhs = [Fraction(0)] * len(others)
    for pos in range(len(own)):
        row = [Fraction(0)] * width
        row[pos] = Fraction(-1)
        le_rows.append(row)
        le_rhs.append(Fraction(0))
    return polytope_vertices(eq_rows, eq_rhs, le_rows, le_rhs)


def _embed(m: int, support: Support, weights) -> tuple[Fraction, ...]:
    vec = [Fraction(0)] * m
    for k, w in zip(support, weights):
        vec[k] = w
    return tuple(vec)


def enumerate_bimatrix_nash(g: Game, support_cap: int = DEFAULT_SUPPORT_CAP) -> BimatrixSolution:
    if g.num_players != 2:
        raise DimensionError("support enumeration needs a two-player game")
    m, n = g.shape
    if max(m, n) > support_cap:
        raise BudgetExceeded(f"strategy counts {g.shape} exceed the support cap {support_cap}")
    a = g.matrix(0)
    b = g.matrix(1)
    # column player's payoff indexed [column][row], row player's [row][column]
    b_by_col = [[b[r][c] for r in range(m)] for c in range(n)]
    found = set()
    degenerate = []
    for rows in _subsets(m):
        for cols in _subsets(n):
            other_cols = tuple(c for c in range(n) if c not in cols)
            xs = _side(b_by_col, rows, cols, other_cols)
            if not xs:
                continue
            other_rows = tuple(r for r in range(m) if r not in rows)
            ys = _side(a, cols, rows, other_rows)
            if not ys:
                continue
            if len(xs) > 1 or len(ys) > 1:
                degenerate.append((rows, cols))
                continue
            profile = MixedProfile((_embed(m, rows, xs[0][:-1]), _embed(n, cols, ys[0][:-1])))
            if is_nash(g, profile):
                found.add(profile)
    equilibria = tuple(sorted(found, key=lambda s: s.strategies, reverse=True))
    return BimatrixSolution(equilibria, tuple(degenerate))
