"""Small exact linear algebra over Fractions."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def solve_affine(rows: Sequence[Sequence], rhs: Sequence) -> tuple[list[Fraction], list[list[Fraction]]] | None:
    """Solve ``rows @ x == rhs`` exactly.

    Returns ``(particular, basis)`` so the solution set is
    ``particular + span(basis)``, or None if the system is inconsistent.
    """
    n = len(rows[0]) if rows else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == len(aug):
            break
    if any(row[n] for row in aug[r:]):
        return None
    particular = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        particular[c] = aug[i][n]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -aug[i][f]
        basis.append(vec)
    return particular, basis


def polytope_vertices(
    eq_rows: Sequence[Sequence], eq_rhs: Sequence, le_rows: Sequence[Sequence], le_rhs: Sequence
) -> list[tuple[Fraction, ...]] | None:
    """Vertices of ``{x : eq_rows x = eq_rhs, le_rows x <= le_rhs}``.

    Brute force over active sets; meant for a handful of variables.  The
    polytope must be bounded.  Returns None when the equalities are
    inconsistent, otherwise the (possibly empty) sorted vertex list.
    """
    solved = solve_affine(eq_rows, eq_rhs) if eq_rows else None
    if eq_rows and solved is None:
        return None
    if solved is None:
        n = len(le_rows[0])
        particular, basis = [Fraction(0)] * n, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    else:
        particular, basis = solved
    d = len(basis)

    def point(t):
        return tuple(p + sum(ti * b[k] for ti, b in zip(t, basis)) for k, p in enumerate(particular))

    def feasible(x):
        return all(sum(a * xi for a, xi in zip(row, x)) <= h for row, h in zip(le_rows, le_rhs))

    if d == 0:
        x = tuple(particular)
        return [x] if feasible(x) else []
    # Inequalities in the parameter space: (row . basis) t <= h - row . particular
    g = [[sum(a * b[k] for k, a in enumerate(row)) for b in basis] for row in le_rows]
    h = [hv - sum(a * p for a, p in zip(row, particular)) for row, hv in zip(le_rows, le_rhs)]
    found = set()
    for active in itertools.combinations(range(len(g)), d):
        sol = solve_affine([g[i] for i in active], [h[i] for i in active])
        if sol is None or sol[1]:
            continue
        x = point(sol[0])
        if feasible(x):
            found.add(x)
    return sorted(found)
