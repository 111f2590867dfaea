"""Closed-form scalar maps R -> R used as per-profile payoff transformations.

Every map except ``Exp`` (and anything built on it) evaluates exactly on
Fractions.  All maps can also be enclosed in a certified interval computed
at ``PRECISION_BITS`` bits, which is how comparisons involving ``exp`` are
decided.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from mpmath import iv, libmp

from .errors import InexactEvaluation, ParseError
from .game import to_fraction

PRECISION_BITS = 128

_iv_lock = threading.RLock()


@contextmanager
def _precision():
    # mpmath's interval context keeps its precision globally.
    with _iv_lock:
        old = iv.prec
        iv.prec = PRECISION_BITS
        try:
            yield
        finally:
            iv.prec = old


def _iv_of(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _endpoints(v) -> tuple[Fraction, Fraction]:
    lo, hi = v._mpi_
    return Fraction(*libmp.to_rational(lo)), Fraction(*libmp.to_rational(hi))


@dataclass(frozen=True)
class Interval:
    """A closed interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    @classmethod
    def point(cls, x: Fraction) -> Interval:
        return cls(x, x)

    def __add__(self, other: Interval) -> Interval:
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: Interval) -> Interval:
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def scale(self, c: Fraction) -> Interval:
        a, b = self.lo * c, self.hi * c
        return Interval(min(a, b), max(a, b))

    def sign(self) -> int | None:
        """-1, 0 or 1 if certain, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2


class ScalarMap:
    """Base class of the expression tree."""

    exact = True

    def __call__(self, x) -> Fraction:
        return evaluate(self, to_fraction(x))

    def _eval(self, x: Fraction) -> Fraction:
        raise NotImplementedError

    def _enclose(self, x):
        raise NotImplementedError

    def enclose(self, x) -> Interval:
        return enclose(self, to_fraction(x))

    def canonical(self) -> ScalarMap:
        return self

    def to_json(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Affine(ScalarMap):
    a: Fraction
    c: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", to_fraction(self.a))
        object.__setattr__(self, "c", to_fraction(self.c))

    def _eval(self, x):
        return self.a * x + self.c

    def _enclose(self, x):
        return _iv_of(self.a) * x + _iv_of(self.c)

    def then(self, other: Affine) -> Affine:
        """``other`` applied after ``self``."""
        return Affine(other.a * self.a, other.a * self.c + other.c)

    def to_json(self):
        return {"affine": {"a": str(self.a), "c": str(self.c)}}

    def __str__(self):
        return f"{self.a}*x+{self.c}"


IDENTITY = Affine(1, 0)


@dataclass(frozen=True)
class PowerOddInt(ScalarMap):
    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1 or self.k % 2 == 0:
            raise ValueError(f"power must be an odd integer >= 1, got {self.k!r}")

    def _eval(self, x):
        return x**self.k

    def _enclose(self, x):
        return x**self.k

    def canonical(self):
        return IDENTITY if self.k == 1 else self

    def to_json(self):
        return {"pow": self.k}

    def __str__(self):
        return f"x^{self.k}"


@dataclass(frozen=True)
class Exp(ScalarMap):
    exact = False

    def _eval(self, x):
        raise InexactEvaluation("exp has no exact rational value")

    def _enclose(self, x):
        return iv.exp(x)

    def to_json(self):
        return {"exp": {}}

    def __str__(self):
        return "exp(x)"


@dataclass(frozen=True)
class PiecewiseLinear(ScalarMap):
    """Linear interpolation through ``(xs[j], ys[j])``; the end segments extend to infinity."""

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    def __post_init__(self):
        xs = tuple(to_fraction(v) for v in self.xs)
        ys = tuple(to_fraction(v) for v in self.ys)
        if len(xs) < 2 or len(xs) != len(ys):
            raise ValueError("piecewise-linear map needs at least two (x, y) points")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def slopes(self) -> list[Fraction]:
        return [(y1 - y0) / (x1 - x0) for x0, x1, y0, y1 in zip(self.xs, self.xs[1:], self.ys, self.ys[1:])]

    def _eval(self, x):
        xs, ys = self.xs, self.ys
        j = 0
        while j < len(xs) - 2 and x > xs[j + 1]:
            j += 1
        slope = (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j])
        return ys[j] + slope * (x - xs[j])

    def _enclose(self, x):
        lo, hi = _endpoints(x)
        candidates = [self._eval(lo), self._eval(hi)]
        candidates += [y for bx, y in zip(self.xs, self.ys) if lo < bx < hi]
        return iv.mpf([_iv_of(min(candidates)).a, _iv_of(max(candidates)).b])

    def canonical(self):
        keep = [0]
        for j in range(1, len(self.xs) - 1):
            x0, y0 = self.xs[keep[-1]], self.ys[keep[-1]]
            x1, y1 = self.xs[j], self.ys[j]
            x2, y2 = self.xs[j + 1], self.ys[j + 1]
            if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
                keep.append(j)
        keep.append(len(self.xs) - 1)
        if len(keep) == 2:
            x0, x1 = self.xs[0], self.xs[-1]
            y0, y1 = self.ys[0], self.ys[-1]
            slope = (y1 - y0) / (x1 - x0)
            return Affine(slope, y0 - slope * x0)
        return PiecewiseLinear(tuple(self.xs[j] for j in keep), tuple(self.ys[j] for j in keep))

    def to_json(self):
        return {"pwl": {"xs": [str(v) for v in self.xs], "ys": [str(v) for v in self.ys]}}

    def __str__(self):
        pts = ", ".join(f"({x}, {y})" for x, y in zip(self.xs, self.ys))
        return f"pwl[{pts}]"


@dataclass(frozen=True)
class Compose(ScalarMap):
    """``outer(inner(x))``."""

    outer: ScalarMap
    inner: ScalarMap

    @property
    def exact(self):
        return self.outer.exact and self.inner.exact

    def _eval(self, x):
        return self.outer._eval(self.inner._eval(x))

    def _enclose(self, x):
        return self.outer._enclose(self.inner._enclose(x))

    def canonical(self):
        chain = _chain(self.outer) + _chain(self.inner)
        merged: list[ScalarMap] = []
        for m in chain:
            if merged and isinstance(m, Affine) and isinstance(merged[-1], Affine):
                merged[-1] = m.then(merged[-1])
            else:
                merged.append(m)
        merged = [m for m in merged if m != IDENTITY]
        if not merged:
            return IDENTITY
        out = merged[-1]
        for m in reversed(merged[:-1]):
            out = Compose(m, out)
        return out

    def to_json(self):
        return {"compose": [self.outer.to_json(), self.inner.to_json()]}

    def __str__(self):
        return f"({self.outer})∘({self.inner})"


def _chain(m: ScalarMap) -> list[ScalarMap]:
    m = m.canonical()
    out = []
    while isinstance(m, Compose):
        out.append(m.outer)
        m = m.inner
    out.append(m)
    return out


@dataclass(frozen=True)
class Sum(ScalarMap):
    terms: tuple[ScalarMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def exact(self):
        return all(t.exact for t in self.terms)

    def _eval(self, x):
        return sum((t._eval(x) for t in self.terms), Fraction(0))

    def _enclose(self, x):
        total = iv.mpf(0)
        for t in self.terms:
            total = total + t._enclose(x)
        return total

    def canonical(self):
        flat: list[ScalarMap] = []
        for t in self.terms:
            t = t.canonical()
            flat.extend(t.terms if isinstance(t, Sum) else [t])
        a = sum((t.a for t in flat if isinstance(t, Affine)), Fraction(0))
        c = sum((t.c for t in flat if isinstance(t, Affine)), Fraction(0))
        rest = sorted((t for t in flat if not isinstance(t, Affine)), key=repr)
        if not rest:
            return Affine(a, c)
        if a or c:
            rest.append(Affine(a, c))
        return rest[0] if len(rest) == 1 else Sum(tuple(rest))

    def to_json(self):
        return {"sum": [t.to_json() for t in self.terms]}

    def __str__(self):
        return " + ".join(f"({t})" for t in self.terms)


@dataclass(frozen=True)
class Neg(ScalarMap):
    inner: ScalarMap

    @property
    def exact(self):
        return self.inner.exact

    def _eval(self, x):
        return -self.inner._eval(x)

    def _enclose(self, x):
        return -self.inner._enclose(x)

    def canonical(self):
        return Compose(Affine(-1, 0), self.inner).canonical()

    def to_json(self):
        return {"neg": self.inner.to_json()}

    def __str__(self):
        return f"-({self.inner})"


@lru_cache(maxsize=1 << 16)
def evaluate(m: ScalarMap, x: Fraction) -> Fraction:
    """Exact value of ``m`` at ``x``; raises InexactEvaluation for ``exp`` maps."""
    if not m.exact:
        raise InexactEvaluation(f"{m} has no exact rational value")
    return m._eval(x)


@lru_cache(maxsize=1 << 16)
def enclose(m: ScalarMap, x: Fraction) -> Interval:
    """Certified enclosure of ``m(x)``; a point interval when ``m`` is exact."""
    if m.exact:
        return Interval.point(m._eval(x))
    with _precision():
        return Interval(*_endpoints(m._enclose(_iv_of(x))))


def approximate(m: ScalarMap, x: Fraction, bits: int = 160) -> Fraction:
    """``m(x)`` exactly if possible, else rounded to a multiple of 2**-bits."""
    if m.exact:
        return evaluate(m, x)
    mid = enclose(m, x).mid
    return Fraction(round(mid * 2**bits), 2**bits)


def map_from_json(obj) -> ScalarMap:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParseError(f"a map expression is a single-key object, got {obj!r}")
    (tag, body), = obj.items()
    try:
        if tag == "affine":
            return Affine(to_fraction(body["a"]), to_fraction(body.get("c", 0)))
        if tag == "pow":
            return PowerOddInt(body)
        if tag == "exp":
            return Exp()
        if tag == "pwl":
            return PiecewiseLinear(tuple(body["xs"]), tuple(body["ys"]))
        if tag == "compose":
            outer, inner = body
            return Compose(map_from_json(outer), map_from_json(inner))
        if tag == "sum":
            return Sum(tuple(map_from_json(t) for t in body))
        if tag == "neg":
            return Neg(map_from_json(body))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad {tag!r} expression {body!r}: {exc}") from exc
    raise ParseError(f"unknown map tag {tag!r}")


def affine_through(m: ScalarMap, x0: Fraction, x1: Fraction) -> Affine:
    """The affine map agreeing with ``m`` at ``x0`` and ``x1``."""
    y0, y1 = evaluate(m, x0), evaluate(m, x1)
    slope = (y1 - y0) / (x1 - x0)
    return Affine(slope, y0 - slope * x0)


def structurally_equal(maps: Sequence[ScalarMap]) -> bool:
    canon = [m.canonical() for m in maps]
    return all(c == canon[0] for c in canon[1:])
