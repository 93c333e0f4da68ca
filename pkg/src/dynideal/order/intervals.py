"""Finite unions of rational intervals and points, in canonical form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ..errors import ParseError, PreconditionError
from .numbers import INF, Q, format_rational, parse_rational
from .plmap import PLMap, pl_apply


@dataclass(frozen=True, order=True)
class Interval:
    """``lo..hi`` with closedness flags; a point is ``Interval(x, x, True, True)``.

    Infinite endpoints are ``-INF``/``INF`` and always open.
    """

    lo: object
    hi: object
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo = self.lo if self.lo in (-INF, INF) else Q(self.lo)
        hi = self.hi if self.hi in (-INF, INF) else Q(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo == -INF and self.lo_closed or hi == INF and self.hi_closed:
            raise PreconditionError("infinite endpoints must be open")
        if lo == INF or hi == -INF:
            raise PreconditionError("interval endpoints out of order")

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x, True, True)

    def is_empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def to_text(self) -> str:
        if self.is_point():
            return "{" + format_rational(self.lo) + "}"
        lo = "-inf" if self.lo == -INF else format_rational(self.lo)
        hi = "inf" if self.hi == INF else format_rational(self.hi)
        return ("[" if self.lo_closed else "(") + f"{lo}, {hi}" + ("]" if self.hi_closed else ")")


def _lo_key(iv: Interval):
    # closed lower ends start before open ones at the same value
    return (iv.lo, 0 if iv.lo_closed else 1)


def _canonical(items: Iterable[Interval]) -> tuple:
    ivs = sorted((iv for iv in items if not iv.is_empty()), key=_lo_key)
    out: list[Interval] = []
    for iv in ivs:
        if out:
            last = out[-1]
            touches = iv.lo < last.hi or (
                iv.lo == last.hi and (iv.lo_closed or last.hi_closed)
            )
            if touches:
                if iv.hi > last.hi:
                    hi, hc = iv.hi, iv.hi_closed
                elif iv.hi == last.hi:
                    hi, hc = last.hi, last.hi_closed or iv.hi_closed
                else:
                    hi, hc = last.hi, last.hi_closed
                lc = last.lo_closed or (iv.lo == last.lo and iv.lo_closed)
                out[-1] = Interval(last.lo, hi, lc, hc)
                continue
        out.append(iv)
    return tuple(out)


@dataclass(frozen=True)
class IntervalUnionSet:
    """Sorted, pairwise disjoint, non-adjacent intervals and points."""

    components: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "components", _canonical(self.components))

    @classmethod
    def empty(cls) -> "IntervalUnionSet":
        return cls(())

    @classmethod
    def points(cls, xs) -> "IntervalUnionSet":
        return cls(tuple(Interval.point(x) for x in xs))

    @classmethod
    def closed(cls, lo, hi) -> "IntervalUnionSet":
        return cls((Interval(lo, hi, True, True),))

    @classmethod
    def interval(cls, lo, hi, lo_closed=True, hi_closed=True) -> "IntervalUnionSet":
        return cls((Interval(lo, hi, lo_closed, hi_closed),))

    def is_empty(self) -> bool:
        return not self.components

    def contains(self, x) -> bool:
        return any(iv.contains(x) for iv in self.components)

    __contains__ = contains

    def is_bounded(self) -> bool:
        return all(iv.lo != -INF and iv.hi != INF for iv in self.components)

    def is_finite(self) -> bool:
        return all(iv.is_point() for iv in self.components)

    def finite_points(self) -> list:
        if not self.is_finite():
            raise PreconditionError("set is not finite")
        return [iv.lo for iv in self.components]

    def inf(self):
        if not self.components:
            raise PreconditionError("empty set has no infimum")
        return self.components[0].lo

    def sup(self):
        if not self.components:
            raise PreconditionError("empty set has no supremum")
        return self.components[-1].hi

    # -- boolean algebra ----------------------------------------------------
    def union(self, other: "IntervalUnionSet") -> "IntervalUnionSet":
        return IntervalUnionSet(self.components + other.components)

    __or__ = union

    def complement(self) -> "IntervalUnionSet":
        out = []
        prev, prev_closed = -INF, False  # prev_closed: previous component owns prev
        for iv in self.components:
            if prev == -INF:
                if iv.lo != -INF:
                    out.append(Interval(-INF, iv.lo, False, not iv.lo_closed))
            else:
                out.append(Interval(prev, iv.lo, not prev_closed, not iv.lo_closed))
            prev, prev_closed = iv.hi, iv.hi_closed
        if not self.components:
            out.append(Interval(-INF, INF, False, False))
        elif prev != INF:
            out.append(Interval(prev, INF, not prev_closed, False))
        return IntervalUnionSet(tuple(out))

    def intersection(self, other: "IntervalUnionSet") -> "IntervalUnionSet":
        return self.complement().union(other.complement()).complement()

    __and__ = intersection

    def difference(self, other: "IntervalUnionSet") -> "IntervalUnionSet":
        return self.intersection(other.complement())

    __sub__ = difference

    def issubset(self, other: "IntervalUnionSet") -> bool:
        return self.difference(other).is_empty()

    __le__ = issubset

    def gaps(self) -> list:
        """Maximal intervals of the complement, as :class:`Interval` values."""
        return list(self.complement().components)

    # -- action ---------------------------------------------------------------
    def image(self, f: PLMap) -> "IntervalUnionSet":
        return IntervalUnionSet(
            tuple(
                Interval(pl_apply(f, iv.lo), pl_apply(f, iv.hi), iv.lo_closed, iv.hi_closed)
                for iv in self.components
            )
        )

    # -- text -----------------------------------------------------------------
    def to_text(self) -> str:
        if not self.components:
            return "{}"
        return " U ".join(iv.to_text() for iv in self.components)

    @classmethod
    def from_text(cls, text: str) -> "IntervalUnionSet":
        text = text.strip()
        if text in ("{}", ""):
            return cls.empty()
        items = []
        for part in text.split(" U "):
            part = part.strip()
            if part.startswith("{") and part.endswith("}"):
                items.append(Interval.point(parse_rational(part[1:-1])))
                continue
            if part[0] not in "[(" or part[-1] not in "])" or "," not in part:
                raise ParseError(f"bad interval: {part!r}")
            lo_s, hi_s = part[1:-1].split(",")
            lo = -INF if lo_s.strip() == "-inf" else parse_rational(lo_s)
            hi = INF if hi_s.strip() == "inf" else parse_rational(hi_s)
            items.append(Interval(lo, hi, part[0] == "[", part[-1] == "]"))
        out = cls(tuple(items))
        return out

    def to_json(self):
        return self.to_text()

    @classmethod
    def from_json(cls, data) -> "IntervalUnionSet":
        return cls.from_text(data)

    def __str__(self):
        return self.to_text()


def hull(s: IntervalUnionSet):
    """(inf, sup) of a nonempty set."""
    return s.inf(), s.sup()

