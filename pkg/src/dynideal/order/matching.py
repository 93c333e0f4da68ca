"""Finite back-and-forth: order-preserving maps carrying one finite set onto another."""

from __future__ import annotations

from ..errors import GapMismatch, PreconditionError, SizeMismatch
from .intervals import IntervalUnionSet
from .numbers import INF, Q
from .plmap import PLMap


def match_finite_sets(d0, d1, fix: IntervalUnionSet | None = None) -> PLMap:
    """A PL map fixing ``fix`` pointwise and carrying ``d0`` onto ``d1``.

    Points are matched in order inside each maximal gap of ``fix``; the map is
    the identity on ``fix`` and linear between consecutive knots.
    """
    fix = fix if fix is not None else IntervalUnionSet.empty()
    d0 = sorted({Q(x) for x in d0})
    d1 = sorted({Q(x) for x in d1})
    if len(d0) != len(d1):
        raise SizeMismatch(f"|d0| = {len(d0)} but |d1| = {len(d1)}")
    for x in d0 + d1:
        if fix.contains(x):
            raise PreconditionError(f"{x} lies in the fixed set")
    knots = {}
    for gap in fix.gaps():
        in0 = [x for x in d0 if gap.contains(x)]
        in1 = [x for x in d1 if gap.contains(x)]
        if len(in0) != len(in1):
            raise GapMismatch(
                f"gap {gap.to_text()} holds {len(in0)} points of d0 but {len(in1)} of d1"
            )
        for t in (gap.lo, gap.hi):
            if t not in (-INF, INF):
                knots[t] = t
        knots.update(zip(in0, in1))
    return PLMap.from_knots(sorted(knots.items()))
