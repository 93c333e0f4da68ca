"""Exact order arithmetic: rationals, Q(sqrt 2), PL automorphisms and set representations."""

from .blocks import (
    Block,
    BlockSet,
    cb_rank,
    derivative,
    fixes_blockset,
    image_blockset,
    is_bounded_below_every,
    is_subset,
    is_well_ordered,
    pell,
    standard_rank_set,
)
from .intervals import Interval, IntervalUnionSet, hull
from .matching import match_finite_sets
from .numbers import (
    INF,
    SQRT2,
    Q,
    QuadExt,
    Rational,
    format_rational,
    format_scalar,
    is_rational,
    parse_rational,
    parse_scalar,
    quad,
    rational_between,
)
from .plmap import PLMap, compose_all, pl_apply, pl_compose, pl_invert


def image_set(f: PLMap, s):
    """Exact image of a set representation under a PL map."""
    if isinstance(s, IntervalUnionSet):
        return s.image(f)
    if isinstance(s, BlockSet):
        return image_blockset(f, s)
    raise TypeError(f"no image for {type(s).__name__}")


def fixes_pointwise(f: PLMap, s) -> bool:
    """True iff ``f`` fixes every element of ``s``."""
    if isinstance(s, IntervalUnionSet):
        for iv in s.components:
            if iv.is_point():
                if pl_apply(f, iv.lo) != iv.lo:
                    return False
            elif not f.identity_on(iv.lo, iv.hi):
                return False
        return True
    if isinstance(s, BlockSet):
        return fixes_blockset(f, s)
    raise TypeError(f"no pointwise test for {type(s).__name__}")
