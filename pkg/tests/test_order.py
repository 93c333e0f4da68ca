import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynideal.errors import GapMismatch, ParseError, SizeMismatch
from dynideal.ideals import get_instance, random_plmap
from dynideal.order import (
    Block,
    BlockSet,
    IntervalUnionSet,
    PLMap,
    cb_rank,
    fixes_pointwise,
    image_set,
    is_bounded_below_every,
    is_well_ordered,
    match_finite_sets,
    parse_rational,
    pl_apply,
    pl_compose,
    pl_invert,
    standard_rank_set,
)
from dynideal.order.blocks import derivative

seeds = st.integers(min_value=0, max_value=2**32)
rationals = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 100)


def plmap(seed, knots=4):
    return random_plmap(random.Random(seed), knots)


# -- PL maps -------------------------------------------------------------------


def test_apply_identity_and_affine():
    assert pl_apply(PLMap.identity(), F(3, 2)) == F(3, 2)
    doubling = PLMap.affine(2, 0)
    assert pl_apply(doubling, F(1, 2)) == 1


@settings(max_examples=200)
@given(seeds, rationals)
def test_inverse_law_pointwise(seed, x):
    f = plmap(seed)
    assert pl_apply(pl_invert(f), pl_apply(f, x)) == x


@settings(max_examples=100)
@given(seeds)
def test_compose_with_inverse_is_identity(seed):
    f = plmap(seed)
    assert pl_compose(f, pl_invert(f)).is_identity()
    assert pl_compose(pl_invert(f), f).is_identity()
    assert pl_compose(f, PLMap.identity()) == f


@settings(max_examples=100)
@given(seeds, seeds, seeds, rationals)
def test_compose_associative_and_pointwise(s1, s2, s3, x):
    f, g, h = plmap(s1), plmap(s2), plmap(s3)
    assert pl_compose(f, pl_compose(g, h)) == pl_compose(pl_compose(f, g), h)
    assert pl_apply(pl_compose(f, g), x) == pl_apply(f, pl_apply(g, x))


@settings(max_examples=100)
@given(seeds, rationals, rationals)
def test_maps_are_increasing(seed, x, y):
    f = plmap(seed)
    if x < y:
        assert pl_apply(f, x) < pl_apply(f, y)


@given(seeds)
def test_plmap_json_and_text_round_trip(seed):
    f = plmap(seed)
    assert PLMap.from_json(f.to_json()) == f
    assert PLMap.from_text(f.to_text()) == f


# -- sets and images --------------------------------------------------------------


def test_image_of_interval_under_doubling():
    s = IntervalUnionSet.closed(0, 1)
    assert image_set(PLMap.identity(), s) == s
    assert image_set(PLMap.affine(2, 0), s) == IntervalUnionSet.closed(0, 2)


def test_image_of_block_across_a_breakpoint():
    b = BlockSet.of(Block.geometric(0, 1, F(1, 2)))
    f = PLMap.from_knots([(F(3, 4), F(3, 4))], 1, 2)
    img = image_set(f, b)
    assert set(img.points) == {F(0), F(1, 2)}
    assert len(img.blocks) == 1 and img.blocks[0].ratio == F(1, 2)
    # oracle: the first 20 elements 1 - 2^-k mapped one at a time
    for k in range(20):
        x = 1 - F(1, 2**k)
        y = x if x <= F(3, 4) else F(3, 4) + 2 * (x - F(3, 4))
        assert pl_apply(f, x) == y
        assert img.contains(y)
    assert not img.contains(F(5, 4))
    assert not img.contains(F(7, 8))


def test_fixes_pointwise():
    s = IntervalUnionSet.closed(0, 1)
    assert fixes_pointwise(PLMap.identity(), s)
    assert not fixes_pointwise(PLMap.translation(1), IntervalUnionSet.points([0]))
    f = PLMap.from_knots([(-10, -10), (10, 10)], 2, 3)
    assert fixes_pointwise(f, s)


def test_interval_text_round_trip():
    s = IntervalUnionSet.from_text("[0, 1] U {3}")
    assert IntervalUnionSet.from_text(s.to_text()) == s
    assert s.contains(F(1, 2)) and s.contains(3) and not s.contains(2)
    assert IntervalUnionSet.empty().to_text() == "{}"


# -- matching -------------------------------------------------------------------------


def test_match_identical_sets_is_identity():
    d = [F(1), F(2)]
    assert match_finite_sets(d, d).is_identity()


def test_match_fixing_a_point():
    f = match_finite_sets([F(1), F(2)], [F(1), F(3)], IntervalUnionSet.points([0]))
    assert pl_apply(f, F(1)) == 1 and pl_apply(f, F(2)) == 3
    assert pl_apply(f, 0) == 0
    assert image_set(f, IntervalUnionSet.points([1, 2])) == IntervalUnionSet.points([1, 3])


def test_match_errors():
    with pytest.raises(GapMismatch):
        match_finite_sets([F(1)], [F(-1)], IntervalUnionSet.points([0]))
    with pytest.raises(SizeMismatch):
        match_finite_sets([F(1), F(2)], [F(1)])


@settings(max_examples=100)
@given(st.lists(rationals, min_size=0, max_size=5, unique=True), seeds)
def test_match_random_sets_in_one_gap(d0, seed):
    rng = random.Random(seed)
    d0 = [x for x in d0 if x > 0]
    d1 = sorted({F(rng.randint(1, 400), rng.randint(1, 7)) for _ in range(len(d0) * 3)})[: len(d0)]
    if len(d1) != len(d0):
        return
    fix = IntervalUnionSet.interval(-5, 0)
    f = match_finite_sets(d0, d1, fix)
    assert [pl_apply(f, x) for x in sorted(d0)] == d1
    assert fixes_pointwise(f, fix)


# -- ranks and order types -------------------------------------------------------------


def _naive_rank(s):
    # independent oracle: iterate the derivative operator until empty
    r = 0
    while not s.is_empty():
        s = derivative(s)
        r += 1
        assert r < 20
    return r


def test_cb_rank_examples():
    assert cb_rank(BlockSet()) == 0
    assert cb_rank(BlockSet.of(F(0), F(5))) == 1
    assert cb_rank(BlockSet.of(Block.geometric(0, 1, F(1, 2), True))) == 2


@pytest.mark.parametrize("rank", range(6))
def test_standard_rank_sets(rank):
    s = standard_rank_set(rank)
    assert cb_rank(s) == rank == _naive_rank(s)
    if rank:
        lo, hi = s.bounds()
        assert 0 <= lo and hi <= F(1, 2)


def test_well_ordered_examples():
    assert is_well_ordered(BlockSet.of(F(3), F(-2)))
    assert is_well_ordered(BlockSet.of(Block.geometric(0, 1, F(1, 2))))
    desc = BlockSet.of(Block.geometric(1, 0, F(1, 2)))
    assert not is_well_ordered(desc)
    # explicit infinite descending sequence 2^-k inside the set
    assert all(desc.contains(F(1, 2**k)) for k in range(1, 15))


def test_bounded_below_every_examples():
    assert is_bounded_below_every(BlockSet.of(F(0), F(1)))
    assert not is_bounded_below_every(BlockSet.of(Block.geometric(0, 1, F(1, 2))))
    root2 = BlockSet.of(Block.sqrt2(1, 0))
    assert is_bounded_below_every(root2)
    # below any rational z near sqrt 2 the elements stay below some smaller rational
    for z in (F(3, 2), F(1415, 1000), F(14143, 10000)):
        below = [x for x in root2.enumerate(40) if x < z]
        assert below and max(below) < z


def test_blockset_json_round_trip_and_bad_text():
    s = standard_rank_set(3)
    assert BlockSet.from_json(s.to_json()) == s
    assert BlockSet.from_text(s.to_text()) == s
    with pytest.raises(ParseError):
        BlockSet.from_text("{0, 5}")


def test_parse_rational_canonical():
    assert parse_rational("2/4") == F(1, 2)
    with pytest.raises(ParseError):
        parse_rational("abc")


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(["WellOrderedQ", "WellOrderedBoundedBelowQ", "CountableClosedQ"]))
def test_blockset_image_pointwise(seed, name):
    inst = get_instance(name)
    s = inst.sample_ideal(seed, 3)
    f = inst.sample_group(seed + 1, 3)
    img = image_set(f, s)
    g = pl_invert(f)
    for x in s.enumerate(8):
        assert s.contains(x)
        assert img.contains(pl_apply(f, x))
    for y in img.enumerate(8):
        assert s.contains(pl_apply(g, y))
