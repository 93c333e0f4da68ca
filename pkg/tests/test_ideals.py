import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynideal.errors import UnknownInstance
from dynideal.ideals import (
    FinitePermutation,
    GridElement,
    get_instance,
    instance_catalog,
    instance_from_spec,
)
from dynideal.order import PLMap, pl_compose, pl_invert

INSTANCES = [
    get_instance("BoundedQ"),
    get_instance("WellOrderedQ"),
    get_instance("WellOrderedBoundedBelowQ"),
    get_instance("CountableClosedQ"),
    get_instance("FiniteSym", N=7, k=3),
    get_instance("AbelianGrid", m=3, modulus=4),
]
IDS = [i.name for i in INSTANCES]
seeds = st.integers(min_value=0, max_value=2**31)


def test_catalog_names():
    names = [i.name for i in instance_catalog()]
    assert "BoundedQ" in names and "FiniteSym" in names and "AbelianGrid" in names
    with pytest.raises(UnknownInstance):
        get_instance("NoSuchInstance")


def test_finite_sym_ideal_threshold():
    inst = get_instance("FiniteSym", N=6, k=3)
    assert inst.in_ideal(frozenset({0, 1}))
    assert not inst.in_ideal(frozenset({0, 1, 2}))
    t = FinitePermutation.transposition(6, 0, 1)
    assert not inst.in_pstab(t, frozenset({0}))
    assert inst.in_pstab(t, frozenset({2}))


def test_grid_columns_and_shifts():
    inst = get_instance("AbelianGrid", m=3, modulus=4)
    col1 = inst.column(1)
    assert inst.in_ideal(inst.column(0))
    g = GridElement(vector=(0, 1, 0), modulus=4)
    assert not inst.in_pstab(g, col1)
    assert inst.act(g, frozenset({(1, 0), (0, 2)})) == frozenset({(1, 1), (0, 2)})
    assert inst.act(g, col1) == col1
    assert inst.in_pstab(g, inst.column(0) | inst.column(2))


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
def test_identity_fixes_everything(inst):
    e = inst.identity()
    for seed in range(20):
        s = inst.sample_ideal(seed, 3)
        assert inst.act(e, s) == s
        assert inst.in_pstab(e, s)


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_action_laws(inst, seed):
    g = inst.sample_group(seed, 3)
    h = inst.sample_group(seed + 1, 3)
    s = inst.sample_ideal(seed + 2, 3)
    assert inst.act(inst.compose(g, h), s) == inst.act(g, inst.act(h, s))
    assert inst.act(inst.inverse(g), inst.act(g, s)) == s
    assert inst.in_ideal(s)
    assert inst.in_ideal(inst.act(g, s))


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_ideal_closed_under_union_and_pstab_sampler(inst, seed):
    s = inst.sample_ideal(seed, 2)
    t = inst.sample_ideal(seed + 7, 2)
    u = inst.union(s, t)
    assert inst.subset(s, u) and inst.subset(t, u)
    if inst.name not in ("FiniteSym", "AbelianGrid"):  # finite size bounds
        assert inst.in_ideal(u)
    g = inst.sample_pstab(seed, s)
    assert inst.in_pstab(g, s)
    assert inst.act(g, s) == s


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
def test_samplers_are_deterministic(inst):
    for seed in range(10):
        assert inst.sample_ideal(seed, 3) == inst.sample_ideal(seed, 3)
        assert inst.sample_group(seed, 3) == inst.sample_group(seed, 3)


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
def test_json_round_trips(inst):
    assert instance_from_spec(inst.spec()).spec() == inst.spec()
    for seed in range(10):
        s = inst.sample_ideal(seed, 3)
        g = inst.sample_group(seed, 3)
        assert inst.element_from_json(inst.element_to_json(s)) == s
        assert inst.group_from_json(inst.group_to_json(g)) == g


def test_bounded_samples_are_bounded():
    inst = get_instance("BoundedQ")
    for seed in range(1000):
        assert inst.sample_ideal(seed, 3).is_bounded()


def test_sampled_plmaps_invert():
    inst = get_instance("BoundedQ")
    for seed in range(1000):
        f = inst.sample_group(seed, 3)
        assert isinstance(f, PLMap)
        assert pl_compose(f, pl_invert(f)).is_identity()


@settings(max_examples=100)
@given(st.permutations(range(6)), st.permutations(range(6)), st.permutations(range(6)))
def test_permutation_group_laws(p, q, r):
    p, q, r = (FinitePermutation(tuple(x)) for x in (p, q, r))
    assert (p * q) * r == p * (q * r)
    assert (p * p.inverse()).is_identity()
    assert all((p * q)(x) == p(q(x)) for x in range(6))
    assert FinitePermutation.from_json(p.to_json()) == p
