import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynideal.errors import NoWitness, ParseError, PreconditionError
from dynideal.hfa import (
    EMPTY,
    abelian_refuter,
    act_hf,
    atom,
    check_support,
    choice_selector,
    class_pair,
    definable_closure,
    find_support,
    hfset,
    is_hereditarily_symmetric,
    orbit,
    orbit_decomposition,
    pair,
    parse_hf,
    pstab_generators,
    selector_candidates,
    support_invariance,
    unpair,
    wo_criterion,
)
from dynideal.ideals import FinitePermutation, GridElement, get_instance
from dynideal.witnesses import a_large_symmetric, generate_group

seeds = st.integers(min_value=0, max_value=2**31)


def random_hf(rng, N, depth):
    if depth == 0 or rng.random() < 0.3:
        return atom(rng.randrange(N))
    return hfset(random_hf(rng, N, depth - 1) for _ in range(rng.randint(0, 3)))


def test_hash_consing_and_text():
    a = hfset([atom(0), hfset([atom(1)])])
    b = hfset([hfset([atom(1)]), atom(0), atom(0)])
    assert a is b
    assert parse_hf(a.text) is a
    assert unpair(pair(atom(0), atom(1))) == (atom(0), atom(1))
    assert unpair(pair(atom(2), atom(2))) == (atom(2), atom(2))
    with pytest.raises(ParseError):
        parse_hf("{@0,")


def test_act_examples():
    inst = get_instance("FiniteSym", N=5, k=3)
    swap = FinitePermutation.transposition(5, 0, 1)
    A = hfset([atom(0), hfset([atom(1)])])
    assert act_hf(inst, inst.identity(), A) is A
    assert act_hf(inst, swap, A) is hfset([atom(1), hfset([atom(0)])])
    pure = hfset([EMPTY, hfset([EMPTY])])
    assert act_hf(inst, FinitePermutation((4, 3, 2, 1, 0)), pure) is pure


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_action_is_a_group_action(seed):
    inst = get_instance("FiniteSym", N=6, k=3)
    rng = random.Random(seed)
    A = random_hf(rng, 6, 3)
    g = inst.sample_group(seed, 3)
    h = inst.sample_group(seed + 1, 3)
    assert act_hf(inst, g * h, A) is act_hf(inst, g, act_hf(inst, h, A))
    assert act_hf(inst, g.inverse(), act_hf(inst, g, A)) is A


def test_pstab_generators_generate_the_stabilizer():
    inst = get_instance("FiniteSym", N=5, k=3)
    gens = pstab_generators(inst, {0, 1})
    assert gens == [FinitePermutation((0, 1, 3, 2, 4)), FinitePermutation((0, 1, 2, 4, 3))]
    group = generate_group(gens, 5)
    brute = {p for p in permutations(range(5)) if p[0] == 0 and p[1] == 1}
    assert group == brute
    assert pstab_generators(inst, set(range(5))) == []
    grid = get_instance("AbelianGrid", m=3, modulus=4)
    assert pstab_generators(grid, grid.column(0)) == [GridElement.unit(3, 4, 1), GridElement.unit(3, 4, 2)]


def test_support_examples():
    inst = get_instance("FiniteSym", N=5, k=3)
    A = hfset([atom(0)])
    assert check_support(inst, A, {0}).verified
    assert not check_support(inst, A, set()).verified
    grid = get_instance("AbelianGrid", m=3, modulus=4)
    assert check_support(grid, class_pair(grid, 0), set()).verified


def test_hereditary_symmetry_examples():
    inst = get_instance("FiniteSym", N=5, k=3)
    ok, sup = is_hereditarily_symmetric(inst, hfset([EMPTY]))
    assert ok and sup[hfset([EMPTY]).text] == frozenset()
    atoms = hfset(atom(i) for i in range(5))
    ok, sup = is_hereditarily_symmetric(inst, atoms)
    assert ok and sup[atoms.text] == frozenset()
    chain = hfset([hfset([atom(0)])])
    ok, sup = is_hereditarily_symmetric(inst, chain)
    assert ok and sup[chain.text] == frozenset({0})


def _brute_dcl(N, a):
    fixed = set(range(N))
    for p in permutations(range(N)):
        if all(p[x] == x for x in a):
            fixed &= {x for x in range(N) if p[x] == x}
    return frozenset(fixed)


@pytest.mark.parametrize("N", range(1, 7))
def test_definable_closure_laws_exhaustive(N):
    inst = get_instance("FiniteSym", N=N, k=N + 1)
    subsets = [frozenset(c) for r in range(N + 1) for c in combinations(range(N), r)]
    dcl = {a: definable_closure(inst, a) for a in subsets}
    perms = [FinitePermutation(p) for p in permutations(range(N))] if N <= 4 else [
        inst.sample_group(s, 3) for s in range(30)]
    for a in subsets:
        d = dcl[a]
        assert a <= d and dcl[d] == d
        if N <= 5:
            assert d == _brute_dcl(N, a)
        for b in subsets:
            if a <= b:
                assert d <= dcl[b]
        for g in perms:
            assert definable_closure(inst, g.image(a)) == g.image(d)


def test_definable_closure_examples():
    inst = get_instance("FiniteSym", N=6, k=3)
    assert definable_closure(inst, {0}) == {0}
    assert definable_closure(inst, range(6)) == frozenset(range(6))
    # with one point missing the last point is forced
    assert definable_closure(inst, range(5)) == frozenset(range(6))
    grid = get_instance("AbelianGrid", m=3, modulus=4)
    assert definable_closure(grid, {(0, 0)}) == grid.column(0)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_support_invariance_property(seed):
    inst = get_instance("FiniteSym", N=6, k=4)
    rng = random.Random(seed)
    A = random_hf(rng, 6, 3)
    b = find_support(inst, A)
    if b is None:
        return
    g = inst.sample_group(seed, 3)
    assert support_invariance(inst, g, b, A)
    assert support_invariance(inst, inst.identity(), b, A)


def test_support_invariance_needs_a_support():
    inst = get_instance("FiniteSym", N=5, k=3)
    with pytest.raises(PreconditionError):
        support_invariance(inst, inst.identity(), set(), hfset([atom(0)]))


def test_wo_criterion_examples():
    inst = get_instance("FiniteSym", N=5, k=3)
    assert wo_criterion(inst, hfset([EMPTY, hfset([EMPTY])])) == frozenset()
    assert wo_criterion(inst, hfset([hfset([atom(0)]), hfset([atom(1)])])) == frozenset({0, 1})
    grid = get_instance("AbelianGrid", m=3, modulus=4)
    b = wo_criterion(grid, class_pair(grid, 0))
    assert b and grid.columns_of(b) == {0}


def _orbit_family(inst, a, rng):
    gens = pstab_generators(inst, a)
    members = []
    for _ in range(2):
        x, y = rng.sample(range(inst.N), 2)
        members.append(orbit(inst, gens, hfset([atom(x), atom(y)])))
    return hfset(members)


def test_choice_selector_pipeline():
    inst = get_instance("FiniteSym", N=8, k=3)
    rng = random.Random(3)
    a = frozenset({0})
    b, cert = a_large_symmetric(a, 8, 3)
    family = _orbit_family(inst, a, rng)
    f = choice_selector(inst, family, a, b, cert)
    assert check_support(inst, f, b).verified
    chosen = [unpair(p) for p in f]
    assert {B for B, _ in chosen} == set(family)
    assert all(C in B for B, C in chosen)
    pure = hfset([hfset([EMPTY])])
    f = choice_selector(inst, pure, a, b)
    assert check_support(inst, f, set()).verified
    with pytest.raises(PreconditionError):
        choice_selector(inst, hfset([EMPTY]), a, b)


def test_orbit_decomposition_examples():
    grid = get_instance("AbelianGrid", m=3, modulus=4)
    column = hfset(atom(c) for c in grid.column(1))
    orbits, checks = orbit_decomposition(grid, column, set())
    assert len(orbits) == 1 and all(c["fixes_orbit"] for c in checks)
    pure = hfset([EMPTY, hfset([EMPTY])])
    orbits, _ = orbit_decomposition(grid, pure, set())
    assert len(orbits) == 2


def test_abelian_refuter_examples():
    grid = get_instance("AbelianGrid", m=3, modulus=4)
    for f in selector_candidates(grid):
        g, col, _ = abelian_refuter(grid, f, grid.column(0))
        assert g in (GridElement.unit(3, 4, 1), GridElement.unit(3, 4, 2)) and col in (1, 2)
        assert act_hf(grid, g, f) is not f
    with pytest.raises(NoWitness):
        abelian_refuter(grid, selector_candidates(grid)[0], set(grid.cells()))
    small = get_instance("AbelianGrid", m=2, modulus=2)
    cands = selector_candidates(small)
    assert len(cands) == 4
    for f in cands:
        g, _, _ = abelian_refuter(small, f, set())
        assert act_hf(small, g, f) is not f
