import random
from fractions import Fraction as F

import pytest

from dynideal import fraisse as fr
from dynideal.errors import AxiomViolation, NotAmalgamable, PreconditionError
from dynideal.fraisse import _sorted


def _relabel_pair(A, B, rng):
    common = list(A.labels() & B.labels())
    ren = {x: ("c", i) for i, x in enumerate(rng.sample(common, len(common)))}
    phi = {x: ren.get(x, ("a", i)) for i, x in enumerate(rng.sample(list(A.universe), len(A)))}
    psi = {x: ren.get(x, ("b", i)) for i, x in enumerate(rng.sample(list(B.universe), len(B)))}
    return phi, psi


def _rank_f2(vectors):
    # independent oracle: Gaussian elimination over GF(2) on bit masks
    rows = [int("".join(map(str, v)), 2) for v in vectors]
    rank = 0
    while rows:
        pivot = max(rows)
        if pivot == 0:
            break
        rank += 1
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if r >> top & 1 else r for r in rows if r != pivot]
    return rank


def test_pure_union():
    r = fr.amalgamate("pure-set", fr.pure_set({1, 2}), fr.pure_set({2, 3}))
    assert set(r.C.universe) == {1, 2, 3}


def test_vector_dimension_law():
    A = fr.vector_space({0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)})
    B = fr.vector_space({0: (0, 0), 1: (1, 0), "x": (0, 1), "y": (1, 1)})
    r = fr.amalgamate("vector-space-q", A, B)
    assert r.C.dim == 3 and len(r.C) == 8
    assert _rank_f2([r.C.vec[x] for x in r.C.universe]) == 3
    assert all(fr.verify_amalgam(A, B, r).values())


def test_ultrametric_forced_maximum():
    U = fr.ultrametric({("x", "z"): 1})
    V = fr.ultrametric({("z", "y"): 2})
    assert fr.amalgamate("ultrametric", U, V).C.d("x", "y") == 2


def test_ultrametric_axiom_violation():
    with pytest.raises(AxiomViolation):
        fr.ultrametric({("x", "y"): 1, ("y", "z"): 1, ("x", "z"): 3})


@pytest.mark.parametrize("sig", fr.CANONICAL)
def test_laws_exhaustive(sig):
    n = her = 0
    for A, B in fr.amalgamation_cases(sig):
        n += 1
        res = fr.amalgamate(sig, A, B)
        assert all(fr.verify_amalgam(A, B, res).values()), (A, B)
        for As in fr.closed_substructures(A, A.labels() & B.labels()):
            her += 1
            assert fr.check_heredity(sig, As, A, B)
    assert n > 0 and her > 0


@pytest.mark.parametrize("sig", fr.CANONICAL)
def test_invariance_random(sig):
    cases = list(fr.amalgamation_cases(sig))
    rng = random.Random(7)
    for _ in range(150):
        A, B = rng.choice(cases)
        phi, psi = _relabel_pair(A, B, rng)
        assert fr.check_invariance(sig, A, B, phi, psi)
    A, B = cases[-1]
    ident_a = {x: x for x in A.universe}
    ident_b = {x: x for x in B.universe}
    assert fr.check_invariance(sig, A, B, ident_a, ident_b)


def _corrupted(sig, A, B):
    r = fr.amalgamate(sig, A, B)
    C = r.C
    cross = [(x, y) for x in _sorted(A.labels() - B.labels()) for y in _sorted(B.labels() - A.labels())]
    if cross:
        x, y = cross[0]
        d = dict(C.dist)
        d[frozenset((x, y))] += 1
        C = type(C)(C.signature, C.universe, dist=d, palette=C.palette)
    return type(r)(C, r.left, r.right)


def test_invariance_detects_a_corrupted_operator():
    cases = list(fr.amalgamation_cases("ultrametric"))
    rng = random.Random(2)
    misses = sum(
        not fr.check_invariance("ultrametric", A, B, *_relabel_pair(A, B, rng), operator=_corrupted)
        for A, B in rng.sample(cases, 100))
    assert misses > 0


def test_heredity_needs_a_subspace():
    A = fr.vector_space({0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)})
    B = fr.vector_space({0: (0, 0), 1: (1, 0)})
    with pytest.raises(PreconditionError):
        A.induced({1, 2})
    sub = A.induced({0, 1})
    assert fr.check_heredity("vector-space-q", sub, A, B)
    assert fr.check_heredity("vector-space-q", A, A, B)


def test_quad_selector_impossibility():
    rec = fr.no_canonical_amalgam_search()
    assert rec.verdict == "impossible" and rec.cases
    assert fr.verify_impossibility(rec)
    assert fr.no_canonical_amalgam_search(1, 1).verdict == "possible"
    assert fr.no_canonical_amalgam_search(3, 1, "pure-set").verdict == "possible"
    A = fr.quad_selector(["p", "q", "r"], {})
    with pytest.raises(NotAmalgamable):
        fr.amalgamate("quad-selector", A, fr.quad_selector(["s"], {}))


def test_chains():
    assert len(fr.fraisse_chain("ultrametric", 0, 0).final) == 0
    c = fr.fraisse_chain("pure-set", 10, 0)
    assert len(c.final) == 10 and c.score == 1
    c = fr.fraisse_chain("vector-space-q", 8, 0)
    assert c.score == 1 and c.realized == c.total
    c = fr.fraisse_chain("ultrametric", 6, 1)
    c.final.check_axioms()
    assert 0 < c.score <= 1


def test_automorphism_extension():
    H = fr.regular_ultrametric(fr.DEFAULT_PALETTE, 3)
    rng = random.Random(0)
    for _ in range(20):
        partial = fr.random_partial_iso(H, set(), 2, rng)
        full = fr.extend_to_automorphism(H, partial, rng)
        assert full is not None and fr.is_isomorphism(H, H, full)
        assert all(full[x] == y for x, y in partial.items())
    V = fr.standard_space(3)
    ident = {V.zero(): V.zero()}
    assert fr.extend_to_automorphism(V, ident) == {x: x for x in V.universe}


def test_conjugation_pure_example():
    M = fr.pure_set(range(12))
    w = fr.conjugation_witness("pure-set", M, set(), {0}, {1: 2, 2: 1})
    assert all(w.checks.values())
    assert all(w.verify().values())
    assert not set(w.f) & set(w.e) - set(w.a)
    back = fr.ConjugationWitness.from_json(w.to_json())
    assert all(back.verify().values())
    for x in M.universe:
        assert fr.compose_maps(w.delta, fr.compose_maps(w.core, fr.invert_map(w.delta)))[x] == w.gamma[x]


def test_conjugation_identity_pi():
    M = fr.pure_set(range(8))
    w = fr.conjugation_witness("pure-set", M, {0}, {0, 1}, {0: 0})
    assert all(w.gamma[x] == x for x in w.host.universe)


@pytest.mark.parametrize("sig,host", [
    ("vector-space-q", fr.standard_space(6)),
    ("ultrametric", fr.regular_ultrametric(fr.DEFAULT_PALETTE, 3)),
])
def test_conjugation_random(sig, host):
    rng = random.Random(11)
    pts = list(host.universe)
    for _ in range(5):
        base = {host.zero()} if sig == "vector-space-q" else set()
        a = fr.acl(host, set(rng.sample(pts, 1)) | base)
        b = fr.acl(host, a | set(rng.sample(pts, 1)))
        pi = fr.random_partial_iso(host, a, 2, rng)
        w = fr.conjugation_witness(sig, host, a, b, pi)
        assert all(fr.ConjugationWitness.from_json(w.to_json()).verify().values())


def test_structure_json_round_trip():
    for sig in fr.CANONICAL:
        for A, B in list(fr.amalgamation_cases(sig))[:20]:
            assert fr.FinStructure.from_json(A.to_json()) == A
            C = fr.amalgamate(sig, A, B).C
            assert fr.FinStructure.from_json(C.to_json()) == C
    assert fr.label_from_json(fr.label_to_json(("+", 1, ("x", 2)))) == ("+", 1, ("x", 2))
    assert fr.DEFAULT_PALETTE == (F(1), F(2), F(3))
