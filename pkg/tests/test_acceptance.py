"""Acceptance criteria, run at full size.  Each test prints one PASS/FAIL line."""

import random
import time
from itertools import combinations
from math import factorial

import pytest

from dynideal import fraisse as fr
from dynideal.game import make_strategy, run_game, validate_transcript
from dynideal.hfa import (
    EMPTY,
    abelian_refuter,
    act_hf,
    atom,
    check_support,
    choice_selector,
    definable_closure,
    hfset,
    orbit,
    orbit_decomposition,
    pstab_generators,
    selector_candidates,
    support_invariance,
)
from dynideal.ideals import FinitePermutation, get_instance
from dynideal.order import (
    BlockSet,
    cb_rank,
    image_set,
    is_bounded_below_every,
    is_subset,
    is_well_ordered,
    pl_apply,
)
from dynideal.order.blocks import derivative, extreme_in
from dynideal.scenarios import report_text, report_verify, scenario_list, scenario_run
from dynideal.witnesses import (
    LargenessCertificate,
    a_large_bounded,
    a_large_symmetric,
    conjugate_factorization,
    cover_witness_bounded,
    cover_witness_symmetric,
    largeness_conjugation,
    normal_closure,
    refute_cofinal_countableclosed,
    sigma_witness_bounded_below,
    sigma_witness_wellordered,
    stabilizer_generators,
    validate_certificate,
)


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail, seconds):
        with capsys.disabled():
            print(f"\n[acceptance {number:>2}] {'PASS' if ok else 'FAIL'} ({seconds:.1f}s) {detail}")
        return ok

    return emit


def _naive_rank(s):
    r = 0
    while not s.is_empty():
        s = derivative(s)
        r += 1
    return r


# 1 ------------------------------------------------------------------------------------


def test_01_cofinal_orbits_exhaustive(verdict):
    t0 = time.time()
    N, k = 7, 3
    small = [frozenset(c) for r in range(k) for c in combinations(range(N), r)]
    cases = failures = 0
    for a in small:
        b, _ = a_large_symmetric(a, N, k)
        for c in small:
            cases += 1
            g = cover_witness_symmetric(a, b, c, N)
            if not (g.fixes(a) and c <= g.image(b)):
                failures += 1
    dt = time.time() - t0
    ok = failures == 0 and dt < 60
    verdict(1, ok, f"FiniteSym(7,3): {cases} (a, c) pairs, {failures} failures", dt)
    assert ok


# 2 ------------------------------------------------------------------------------------


def test_02_cofinal_orbits_sampled(verdict):
    t0 = time.time()
    inst = get_instance("BoundedQ")
    failures = 0
    for seed in range(10_000):
        a = inst.sample_ideal(2 * seed, 2)
        c = inst.sample_ideal(2 * seed + 1, 3)
        b, cert = a_large_bounded(a)
        g = cover_witness_bounded(a, b, c, cert)
        if not (inst.in_pstab(g, a) and inst.subset(c, inst.act(g, b))):
            failures += 1
    transported = 0
    for seed in range(1000):
        a = inst.sample_ideal(seed, 2)
        _, cert = a_large_bounded(a)
        d = inst.sample_group(seed, 3)
        moved = largeness_conjugation(inst, cert, d)
        again = LargenessCertificate.from_json(inst, moved.to_json(inst))
        if (validate_certificate(inst, again) and again.base == inst.act(d, a)
                and again.large == inst.act(d, cert.large)):
            transported += 1
    dt = time.time() - t0
    ok = failures == 0 and transported == 1000 and dt < 60
    verdict(2, ok, f"BoundedQ: 10000 covers, {failures} failures; {transported}/1000 transports", dt)
    assert ok


# 3 ------------------------------------------------------------------------------------


def _cofinal_games(inst, games, horizon):
    wins = invariant_breaks = faults = 0
    for seed in range(games):
        t, v = run_game(inst, make_strategy("I", "random"), make_strategy("II", "cofinal"),
                        horizon, seed=seed)
        good = not validate_transcript(t) and v.fault is None and len(t.rounds) == horizon
        acc = inst.empty()
        for r in t.rounds:
            acc = inst.union(acc, inst.act(r.gamma, r.a))
            note = r.note.get("II", {})
            lc = LargenessCertificate.from_json(inst, note["certificate"]) if "certificate" in note else None
            if lc is None or not (validate_certificate(inst, lc) and lc.base == acc
                                  and inst.subset(acc, lc.large)):
                invariant_breaks += 1
                good = False
                break
        faults += v.fault is not None
        wins += good and v.outcome_in_ideal and inst.in_ideal(t.accumulated)
    return wins, invariant_breaks, faults


def test_03_dc_game_cofinal_player_II(verdict):
    t0 = time.time()
    bq = _cofinal_games(get_instance("BoundedQ"), 200, 50)
    fs = _cofinal_games(get_instance("FiniteSym", N=20, k=4), 200, 50)
    dt = time.time() - t0
    ok = bq[0] == 200 and fs[0] == 200 and dt < 300
    verdict(3, ok, f"BoundedQ {bq[0]}/200 won; FiniteSym(20,4) {fs[0]}/200 won, "
                   f"{fs[2]} Player II faults", dt)
    assert ok


# 4 ------------------------------------------------------------------------------------


def test_04_player_I_strategies(verdict):
    t0 = time.time()
    inst = get_instance("FiniteSym", N=40, k=41)
    ks = [1, 2, 4, 6, 9, 12, 16, 20, 25, 30]
    reached = 0
    for seed in range(100):
        t, v = run_game(inst, make_strategy("I", "stratified", thresholds=ks),
                        make_strategy("II", "random"), len(ks), seed=seed)
        acc, good = frozenset(), v.fault is None and not validate_transcript(t)
        for n, r in enumerate(t.rounds):
            acc = acc | r.gamma.image(r.a)
            good = good and len(acc) >= ks[n]
        reached += good
    cc = get_instance("CountableClosedQ")
    interleave_ok = 0
    for seed in range(10):
        t, v = run_game(cc, make_strategy("I", "interleave"), make_strategy("II", "random"), 12, seed=seed)
        notes = [r.note["I"] for r in t.rounds]
        ranks = [n["stamp_rank"] for n in notes]
        steady = all(max(ranks[i + 1:i + 5]) > ranks[i] for i in range(len(ranks) - 4))
        interleave_ok += (v.fault is None and len(ranks) == 12 and steady
                          and all(n["interleaved"] for n in notes))
    dt = time.time() - t0
    ok = reached == 100 and interleave_ok == 10
    verdict(4, ok, f"stratified {reached}/100 games reach k_n every round; "
                   f"interleave {interleave_ok}/10 games interleave with rising rank", dt)
    assert ok


# 5 ------------------------------------------------------------------------------------


def _sigma_trials(name, build, count):
    inst = get_instance(name)
    bad = 0
    for seed in range(count):
        rng = random.Random(seed)
        a = inst.sample_ideal(rng.getrandbits(32), 2)
        bs = [inst.sample_ideal(rng.getrandbits(32), 2) for _ in range(rng.randint(1, 4))]
        gammas, records = build(a, bs, with_records=True)
        union = a
        for g, b in zip(gammas, bs):
            union = union | image_set(g, b)
        good = all(inst.in_pstab(g, a) for g in gammas) and is_well_ordered(union)
        if name == "WellOrderedBoundedBelowQ":
            good = good and is_bounded_below_every(union)
        by_gap = {}
        for r in records:
            by_gap.setdefault((r.lo, r.hi), []).append(r)
            low = extreme_in(image_set(gammas[r.n], bs[r.n]), r.lo, r.hi, True)
            good = good and (low is None or low >= r.threshold)
        for rs in by_gap.values():
            th = [r.threshold for r in sorted(rs, key=lambda r: r.n)]
            good = good and all(x < y for x, y in zip(th, th[1:]))
        bad += not good
    return bad


def test_05_sigma_witnesses(verdict):
    t0 = time.time()
    wo = _sigma_trials("WellOrderedQ", sigma_witness_wellordered, 1000)
    bb = _sigma_trials("WellOrderedBoundedBelowQ", sigma_witness_bounded_below, 1000)
    dt = time.time() - t0
    ok = wo == bb == 0 and dt < 120
    verdict(5, ok, f"well-ordered {wo} failures / 1000; bounded-below {bb} failures / 1000", dt)
    assert ok


# 6 ------------------------------------------------------------------------------------


def test_06_simplicity(verdict):
    t0 = time.time()
    pairs = bad = 0
    for N in range(1, 8):
        for nb in range(0, N - 1):
            for b in combinations(range(N), nb):
                core = stabilizer_generators(N, set(b))
                for na in range(nb + 1):
                    for a in combinations(b, na):
                        pairs += 1
                        closure = normal_closure(core, stabilizer_generators(N, set(a)), N)
                        # oracle: |pstab(a)| = (N - |a|)! and every element fixes a
                        if len(closure) != factorial(N - na) or any(
                                any(p[x] != x for x in a) for p in closure):
                            bad += 1
    fact_bad = 0
    rng = random.Random(6)
    N = 12
    for _ in range(1000):
        a = frozenset(rng.sample(range(N), rng.randint(0, 3)))
        b = a | frozenset(rng.sample(range(N), rng.randint(0, 3)))
        moved = rng.sample([x for x in range(N) if x not in a], rng.randint(2, 4))
        img = moved[:]
        while img == moved:
            rng.shuffle(img)
        m = list(range(N))
        for s, d in zip(moved, img):
            m[s] = d
        gamma = FinitePermutation(tuple(m))
        w = conjugate_factorization(gamma, a, b, N)
        prod = FinitePermutation.identity(N)
        for f in w.factors:
            prod = prod * f.conjugator * f.core * f.conjugator.inverse()
        good = (w.verify() and len(w.factors) == 2 and prod == gamma
                and all(f.conjugator.fixes(f.conjugator_fixes) and f.core.fixes(f.core_fixes)
                        for f in w.factors))
        fact_bad += not good
    dt = time.time() - t0
    ok = bad == 0 and fact_bad == 0 and dt < 300
    verdict(6, ok, f"{pairs} (N, a, b) closures, {bad} wrong; 1000 factorizations, {fact_bad} bad", dt)
    assert ok


# 7 ------------------------------------------------------------------------------------


def test_07_cb_rank_obstruction(verdict):
    t0 = time.time()
    inst = get_instance("CountableClosedQ")
    refuted = 0
    for seed in range(100):
        b = inst.sample_ideal(seed, 3)
        c, proof = refute_cofinal_countableclosed(b)
        refuted += (inst.in_ideal(c) and _naive_rank(c) == _naive_rank(b) + 1
                    and proof["rank_c"] == cb_rank(c))
    images = 0
    for seed in range(1000):
        s = inst.sample_ideal(seed, 3)
        g = inst.sample_group(seed, 3)
        images += cb_rank(image_set(g, s)) == cb_rank(s)
    mono = 0
    for seed in range(1000):
        s = inst.sample_ideal(seed, 3)
        t = s | inst.sample_ideal(seed + 5000, 3)
        mono += is_subset(s, t) and cb_rank(s) <= cb_rank(t)
    dt = time.time() - t0
    ok = refuted == 100 and images == 1000 and mono == 1000
    verdict(7, ok, f"refuted {refuted}/100; rank kept by {images}/1000 images; "
                   f"monotone on {mono}/1000 pairs", dt)
    assert ok


# 8 ------------------------------------------------------------------------------------


def _random_hf(rng, N, depth):
    if depth == 0 or rng.random() < 0.3:
        return atom(rng.randrange(N))
    return hfset(_random_hf(rng, N, depth - 1) for _ in range(rng.randint(0, 3)))


def test_08_support_calculus(verdict):
    t0 = time.time()
    inst = get_instance("FiniteSym", N=6, k=7)
    inv = 0
    for seed in range(10_000):
        rng = random.Random(seed)
        A = _random_hf(rng, 6, 3)
        b = A.atoms()
        g = inst.sample_group(seed, 3)
        inv += support_invariance(inst, g, b, A) and check_support(
            inst, act_hf(inst, g, A), g.image(b)).verified
    dcl_bad = 0
    for N in range(1, 7):
        fs = get_instance("FiniteSym", N=N, k=N + 1)
        subsets = [frozenset(c) for r in range(N + 1) for c in combinations(range(N), r)]
        table = {a: definable_closure(fs, a) for a in subsets}
        perms = [fs.sample_group(s, 3) for s in range(10)]
        for a in subsets:
            d = table[a]
            dcl_bad += not (a <= d and table[d] == d)
            dcl_bad += sum(not d <= table[b] for b in subsets if a <= b)
            dcl_bad += sum(definable_closure(fs, g.image(a)) != g.image(d) for g in perms)
    sym = get_instance("FiniteSym", N=8, k=3)
    selectors = 0
    for seed in range(100):
        rng = random.Random(seed)
        a = frozenset(rng.sample(range(8), rng.randint(0, 2)))
        b, cert = a_large_symmetric(a, 8, 3)
        gens = pstab_generators(sym, a)
        family = hfset(orbit(sym, gens, hfset(atom(x) for x in rng.sample(range(8), rng.randint(1, 2))))
                       for _ in range(rng.randint(1, 3)))
        f = choice_selector(sym, family, a, b, cert)
        selectors += check_support(sym, f, b).verified and len(f) == len(family)
    dt = time.time() - t0
    ok = inv == 10_000 and dcl_bad == 0 and selectors == 100
    verdict(8, ok, f"support invariance {inv}/10000; closure law violations {dcl_bad}; "
                   f"selectors {selectors}/100", dt)
    assert ok


# 9 ------------------------------------------------------------------------------------


def test_09_abelian_surrogate(verdict):
    t0 = time.time()
    grid = get_instance("AbelianGrid", m=3, modulus=4)
    decomp = 0
    for seed in range(100):
        rng = random.Random(seed)
        cells = grid.cells()
        a = frozenset(rng.sample(sorted(grid.column(rng.randrange(3))), rng.randint(0, 2)))
        cols = rng.sample(range(3), rng.randint(1, 2))
        pool = [c for c in cells if c[0] in cols]
        A = orbit(grid, pstab_generators(grid, a), hfset(atom(c) for c in rng.sample(pool, 2)))
        _, checks = orbit_decomposition(grid, A, a)
        decomp += all(c["fixes_orbit"] for c in checks)
    small = get_instance("AbelianGrid", m=2, modulus=2)
    refuted_small = sum(
        act_hf(small, abelian_refuter(small, f, frozenset())[0], f) is not f
        for f in selector_candidates(small))
    wide = 0
    cands = selector_candidates(grid)
    for col in range(3):
        b = frozenset([(col, 0)])
        for f in cands:
            g, _, _ = abelian_refuter(grid, f, b)
            wide += grid.in_pstab(g, b) and act_hf(grid, g, f) is not f
    dt = time.time() - t0
    ok = decomp == 100 and refuted_small == 4 and wide == 3 * len(cands)
    verdict(9, ok, f"orbit checks {decomp}/100; m=2 refuted {refuted_small}/4; "
                   f"m=3 refuted {wide}/{3 * len(cands)}", dt)
    assert ok


# 10 -----------------------------------------------------------------------------------


def _f2_dim(vectors):
    rows = [int("".join(map(str, v)) or "0", 2) for v in vectors]
    basis = []
    for r in rows:
        for p in basis:
            r = min(r, r ^ p)
        if r:
            basis.append(r)
    return len(basis)


def _relabel(A, B, rng):
    common = list(A.labels() & B.labels())
    ren = {x: ("c", i) for i, x in enumerate(rng.sample(common, len(common)))}
    phi = {x: ren.get(x, ("a", i)) for i, x in enumerate(rng.sample(list(A.universe), len(A)))}
    psi = {x: ren.get(x, ("b", i)) for i, x in enumerate(rng.sample(list(B.universe), len(B)))}
    return phi, psi


def test_10_fraisse_laws(verdict):
    t0 = time.time()
    problems = []
    totals = {}
    for sig in fr.CANONICAL:
        cases = list(fr.amalgamation_cases(sig))
        law = her = inv = dim = 0
        for A, B in cases:
            res = fr.amalgamate(sig, A, B)
            law += not all(fr.verify_amalgam(A, B, res).values())
            for As in fr.closed_substructures(A, A.labels() & B.labels()):
                her += not fr.check_heredity(sig, As, A, B)
            if sig == "vector-space-q":
                common = [A.vec[x] for x in A.labels() & B.labels()]
                expect = _f2_dim(A.vec.values()) + _f2_dim(B.vec.values()) - _f2_dim(common)
                dim += _f2_dim(res.C.vec.values()) != expect
        rng = random.Random(10)
        for A, B in cases:
            inv += not fr.check_invariance(sig, A, B, *_relabel(A, B, rng))
        totals[sig] = len(cases)
        if law or her or inv or dim:
            problems.append(f"{sig}: laws {law}, heredity {her}, invariance {inv}, dimension {dim}")
    rec = fr.no_canonical_amalgam_search()
    impossible = rec.verdict == "impossible" and fr.verify_impossibility(rec) and bool(rec.cases)
    hosts = {
        "pure-set": fr.pure_set(range(12)),
        "vector-space-q": fr.standard_space(6),
        "ultrametric": fr.regular_ultrametric(fr.DEFAULT_PALETTE, 3),
    }
    witnessed = {}
    for sig, H in hosts.items():
        rng = random.Random(100)
        pts = list(H.universe)
        good = 0
        for _ in range(100):
            base = {H.zero()} if sig == "vector-space-q" else set()
            a = fr.acl(H, set(rng.sample(pts, rng.randint(0, 1))) | base)
            b = fr.acl(H, a | set(rng.sample(pts, rng.randint(0, 1))))
            pi = fr.random_partial_iso(H, a, rng.randint(0, 2), rng)
            w = fr.conjugation_witness(sig, H, a, b, pi)
            good += all(fr.ConjugationWitness.from_json(w.to_json()).verify().values())
        witnessed[sig] = good
    dt = time.time() - t0
    ok = not problems and impossible and all(v == 100 for v in witnessed.values()) and dt < 600
    detail = (f"cases {totals}; {'; '.join(problems) or 'no law failures'}; "
              f"quad-selector impossible over {len(rec.cases)} tables: {impossible}; "
              f"conjugation witnesses {witnessed}")
    verdict(10, ok, detail, dt)
    assert ok


# 11 -----------------------------------------------------------------------------------


def test_11_determinism(verdict):
    t0 = time.time()
    same = verified = 0
    names = scenario_list()
    for name in names:
        first = scenario_run(name)
        second = scenario_run(name)
        same += report_text(first) == report_text(second)
        verified += report_verify(first)
    dt = time.time() - t0
    ok = same == verified == len(names)
    verdict(11, ok, f"{same}/{len(names)} scenarios byte-identical, {verified} re-verified", dt)
    assert ok
