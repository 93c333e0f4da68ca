"""Check kinds used by scenarios: each runs a construction and re-verifies its certificate.

A check kind is a pair ``(run, reverify)``.  ``run(params, seed)`` returns a
:class:`CheckResult` whose certificate is plain JSON; ``reverify(certificate)``
decides the same claim again from the certificate alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import fraisse as fr
from .errors import DynIdealError, PreconditionError
from .game import (
    GameTranscript,
    interleaves,
    make_strategy,
    run_game,
    validate_transcript,
)
from .hfa import (
    abelian_refuter,
    act_hf,
    check_support,
    choice_selector,
    definable_closure,
    orbit,
    orbit_decomposition,
    parse_hf,
    pstab_generators,
    selector_candidates,
    support_invariance,
    unpair,
)
from .ideals import (
    FinitePermutation,
    GridElement,
    get_instance,
    instance_from_spec,
)
from .order import (
    IntervalUnionSet,
    PLMap,
    cb_rank,
    fixes_pointwise,
    image_set,
    is_bounded_below_every,
    is_well_ordered,
    match_finite_sets,
    parse_rational,
    parse_scalar,
    pl_apply,
)
from .order.blocks import extreme_in
from .witnesses import (
    FactorizationWitness,
    LargenessCertificate,
    a_large_bounded,
    a_large_symmetric,
    conjugate_factorization,
    cover_witness_bounded,
    cover_witness_symmetric,
    largeness_conjugation,
    refute_cofinal_countableclosed,
    sigma_witness_bounded_below,
    sigma_witness_wellordered,
    simplicity_check,
    stratified_witness,
    validate_certificate,
)


@dataclass
class CheckResult:
    passed: bool
    certificate: dict
    detail: dict = field(default_factory=dict)


def _rng(seed: int, t: int) -> random.Random:
    return random.Random(seed * 1000003 + t)


def _large(inst, a):
    if inst.name == "BoundedQ":
        return a_large_bounded(a)
    return a_large_symmetric(a, inst.N, inst.k)


# -- cofinal orbits --------------------------------------------------------------------


def run_cover(params, seed):
    inst = instance_from_spec(params["instance"])
    cases = []
    for t in range(params.get("trials", 10)):
        rng = _rng(seed, t)
        a = inst.sample_ideal(rng.getrandbits(32), params.get("size_hint", 2))
        c = inst.sample_ideal(rng.getrandbits(32), params.get("size_hint", 2))
        if inst.name == "FiniteSym":
            a = frozenset(sorted(a)[: inst.k - 1])
        b, cert = _large(inst, a)
        if inst.name == "BoundedQ":
            g = cover_witness_bounded(a, b, c, cert)
        else:
            g = cover_witness_symmetric(a, b, c, inst.N)
        cases.append({"a": inst.element_to_json(a), "c": inst.element_to_json(c),
                      "gamma": inst.group_to_json(g), "certificate": cert.to_json(inst)})
    cert = {"instance": inst.spec(), "cases": cases}
    return CheckResult(reverify_cover(cert), cert, {"trials": len(cases)})


def reverify_cover(cert) -> bool:
    inst = instance_from_spec(cert["instance"])
    for case in cert["cases"]:
        a = inst.element_from_json(case["a"])
        c = inst.element_from_json(case["c"])
        g = inst.group_from_json(case["gamma"])
        lc = LargenessCertificate.from_json(inst, case["certificate"])
        if lc.base != a or not validate_certificate(inst, lc):
            return False
        if not (inst.in_pstab(g, a) and inst.subset(c, inst.act(g, lc.large))):
            return False
    return True


def run_conjugation(params, seed):
    inst = instance_from_spec(params["instance"])
    cases = []
    for t in range(params.get("trials", 10)):
        rng = _rng(seed, t)
        a = inst.sample_ideal(rng.getrandbits(32), 2)
        if inst.name == "FiniteSym":
            a = frozenset(sorted(a)[: inst.k - 1])
        _, lc = _large(inst, a)
        delta = inst.sample_group(rng.getrandbits(32), 3)
        moved = largeness_conjugation(inst, lc, delta)
        cases.append({"certificate": lc.to_json(inst), "delta": inst.group_to_json(delta),
                      "transported": moved.to_json(inst)})
    cert = {"instance": inst.spec(), "cases": cases}
    return CheckResult(reverify_conjugation(cert), cert, {"trials": len(cases)})


def reverify_conjugation(cert) -> bool:
    inst = instance_from_spec(cert["instance"])
    for case in cert["cases"]:
        old = LargenessCertificate.from_json(inst, case["certificate"])
        new = LargenessCertificate.from_json(inst, case["transported"])
        d = inst.group_from_json(case["delta"])
        if not (validate_certificate(inst, old) and validate_certificate(inst, new)):
            return False
        if new.base != inst.act(d, old.base) or new.large != inst.act(d, old.large):
            return False
    return True


def _fix_set(case):
    text = case.get("fix")
    return IntervalUnionSet.from_text(text) if text else IntervalUnionSet.empty()


def run_matching(params, seed):
    cases = []
    for case in params["cases"]:
        d0 = [parse_rational(x) for x in case["d0"]]
        d1 = [parse_rational(x) for x in case["d1"]]
        try:
            f = match_finite_sets(d0, d1, _fix_set(case))
            out = {"map": f.to_json()}
        except DynIdealError as exc:
            out = {"error": type(exc).__name__}
        cases.append({**case, **out})
    cert = {"cases": cases}
    return CheckResult(reverify_matching(cert), cert, {"cases": len(cases)})


def reverify_matching(cert) -> bool:
    for case in cert["cases"]:
        expect = case.get("expect", "map")
        if "error" in case:
            if expect != case["error"]:
                return False
            continue
        if expect != "map":
            return False
        f = PLMap.from_json(case["map"])
        d0 = sorted(parse_rational(x) for x in case["d0"])
        d1 = sorted(parse_rational(x) for x in case["d1"])
        if [pl_apply(f, x) for x in d0] != d1:
            return False
        if not fixes_pointwise(f, _fix_set(case)):
            return False
    return True


# -- games -------------------------------------------------------------------------------


def _strategy(player, spec):
    spec = dict(spec)
    return make_strategy(player, spec.pop("name"), **spec)


def run_game_check(params, seed):
    inst = instance_from_spec(params["instance"])
    games = []
    for t in range(params.get("games", 3)):
        sI = _strategy("I", params["player_I"])
        sII = _strategy("II", params["player_II"])
        tr, verdict = run_game(inst, sI, sII, params.get("horizon", 10), seed=seed * 1000 + t)
        games.append({"transcript": tr.to_json(), "verdict": verdict.to_json()})
    cert = {"expect": params.get("expect", "win-II"), "thresholds": params.get("thresholds"),
            "games": games}
    return CheckResult(reverify_game(cert), cert, {"games": len(games)})


def _round_notes_ok(inst, t: GameTranscript, thresholds) -> bool:
    acc = inst.empty()
    previous = None
    for n, r in enumerate(t.rounds):
        before = acc
        moved = inst.act(r.gamma, r.a)
        acc = inst.union(acc, moved)
        for who, note in r.note.items():
            kind = note.get("kind")
            if kind == "largeness":
                lc = LargenessCertificate.from_json(inst, note["certificate"])
                truth = validate_certificate(inst, lc) and lc.base == acc and inst.subset(acc, lc.large)
                if note["valid"] != truth:
                    return False
            elif kind == "size":
                if note["size"] != len(acc):
                    return False
                if thresholds and len(acc) < thresholds[n]:
                    return False
            elif kind == "interleave":
                if note["interleaved"] != interleaves(list(before.points), list(moved.points)):
                    return False
                if note["size"] != len(acc.points):
                    return False
        previous = acc
    return previous is None or previous == t.accumulated


def reverify_game(cert) -> bool:
    expect = cert["expect"]
    for g in cert["games"]:
        t = GameTranscript.from_json(g["transcript"])
        inst = t.instance
        v = g["verdict"]
        if validate_transcript(t):
            return False
        if not _round_notes_ok(inst, t, cert.get("thresholds")):
            return False
        if v["fault"] is None and v["outcome_in_ideal"] != inst.in_ideal(t.accumulated):
            return False
        if expect == "win-II":
            notes = [r.note.get("II", {}) for r in t.rounds]
            if v["fault"] is not None or not v["outcome_in_ideal"]:
                return False
            if any(n.get("kind") == "largeness" and not n["valid"] for n in notes):
                return False
        elif expect == "fault-II":
            if v["fault"] is None or v["fault"]["player"] != "II":
                return False
        elif expect == "full-play":
            if v["fault"] is not None or len(t.rounds) != t.horizon:
                return False
            notes = [r.note.get("I", {}) for r in t.rounds]
            if any(n.get("kind") == "interleave" and not n["interleaved"] for n in notes):
                return False
    return True


# -- sigma-completeness --------------------------------------------------------------------


def run_sigma(params, seed):
    mode = params.get("mode", "well-ordered")
    inst = get_instance("WellOrderedQ" if mode == "well-ordered" else "WellOrderedBoundedBelowQ")
    build = sigma_witness_wellordered if mode == "well-ordered" else sigma_witness_bounded_below
    cases = []
    for t in range(params.get("trials", 5)):
        rng = _rng(seed, t)
        a = inst.sample_ideal(rng.getrandbits(32), 2)
        bs = [inst.sample_ideal(rng.getrandbits(32), 2) for _ in range(params.get("sets", 3))]
        gammas, records = build(a, bs, with_records=True)
        cases.append({
            "a": inst.element_to_json(a),
            "bs": [inst.element_to_json(b) for b in bs],
            "gammas": [g.to_json() for g in gammas],
            "records": [r.to_json() for r in records],
        })
    cert = {"mode": mode, "cases": cases}
    return CheckResult(reverify_sigma(cert), cert, {"trials": len(cases)})


def reverify_sigma(cert) -> bool:
    bb = cert["mode"] != "well-ordered"
    inst = get_instance("WellOrderedBoundedBelowQ" if bb else "WellOrderedQ")
    for case in cert["cases"]:
        a = inst.element_from_json(case["a"])
        bs = [inst.element_from_json(b) for b in case["bs"]]
        gammas = [PLMap.from_json(g) for g in case["gammas"]]
        union = a
        for g, b in zip(gammas, bs):
            if not inst.in_pstab(g, a):
                return False
            union = union | image_set(g, b)
        if not is_well_ordered(union):
            return False
        if bb and not is_bounded_below_every(union):
            return False
        by_gap = {}
        for r in case["records"]:
            by_gap.setdefault(tuple(r["gap"]), []).append(r)
            n = r["n"]
            lo, hi = (_scalar(x) for x in r["gap"])
            low = extreme_in(image_set(gammas[n], bs[n]), lo, hi, True)
            if low is not None and low < _scalar(r["threshold"]):
                return False
        for rs in by_gap.values():
            xs = [_scalar(r["threshold"]) for r in sorted(rs, key=lambda r: r["n"])]
            if any(not x < y for x, y in zip(xs, xs[1:])):
                return False
    return True


def _scalar(v):
    if v in ("inf", "-inf"):
        return float(v)
    return parse_scalar(v)


# -- Cantor-Bendixson obstruction -----------------------------------------------------------


def run_cb(params, seed):
    inst = get_instance("CountableClosedQ")
    cases = []
    for t in range(params.get("trials", 5)):
        rng = _rng(seed, t)
        b = inst.sample_ideal(rng.getrandbits(32), 2)
        c, proof = refute_cofinal_countableclosed(b)
        g = inst.sample_group(rng.getrandbits(32), 3)
        cases.append({"b": inst.element_to_json(b), "c": inst.element_to_json(c),
                      "rank_b": proof["rank_b"], "rank_c": proof["rank_c"],
                      "g": g.to_json(), "image": inst.element_to_json(image_set(g, b))})
    cert = {"cases": cases}
    return CheckResult(reverify_cb(cert), cert, {"trials": len(cases)})


def reverify_cb(cert) -> bool:
    inst = get_instance("CountableClosedQ")
    for case in cert["cases"]:
        b = inst.element_from_json(case["b"])
        c = inst.element_from_json(case["c"])
        g = PLMap.from_json(case["g"])
        img = inst.element_from_json(case["image"])
        if not (inst.in_ideal(b) and inst.in_ideal(c)):
            return False
        if cb_rank(b) != case["rank_b"] or cb_rank(c) != case["rank_c"]:
            return False
        if case["rank_c"] != case["rank_b"] + 1:
            return False
        if image_set(g, b) != img or cb_rank(img) != cb_rank(b):
            return False
    return True


# -- simplicity and stratification ------------------------------------------------------------


def run_simplicity(params, seed):
    rows = []
    for N in range(1, params.get("max_N", 5) + 1):
        ok = total = 0
        for nb in range(0, N - 1):
            for b in combinations(range(N), nb):
                for na in range(nb + 1):
                    for a in combinations(b, na):
                        total += 1
                        ok += simplicity_check(N, a, b)
        rows.append({"N": N, "pairs": total, "simple": ok})
    cert = {"rows": rows, "max_N": params.get("max_N", 5)}
    return CheckResult(all(r["pairs"] == r["simple"] for r in rows), cert, {"rows": len(rows)})


def reverify_simplicity(cert) -> bool:
    # re-run the cheapest representative per (N, |a|, |b|); the full sweep is in the record
    for r in cert["rows"]:
        N = r["N"]
        if r["pairs"] != r["simple"]:
            return False
        for nb in range(0, N - 1):
            for na in range(nb + 1):
                if not simplicity_check(N, range(na), range(nb)):
                    return False
    return True


def run_factorization(params, seed):
    N = params.get("N", 12)
    cases = []
    for t in range(params.get("trials", 10)):
        rng = _rng(seed, t)
        pts = list(range(N))
        a = frozenset(rng.sample(pts, rng.randint(0, 2)))
        b = a | frozenset(rng.sample(pts, rng.randint(0, 2)))
        free = [x for x in pts if x not in a]
        rng.shuffle(free)
        m = list(range(N))
        support = free[: rng.randint(0, 4)]
        perm = support[:]
        rng.shuffle(perm)
        for s, d in zip(support, perm):
            m[s] = d
        gamma = FinitePermutation(tuple(m))
        w = conjugate_factorization(gamma, a, b, N)
        cases.append(w.to_json())
    cert = {"N": N, "cases": cases}
    return CheckResult(reverify_factorization(cert), cert, {"trials": len(cases)})


def reverify_factorization(cert) -> bool:
    for data in cert["cases"]:
        w = FactorizationWitness.from_json(data)
        if not w.verify():
            return False
        if len(w.factors) != (0 if w.target.is_identity() else 2):
            return False
    return True


def run_stratified(params, seed):
    N = params.get("N", 20)
    ks = params.get("thresholds", [3, 6, 12])
    n = params.get("n", 0)
    cases = []
    for t in range(params.get("trials", 5)):
        rng = _rng(seed, t)
        a = frozenset(rng.sample(range(N), rng.randint(0, ks[n] - 1)))
        bs = [frozenset(rng.sample(range(N), rng.randint(0, ks[n] - 1)))
              for _ in range(params.get("sets", 5))]
        gammas, W = stratified_witness(a, bs, n, ks, N)
        cases.append({"a": sorted(a), "bs": [sorted(b) for b in bs],
                      "gammas": [g.to_json() for g in gammas], "W": sorted(W)})
    cert = {"N": N, "thresholds": ks, "n": n, "cases": cases}
    return CheckResult(reverify_stratified(cert), cert, {"trials": len(cases)})


def reverify_stratified(cert) -> bool:
    ks, n = cert["thresholds"], cert["n"]
    for case in cert["cases"]:
        a, W = frozenset(case["a"]), frozenset(case["W"])
        if len(W) != ks[n] or a & W:
            return False
        union = set(a)
        for g, b in zip(case["gammas"], case["bs"]):
            g = FinitePermutation.from_json(g)
            if not g.fixes(a) or not g.image(b) <= a | W:
                return False
            union |= g.image(b)
        if len(union) >= ks[n + 1]:
            return False
    return True


# -- support calculus --------------------------------------------------------------------------


def _random_hf(inst, rng, depth):
    from .hfa import atom, hfset

    pts = list(range(inst.N))
    if depth == 0 or rng.random() < 0.3:
        return atom(rng.choice(pts))
    return hfset(_random_hf(inst, rng, depth - 1) for _ in range(rng.randint(0, 3)))


def run_support(params, seed):
    inst = get_instance("FiniteSym", N=params.get("N", 6), k=params.get("k", 3))
    cases = []
    for t in range(params.get("trials", 20)):
        rng = _rng(seed, t)
        A = _random_hf(inst, rng, 3)
        b = frozenset(sorted(A.atoms()))
        g = inst.sample_group(rng.getrandbits(32), 3)
        ok = support_invariance(inst, g, b, A)
        cases.append({"A": A.text, "b": sorted(b), "g": g.to_json(), "ok": ok})
    dcl = []
    for r in range(0, inst.N + 1):
        for a in combinations(range(inst.N), r):
            dcl.append({"a": list(a), "dcl": sorted(definable_closure(inst, a))})
    cert = {"instance": inst.spec(), "cases": cases, "closures": dcl}
    return CheckResult(reverify_support(cert), cert, {"trials": len(cases)})


def reverify_support(cert) -> bool:
    inst = instance_from_spec(cert["instance"])
    for case in cert["cases"]:
        A = parse_hf(case["A"])
        b = frozenset(case["b"])
        g = FinitePermutation.from_json(case["g"])
        gA = act_hf(inst, g, A)
        if not case["ok"]:
            return False
        if not (check_support(inst, A, b).verified and check_support(inst, gA, g.image(b)).verified):
            return False
    table = {frozenset(r["a"]): frozenset(r["dcl"]) for r in cert["closures"]}
    for a, d in table.items():
        if not a <= d or table.get(d, d) != d:
            return False
        for x in d - a:
            # a point outside a is definable only when pstab(a) cannot move it
            if any(g(x) != x for g in pstab_generators(inst, a)):
                return False
    for a in table:
        for b in table:
            if a <= b and not table[a] <= table[b]:
                return False
    return True


def run_selector(params, seed):
    N, k = params.get("N", 8), params.get("k", 3)
    inst = get_instance("FiniteSym", N=N, k=k)
    from .hfa import atom, hfset

    cases = []
    for t in range(params.get("trials", 5)):
        rng = _rng(seed, t)
        a = frozenset(rng.sample(range(N), rng.randint(0, k - 1)))
        b, lc = a_large_symmetric(a, N, k)
        gens = pstab_generators(inst, a)
        members = []
        for _ in range(rng.randint(1, 2)):
            x, y = rng.sample(range(N), 2)
            seed_set = hfset([atom(x), atom(y)]) if rng.random() < 0.5 else hfset([atom(x)])
            members.append(orbit(inst, gens, seed_set))
        family = hfset(members)
        f = choice_selector(inst, family, a, b, lc)
        cases.append({"family": family.text, "a": sorted(a), "b": sorted(b), "selector": f.text})
    cert = {"instance": inst.spec(), "cases": cases}
    return CheckResult(reverify_selector(cert), cert, {"trials": len(cases)})


def reverify_selector(cert) -> bool:
    inst = instance_from_spec(cert["instance"])
    for case in cert["cases"]:
        family = parse_hf(case["family"])
        f = parse_hf(case["selector"])
        a, b = frozenset(case["a"]), frozenset(case["b"])
        if not inst.in_ideal(a) or not a <= b or not check_support(inst, f, b).verified:
            return False
        chosen = {}
        for p in f:
            B, C = unpair(p)
            if B not in family or C not in B or id(B) in chosen:
                return False
            chosen[id(B)] = C
        if len(chosen) != len(family):
            return False
    return True


def run_abelian(params, seed):
    m, mod = params.get("m", 3), params.get("modulus", 4)
    inst = get_instance("AbelianGrid", m=m, modulus=mod)
    from .hfa import atom, hfset

    decomp = []
    for t in range(params.get("trials", 5)):
        rng = _rng(seed, t)
        cells = inst.cells()
        a = frozenset(rng.sample(cells, rng.randint(0, 2)))
        a = frozenset(x for x in a if inst.in_ideal(frozenset([x]) | a))
        if not inst.in_ideal(a):
            a = frozenset()
        gens = pstab_generators(inst, a)
        cols = rng.sample(range(m), rng.randint(1, max(1, m - 1)))
        pool = [c for c in cells if c[0] in cols]
        A = orbit(inst, gens, hfset(atom(c) for c in rng.sample(pool, 2)))
        _, checks = orbit_decomposition(inst, A, a)
        decomp.append({"A": A.text, "a": [list(x) for x in sorted(a)],
                       "ok": all(c["fixes_orbit"] for c in checks)})
    b = [tuple(x) for x in params.get("b", [])]
    refute = []
    for cand in selector_candidates(inst):
        g, col, _ = abelian_refuter(inst, cand, frozenset(b))
        refute.append({"candidate": cand.text, "gamma": g.to_json(), "column": col})
    cert = {"instance": inst.spec(), "b": [list(x) for x in b], "decompositions": decomp,
            "refutations": refute}
    return CheckResult(reverify_abelian(cert), cert,
                       {"decompositions": len(decomp), "candidates": len(refute)})


def reverify_abelian(cert) -> bool:
    inst = instance_from_spec(cert["instance"])
    if not all(d["ok"] for d in cert["decompositions"]):
        return False
    b = frozenset(tuple(x) for x in cert["b"])
    if len(cert["refutations"]) != 2 ** inst.m:
        return False
    for r in cert["refutations"]:
        f = parse_hf(r["candidate"])
        g = GridElement.from_json(r["gamma"])
        if not inst.in_pstab(g, b) or act_hf(inst, g, f) == f:
            return False
    return True


# -- Fraisse ------------------------------------------------------------------------------------


def run_amalgam_laws(params, seed):
    sig = params["signature"]
    palette = [Fraction(x) for x in params.get("palette", [1, 2, 3])]
    q = params.get("q", 2)
    rng = random.Random(seed)
    total = law_fail = her_total = her_fail = inv_fail = 0
    sample = []
    cases = list(fr.amalgamation_cases(sig, params.get("max_a", 4), params.get("max_b", 3), palette, q))
    for A, B in cases:
        total += 1
        res = fr.amalgamate(sig, A, B)
        if not all(fr.verify_amalgam(A, B, res).values()):
            law_fail += 1
        common = A.labels() & B.labels()
        for As in fr.closed_substructures(A, common):
            her_total += 1
            her_fail += not fr.check_heredity(sig, As, A, B)
    keep = params.get("keep", 10)
    for A, B in rng.sample(cases, min(keep, len(cases))):
        phi = {x: ("p", i) for i, x in enumerate(A.universe)}
        psi = {y: phi.get(y, ("q", i)) for i, y in enumerate(B.universe)}
        inv_fail += not fr.check_invariance(sig, A, B, phi, psi)
        res = fr.amalgamate(sig, A, B)
        sample.append({"A": A.to_json(), "B": B.to_json(), "C": res.C.to_json()})
    cert = {"signature": sig, "cases": total, "law_failures": law_fail,
            "heredity_checks": her_total, "heredity_failures": her_fail,
            "invariance_failures": inv_fail, "sample": sample}
    passed = law_fail == her_fail == inv_fail == 0 and reverify_amalgam_laws(cert)
    return CheckResult(passed, cert, {"cases": total})


def reverify_amalgam_laws(cert) -> bool:
    if cert["law_failures"] or cert["heredity_failures"] or cert["invariance_failures"]:
        return False
    for s in cert["sample"]:
        A, B, C = (fr.FinStructure.from_json(s[k]) for k in ("A", "B", "C"))
        res = fr.amalgamate(cert["signature"], A, B)
        if res.C != C:
            return False
        if not all(fr.verify_amalgam(A, B, res).values()):
            return False
    return True


def run_no_canonical(params, seed):
    rec = fr.no_canonical_amalgam_search(params.get("a_size", 3), params.get("b_size", 1),
                                         params.get("signature", "quad-selector"))
    cert = {"expect": params.get("expect", "impossible"), "record": rec.to_json()}
    return CheckResult(reverify_no_canonical(cert), cert, {"tables": len(rec.cases)})


def reverify_no_canonical(cert) -> bool:
    r = cert["record"]
    rec = fr.ImpossibilityRecord(r["signature"], tuple(r["shape"]), r["verdict"], r["cases"])
    return fr.verify_impossibility(rec) and rec.verdict == cert["expect"]


def _host(spec):
    kind = spec["kind"]
    if kind == "pure-set":
        return fr.pure_set(range(spec.get("size", 12)))
    if kind == "vector-space-q":
        return fr.standard_space(spec.get("dim", 4), spec.get("q", 2))
    if kind == "ultrametric":
        return fr.regular_ultrametric(spec.get("palette", [1, 2, 3]), spec.get("branching", 3))
    raise PreconditionError(f"unknown host kind {kind!r}")


def run_conjugation_witness(params, seed):
    sig = params["signature"]
    H = _host(params["host"])
    ws = []
    for t in range(params.get("trials", 3)):
        rng = _rng(seed, t)
        pts = list(H.universe)
        base = {H.zero()} if sig == "vector-space-q" else set()
        a = fr.acl(H, set(rng.sample(pts, rng.randint(0, 1))) | base)
        b = fr.acl(H, a | set(rng.sample(pts, rng.randint(0, 1))))
        pi = fr.random_partial_iso(H, a, rng.randint(0, 2), rng)
        w = fr.conjugation_witness(sig, H, a, b, pi)
        ws.append(w.to_json())
    cert = {"signature": sig, "witnesses": ws}
    return CheckResult(reverify_conjugation_witness(cert), cert, {"trials": len(ws)})


def reverify_conjugation_witness(cert) -> bool:
    for data in cert["witnesses"]:
        w = fr.ConjugationWitness.from_json(data)
        if not all(w.verify().values()):
            return False
    return True


def run_chain(params, seed):
    sig = params["signature"]
    chain = fr.fraisse_chain(sig, params.get("steps", 5), seed)
    cert = {"signature": sig, "steps": len(chain.log), "final": chain.final.to_json(),
            "score": str(chain.score), "realized": chain.realized, "total": chain.total,
            "min_score": params.get("min_score", "0"), "log": chain.log}
    return CheckResult(reverify_chain(cert), cert, {"size": len(chain.final)})


def reverify_chain(cert) -> bool:
    M = fr.FinStructure.from_json(cert["final"])
    M.check_axioms()
    score, realized, total = fr.extension_score(M)
    if str(score) != cert["score"] or realized != cert["realized"] or total != cert["total"]:
        return False
    return score >= Fraction(cert["min_score"])


CHECKS = {
    "cover": (run_cover, reverify_cover),
    "largeness-conjugation": (run_conjugation, reverify_conjugation),
    "matching": (run_matching, reverify_matching),
    "game": (run_game_check, reverify_game),
    "sigma": (run_sigma, reverify_sigma),
    "cb-obstruction": (run_cb, reverify_cb),
    "simplicity": (run_simplicity, reverify_simplicity),
    "factorization": (run_factorization, reverify_factorization),
    "stratified": (run_stratified, reverify_stratified),
    "support": (run_support, reverify_support),
    "selector": (run_selector, reverify_selector),
    "abelian": (run_abelian, reverify_abelian),
    "amalgam-laws": (run_amalgam_laws, reverify_amalgam_laws),
    "no-canonical": (run_no_canonical, reverify_no_canonical),
    "conjugation-witness": (run_conjugation_witness, reverify_conjugation_witness),
    "fraisse-chain": (run_chain, reverify_chain),
}
