from fractions import Fraction as F

import pytest

from dynideal.errors import InsufficientSpace, PreconditionError
from dynideal.game import (
    GameTranscript,
    Round,
    interleaves,
    make_strategy,
    run_game,
    stamp_rank,
    validate_transcript,
)
from dynideal.ideals import FinitePermutation, get_instance
from dynideal.order import IntervalUnionSet
from dynideal.witnesses import LargenessCertificate, validate_certificate

BQ = get_instance("BoundedQ")
FS = get_instance("FiniteSym", N=8, k=3)


def _transcript(inst, moves):
    t = GameTranscript(inst, horizon=len(moves))
    for a, g in moves:
        t.rounds.append(Round(a, g))
    t.accumulated = t.recompute()
    return t


def test_validator_examples():
    e = FS.identity()
    empty = frozenset()
    assert validate_transcript(_transcript(FS, [(empty, e)] * 3)) == []
    swap = FinitePermutation.transposition(8, 0, 1)
    bad0 = validate_transcript(_transcript(FS, [(empty, swap)]))
    assert bad0 and bad0[0][0] == 0
    t = _transcript(FS, [(empty, e), (frozenset({0}), swap), (empty, FinitePermutation.transposition(8, 1, 2))])
    assert [n for n, _ in validate_transcript(t)] == [2]
    t.accumulated = frozenset({5})
    assert validate_transcript(t)[-1][0] == 3


def test_transcript_json_round_trip():
    t, _ = run_game(FS, make_strategy("I", "random"), make_strategy("II", "cofinal"), 5, seed=2)
    back = GameTranscript.from_json(t.to_json())
    assert back.to_json() == t.to_json()
    assert validate_transcript(back) == []


def test_horizon_zero_and_one():
    t, v = run_game(FS, make_strategy("I", "random"), make_strategy("II", "random"), 0, seed=0)
    assert t.rounds == [] and validate_transcript(t) == [] and v.outcome_in_ideal
    t, v = run_game(BQ, make_strategy("I", "random"), make_strategy("II", "trivial"), 1, seed=0)
    assert t.rounds[0].gamma.is_identity() and validate_transcript(t) == []


@pytest.mark.parametrize("seed", range(20))
def test_cofinal_II_keeps_bounded_outcome(seed):
    t, v = run_game(BQ, make_strategy("I", "random"), make_strategy("II", "cofinal"), 20, seed=seed)
    assert v.fault is None and v.outcome_in_ideal
    assert t.rounds[0].gamma.is_identity()
    assert validate_transcript(t) == []
    acc = BQ.empty()
    for r in t.rounds:
        acc = BQ.union(acc, BQ.act(r.gamma, r.a))
        note = r.note["II"]
        lc = LargenessCertificate.from_json(BQ, note["certificate"])
        assert note["valid"] and validate_certificate(BQ, lc)
        assert lc.base == acc and BQ.subset(acc, lc.large)


class _Drift:
    """Player I moving further out each round, in both directions."""

    name = "drift"

    def reset(self, inst, rng):
        self.inst = inst

    def move(self, n, accumulated, history):
        return IntervalUnionSet.points([-(10 ** n), 10 ** n])

    def observe(self, *args):
        pass

    def certificate(self, accumulated):
        return {"kind": "none"}


def test_cofinal_II_against_drifting_sets():
    t, v = run_game(BQ, _Drift(), make_strategy("II", "cofinal"), 12, seed=0)
    assert v.fault is None and v.outcome_in_ideal
    lo, hi = t.accumulated.inf(), t.accumulated.sup()
    assert -2 <= lo and hi <= 2


def test_random_II_never_breaks_the_rules():
    for seed in range(100):
        inst = BQ if seed % 2 else FS
        t, _ = run_game(inst, make_strategy("I", "random"), make_strategy("II", "random"), 6, seed=seed)
        assert validate_transcript(t) == []


def test_stratified_sizes():
    inst = get_instance("FiniteSym", N=20, k=21)
    ks = [1, 2, 3, 4, 5]
    t, v = run_game(inst, make_strategy("I", "stratified", thresholds=ks),
                    make_strategy("II", "random"), 5, seed=1)
    assert v.fault is None
    assert [len(r.a) for r in t.rounds] == [1, 2, 3, 4, 5]
    assert all(r.note["I"]["size"] >= k for r, k in zip(t.rounds, ks))


def test_stratified_errors():
    with pytest.raises(PreconditionError):
        make_strategy("I", "stratified", thresholds=[2, 2])
    small = get_instance("FiniteSym", N=5, k=6)
    t, v = run_game(small, make_strategy("I", "stratified", thresholds=[6]),
                    make_strategy("II", "trivial"), 1, seed=0)
    assert v.fault is not None and v.fault["player"] == "I"
    assert v.fault["reason"].startswith(InsufficientSpace.__name__)


def test_interleave_play():
    inst = get_instance("CountableClosedQ")
    t, v = run_game(inst, make_strategy("I", "interleave"), make_strategy("II", "random"), 12, seed=3)
    assert v.fault is None
    first = t.rounds[0].a
    assert all(0 < x < 1 for x in first.points)
    notes = [r.note["I"] for r in t.rounds]
    assert all(n["interleaved"] for n in notes)
    assert len(t.accumulated.points) >= 2 ** 6
    ranks = [n["stamp_rank"] for n in notes]
    assert all(ranks[i + 4] > ranks[i] for i in range(len(ranks) - 4))


def test_interleaves_predicate():
    prev = [F(1, 4), F(3, 4)]
    assert interleaves(prev, [F(1, 8), F(1, 2), F(7, 8)])
    assert not interleaves(prev, [F(1, 8), F(7, 8)])


def test_stamp_rank_small_cases():
    assert stamp_rank({}) == 0
    assert stamp_rank({F(1, 2): 0}) == 1
    # a point whose neighbours both arrived later survives one derivative
    assert stamp_rank({F(1, 4): 1, F(1, 2): 0, F(3, 4): 1}) == 2
    assert stamp_rank({F(1, 4): 0, F(1, 2): 1, F(3, 4): 2}) == 1


def test_cofinal_II_fault_on_finite_sym():
    inst = get_instance("FiniteSym", N=20, k=4)
    t, v = run_game(inst, make_strategy("I", "random"), make_strategy("II", "cofinal"), 10, seed=0)
    assert v.fault is not None and v.fault["player"] == "II"
    assert validate_transcript(t) == []


def test_unknown_strategy():
    with pytest.raises(PreconditionError):
        make_strategy("II", "clever")
