"""The DC game: Player I plays ideal sets, Player II plays group elements.

Round ``n``: Player I plays ``a_n``; Player II answers with ``γ_n`` which
must fix the accumulated set ``⋃_{m<n} γ_m·a_m`` pointwise (and ``γ_0``
must be the identity).  Player II wins if the union stays in the ideal; at
a finite horizon the engine reports membership of the accumulated set plus
whatever invariants the strategies certify.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DynIdealError, InsufficientSpace, PreconditionError, StrategyFault
from .ideals import DynamicalIdealInstance, instance_from_spec
from .order import BlockSet
from .witnesses import (
    a_large_bounded,
    a_large_symmetric,
    shrink_cover,
    validate_certificate,
)

# -- transcripts ---------------------------------------------------------------


@dataclass
class Round:
    a: object
    gamma: object
    note: dict = field(default_factory=dict)


@dataclass
class GameTranscript:
    instance: DynamicalIdealInstance
    horizon: int
    rounds: list = field(default_factory=list)
    accumulated: object = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.accumulated is None:
            self.accumulated = self.instance.empty()

    def recompute(self):
        inst = self.instance
        acc = inst.empty()
        for r in self.rounds:
            acc = inst.union(acc, inst.act(r.gamma, r.a))
        return acc

    def to_json(self) -> dict:
        inst = self.instance
        return {
            "instance": inst.spec(),
            "horizon": self.horizon,
            "rounds": [
                {"a": inst.element_to_json(r.a), "gamma": inst.group_to_json(r.gamma), "note": r.note}
                for r in self.rounds
            ],
            "accumulated": inst.element_to_json(self.accumulated),
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, data) -> "GameTranscript":
        inst = instance_from_spec(data["instance"])
        rounds = [Round(inst.element_from_json(r["a"]), inst.group_from_json(r["gamma"]), r.get("note", {}))
                  for r in data["rounds"]]
        return cls(inst, data["horizon"], rounds, inst.element_from_json(data["accumulated"]),
                   data.get("meta", {}))


def validate_transcript(t: GameTranscript) -> list:
    """Every rule violation as ``(round, reason)``; an empty list means valid."""
    inst = t.instance
    out = []
    acc = inst.empty()
    for n, r in enumerate(t.rounds):
        try:
            if not inst.in_ideal(r.a):
                out.append((n, "Player I played a set outside the ideal"))
            if n == 0 and r.gamma != inst.identity():
                out.append((0, "the first group element must be the identity"))
            if not inst.in_pstab(r.gamma, acc):
                out.append((n, "group element moves a point of the accumulated set"))
            acc = inst.union(acc, inst.act(r.gamma, r.a))
        except DynIdealError as exc:
            out.append((n, f"malformed move: {exc}"))
            return out
    if t.accumulated != acc:
        out.append((len(t.rounds), "stored accumulated set differs from the recomputed one"))
    return out


@dataclass
class Verdict:
    outcome_in_ideal: bool
    certificates: list
    fault: Optional[dict] = None
    claim: str = "finite-horizon membership"

    def to_json(self) -> dict:
        return {
            "outcome_in_ideal": self.outcome_in_ideal,
            "certificates": self.certificates,
            "fault": self.fault,
            "claim": self.claim,
        }


# -- strategies -----------------------------------------------------------------


class Strategy:
    """Base strategy: ``reset`` once per game, then one move per round."""

    name = "strategy"

    def reset(self, inst: DynamicalIdealInstance, rng: random.Random):
        self.inst, self.rng = inst, rng

    def certificate(self, accumulated) -> Optional[dict]:
        """Per-round evidence for the verdict (None when there is nothing to certify)."""
        return None


class PlayerI(Strategy):
    def move(self, n: int, accumulated, history: list):
        raise NotImplementedError


class PlayerII(Strategy):
    def move(self, n: int, accumulated, a, history: list):
        raise NotImplementedError


class RandomI(PlayerI):
    name = "random"

    def __init__(self, size_hint: int = 3):
        self.size_hint = size_hint

    def move(self, n, accumulated, history):
        return self.inst.sample_ideal(self.rng.getrandbits(64), self.size_hint)


class RandomII(PlayerII):
    """Random legal moves: a sampled element of the stabilizer of the accumulated set."""

    name = "random"

    def move(self, n, accumulated, a, history):
        if n == 0:
            return self.inst.identity()
        return self.inst.sample_pstab(self.rng.getrandbits(64), accumulated)


class TrivialII(PlayerII):
    name = "trivial"

    def move(self, n, accumulated, a, history):
        return self.inst.identity()


class CofinalII(PlayerII):
    """Keep the accumulated set inside one large set ``b`` with a valid certificate.

    After round 0 the strategy fixes ``b`` large over the first move.  In
    later rounds it treats Player I's move as ``c = a_n ∪ accumulated`` and
    pushes it into ``b`` with :func:`shrink_cover`.
    """

    name = "cofinal"

    def reset(self, inst, rng):
        super().reset(inst, rng)
        if inst.name not in ("BoundedQ", "FiniteSym"):
            raise PreconditionError(f"no largeness certificates for {inst.name}")
        self.b = self.cert = None

    def _large(self, a):
        if self.inst.name == "BoundedQ":
            return a_large_bounded(a)
        return a_large_symmetric(a, self.inst.N, self.inst.k)

    def move(self, n, accumulated, a, history):
        inst = self.inst
        if n == 0:
            self.b, self.cert = self._large(a)
            self._pending = None
            return inst.identity()
        c = inst.union(a, accumulated)
        g, new = shrink_cover(inst, accumulated, self.b, c, self.cert)
        self._pending = new
        return g

    def observe(self, accumulated):
        if self._pending is not None:
            self.cert = self._pending

    def certificate(self, accumulated):
        inst = self.inst
        ok = inst.subset(accumulated, self.b) and validate_certificate(inst, self.cert) \
            and self.cert.base == accumulated
        return {"kind": "largeness", "valid": bool(ok), "certificate": self.cert.to_json(inst)}


class StratifiedI(PlayerI):
    """Play a set of exactly ``k_n`` points in round ``n``, ignoring Player II."""

    name = "stratified"

    def __init__(self, thresholds):
        ts = list(thresholds)
        if any(not t0 < t1 for t0, t1 in zip(ts, ts[1:])):
            raise PreconditionError("thresholds must increase strictly")
        self.thresholds = ts

    def move(self, n, accumulated, history):
        if n >= len(self.thresholds):
            raise PreconditionError(f"no threshold for round {n}")
        k = self.thresholds[n]
        if k > self.inst.N:
            raise InsufficientSpace(f"threshold {k} exceeds the ground set of size {self.inst.N}")
        return frozenset(range(k))

    def certificate(self, accumulated):
        return {"kind": "size", "size": len(accumulated)}


def stamp_rank(stamps: dict) -> int:
    """Rank of a finite set whose points carry the round they appeared in.

    One derivative keeps the points whose two neighbours both appeared in
    strictly later rounds (a missing neighbour counts as never appearing);
    the rank counts derivatives until the set is empty.  It stands in for
    the Cantor-Bendixson rank of the limit of the play, which a finite set
    cannot carry.
    """
    pts = sorted(stamps)
    rank = 0
    while pts:
        keep = []
        for i, x in enumerate(pts):
            left = stamps[pts[i - 1]] if i > 0 else None
            right = stamps[pts[i + 1]] if i + 1 < len(pts) else None
            if left is not None and right is not None and left > stamps[x] and right > stamps[x]:
                keep.append(x)
        pts = keep
        rank += 1
    return rank


def interleaves(previous: list, move: list, lo=Fraction(0), hi=Fraction(1)) -> bool:
    """Each consecutive pair of ``previous`` (and both flanks inside (lo, hi)) holds a point of ``move``."""
    fence = [lo] + sorted(previous) + [hi]
    ms = sorted(move)
    return all(any(u < m < v for m in ms) for u, v in zip(fence, fence[1:]))


class InterleaveI(PlayerI):
    """On [0, 1]: a point strictly between every two accumulated points, plus flanks."""

    name = "interleave"

    def reset(self, inst, rng):
        super().reset(inst, rng)
        if inst.name != "CountableClosedQ":
            raise PreconditionError("the interleaving strategy plays in CountableClosedQ")
        self.stamps = {}
        self.history = []

    def move(self, n, accumulated, history):
        if not accumulated.is_finite():
            raise PreconditionError("the interleaving strategy expects a finite accumulated set")
        fence = [Fraction(0)] + list(accumulated.points) + [Fraction(1)]
        return BlockSet(points=tuple((u + v) / 2 for u, v in zip(fence, fence[1:])))

    def observe(self, accumulated, previous, moved, n):
        ok = interleaves(list(previous.points), list(moved.points))
        for p in accumulated.points:
            self.stamps.setdefault(p, n)
        self.history.append(ok)

    def certificate(self, accumulated):
        return {
            "kind": "interleave",
            "interleaved": self.history[-1] if self.history else True,
            "stamp_rank": stamp_rank(self.stamps),
            "size": len(accumulated.points),
        }


_I = {"random": RandomI, "stratified": StratifiedI, "interleave": InterleaveI}
_II = {"random": RandomII, "trivial": TrivialII, "cofinal": CofinalII}


def make_strategy(player: str, name: str, **params) -> Strategy:
    table = _I if player == "I" else _II
    if name not in table:
        raise PreconditionError(f"unknown strategy {name!r} for player {player}")
    return table[name](**params)


def cofinal_strategy_II() -> CofinalII:
    return CofinalII()


def stratified_strategy_I(thresholds) -> StratifiedI:
    return StratifiedI(thresholds)


def interleave_strategy_I() -> InterleaveI:
    return InterleaveI()


def trivial_strategy_II() -> TrivialII:
    return TrivialII()


def random_strategy(player: str = "I", size_hint: int = 3) -> Strategy:
    return RandomI(size_hint) if player == "I" else RandomII()


# -- the engine ------------------------------------------------------------------------


def run_game(inst: DynamicalIdealInstance, strategy_I: PlayerI, strategy_II: PlayerII,
             horizon: int, seed: int = 0, max_points: int = 4096):
    """Play ``horizon`` rounds; illegal moves forfeit the game to the opponent."""
    if horizon < 0:
        raise PreconditionError("horizon must be nonnegative")
    strategy_I.reset(inst, random.Random(2 * seed + 1))
    strategy_II.reset(inst, random.Random(2 * seed + 2))
    t = GameTranscript(inst, horizon, meta={
        "seed": seed, "player_I": strategy_I.name, "player_II": strategy_II.name,
        "max_points": max_points,
    })
    certs, fault = [], None
    for n in range(horizon):
        acc = t.accumulated
        try:
            a = strategy_I.move(n, acc, t.rounds)
            if not inst.in_ideal(a):
                raise StrategyFault("I", n, "set outside the ideal")
            if _size(a) > max_points:
                raise StrategyFault("I", n, f"move exceeds the cap of {max_points} points")
        except DynIdealError as exc:
            fault = _fault("I", n, exc)
            break
        try:
            g = strategy_II.move(n, acc, a, t.rounds)
            if n == 0 and g != inst.identity():
                raise StrategyFault("II", n, "the first move must be the identity")
            if not inst.in_pstab(g, acc):
                raise StrategyFault("II", n, "move does not fix the accumulated set")
        except DynIdealError as exc:
            fault = _fault("II", n, exc)
            break
        moved = inst.act(g, a)
        t.rounds.append(Round(a, g))
        t.accumulated = inst.union(acc, moved)
        if isinstance(strategy_I, InterleaveI):
            strategy_I.observe(t.accumulated, acc, moved, n)
        if isinstance(strategy_II, CofinalII):
            strategy_II.observe(t.accumulated)
        note = {}
        for who, s in (("I", strategy_I), ("II", strategy_II)):
            c = s.certificate(t.accumulated)
            if c is not None:
                note[who] = c
        t.rounds[-1].note = note
        certs.append({"round": n, **note})
    if fault is None:
        outcome = inst.in_ideal(t.accumulated)
    else:
        outcome = fault["player"] == "I"
    claim = "finite-horizon membership"
    if isinstance(strategy_II, CofinalII):
        claim += " + largeness invariant per round"
    return t, Verdict(outcome, certs, fault, claim)


def _size(s) -> int:
    if isinstance(s, frozenset):
        return len(s)
    if isinstance(s, BlockSet):
        return len(s.points) + len(s.blocks)
    return len(s.components)


def _fault(player, n, exc) -> dict:
    reason = exc.reason if isinstance(exc, StrategyFault) else f"{type(exc).__name__}: {exc}"
    return {"player": player, "round": n, "reason": reason}
