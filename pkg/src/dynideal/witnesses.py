"""Constructive witnesses with exact post-hoc checks.

Every constructor here re-verifies its own output before returning it;
a witness is never accepted on construction alone.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional

from .errors import (
    BudgetExceeded,
    CertificateInvalid,
    CoverFailed,
    InsufficientSpace,
    NotInIdeal,
    PreconditionError,
    Unbounded,
)
from .ideals import DynamicalIdealInstance, FinitePermutation, get_instance
from .order import (
    INF,
    BlockSet,
    IntervalUnionSet,
    PLMap,
    cb_rank,
    fixes_pointwise,
    image_set,
    is_bounded_below_every,
    is_well_ordered,
    pell,
    rational_between,
    standard_rank_set,
)
from .order.blocks import extreme_in, hull_gaps
from .order.numbers import format_rational, format_scalar, is_rational, parse_rational

# -- certificates ----------------------------------------------------------------


@dataclass(frozen=True)
class LargenessCertificate:
    """Finite evidence that ``large`` is ``base``-large.

    ``evidence`` holds ``{"l": ..., "u": ...}`` for BoundedQ (``[l, u]`` inside
    ``large`` and ``base`` inside ``(l, u)``) and ``{"fresh": n}`` for FiniteSym
    (``large`` contains ``base`` plus ``n >= k - 1`` further points).
    """

    instance: str
    base: object
    large: object
    evidence: dict = field(compare=False)

    def to_json(self, inst: DynamicalIdealInstance) -> dict:
        ev = dict(self.evidence)
        if self.instance == "BoundedQ":
            ev = {k: format_rational(v) for k, v in ev.items()}
        return {
            "instance": self.instance,
            "base": inst.element_to_json(self.base),
            "large": inst.element_to_json(self.large),
            "evidence": ev,
        }

    @classmethod
    def from_json(cls, inst: DynamicalIdealInstance, data) -> "LargenessCertificate":
        ev = dict(data["evidence"])
        if data["instance"] == "BoundedQ":
            ev = {k: parse_rational(v) for k, v in ev.items()}
        return cls(data["instance"], inst.element_from_json(data["base"]),
                   inst.element_from_json(data["large"]), ev)


def validate_certificate(inst: DynamicalIdealInstance, cert: LargenessCertificate) -> bool:
    """Decide certificate validity exactly."""
    if cert.instance != inst.name:
        return False
    if inst.name == "BoundedQ":
        l, u = cert.evidence.get("l"), cert.evidence.get("u")
        if l is None or u is None or not l < u:
            return False
        x, b = cert.base, cert.large
        if not (b.is_bounded() and IntervalUnionSet.closed(l, u) <= b):
            return False
        return x <= IntervalUnionSet.interval(l, u, False, False)
    if inst.name == "FiniteSym":
        x, b = frozenset(cert.base), frozenset(cert.large)
        n = cert.evidence.get("fresh")
        return x <= b and n == len(b - x) and n >= inst.k - 1
    raise PreconditionError(f"no largeness certificates for {inst.name}")


def _require_valid(inst, cert):
    if not validate_certificate(inst, cert):
        raise CertificateInvalid(f"invalid largeness certificate for {inst.name}")


# -- bounded subsets of Q ------------------------------------------------------------

BOUNDED = get_instance("BoundedQ")


def a_large_bounded(a: IntervalUnionSet):
    """``b = [min a - 1, max a + 1]`` (``[-1, 1]`` for empty ``a``) with its certificate."""
    if not a.is_bounded():
        raise Unbounded("a is not bounded")
    if a.is_empty():
        l, u = Fraction(-1), Fraction(1)
    else:
        l, u = a.inf() - 1, a.sup() + 1
    b = a | IntervalUnionSet.closed(l, u)
    cert = LargenessCertificate("BoundedQ", a, b, {"l": l, "u": u})
    _require_valid(BOUNDED, cert)
    return b, cert


def _bounded_cert_for(a, b, cert):
    if cert is None:
        if b.is_empty():
            raise CertificateInvalid("empty b")
        cert = LargenessCertificate("BoundedQ", a, b, {"l": b.inf(), "u": b.sup()})
    _require_valid(BOUNDED, cert)
    return cert


def _anchor(a: IntervalUnionSet, l, u):
    """The hull of ``a`` (its midpoint-of-margin stand-in when ``a`` is empty)."""
    if a.is_empty():
        m = (l + u) / 2
        return m, m
    return a.inf(), a.sup()


def cover_witness_bounded(a, b, c, certificate: Optional[LargenessCertificate] = None) -> PLMap:
    """γ fixing ``a`` pointwise with ``c`` inside ``γ·b``.

    γ is the identity on the hull of ``a`` and stretches the certificate
    margins ``l``, ``u`` outward past the extremes of ``c``.
    """
    cert = _bounded_cert_for(a, b, certificate)
    if not c.is_bounded():
        raise Unbounded("c is not bounded")
    if c <= b:
        return PLMap.identity()
    l, u = cert.evidence["l"], cert.evidence["u"]
    m, M = _anchor(a, l, u)
    lo = l if c.inf() >= l else c.inf() - 1
    hi = u if c.sup() <= u else c.sup() + 1
    knots = {l: lo, m: m, M: M, u: hi}
    g = PLMap.from_knots(sorted(knots.items()))
    if not (fixes_pointwise(g, a) and c <= image_set(g, b)):
        raise CoverFailed("bounded cover witness failed its exact check")
    return g


def _shrink_bounded(a, b, c, cert):
    l, u = cert.evidence["l"], cert.evidence["u"]
    m, M = _anchor(a, l, u)
    if not c.is_bounded():
        raise Unbounded("c is not bounded")
    knots = {m: m, M: M}
    if not c.is_empty():
        top, bot = (M + u) / 2, (l + m) / 2
        if c.sup() > top:
            knots[c.sup()] = top
        if c.inf() < bot:
            knots[c.inf()] = bot
    g = PLMap.from_knots(sorted(knots.items()))
    moved = image_set(g, c)
    new = LargenessCertificate("BoundedQ", a | moved, b, {"l": l, "u": u})
    return g, new


# -- finite symmetric groups ------------------------------------------------------------


def a_large_symmetric(a, N: int, k: int):
    """``b = a`` plus the ``k - 1`` smallest points outside ``a``."""
    a = frozenset(a)
    if len(a) >= k:
        raise NotInIdeal(f"|a| = {len(a)} is not below k = {k}")
    if N < len(a) + 2 * (k - 1):
        raise InsufficientSpace(f"N = {N} leaves no room for a disjoint copy of {k - 1} points")
    fresh = [x for x in range(N) if x not in a][: k - 1]
    b = a | frozenset(fresh)
    cert = LargenessCertificate("FiniteSym", a, b, {"fresh": k - 1})
    _require_valid(get_instance("FiniteSym", N=N, k=k), cert)
    return b, cert


def _swap_into(N: int, fixed, source, targets) -> FinitePermutation:
    """Disjoint transpositions moving points of ``source`` onto ``targets``.

    Targets already in ``source`` stay put; the others are swapped with
    unused source points.  Nothing in ``fixed`` moves.
    """
    source, targets = set(source), set(targets)
    need = sorted(targets - source)
    spare = sorted(source - targets)
    if len(need) > len(spare):
        raise InsufficientSpace(f"{len(need)} targets but only {len(spare)} spare points")
    m = list(range(N))
    for s, t in zip(spare, need):
        if s in fixed or t in fixed:
            raise PreconditionError("swap would move a fixed point")
        m[s], m[t] = t, s
    return FinitePermutation(tuple(m))


def cover_witness_symmetric(a, b, c, N: int) -> FinitePermutation:
    """A permutation fixing ``a`` pointwise whose image of ``b`` contains ``c``."""
    a, b, c = frozenset(a), frozenset(b), frozenset(c)
    if not a <= b:
        raise CertificateInvalid("a must be a subset of b")
    if c <= b:
        return FinitePermutation.identity(N)
    g = _swap_into(N, a, b - a, c - a)
    if not (g.fixes(a) and c <= g.image(b)):
        raise CoverFailed("symmetric cover witness failed its exact check")
    return g


def _shrink_symmetric(inst, a, b, c, cert):
    a, b, c = frozenset(a), frozenset(b), frozenset(c)
    # move c \ a into b \ a, preferring points of c that already sit there
    outside = sorted(c - b)
    room = sorted((b - a) - c)
    if len(outside) > len(room):
        raise InsufficientSpace(f"c needs {len(outside)} fresh slots of b, only {len(room)} remain")
    m = list(range(inst.N))
    for s, t in zip(outside, room):
        m[s], m[t] = t, s
    g = FinitePermutation(tuple(m))
    new_base = a | g.image(c)
    new = LargenessCertificate("FiniteSym", new_base, b, {"fresh": len(b - new_base)})
    return g, new


# -- generic entry points ---------------------------------------------------------------


def shrink_cover(inst: DynamicalIdealInstance, a, b, c, certificate: LargenessCertificate):
    """γ in pstab(a) with γ·c inside b, plus the certificate for (a ∪ γ·c, b).

    The returned certificate is not guaranteed valid: for FiniteSym the fresh
    count drops by the number of newly used points and is re-validated by the
    caller.
    """
    _require_valid(inst, certificate)
    if certificate.base != a or certificate.large != b:
        raise CertificateInvalid("certificate does not describe (a, b)")
    if inst.subset(c, a):
        return inst.identity(), certificate
    if inst.name == "BoundedQ":
        g, new = _shrink_bounded(a, b, c, certificate)
    elif inst.name == "FiniteSym":
        g, new = _shrink_symmetric(inst, a, b, c, certificate)
    else:
        raise PreconditionError(f"shrink_cover is not defined for {inst.name}")
    if not (inst.in_pstab(g, a) and inst.subset(inst.act(g, c), b)):
        raise CoverFailed("shrink_cover failed its exact check")
    return g, new


def largeness_conjugation(inst: DynamicalIdealInstance, certificate: LargenessCertificate, delta):
    """Transport a certificate for (x, b) to one for (δ·x, δ·b)."""
    _require_valid(inst, certificate)
    x, b = inst.act(delta, certificate.base), inst.act(delta, certificate.large)
    if inst.name == "BoundedQ":
        ev = {"l": delta(certificate.evidence["l"]), "u": delta(certificate.evidence["u"])}
    else:
        ev = dict(certificate.evidence)
    out = LargenessCertificate(inst.name, x, b, ev)
    _require_valid(inst, out)
    return out


# -- sigma-completeness witnesses -------------------------------------------------------


@dataclass(frozen=True)
class GapRecord:
    """Per-gap data of a sigma witness for one index n."""

    lo: object
    hi: object
    n: int
    threshold: object
    next_threshold: object = None
    low_before: object = None
    low_after: object = None
    bound: object = None

    def to_json(self):
        f = _scalar_json
        return {
            "gap": [f(self.lo), f(self.hi)],
            "n": self.n,
            "threshold": f(self.threshold),
            "next_threshold": f(self.next_threshold),
            "min_before": f(self.low_before),
            "min_after": f(self.low_after),
            "bound": f(self.bound),
        }


def _scalar_json(v):
    if v is None:
        return None
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return format_scalar(v)


def _gap_base(lo, hi):
    """Rationals ``p < q`` inside the gap, with ``p = lo`` when ``lo`` is rational."""
    if lo == -INF and hi == INF:
        return Fraction(0), None
    if lo == -INF:
        return None, hi
    p = lo if is_rational(lo) else rational_between(lo, hi if hi != INF else lo + 1)
    return p, (None if hi == INF else hi)


def _threshold_wo(lo, hi, n):
    """Increasing thresholds cofinal in the gap."""
    p, q = _gap_base(lo, hi)
    if q is None:
        return (p if p is not None else Fraction(0)) + 2 ** n
    if p is None:
        return q - Fraction(1, 2 ** (n + 1))
    return q - (q - p) / 2 ** (n + 1)


def _threshold_bb(lo, hi, n):
    """Increasing thresholds converging to an irrational point of the gap."""
    p, q = _gap_base(lo, hi)
    if p is None:
        p = q - 1
    if q is None:
        q = p + 1
    return p + (q - p) * (pell(n + 1) - 1)


def _anchor_left(lo, upto):
    """A rational knot fixing everything up to the gap's left end."""
    if lo == -INF:
        return None
    if is_rational(lo):
        return lo
    return rational_between(lo, upto)


def _gap_map(lo, hi, knots):
    """PL map that is the identity outside (lo, hi) and interpolates the knots."""
    pts = dict(knots)
    left = _anchor_left(lo, min(min(x, y) for x, y in knots))
    if left is not None:
        pts[left] = left
    if hi != INF:
        pts[hi] = hi
    return PLMap.from_knots(sorted(pts.items()))


def _check_in(a, bs, pred, what):
    for s in [a, *bs]:
        if not pred(s):
            raise NotInIdeal(f"input set is not {what}")


def sigma_witness_wellordered(a: BlockSet, bs: list, with_records: bool = False):
    """γ_n in pstab(a) pushing each b_n above the n-th threshold of every gap of a.

    Gaps are the open intervals between the hulls of the points and blocks of
    ``a``; each γ_n is the identity on those hulls.
    """
    _check_in(a, bs, is_well_ordered, "well-ordered")
    gaps = hull_gaps(a)
    gammas, records = [], []
    for n, b in enumerate(bs):
        g = PLMap.identity()
        for lo, hi in gaps:
            x = _threshold_wo(lo, hi, n)
            low = extreme_in(b, lo, hi, True)
            rec = GapRecord(lo, hi, n, x, low_before=low)
            if low is not None and low < x:
                g = _gap_map(lo, hi, [(low, x)]) * g
            records.append(rec)
        gammas.append(g)
    records = [_with_after(r, gammas, bs) for r in records]
    _verify_sigma(a, bs, gammas, records, bounded_below=False)
    return (gammas, records) if with_records else gammas


def sigma_witness_bounded_below(a: BlockSet, bs: list, with_records: bool = False):
    """Like the well-ordered witness, with thresholds converging to an irrational.

    In each gap, γ_n sends ``min(b_n ∩ gap)`` to at least ``x_n`` and a rational
    bound ``y_n`` of ``b_n ∩ gap`` exactly to ``x_{n+1}``.
    """
    _check_in(a, bs, lambda s: is_well_ordered(s) and is_bounded_below_every(s),
              "well-ordered and bounded below every rational")
    gaps = hull_gaps(a)
    gammas, records = [], []
    for n, b in enumerate(bs):
        g = PLMap.identity()
        for lo, hi in gaps:
            x, x1 = _threshold_bb(lo, hi, n), _threshold_bb(lo, hi, n + 1)
            low = extreme_in(b, lo, hi, True)
            if low is None:
                records.append(GapRecord(lo, hi, n, x, x1))
                continue
            top = extreme_in(b, lo, hi, False)
            ceiling = hi if hi != INF else top + 1
            y = rational_between(top, ceiling) if top < ceiling else None
            if y is None or not top < y < ceiling:
                raise NotInIdeal("a set is not bounded below the right end of a gap")
            knots = [(low, x), (y, x1)]
            g = _gap_map(lo, hi, knots) * g
            records.append(GapRecord(lo, hi, n, x, x1, low_before=low, bound=y))
        gammas.append(g)
    records = [_with_after(r, gammas, bs) for r in records]
    _verify_sigma(a, bs, gammas, records, bounded_below=True)
    return (gammas, records) if with_records else gammas


def _with_after(rec: GapRecord, gammas, bs) -> GapRecord:
    from dataclasses import replace

    moved = image_set(gammas[rec.n], bs[rec.n])
    return replace(rec, low_after=extreme_in(moved, rec.lo, rec.hi, True))


def _verify_sigma(a, bs, gammas, records, bounded_below: bool):
    for g in gammas:
        if not fixes_pointwise(g, a):
            raise CoverFailed("a sigma witness moves a point of a")
    by_gap = {}
    for r in records:
        by_gap.setdefault((r.lo, r.hi), []).append(r)
        if r.low_after is not None and r.low_after < r.threshold:
            raise CoverFailed(f"threshold invariant fails in gap {r.lo}..{r.hi} at n={r.n}")
        if bounded_below and r.bound is not None and gammas[r.n](r.bound) != r.next_threshold:
            raise CoverFailed("bound is not sent to the next threshold")
    for rs in by_gap.values():
        xs = [r.threshold for r in sorted(rs, key=lambda r: r.n)]
        if any(not x0 < x1 for x0, x1 in zip(xs, xs[1:])):
            raise CoverFailed("thresholds do not increase")
    union = a
    for g, b in zip(gammas, bs):
        union = union | image_set(g, b)
    if not is_well_ordered(union):
        raise CoverFailed("union is not well-ordered")
    if bounded_below and not is_bounded_below_every(union):
        raise CoverFailed("union is not bounded below every rational")


def sigma_union(a: BlockSet, bs: list, gammas: list) -> BlockSet:
    out = a
    for g, b in zip(gammas, bs):
        out = out | image_set(g, b)
    return out


# -- simplicity on finite symmetric groups ----------------------------------------------

ENUMERATION_LIMIT = 9


def _compose(p: tuple, q: tuple) -> tuple:
    """p after q."""
    return tuple(p[i] for i in q)


def _invert(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, y in enumerate(p):
        inv[y] = i
    return tuple(inv)


def _as_tuple(g) -> tuple:
    return g.mapping if isinstance(g, FinitePermutation) else tuple(g)


def generate_group(generators, N: int) -> frozenset:
    """All products of the generators (breadth-first)."""
    if N > ENUMERATION_LIMIT:
        raise BudgetExceeded(f"N = {N} exceeds the enumeration limit {ENUMERATION_LIMIT}")
    ident = tuple(range(N))
    gens = [_as_tuple(g) for g in generators]
    seen = {ident}
    queue = deque([ident])
    while queue:
        h = queue.popleft()
        for g in gens:
            x = _compose(g, h)
            if x not in seen:
                seen.add(x)
                queue.append(x)
    return frozenset(seen)


def stabilizer_generators(N: int, fixed) -> list:
    """Adjacent transpositions of the complement of ``fixed``."""
    free = [x for x in range(N) if x not in set(fixed)]
    return [FinitePermutation.transposition(N, s, t) for s, t in zip(free, free[1:])]


def normal_closure(core_generators, ambient_generators, N: int) -> frozenset:
    """Smallest subgroup containing the core and closed under ambient conjugation."""
    if N > ENUMERATION_LIMIT:
        raise BudgetExceeded(f"N = {N} exceeds the enumeration limit {ENUMERATION_LIMIT}")
    amb = [_as_tuple(g) for g in ambient_generators]
    amb_inv = [_invert(g) for g in amb]
    gens = [_as_tuple(g) for g in core_generators]
    group = generate_group(gens, N)
    changed = True
    while changed:
        changed = False
        for g, gi in zip(amb, amb_inv):
            for h in list(gens):
                c = _compose(_compose(g, h), gi)
                if c not in group:
                    gens.append(c)
                    group = generate_group(gens, N)
                    changed = True
    return group


def simplicity_check(N: int, a, b) -> bool:
    """Whether the normal closure of pstab(b) inside pstab(a) is all of pstab(a)."""
    a, b = frozenset(a), frozenset(b)
    if not a <= b or any(not 0 <= x < N for x in b):
        raise PreconditionError("need a ⊆ b ⊆ {0..N-1}")
    closure = normal_closure(stabilizer_generators(N, b), stabilizer_generators(N, a), N)
    return len(closure) == factorial(N - len(a))


@dataclass(frozen=True)
class Factor:
    conjugator: FinitePermutation
    core: FinitePermutation
    conjugator_fixes: frozenset
    core_fixes: frozenset

    def value(self) -> FinitePermutation:
        return self.conjugator * self.core * self.conjugator.inverse()

    def verify(self) -> bool:
        return self.conjugator.fixes(self.conjugator_fixes) and self.core.fixes(self.core_fixes)

    def to_json(self):
        return {
            "conjugator": self.conjugator.to_json(),
            "core": self.core.to_json(),
            "conjugator_fixes": sorted(self.conjugator_fixes),
            "core_fixes": sorted(self.core_fixes),
        }

    @classmethod
    def from_json(cls, data) -> "Factor":
        return cls(FinitePermutation.from_json(data["conjugator"]),
                   FinitePermutation.from_json(data["core"]),
                   frozenset(data["conjugator_fixes"]), frozenset(data["core_fixes"]))


@dataclass(frozen=True)
class FactorizationWitness:
    target: FinitePermutation
    a: frozenset
    b: frozenset
    factors: tuple

    def recompose(self) -> FinitePermutation:
        out = FinitePermutation.identity(self.target.degree)
        for f in self.factors:
            out = out * f.value()
        return out

    def verify(self) -> bool:
        if self.recompose() != self.target:
            return False
        return all(f.verify() and self.a <= f.conjugator_fixes and self.b <= f.core_fixes
                   for f in self.factors)

    def to_json(self):
        return {
            "target": self.target.to_json(),
            "a": sorted(self.a),
            "b": sorted(self.b),
            "factors": [f.to_json() for f in self.factors],
        }

    @classmethod
    def from_json(cls, data) -> "FactorizationWitness":
        return cls(FinitePermutation.from_json(data["target"]), frozenset(data["a"]),
                   frozenset(data["b"]), tuple(Factor.from_json(f) for f in data["factors"]))


def orbit_closure(g: FinitePermutation, s) -> frozenset:
    """Smallest g-invariant set containing ``s``."""
    out, todo = set(s), list(s)
    while todo:
        y = g(todo.pop())
        if y not in out:
            out.add(y)
            todo.append(y)
    return frozenset(out)


def conjugate_factorization(gamma: FinitePermutation, a, b, N: int) -> FactorizationWitness:
    """Write γ in pstab(a) as δ(δ⁻¹αδ)δ⁻¹ · (α⁻¹γ) with both cores fixing b.

    ``c`` is the γ-closure of ``b``; α agrees with γ on ``c`` and is the
    identity elsewhere, so α⁻¹γ fixes ``c``.  δ swaps ``b \\ a`` with fresh
    points outside ``c``, so δ⁻¹αδ fixes ``b``.
    """
    a, b = frozenset(a), frozenset(b)
    if gamma.degree != N:
        raise PreconditionError("γ has the wrong degree")
    if not a <= b:
        raise PreconditionError("need a ⊆ b")
    if not gamma.fixes(a):
        raise PreconditionError("γ must fix a pointwise")
    if gamma.is_identity():
        return FactorizationWitness(gamma, a, b, ())
    c = orbit_closure(gamma, b)
    moved = sorted(b - a)
    fresh = [x for x in range(N) if x not in c][: len(moved)]
    if len(fresh) < len(moved):
        raise InsufficientSpace(f"N = {N} < |c| + |b \\ a| = {len(c) + len(moved)}")
    m = list(range(N))
    for s, t in zip(moved, fresh):
        m[s], m[t] = t, s
    delta = FinitePermutation(tuple(m))
    alpha = FinitePermutation(tuple(gamma(x) if x in c else x for x in range(N)))
    first = Factor(delta, delta.inverse() * alpha * delta, a, b)
    second = Factor(FinitePermutation.identity(N), alpha.inverse() * gamma, a, c)
    w = FactorizationWitness(gamma, a, b, (first, second))
    if not w.verify():
        raise CoverFailed("factorization failed its exact check")
    return w


# -- Cantor-Bendixson obstruction ------------------------------------------------------------


def refute_cofinal_countableclosed(b: BlockSet):
    """A closed countable ``c`` inside [0, 1] of rank one more than ``b``.

    No image of ``b`` can contain ``c``: images keep the rank of ``b`` and
    subsets never have larger rank than their supersets.
    """
    inst = get_instance("CountableClosedQ")
    if not inst.in_ideal(b):
        raise NotInIdeal("b is not a closed countable subset of [0, 1]")
    r = cb_rank(b)
    c = BlockSet(points=(Fraction(1, 2),)) if r == 0 else standard_rank_set(r + 1)
    proof = {
        "rank_b": r,
        "rank_c": cb_rank(c),
        "invariants": [
            "cb_rank(image_set(g, s)) == cb_rank(s) for every PL map g",
            "s subset of t implies cb_rank(s) <= cb_rank(t)",
        ],
        "conclusion": "c is not a subset of g.b for any g, since that would force rank_c <= rank_b",
    }
    if proof["rank_c"] != r + 1:
        raise CoverFailed("refuting set has the wrong rank")
    return c, proof


# -- stratification ---------------------------------------------------------------------------


def stratified_witness(a, bs: list, n: int, thresholds: list, N: int):
    """Permutations fixing ``a`` that move every ``b_m`` into ``a ∪ W``.

    ``W`` is a single window of ``k_n`` points outside ``a``, so the union of
    all moved sets has fewer than ``2 k_n <= k_{n+1}`` points however many sets
    are given.
    """
    if n + 1 >= len(thresholds):
        raise PreconditionError("thresholds must include k_{n+1}")
    kn, kn1 = thresholds[n], thresholds[n + 1]
    if any(not t0 < t1 for t0, t1 in zip(thresholds, thresholds[1:])):
        raise PreconditionError("thresholds must increase strictly")
    if kn1 < 2 * kn:
        raise PreconditionError(f"need k_(n+1) >= 2 k_n, got {kn1} < {2 * kn}")
    a = frozenset(a)
    if len(a) >= kn or any(len(b) >= kn for b in bs):
        raise NotInIdeal(f"all sets must have fewer than {kn} points")
    outside = [x for x in range(N) if x not in a]
    if len(outside) < kn:
        raise InsufficientSpace(f"N = {N} has no window of {kn} points outside a")
    W = frozenset(outside[:kn])
    gammas = []
    for b in bs:
        # disjoint transpositions, so the map is its own inverse
        gammas.append(_swap_into(N, a, W, frozenset(b) - a))
    union = set(a)
    for g, b in zip(gammas, bs):
        if not g.fixes(a) or not g.image(b) <= a | W:
            raise CoverFailed("stratified witness failed its exact check")
        union |= g.image(b)
    if len(union) >= kn1:
        raise CoverFailed("union is not below the next threshold")
    return gammas, W
