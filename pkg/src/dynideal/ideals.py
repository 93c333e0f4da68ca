"""Group actions with invariant ideals: the concrete scenario instances.

Every instance exposes the same small interface: ideal membership, the
action on ideal elements, the pointwise-stabilizer test, group arithmetic,
and seeded samplers.  Sampling conventions (fixed so reports reproduce):

* rationals are drawn from the grid of multiples of 1/4 inside a window
  ``[-W, W]`` (``W = 8`` unless stated otherwise);
* PL maps interpolate ``complexity`` random knots in the window with end
  slopes 1;
* set sizes are geometric with mean ``size_hint``, capped per instance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import KindMismatch, PreconditionError, UnknownInstance
from .order import (
    Block,
    BlockSet,
    IntervalUnionSet,
    PLMap,
    fixes_pointwise,
    image_set,
    is_bounded_below_every,
    is_well_ordered,
    pl_compose,
    pl_invert,
    standard_rank_set,
)
from .order.numbers import INF

# -- finite permutations ----------------------------------------------------------


@dataclass(frozen=True)
class FinitePermutation:
    """A bijection of ``{0, ..., N-1}`` stored as its image list."""

    mapping: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.mapping)
        if sorted(m) != list(range(len(m))):
            raise PreconditionError("mapping is not a permutation")
        object.__setattr__(self, "mapping", m)

    @classmethod
    def identity(cls, n: int) -> "FinitePermutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Iterable[int]]) -> "FinitePermutation":
        m = list(range(n))
        for cyc in cycles:
            cyc = list(cyc)
            for i, x in enumerate(cyc):
                m[x] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(m))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "FinitePermutation":
        return cls.from_cycles(n, [(i, j)])

    @property
    def degree(self) -> int:
        return len(self.mapping)

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def __mul__(self, other: "FinitePermutation") -> "FinitePermutation":
        """``self * other`` applies ``other`` first."""
        return FinitePermutation(tuple(self.mapping[y] for y in other.mapping))

    def inverse(self) -> "FinitePermutation":
        inv = [0] * len(self.mapping)
        for i, y in enumerate(self.mapping):
            inv[y] = i
        return FinitePermutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == y for i, y in enumerate(self.mapping))

    def support(self) -> frozenset:
        return frozenset(i for i, y in enumerate(self.mapping) if i != y)

    def image(self, s) -> frozenset:
        return frozenset(self.mapping[x] for x in s)

    def fixes(self, s) -> bool:
        return all(self.mapping[x] == x for x in s)

    def to_json(self):
        return list(self.mapping)

    @classmethod
    def from_json(cls, data) -> "FinitePermutation":
        return cls(tuple(data))

    def __str__(self):
        cycles, seen = [], set()
        for i in range(len(self.mapping)):
            if i in seen or self.mapping[i] == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.mapping[j]
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(cycles) or "()"


# -- grid translations ------------------------------------------------------------


@dataclass(frozen=True)
class GridElement:
    """A vector in ``(Z/modulus)^m``; acts on cells ``(column, z)`` by shifting z."""

    vector: tuple
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(v) % self.modulus for v in self.vector))

    @classmethod
    def identity(cls, m: int, modulus: int) -> "GridElement":
        return cls((0,) * m, modulus)

    @classmethod
    def unit(cls, m: int, modulus: int, column: int, by: int = 1) -> "GridElement":
        v = [0] * m
        v[column] = by
        return cls(tuple(v), modulus)

    def __call__(self, cell):
        col, z = cell
        return (col, (z + self.vector[col]) % self.modulus)

    def __mul__(self, other: "GridElement") -> "GridElement":
        return GridElement(tuple(a + b for a, b in zip(self.vector, other.vector)), self.modulus)

    def inverse(self) -> "GridElement":
        return GridElement(tuple(-a for a in self.vector), self.modulus)

    def is_identity(self) -> bool:
        return not any(self.vector)

    def image(self, s) -> frozenset:
        return frozenset(self(c) for c in s)

    def fixes(self, s) -> bool:
        return all(self.vector[col] == 0 for col, _ in s)

    def to_json(self):
        return {"vector": list(self.vector), "modulus": self.modulus}

    @classmethod
    def from_json(cls, data) -> "GridElement":
        return cls(tuple(data["vector"]), data["modulus"])


# -- instances -----------------------------------------------------------------------


def _rng(seed) -> random.Random:
    return random.Random(seed)


def _grid_rational(rng: random.Random, lo, hi, den: int = 4) -> Fraction:
    a, b = int(lo * den), int(hi * den)
    return Fraction(rng.randint(a, b), den)


def _geometric_size(rng: random.Random, mean: float, cap: int) -> int:
    n = 0
    p = 1.0 / (1.0 + max(mean, 0.0))
    while rng.random() > p and n < cap:
        n += 1
    return n


def random_plmap(rng: random.Random, knots: int, lo=-8, hi=8, den: int = 4) -> PLMap:
    """Interpolate ``knots`` random increasing knots inside ``[lo, hi]``."""
    if knots <= 0:
        return PLMap.identity()
    pool = [Fraction(i, den) for i in range(int(lo * den), int(hi * den) + 1)]
    xs = sorted(rng.sample(pool, knots))
    ys = sorted(rng.sample(pool, knots))
    return PLMap.from_knots(list(zip(xs, ys)))


def random_plmap_on(rng: random.Random, knots: int, lo, hi, den: int = 16) -> PLMap:
    """A random PL map that is the identity outside the open interval (lo, hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    width = hi - lo
    pool = sorted({lo + width * Fraction(i, den) for i in range(1, den)})
    k = min(knots, len(pool))
    xs = sorted(rng.sample(pool, k))
    ys = sorted(rng.sample(pool, k))
    return PLMap.from_knots([(lo, lo)] + list(zip(xs, ys)) + [(hi, hi)])


@dataclass(frozen=True)
class DynamicalIdealInstance:
    """Base descriptor: a group acting on points, with an invariant ideal."""

    name: str = ""
    element_kind: str = ""
    group_kind: str = ""
    params: dict = field(default_factory=dict, compare=False)

    # subclasses implement these -------------------------------------------
    def in_ideal(self, s) -> bool:
        raise NotImplementedError

    def identity(self):
        raise NotImplementedError

    def act(self, g, s):
        raise NotImplementedError

    def in_pstab(self, g, s) -> bool:
        raise NotImplementedError

    def compose(self, g, h):
        """``g o h`` (``h`` acts first)."""
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def sample_ideal(self, seed, size_hint: int = 3):
        raise NotImplementedError

    def sample_group(self, seed, complexity_hint: int = 3):
        raise NotImplementedError

    def sample_pstab(self, seed, a, complexity_hint: int = 3):
        raise NotImplementedError

    def empty(self):
        raise NotImplementedError

    def union(self, s, t):
        raise NotImplementedError

    def subset(self, s, t) -> bool:
        raise NotImplementedError

    def element_to_json(self, s):
        raise NotImplementedError

    def element_from_json(self, data):
        raise NotImplementedError

    def group_to_json(self, g):
        return g.to_json()

    def group_from_json(self, data):
        raise NotImplementedError

    def spec(self) -> dict:
        return {"instance": self.name, **self.params}

    # shared kind checks ---------------------------------------------------
    def _check_element(self, s):
        if not isinstance(s, self._element_type()):
            raise KindMismatch(f"{self.name} expects {self.element_kind}, got {type(s).__name__}")

    def _check_group(self, g):
        if not isinstance(g, self._group_type()):
            raise KindMismatch(f"{self.name} expects {self.group_kind}, got {type(g).__name__}")

    def _element_type(self):
        raise NotImplementedError

    def _group_type(self):
        raise NotImplementedError


class _PLInstance(DynamicalIdealInstance):
    def _group_type(self):
        return PLMap

    def identity(self):
        return PLMap.identity()

    def act(self, g, s):
        self._check_group(g)
        self._check_element(s)
        return image_set(g, s)

    def in_pstab(self, g, s) -> bool:
        self._check_group(g)
        self._check_element(s)
        return fixes_pointwise(g, s)

    def compose(self, g, h):
        return pl_compose(g, h)

    def inverse(self, g):
        return pl_invert(g)

    def group_from_json(self, data):
        return PLMap.from_json(data)

    def sample_group(self, seed, complexity_hint: int = 3):
        rng = _rng(seed)
        return random_plmap(rng, rng.randint(0, max(0, complexity_hint)))


class BoundedQ(_PLInstance):
    """PL automorphisms of Q acting on bounded finite unions of intervals."""

    def __init__(self):
        super().__init__("BoundedQ", "IntervalUnionSet", "PLMap", {})

    def _element_type(self):
        return IntervalUnionSet

    def in_ideal(self, s) -> bool:
        self._check_element(s)
        return s.is_bounded()

    def empty(self):
        return IntervalUnionSet.empty()

    def union(self, s, t):
        return s | t

    def subset(self, s, t) -> bool:
        return s <= t

    def element_to_json(self, s):
        return s.to_text()

    def element_from_json(self, data):
        return IntervalUnionSet.from_text(data)

    def sample_ideal(self, seed, size_hint: int = 3, window: int = 8):
        rng = _rng(seed)
        n = _geometric_size(rng, size_hint, 12)
        items = []
        for _ in range(n):
            x = _grid_rational(rng, -window, window)
            if rng.random() < 0.5:
                items.append(IntervalUnionSet.points([x]))
            else:
                y = x + _grid_rational(rng, 0, 2) + Fraction(1, 4)
                items.append(IntervalUnionSet.interval(x, y, rng.random() < 0.5, rng.random() < 0.5))
        out = IntervalUnionSet.empty()
        for it in items:
            out = out | it
        return out

    def sample_pstab(self, seed, a, complexity_hint: int = 3):
        """Random knots inside each bounded gap of ``a`` plus the two unbounded ends."""
        rng = _rng(seed)
        if a.is_empty():
            return self.sample_group(seed, complexity_hint)
        g = PLMap.identity()
        gaps = a.gaps()
        for gap in gaps:
            if gap.is_point():
                continue
            if gap.lo == -INF:
                lo, hi = gap.hi - 8, gap.hi
            elif gap.hi == INF:
                lo, hi = gap.lo, gap.lo + 8
            else:
                lo, hi = gap.lo, gap.hi
            g = pl_compose(random_plmap_on(rng, rng.randint(0, complexity_hint), lo, hi), g)
        return g


class _BlockInstance(_PLInstance):
    def _element_type(self):
        return BlockSet

    def empty(self):
        return BlockSet()

    def union(self, s, t):
        return s | t

    def subset(self, s, t) -> bool:
        from .order import is_subset

        return is_subset(s, t)

    def element_to_json(self, s):
        return s.to_json()

    def element_from_json(self, data):
        return BlockSet.from_json(data)

    def sample_pstab(self, seed, a, complexity_hint: int = 3):
        """Identity on the hull of ``a``; random on the two unbounded sides."""
        rng = _rng(seed)
        if a.is_empty():
            return self.sample_group(seed, complexity_hint)
        lo, hi = a.bounds()
        lo = _floor(lo)
        hi = _floor(hi) + 1
        left = random_plmap_on(rng, rng.randint(0, complexity_hint), lo - 8, lo)
        right = random_plmap_on(rng, rng.randint(0, complexity_hint), hi, hi + 8)
        return pl_compose(left, right)


def _floor(x) -> Fraction:
    from .order.numbers import QuadExt, _rational_floor

    if isinstance(x, QuadExt):
        return _rational_floor(x)
    return Fraction(x.numerator // x.denominator)


class WellOrderedQ(_BlockInstance):
    """PL automorphisms of Q acting on well-ordered sets."""

    def __init__(self):
        super().__init__("WellOrderedQ", "BlockSet", "PLMap", {})

    def in_ideal(self, s) -> bool:
        self._check_element(s)
        return is_well_ordered(s)

    def sample_ideal(self, seed, size_hint: int = 3, window: int = 8):
        rng = _rng(seed)
        pts = [_grid_rational(rng, -window, window) for _ in range(_geometric_size(rng, size_hint, 10))]
        blocks = []
        for _ in range(_geometric_size(rng, 1, 3)):
            start = _grid_rational(rng, -window, window)
            length = _grid_rational(rng, 0, 2) + Fraction(1, 4)
            kind = rng.random()
            if kind < 0.5:
                ratio = rng.choice([Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)])
                pat = _unit_ascending_pattern(rng) if rng.random() < 0.25 else None
                blocks.append(Block.geometric(start, start + length, ratio, rng.random() < 0.5, pat))
            else:
                blocks.append(Block.sqrt2(length, start - length, rng.randint(0, 2)))
        return BlockSet(tuple(pts), tuple(blocks))


def _unit_ascending_pattern(rng: random.Random) -> BlockSet:
    """A small well-ordered set inside [0, 1/2], used as a block pattern."""
    if rng.random() < 0.5:
        return BlockSet(blocks=(Block.geometric(0, Fraction(1, 2), Fraction(1, 2), rng.random() < 0.5),))
    return BlockSet(blocks=(Block.sqrt2(Fraction(1, 4), Fraction(0), 0),))


class WellOrderedBoundedBelowQ(_BlockInstance):
    """Well-ordered, bounded sets that are bounded below every rational."""

    def __init__(self):
        super().__init__("WellOrderedBoundedBelowQ", "BlockSet", "PLMap", {})

    def in_ideal(self, s) -> bool:
        self._check_element(s)
        return is_well_ordered(s) and is_bounded_below_every(s)

    def sample_ideal(self, seed, size_hint: int = 3, window: int = 8):
        rng = _rng(seed)
        pts = [_grid_rational(rng, -window, window) for _ in range(_geometric_size(rng, size_hint, 10))]
        blocks = []
        for _ in range(_geometric_size(rng, 1, 3)):
            start = _grid_rational(rng, -window, window)
            length = _grid_rational(rng, 0, 2) + Fraction(1, 4)
            pat = None
            if rng.random() < 0.25:
                pat = BlockSet(blocks=(Block.sqrt2(Fraction(1, 4), Fraction(0), 0),))
            blocks.append(Block.sqrt2(length, start - length, rng.randint(0, 2), pat))
        return BlockSet(tuple(pts), tuple(blocks))


class CountableClosedQ(_BlockInstance):
    """PL maps of [0, 1] fixing both endpoints, acting on closed countable subsets."""

    def __init__(self):
        super().__init__("CountableClosedQ", "BlockSet", "PLMap", {})

    def in_ideal(self, s) -> bool:
        self._check_element(s)
        if s.is_empty():
            return True
        lo, hi = s.bounds()
        return lo >= 0 and hi <= 1 and _all_rational_limits(s) and s.is_closed()

    def act(self, g, s):
        self._check_unit(g)
        return super().act(g, s)

    def _check_unit(self, g):
        if not (g(Fraction(0)) == 0 and g(Fraction(1)) == 1):
            raise KindMismatch("CountableClosedQ maps must fix 0 and 1")

    def sample_group(self, seed, complexity_hint: int = 3):
        rng = _rng(seed)
        return random_plmap_on(rng, rng.randint(0, max(0, complexity_hint)), 0, 1)

    def sample_ideal(self, seed, size_hint: int = 3):
        rng = _rng(seed)
        pts = [Fraction(rng.randint(0, 64), 64) for _ in range(_geometric_size(rng, size_hint, 8))]
        blocks = []
        for _ in range(_geometric_size(rng, 1, 3)):
            a = Fraction(rng.randint(0, 15), 16)
            b = a + Fraction(rng.randint(1, 16 - int(a * 16)), 16)
            rank = rng.choice([0, 0, 1, 2, 3])
            pat = None if rank <= 1 else standard_rank_set(rank)
            if rng.random() < 0.5:
                blocks.append(Block.geometric(a, b, Fraction(1, 2), True, pat))
            else:
                blocks.append(Block.geometric(b, a, Fraction(1, 2), True, pat))
        return BlockSet(tuple(pts), tuple(blocks))

    def sample_pstab(self, seed, a, complexity_hint: int = 3):
        """Random knots inside the gaps between consecutive points of a finite-rank set."""
        rng = _rng(seed)
        if a.is_empty():
            return self.sample_group(seed, complexity_hint)
        lo, hi = a.bounds()
        g = PLMap.identity()
        if lo > 0:
            g = random_plmap_on(rng, rng.randint(0, complexity_hint), 0, lo)
        if hi < 1:
            g = pl_compose(random_plmap_on(rng, rng.randint(0, complexity_hint), hi, 1), g)
        return g


def _all_rational_limits(s: BlockSet) -> bool:
    return all(b.is_geometric and (b.pattern is None or _all_rational_limits(b.pattern))
               for b in s.blocks)


class _FiniteSetInstance(DynamicalIdealInstance):
    def _element_type(self):
        return frozenset

    def empty(self):
        return frozenset()

    def union(self, s, t):
        return frozenset(s) | frozenset(t)

    def subset(self, s, t) -> bool:
        return frozenset(s) <= frozenset(t)

    def act(self, g, s):
        self._check_group(g)
        self._check_element(s)
        return g.image(s)

    def in_pstab(self, g, s) -> bool:
        self._check_group(g)
        self._check_element(s)
        return g.fixes(s)

    def compose(self, g, h):
        return g * h

    def inverse(self, g):
        return g.inverse()


class FiniteSym(_FiniteSetInstance):
    """All permutations of ``{0..N-1}``; the ideal of subsets of size below ``k``."""

    def __init__(self, N: int = 8, k: int = 4):
        if N < 1 or k < 1:
            raise PreconditionError("FiniteSym needs N >= 1 and k >= 1")
        super().__init__("FiniteSym", "finite set", "FinitePermutation", {"N": N, "k": k})

    @property
    def N(self) -> int:
        return self.params["N"]

    @property
    def k(self) -> int:
        return self.params["k"]

    def _group_type(self):
        return FinitePermutation

    def _check_element(self, s):
        super()._check_element(s)
        if any(not 0 <= x < self.N for x in s):
            raise KindMismatch(f"points outside the ground set of size {self.N}")

    def _check_group(self, g):
        super()._check_group(g)
        if g.degree != self.N:
            raise KindMismatch(f"permutation of degree {g.degree}, expected {self.N}")

    def in_ideal(self, s) -> bool:
        self._check_element(s)
        return len(s) < self.k

    def identity(self):
        return FinitePermutation.identity(self.N)

    def element_to_json(self, s):
        return sorted(s)

    def element_from_json(self, data):
        return frozenset(int(x) for x in data)

    def group_from_json(self, data):
        return FinitePermutation.from_json(data)

    def sample_ideal(self, seed, size_hint: int = 3):
        rng = _rng(seed)
        n = min(_geometric_size(rng, size_hint, self.k - 1), self.N)
        return frozenset(rng.sample(range(self.N), n))

    def sample_group(self, seed, complexity_hint: int = 3):
        rng = _rng(seed)
        m = list(range(self.N))
        rng.shuffle(m)
        return FinitePermutation(tuple(m))

    def sample_pstab(self, seed, a, complexity_hint: int = 3):
        rng = _rng(seed)
        free = [x for x in range(self.N) if x not in a]
        moved = free[:]
        rng.shuffle(moved)
        m = list(range(self.N))
        for x, y in zip(free, moved):
            m[x] = y
        return FinitePermutation(tuple(m))


class AbelianGrid(_FiniteSetInstance):
    """``(Z/modulus)^m`` shifting the columns of ``m x Z/modulus``.

    The ideal consists of the sets meeting fewer than ``m`` columns, i.e. it
    is generated by unions of proper subfamilies of vertical sections.
    """

    def __init__(self, m: int = 3, modulus: int = 4):
        if modulus % 2 or modulus < 2:
            raise PreconditionError("the grid modulus must be even")
        super().__init__("AbelianGrid", "set of cells", "GridElement", {"m": m, "modulus": modulus})

    @property
    def m(self) -> int:
        return self.params["m"]

    @property
    def modulus(self) -> int:
        return self.params["modulus"]

    def _group_type(self):
        return GridElement

    def _check_element(self, s):
        super()._check_element(s)
        for c in s:
            if not (isinstance(c, tuple) and 0 <= c[0] < self.m and 0 <= c[1] < self.modulus):
                raise KindMismatch(f"bad grid cell {c!r}")

    def _check_group(self, g):
        super()._check_group(g)
        if len(g.vector) != self.m or g.modulus != self.modulus:
            raise KindMismatch("grid element of the wrong shape")

    def cells(self) -> list:
        return [(c, z) for c in range(self.m) for z in range(self.modulus)]

    def column(self, c: int) -> frozenset:
        return frozenset((c, z) for z in range(self.modulus))

    def columns_of(self, s) -> frozenset:
        return frozenset(c for c, _ in s)

    def in_ideal(self, s) -> bool:
        self._check_element(s)
        return len(self.columns_of(s)) < self.m

    def identity(self):
        return GridElement.identity(self.m, self.modulus)

    def element_to_json(self, s):
        return sorted([c, z] for c, z in s)

    def element_from_json(self, data):
        return frozenset((int(c), int(z)) for c, z in data)

    def group_from_json(self, data):
        return GridElement.from_json(data)

    def sample_ideal(self, seed, size_hint: int = 3):
        rng = _rng(seed)
        cols = rng.sample(range(self.m), rng.randint(0, self.m - 1))
        pool = [(c, z) for c in cols for z in range(self.modulus)]
        n = min(len(pool), _geometric_size(rng, size_hint, len(pool)))
        return frozenset(rng.sample(pool, n))

    def sample_group(self, seed, complexity_hint: int = 3):
        rng = _rng(seed)
        return GridElement(tuple(rng.randrange(self.modulus) for _ in range(self.m)), self.modulus)

    def sample_pstab(self, seed, a, complexity_hint: int = 3):
        rng = _rng(seed)
        used = self.columns_of(a)
        return GridElement(
            tuple(0 if c in used else rng.randrange(self.modulus) for c in range(self.m)),
            self.modulus,
        )


# -- catalog --------------------------------------------------------------------------

_FACTORIES = {
    "BoundedQ": lambda **p: BoundedQ(),
    "WellOrderedQ": lambda **p: WellOrderedQ(),
    "WellOrderedBoundedBelowQ": lambda **p: WellOrderedBoundedBelowQ(),
    "CountableClosedQ": lambda **p: CountableClosedQ(),
    "FiniteSym": lambda N=8, k=4, **p: FiniteSym(N, k),
    "AbelianGrid": lambda m=3, modulus=4, **p: AbelianGrid(m, modulus),
}


def get_instance(name: str, **params) -> DynamicalIdealInstance:
    """Build an instance by catalog name; grid modulus may be passed as ``modulus`` or ``2j``."""
    if name not in _FACTORIES:
        raise UnknownInstance(name)
    if "2j" in params:
        params["modulus"] = params.pop("2j")
    if "j" in params:
        params["modulus"] = 2 * params.pop("j")
    return _FACTORIES[name](**params)


def instance_from_spec(spec: dict) -> DynamicalIdealInstance:
    spec = dict(spec)
    name = spec.pop("instance", None)
    if name is None:
        raise UnknownInstance("missing 'instance' key")
    return get_instance(name, **spec)


def instance_catalog() -> list:
    """One instance per catalog entry, with default parameters."""
    return [f() for f in _FACTORIES.values()]


def act(inst: DynamicalIdealInstance, g, s):
    return inst.act(g, s)


def in_pstab(inst: DynamicalIdealInstance, g, s) -> bool:
    return inst.in_pstab(g, s)


def sample_ideal(inst: DynamicalIdealInstance, seed, size_hint: int = 3):
    return inst.sample_ideal(seed, size_hint)


def sample_group(inst: DynamicalIdealInstance, seed, complexity_hint: int = 3):
    return inst.sample_group(seed, complexity_hint)


__all__ = [
    "AbelianGrid",
    "BoundedQ",
    "CountableClosedQ",
    "DynamicalIdealInstance",
    "FinitePermutation",
    "FiniteSym",
    "GridElement",
    "WellOrderedBoundedBelowQ",
    "WellOrderedQ",
    "act",
    "get_instance",
    "in_pstab",
    "instance_catalog",
    "instance_from_spec",
    "random_plmap",
    "random_plmap_on",
    "sample_group",
    "sample_ideal",
]
