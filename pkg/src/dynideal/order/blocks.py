"""Finite points plus geometric omega-blocks: countable subsets of Q with exact limits.

A :class:`Block` is an infinite monotone sequence ``x_0, x_1, ...`` of
rationals converging to a limit ``L``:

* ``ratio`` set: ``x_k = offset - scale * ratio**k``; ``L = offset`` is rational.
* ``ratio`` is ``None``: ``x_k = offset + scale * c_{skip+k}`` where
  ``c_0 = 1 < c_1 = 7/5 < c_2 = 41/29 < ...`` are the solutions of
  ``p^2 - 2 q^2 = -1``, increasing to sqrt(2).  The limit
  ``offset + scale*sqrt(2)`` is irrational while every element stays rational.

``scale > 0`` means ascending.  With a ``pattern`` (a BlockSet inside
``[0, 1)``), element ``k`` is not the point ``x_k`` but the copy of the
pattern placed affinely on the window between ``x_k`` and ``x_{k+1}``; this
is how sets of Cantor-Bendixson rank above 2 are represented.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Optional

from ..errors import ParseError, PreconditionError
from .numbers import (
    QuadExt,
    Q,
    format_rational,
    is_rational,
    parse_rational,
    quad,
)
from .plmap import PLMap, pl_apply

# -- the sqrt(2) convergent sequence ------------------------------------------

_PELL = [(1, 1)]


def pell(j: int) -> Fraction:
    """``c_j``: the j-th rational p/q with p^2 - 2q^2 = -1 (increasing to sqrt 2)."""
    while len(_PELL) <= j:
        p, q = _PELL[-1]
        _PELL.append((3 * p + 4 * q, 2 * p + 3 * q))
    p, q = _PELL[j]
    return Fraction(p, q)


# -- blocks -----------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    scale: Fraction
    offset: Fraction
    ratio: Optional[Fraction] = None
    skip: int = 0
    limit_included: bool = False
    pattern: Optional["BlockSet"] = None

    def __post_init__(self):
        object.__setattr__(self, "scale", Q(self.scale))
        object.__setattr__(self, "offset", Q(self.offset))
        if self.scale == 0:
            raise PreconditionError("block scale must be nonzero")
        if self.ratio is not None:
            r = Q(self.ratio)
            object.__setattr__(self, "ratio", r)
            if not 0 < r < 1:
                raise PreconditionError("block ratio must lie in (0, 1)")
            if self.skip:
                raise PreconditionError("geometric blocks absorb skip into scale")
        else:
            if self.skip < 0:
                raise PreconditionError("skip must be nonnegative")
            if self.limit_included:
                raise PreconditionError("an irrational limit cannot belong to a subset of Q")
        if self.pattern is not None:
            pat = self.pattern
            if pat.is_empty():
                raise PreconditionError("block pattern must be nonempty")
            lo, hi = pat.bounds()
            if lo < 0 or not hi < 1:
                raise PreconditionError("block pattern must lie inside [0, 1)")

    # -- constructors ---------------------------------------------------------
    @classmethod
    def geometric(cls, start, limit, ratio, limit_included=False, pattern=None) -> "Block":
        start, limit = Q(start), Q(limit)
        if start == limit:
            raise PreconditionError("block start must differ from its limit")
        return cls(limit - start, limit, Q(ratio), 0, limit_included, pattern)

    @classmethod
    def sqrt2(cls, scale, offset, skip=0, pattern=None) -> "Block":
        """Elements ``offset + scale*c_{skip+k}``, converging to ``offset + scale*sqrt 2``."""
        return cls(Q(scale), Q(offset), None, skip, False, pattern)

    # -- basic geometry ----------------------------------------------------------
    @property
    def ascending(self) -> bool:
        return self.scale > 0

    @property
    def orientation(self) -> str:
        return "ascending" if self.ascending else "descending"

    @property
    def is_geometric(self) -> bool:
        return self.ratio is not None

    @property
    def limit(self):
        if self.ratio is not None:
            return self.offset
        return quad(self.offset, self.scale)

    @property
    def start(self) -> Fraction:
        return self.x(0)

    def x(self, k: int) -> Fraction:
        """The k-th sequence point (k may be negative for geometric blocks)."""
        if self.ratio is not None:
            return self.offset - self.scale * self.ratio ** k
        return self.offset + self.scale * pell(self.skip + k)

    def _before(self, u, v) -> bool:
        """u comes strictly before v along the direction of the block."""
        return u < v if self.ascending else u > v

    def window(self, k: int):
        a, b = self.x(k), self.x(k + 1)
        return (a, b) if a < b else (b, a)

    def copy(self, k: int) -> "BlockSet":
        lo, hi = self.window(k)
        return self.pattern.affine_image(hi - lo, lo)

    def element_set(self, k: int) -> "BlockSet":
        """Element k as a BlockSet (a point, or a pattern copy)."""
        if self.pattern is None:
            return BlockSet(points=(self.x(k),))
        return self.copy(k)

    def index_at_or_before(self, x) -> Optional[int]:
        """Largest k with x_k at or before ``x`` (in block order), if x lies in [x_0, L)."""
        if self._before(x, self.x(0)):
            return None
        lim = self.limit
        if not self._before(x, lim):
            return None
        k = 0
        while not self._before(x, self.x(k + 1)):
            k += 1
        return k

    def contains(self, x) -> bool:
        if self.limit_included and x == self.limit:
            return True
        if not is_rational(x):
            return False
        k = self.index_at_or_before(x)
        if k is None:
            return False
        if self.pattern is None:
            return self.x(k) == x
        # windows are half-open [lo, hi); for descending blocks the shared
        # endpoint x_k belongs to window k-1
        for j in (k, k - 1) if k > 0 else (k,):
            lo, hi = self.window(j)
            if lo <= x < hi:
                return self.pattern.contains((x - lo) / (hi - lo))
        return False

    def first_index_beyond(self, t) -> int:
        """Smallest k such that x_k is on the limit side of ``t`` or equal to it."""
        k = 0
        while self._before(self.x(k), t):
            k += 1
        return k

    def tail(self, k0: int) -> "Block":
        """The block restricted to indices >= k0."""
        if k0 == 0:
            return self
        if self.ratio is not None:
            return replace(self, scale=self.scale * self.ratio ** k0)
        return replace(self, skip=self.skip + k0)

    def affine_image(self, slope, shift) -> "Block":
        """Image under ``x -> slope*x + shift`` with ``slope > 0``."""
        return replace(self, scale=slope * self.scale, offset=slope * self.offset + shift)

    def bounds(self):
        """(inf, sup) of the block, limit included."""
        first = self.element_set(0).bounds()
        if self.ascending:
            return first[0], self.limit
        return self.limit, first[1]

    # -- serialization -------------------------------------------------------------
    def to_json(self):
        d = {
            "kind": "geo" if self.ratio is not None else "sqrt2",
            "scale": format_rational(self.scale),
            "offset": format_rational(self.offset),
            "incl": self.limit_included,
        }
        if self.ratio is not None:
            d["ratio"] = format_rational(self.ratio)
        else:
            d["skip"] = self.skip
        d["pattern"] = None if self.pattern is None else self.pattern.to_json()
        return d

    @classmethod
    def from_json(cls, d) -> "Block":
        pat = None if d.get("pattern") is None else BlockSet.from_json(d["pattern"])
        if d["kind"] == "geo":
            return cls(parse_rational(d["scale"]), parse_rational(d["offset"]),
                       parse_rational(d["ratio"]), 0, bool(d["incl"]), pat)
        if d["kind"] == "sqrt2":
            return cls(parse_rational(d["scale"]), parse_rational(d["offset"]),
                       None, int(d["skip"]), bool(d["incl"]), pat)
        raise ParseError(f"unknown block kind {d['kind']!r}")

    def sort_key_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _cmp_blocks(a: Block, b: Block) -> int:
    if a.start != b.start:
        return -1 if a.start < b.start else 1
    ta, tb = a.sort_key_text(), b.sort_key_text()
    return (ta > tb) - (ta < tb)


# -- block sets ---------------------------------------------------------------------


@dataclass(frozen=True)
class BlockSet:
    points: tuple = ()
    blocks: tuple = ()
    _canonical: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if self._canonical:
            return
        pts, blks = _canonicalize(set(Q(p) for p in self.points), list(self.blocks))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "blocks", blks)
        object.__setattr__(self, "_canonical", True)

    @classmethod
    def empty(cls) -> "BlockSet":
        return cls()

    @classmethod
    def of(cls, *items) -> "BlockSet":
        pts, blks = [], []
        for it in items:
            (blks if isinstance(it, Block) else pts).append(it)
        return cls(tuple(pts), tuple(blks))

    def is_empty(self) -> bool:
        return not self.points and not self.blocks

    def is_finite(self) -> bool:
        return not self.blocks

    def contains(self, x) -> bool:
        if is_rational(x) and Q(x) in self._point_set():
            return True
        return any(b.contains(x) for b in self.blocks)

    __contains__ = contains

    def _point_set(self):
        ps = self.__dict__.get("_pset")
        if ps is None:
            ps = frozenset(self.points)
            object.__setattr__(self, "_pset", ps)
        return ps

    def union(self, other: "BlockSet") -> "BlockSet":
        return BlockSet(self.points + other.points, self.blocks + other.blocks)

    __or__ = union

    def bounds(self):
        """(inf, sup); limits count even when excluded.  Raises on the empty set."""
        if self.is_empty():
            raise PreconditionError("empty set has no bounds")
        lows, highs = [], []
        if self.points:
            lows.append(self.points[0])
            highs.append(self.points[-1])
        for b in self.blocks:
            lo, hi = b.bounds()
            lows.append(lo)
            highs.append(hi)
        return min(lows), max(highs)

    def affine_image(self, slope, shift) -> "BlockSet":
        slope, shift = Q(slope), Q(shift)
        if slope <= 0:
            raise PreconditionError("affine images need a positive slope")
        return BlockSet(
            tuple(slope * p + shift for p in self.points),
            tuple(b.affine_image(slope, shift) for b in self.blocks),
        )

    def image(self, f: PLMap) -> "BlockSet":
        return image_blockset(f, self)

    def closure(self) -> "BlockSet":
        """Add every rational block limit (recursively inside patterns)."""
        blks = []
        for b in self.blocks:
            pat = None if b.pattern is None else b.pattern.closure()
            blks.append(replace(b, pattern=pat, limit_included=b.is_geometric))
        return BlockSet(self.points, tuple(blks))

    def is_closed(self) -> bool:
        return self == self.closure()

    def enumerate(self, n: int) -> list:
        """Up to ``n`` elements per block plus all points, for spot checks."""
        out = list(self.points)
        for b in self.blocks:
            for k in range(n):
                if b.pattern is None:
                    out.append(b.x(k))
                else:
                    out.extend(b.copy(k).enumerate(max(1, n // 4)))
            if b.limit_included:
                out.append(b.limit)
        return out

    def to_json(self):
        return {
            "points": [format_rational(p) for p in self.points],
            "blocks": [b.to_json() for b in self.blocks],
        }

    @classmethod
    def from_json(cls, d) -> "BlockSet":
        return cls(
            tuple(parse_rational(p) for p in d.get("points", ())),
            tuple(Block.from_json(b) for b in d.get("blocks", ())),
        )

    def to_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_text(cls, text: str) -> "BlockSet":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad BlockSet text at line {exc.lineno} column {exc.colno}") from exc
        return cls.from_json(data)

    def __str__(self):
        return self.to_text()


def _canonicalize(points: set, blocks: list):
    # collapse blocks that are tails of one another
    merged: list[Block] = []
    for b in blocks:
        for i, c in enumerate(merged):
            u = _tail_union(b, c)
            if u is not None:
                merged[i] = u
                break
        else:
            merged.append(b)
    blocks = merged
    # a point sitting at a block limit becomes the limit_included flag
    for i, b in enumerate(blocks):
        if b.is_geometric and not b.limit_included and b.limit in points:
            blocks[i] = replace(b, limit_included=True)
    # backward absorption: extend each block over head elements that are present
    changed = True
    while changed:
        changed = False
        for i, b in enumerate(blocks):
            prev = _previous(b)
            if prev is None:
                continue
            head = prev.element_set(0)
            others = [c for j, c in enumerate(blocks) if j != i]
            present = all(p in points or any(c.contains(p) for c in others) for p in head.points)
            if present and all(hb in others for hb in head.blocks):
                points -= set(head.points)
                for hb in head.blocks:
                    blocks.remove(hb)
                blocks[blocks.index(b)] = prev
                changed = True
                break
    points = {p for p in points if not any(b.contains(p) for b in blocks)}
    blocks.sort(key=cmp_to_key(_cmp_blocks))
    return tuple(sorted(points)), tuple(blocks)


def _previous(b: Block) -> Optional[Block]:
    if b.ratio is not None:
        return replace(b, scale=b.scale / b.ratio)
    if b.skip > 0:
        return replace(b, skip=b.skip - 1)
    return None


def _tail_union(b: Block, c: Block) -> Optional[Block]:
    """If one block is a tail of the other, the longer one (limits merged)."""
    if (b.ratio != c.ratio or b.offset != c.offset or b.pattern != c.pattern
            or (b.scale > 0) != (c.scale > 0)):
        return None
    if b.ratio is not None:
        q = b.scale / c.scale
        m = _log_exact(q, b.ratio)
        if m is None:
            return None
        longer = c if m >= 0 else b
    else:
        if b.scale != c.scale:
            return None
        longer = c if b.skip >= c.skip else b
    return replace(longer, limit_included=b.limit_included or c.limit_included)


def _log_exact(q: Fraction, r: Fraction) -> Optional[int]:
    """Integer m with r**m == q, if any."""
    if q <= 0:
        return None
    m, v = 0, Fraction(1)
    if q <= 1:
        while v > q:
            v *= r
            m += 1
        return m if v == q else None
    while v < q:
        v /= r
        m -= 1
    return m if v == q else None


# -- action of PL maps ------------------------------------------------------------------


def _split_point(f: PLMap, b: Block) -> int:
    """First index from which the rest of the block lies in a single affine piece."""
    lim = b.limit
    start = b.x(0)
    lo, hi = (start, lim) if b.ascending else (lim, start)
    inside = [t for t in f.breakpoints if lo < t < hi]
    if not inside:
        return 0
    closest = max(inside) if b.ascending else min(inside)
    return b.first_index_beyond(closest)


def image_block(f: PLMap, b: Block):
    """(head BlockSets, tail Block) for the image of one block."""
    k0 = _split_point(f, b)
    heads = [b.element_set(k).image(f) if b.pattern is not None
             else BlockSet(points=(pl_apply(f, b.x(k)),)) for k in range(k0)]
    t = b.tail(k0)
    s, o = f.piece_at(t.x(1))
    return heads, t.affine_image(s, o)


def image_blockset(f: PLMap, s: BlockSet) -> BlockSet:
    if f.is_identity():
        return s
    pts = [pl_apply(f, p) for p in s.points]
    blks = []
    for b in s.blocks:
        heads, tail = image_block(f, b)
        blks.append(tail)
        for h in heads:
            pts.extend(h.points)
            blks.extend(h.blocks)
    return BlockSet(tuple(pts), tuple(blks))


def fixes_blockset(f: PLMap, s: BlockSet) -> bool:
    """Exact pointwise-fixing test."""
    if f.is_identity():
        return True
    if any(pl_apply(f, p) != p for p in s.points):
        return False
    for b in s.blocks:
        k0 = _split_point(f, b)
        for k in range(k0):
            if not fixes_blockset(f, b.element_set(k)):
                return False
        # infinitely many fixed points in one affine piece force the identity piece
        t = b.tail(k0)
        if f.piece_at(t.x(1)) != (1, 0):
            return False
    return True


# -- order-theoretic and topological predicates ------------------------------------------


def is_well_ordered(s: BlockSet) -> bool:
    return all(b.ascending and (b.pattern is None or is_well_ordered(b.pattern))
               for b in s.blocks)


def is_bounded_below_every(s: BlockSet) -> bool:
    """Every z in Q has s below z bounded strictly below z.

    Fails exactly when some rational is the limit of an ascending sequence
    of elements, i.e. an ascending block (or a pattern copy) has a rational limit.
    """
    for b in s.blocks:
        if b.ascending and b.is_geometric:
            return False
        if b.pattern is not None and not is_bounded_below_every(b.pattern):
            return False
    return True


def derivative(s: BlockSet) -> BlockSet:
    """Cantor-Bendixson derivative of the closure of ``s`` (within Q)."""
    s = s.closure()
    pts, blks = [], []
    for b in s.blocks:
        inner = None if b.pattern is None else derivative(b.pattern)
        if inner is None or inner.is_empty():
            if b.is_geometric:
                pts.append(b.limit)
        else:
            blks.append(replace(b, pattern=inner))
    return BlockSet(tuple(pts), tuple(blks))


def cb_rank(s: BlockSet) -> int:
    """Number of derivatives of the closure needed to reach the empty set."""
    rank = 0
    while not s.is_empty():
        s = derivative(s)
        rank += 1
    return rank


def is_subset(s: BlockSet, t: BlockSet) -> bool:
    """Decide ``s <= t`` on representations.

    Complete whenever each block of ``s`` has a tail inside a single block of
    ``t`` (always the case for sets built by unions and images); otherwise
    answers False.
    """
    if not all(t.contains(p) for p in s.points):
        return False
    for b in s.blocks:
        if not _block_in(b, t):
            return False
    return True


def _block_in(b: Block, t: BlockSet) -> bool:
    if b.limit_included and not t.contains(b.limit):
        return False
    for c in t.blocks:
        if (c.ratio != b.ratio or c.offset != b.offset or c.pattern != b.pattern
                or (b.scale > 0) != (c.scale > 0)):
            continue
        if b.ratio is not None:
            m = _log_exact(b.scale / c.scale, b.ratio)
            if m is None:
                continue
            head = max(0, -m)
        else:
            if b.scale != c.scale:
                continue
            head = max(0, c.skip - b.skip)
        return all(is_subset(b.element_set(k), t) for k in range(head))
    return False


def standard_rank_set(rank: int) -> BlockSet:
    """A closed subset of [0, 1/2] of the given Cantor-Bendixson rank."""
    if rank <= 0:
        return BlockSet()
    if rank == 1:
        return BlockSet(points=(Fraction(0),))
    inner = None if rank == 2 else standard_rank_set(rank - 1)
    return BlockSet(blocks=(Block.geometric(0, Fraction(1, 2), Fraction(1, 2), True, inner),))


def points_set(xs: Iterable) -> BlockSet:
    return BlockSet(points=tuple(xs))


__all__ = [
    "Block",
    "BlockSet",
    "QuadExt",
    "cb_rank",
    "derivative",
    "extreme_in",
    "fixes_blockset",
    "hull_components",
    "hull_gaps",
    "image_blockset",
    "is_bounded_below_every",
    "is_subset",
    "is_well_ordered",
    "pell",
    "points_set",
    "standard_rank_set",
]


# -- restriction to open intervals ----------------------------------------------------


def _inside(x, lo, hi) -> bool:
    return lo < x < hi


def extreme_in(s: BlockSet, lo, hi, want_min: bool):
    """inf (``want_min``) or sup of ``s`` restricted to the open interval (lo, hi).

    Returns None for an empty restriction.  The value may be a non-member
    (an excluded or irrational limit, or ``hi``/``lo`` themselves when a
    block accumulates there).
    """
    cands = [p for p in s.points if _inside(p, lo, hi)]
    for b in s.blocks:
        v = _block_extreme(b, lo, hi, want_min)
        if v is not None:
            cands.append(v)
    if not cands:
        return None
    return min(cands) if want_min else max(cands)


def _block_extreme(b: Block, lo, hi, want_min: bool):
    lim = b.limit
    fwd, back = (hi, lo) if b.ascending else (lo, hi)  # interval ends toward / away from lim
    if not b._before(back, lim):
        return None
    near_start = want_min == b.ascending
    if not near_start and (b._before(lim, fwd) or lim == fwd):
        return lim
    best = None
    k = 0
    while True:
        e = b.element_set(k)
        elo, ehi = e.bounds()
        if not b._before(elo if b.ascending else ehi, fwd):
            return best
        v = extreme_in(e, lo, hi, want_min)
        if v is not None:
            if near_start:
                return v
            best = v
        k += 1


def hull_components(s: BlockSet) -> list:
    """Merged closed hulls ``[inf, sup]`` of the points and blocks of ``s``."""
    items = [(p, p) for p in s.points] + [b.bounds() for b in s.blocks]
    items.sort(key=cmp_to_key(lambda u, v: -1 if u[0] < v[0] else (1 if v[0] < u[0] else 0)))
    out = []
    for lo, hi in items:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
            continue
        out.append((lo, hi))
    return out


def hull_gaps(s: BlockSet) -> list:
    """Open intervals between consecutive hull components (ends may be infinite)."""
    from .numbers import INF

    comps = hull_components(s)
    if not comps:
        return [(-INF, INF)]
    out = [(-INF, comps[0][0])]
    for (_, h0), (l1, _) in zip(comps, comps[1:]):
        out.append((h0, l1))
    out.append((comps[-1][1], INF))
    return out
