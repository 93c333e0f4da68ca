"""Order-preserving piecewise-linear bijections of the rational line.

A :class:`PLMap` is stored as strictly increasing rational breakpoints
``t_1 < ... < t_m`` and ``m + 1`` affine pieces ``x -> s*x + o`` with
``s > 0``.  Piece ``i`` governs ``[t_i, t_{i+1}]`` (piece 0 extends to
minus infinity, the last piece to plus infinity).  Adjacent pieces agree at
their shared breakpoint, and the canonical form never keeps a breakpoint
whose two neighbouring pieces coincide, so two maps are equal exactly when
their representations are.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import ParseError, PreconditionError
from .numbers import INF, Q, format_rational, parse_rational

Piece = tuple  # (slope, offset)


@dataclass(frozen=True)
class PLMap:
    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        bps = tuple(Q(t) for t in self.breakpoints)
        pcs = tuple((Q(s), Q(o)) for s, o in self.pieces)
        if len(pcs) != len(bps) + 1:
            raise PreconditionError("a PLMap needs exactly one more piece than breakpoints")
        for s, _ in pcs:
            if s <= 0:
                raise PreconditionError("PLMap slopes must be positive")
        for t0, t1 in zip(bps, bps[1:]):
            if not t0 < t1:
                raise PreconditionError("breakpoints must be strictly increasing")
        for i, t in enumerate(bps):
            (s0, o0), (s1, o1) = pcs[i], pcs[i + 1]
            if s0 * t + o0 != s1 * t + o1:
                raise PreconditionError(f"PLMap is discontinuous at {t}")
        # canonical form: drop breakpoints between identical pieces
        keep_b, keep_p = [], [pcs[0]]
        for i, t in enumerate(bps):
            if pcs[i + 1] != keep_p[-1]:
                keep_b.append(t)
                keep_p.append(pcs[i + 1])
        object.__setattr__(self, "breakpoints", tuple(keep_b))
        object.__setattr__(self, "pieces", tuple(keep_p))

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls) -> "PLMap":
        return cls((), ((Fraction(1), Fraction(0)),))

    @classmethod
    def affine(cls, slope, offset) -> "PLMap":
        return cls((), ((Q(slope), Q(offset)),))

    @classmethod
    def translation(cls, by) -> "PLMap":
        return cls.affine(1, by)

    @classmethod
    def from_knots(cls, knots: Iterable, left_slope=1, right_slope=1) -> "PLMap":
        """Interpolate increasing knots ``(x, y)``; end pieces use the given slopes."""
        pts = [(Q(x), Q(y)) for x, y in knots]
        if not pts:
            if Q(left_slope) != Q(right_slope):
                raise PreconditionError("without knots the two end slopes must agree")
            return cls.affine(left_slope, 0)
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x0 < x1 and y0 < y1):
                raise PreconditionError("knots must be strictly increasing in both coordinates")
        ls, rs = Q(left_slope), Q(right_slope)
        x0, y0 = pts[0]
        pieces = [(ls, y0 - ls * x0)]
        for (xa, ya), (xb, yb) in zip(pts, pts[1:]):
            s = (yb - ya) / (xb - xa)
            pieces.append((s, ya - s * xa))
        xn, yn = pts[-1]
        pieces.append((rs, yn - rs * xn))
        return cls(tuple(x for x, _ in pts), tuple(pieces))

    # -- evaluation -----------------------------------------------------------
    def piece_index(self, x) -> int:
        """Index of a piece whose closed domain contains ``x``."""
        return bisect_left(self.breakpoints, x)

    def piece_at(self, x) -> Piece:
        return self.pieces[self.piece_index(x)]

    def __call__(self, x):
        return pl_apply(self, x)

    def is_identity(self) -> bool:
        return self.pieces == ((1, 0),)

    def piece_domain(self, i):
        lo = self.breakpoints[i - 1] if i > 0 else -INF
        hi = self.breakpoints[i] if i < len(self.breakpoints) else INF
        return lo, hi

    def identity_on(self, lo, hi) -> bool:
        """True iff the map is the identity on the closed interval [lo, hi]."""
        if lo == hi:
            return lo == INF or lo == -INF or self(lo) == lo
        return all(self.pieces[i] == (1, 0) for i in self._pieces_over_open(lo, hi))

    def _pieces_over_open(self, lo, hi):
        # pieces whose domain meets the open interval (lo, hi)
        first = bisect_right(self.breakpoints, lo) if lo != -INF else 0
        last = bisect_left(self.breakpoints, hi) if hi != INF else len(self.breakpoints)
        return range(first, last + 1)

    def __mul__(self, other: "PLMap") -> "PLMap":
        return pl_compose(self, other)

    def inverse(self) -> "PLMap":
        return pl_invert(self)

    # -- text -----------------------------------------------------------------
    def to_text(self) -> str:
        bps = " ".join(format_rational(t) for t in self.breakpoints)
        pcs = " ".join(f"{format_rational(s)}:{format_rational(o)}" for s, o in self.pieces)
        return f"PL[{bps} | {pcs}]"

    @classmethod
    def from_text(cls, text: str) -> "PLMap":
        text = text.strip()
        if not (text.startswith("PL[") and text.endswith("]")) or "|" not in text:
            raise ParseError(f"not a PLMap: {text!r}")
        body = text[3:-1]
        left, right = body.split("|", 1)
        bps = [parse_rational(t) for t in left.split()]
        pcs = []
        for tok in right.split():
            s, _, o = tok.partition(":")
            pcs.append((parse_rational(s), parse_rational(o)))
        return cls(tuple(bps), tuple(pcs))

    def to_json(self):
        return {
            "breakpoints": [format_rational(t) for t in self.breakpoints],
            "pieces": [[format_rational(s), format_rational(o)] for s, o in self.pieces],
        }

    @classmethod
    def from_json(cls, data) -> "PLMap":
        return cls(
            tuple(parse_rational(t) for t in data["breakpoints"]),
            tuple((parse_rational(s), parse_rational(o)) for s, o in data["pieces"]),
        )

    def __str__(self):
        return self.to_text()


def pl_apply(f: PLMap, x):
    """Exact image of a rational, a Q(sqrt 2) number, or +-infinity."""
    if x == INF or x == -INF:
        return x
    s, o = f.piece_at(x)
    return s * x + o


def pl_invert(f: PLMap) -> PLMap:
    bps = tuple(s * t + o for t, (s, o) in zip(f.breakpoints, f.pieces))
    pcs = tuple((1 / s, -o / s) for s, o in f.pieces)
    return PLMap(bps, pcs)


def pl_compose(f: PLMap, g: PLMap) -> PLMap:
    """The map ``x -> f(g(x))``."""
    ginv = pl_invert(g)
    cuts = sorted(set(g.breakpoints) | {pl_apply(ginv, t) for t in f.breakpoints})
    if not cuts:
        samples = [Fraction(0)]
    else:
        samples = [cuts[0] - 1]
        samples += [(a + b) / 2 for a, b in zip(cuts, cuts[1:])]
        samples.append(cuts[-1] + 1)
    pieces = []
    for x in samples:
        sg, og = g.piece_at(x)
        sf, of = f.piece_at(sg * x + og)
        pieces.append((sf * sg, sf * og + of))
    return PLMap(tuple(cuts), tuple(pieces))


def compose_all(maps: Sequence[PLMap]) -> PLMap:
    """``maps[0] o maps[1] o ...`` (the last map is applied first)."""
    out = PLMap.identity()
    for m in maps:
        out = pl_compose(out, m)
    return out
