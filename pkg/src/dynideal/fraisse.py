"""Finite structures, canonical amalgamation and its laws, chains, conjugation witnesses.

Four signatures are supported:

* ``pure-set``: a bare label set.
* ``ultrametric``: a rational distance for every pair of labels.
* ``vector-space-q``: a vector space over GF(q), q prime, stored as a map from
  labels to coordinate tuples; the labels must cover the whole span.
* ``quad-selector``: every 4-element subset selects a 2-element subset.

The first three have a canonical amalgamation operator; the last one does
not, which :func:`no_canonical_amalgam_search` confirms exhaustively.

Automorphisms and isomorphisms are plain ``dict`` objects from labels to labels.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Optional

from .errors import (
    AxiomViolation,
    HostTooSmall,
    NotAmalgamable,
    PreconditionError,
    SearchBudgetExceeded,
)

SIGNATURES = ("pure-set", "vector-space-q", "ultrametric", "quad-selector")
CANONICAL = ("pure-set", "vector-space-q", "ultrametric")
DEFAULT_PALETTE = (Fraction(1), Fraction(2), Fraction(3))


def _lkey(label):
    """Total order on mixed labels (ints, strings, nested tuples)."""
    if isinstance(label, bool) or not isinstance(label, (int, str, tuple)):
        return (3, repr(label))
    if isinstance(label, int):
        return (0, label)
    if isinstance(label, str):
        return (1, label)
    return (2, tuple(_lkey(x) for x in label))


def _sorted(labels):
    return sorted(labels, key=_lkey)


def label_to_json(label):
    if isinstance(label, tuple):
        return [label_to_json(x) for x in label]
    return label


def label_from_json(obj):
    if isinstance(obj, list):
        return tuple(label_from_json(x) for x in obj)
    return obj


# -- linear algebra over GF(p) -----------------------------------------------------


class _Basis:
    """Incremental echelon basis over GF(p) remembering how rows combine the inputs."""

    def __init__(self, p: int):
        self.p = p
        self.rows = []
        self.inputs = []

    def reduce(self, v):
        p = self.p
        v = [x % p for x in v]
        comb = {}
        for piv, row, rc in self.rows:
            c = v[piv]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, row)]
                for i, k in rc.items():
                    comb[i] = (comb.get(i, 0) + c * k) % p
        return v, comb

    def add(self, v) -> bool:
        res, comb = self.reduce(v)
        if not any(res):
            return False
        p = self.p
        idx = len(self.inputs)
        self.inputs.append(tuple(v))
        piv = next(i for i, x in enumerate(res) if x)
        inv = pow(res[piv], p - 2, p)
        row = [x * inv % p for x in res]
        rc = {idx: inv}
        for i, k in comb.items():
            rc[i] = (rc.get(i, 0) - inv * k) % p
        self.rows.append((piv, row, rc))
        return True

    def contains(self, v) -> bool:
        return not any(self.reduce(v)[0])

    def coords(self, v) -> list:
        res, comb = self.reduce(v)
        if any(res):
            raise PreconditionError("vector outside the span")
        return [comb.get(i, 0) for i in range(len(self.inputs))]

    @property
    def dim(self) -> int:
        return len(self.inputs)


def _vadd(u, v, p):
    return tuple((x + y) % p for x, y in zip(u, v))


def _vscale(c, u, p):
    return tuple(c * x % p for x in u)


def _combine(coeffs, vectors, p, n):
    out = [0] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                out[i] = (out[i] + c * x) % p
    return tuple(out)


def _all_vectors(n, p):
    return [tuple(v) for v in product(range(p), repeat=n)]


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q ** 0.5) + 1))


# -- structures --------------------------------------------------------------------


@dataclass(frozen=True)
class FinStructure:
    """A finite structure in one of the supported signatures.

    ``dist`` maps ``frozenset({x, y})`` to a positive Fraction; ``vec`` maps
    labels to coordinate tuples over GF(q); ``selector`` maps 4-element
    frozensets to 2-element frozensets.  ``tree`` is set on regular
    ultrametric hosts as ``(branching, labels in leaf order)``.
    """

    signature: str
    universe: tuple
    dist: Optional[dict] = None
    vec: Optional[dict] = None
    q: Optional[int] = None
    selector: Optional[dict] = None
    palette: Optional[tuple] = None
    tree: Optional[tuple] = None

    def __len__(self):
        return len(self.universe)

    def labels(self) -> frozenset:
        return frozenset(self.universe)

    def d(self, x, y) -> Fraction:
        if x == y:
            return Fraction(0)
        return self.dist[frozenset((x, y))]

    # vector helpers
    def label_of(self) -> dict:
        return {v: x for x, v in self.vec.items()}

    @property
    def dim(self) -> int:
        basis = _Basis(self.q)
        for x in self.universe:
            basis.add(self.vec[x])
        return basis.dim

    def zero(self):
        n = len(next(iter(self.vec.values())))
        return self.label_of()[(0,) * n]

    def check_axioms(self) -> None:
        """Raise :class:`AxiomViolation` unless the signature axioms hold."""
        if len(set(self.universe)) != len(self.universe):
            raise AxiomViolation("repeated labels")
        sig = self.signature
        if sig not in SIGNATURES:
            raise AxiomViolation(f"unknown signature {sig!r}")
        if sig == "ultrametric":
            _check_ultrametric(self)
        elif sig == "vector-space-q":
            _check_vector_space(self)
        elif sig == "quad-selector":
            _check_selector(self)

    def induced(self, sub) -> "FinStructure":
        """Induced substructure; vector spaces require a subspace."""
        sub = set(sub)
        if not sub <= self.labels():
            raise PreconditionError("labels outside the universe")
        uni = tuple(_sorted(sub))
        sig = self.signature
        if sig == "pure-set":
            return FinStructure(sig, uni)
        if sig == "ultrametric":
            dist = {k: v for k, v in self.dist.items() if k <= sub}
            return FinStructure(sig, uni, dist=dist, palette=self.palette)
        if sig == "vector-space-q":
            if acl(self, sub) != frozenset(sub):
                raise PreconditionError("vector-space substructures must be subspaces")
            return FinStructure(sig, uni, vec={x: self.vec[x] for x in uni}, q=self.q)
        table = {k: v for k, v in self.selector.items() if k <= sub}
        return FinStructure(sig, uni, selector=table)

    def relabel(self, mapping: dict) -> "FinStructure":
        """Copy with labels renamed by ``mapping`` (missing labels stay)."""
        m = lambda x: mapping.get(x, x)
        uni = tuple(_sorted(m(x) for x in self.universe))
        if len(set(uni)) != len(uni):
            raise PreconditionError("relabelling is not injective")
        sig = self.signature
        if sig == "pure-set":
            return FinStructure(sig, uni)
        if sig == "ultrametric":
            dist = {frozenset(m(x) for x in k): v for k, v in self.dist.items()}
            return FinStructure(sig, uni, dist=dist, palette=self.palette)
        if sig == "vector-space-q":
            return FinStructure(sig, uni, vec={m(x): v for x, v in self.vec.items()}, q=self.q)
        table = {frozenset(m(x) for x in k): frozenset(m(x) for x in v)
                 for k, v in self.selector.items()}
        return FinStructure(sig, uni, selector=table)

    def to_json(self) -> dict:
        out = {"signature": self.signature,
               "universe": [label_to_json(x) for x in self.universe]}
        if self.tree is not None:
            # regular tree hosts are rebuilt from branching, palette and leaf order
            out["palette"] = [str(v) for v in self.palette]
            out["tree"] = {"branching": self.tree[0],
                           "leaves": [label_to_json(x) for x in self.tree[1]]}
            return out
        if self.dist is not None:
            out["dist"] = sorted(
                ([label_to_json(x) for x in _sorted(k)] + [str(v)] for k, v in self.dist.items()),
                key=lambda r: _lkey(tuple(label_from_json(x) for x in r[:2])))
        if self.palette is not None:
            out["palette"] = [str(v) for v in self.palette]
        if self.vec is not None:
            out["q"] = self.q
            out["vec"] = [[label_to_json(x), list(self.vec[x])] for x in self.universe]
        if self.selector is not None:
            out["selector"] = [
                [[label_to_json(x) for x in _sorted(k)], [label_to_json(x) for x in _sorted(v)]]
                for k, v in sorted(self.selector.items(), key=lambda kv: _lkey(tuple(_sorted(kv[0]))))]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FinStructure":
        sig = obj["signature"]
        uni = tuple(_sorted(label_from_json(x) for x in obj["universe"]))
        if "tree" in obj:
            leaves = tuple(label_from_json(x) for x in obj["tree"]["leaves"])
            base = regular_ultrametric([Fraction(v) for v in obj["palette"]],
                                       int(obj["tree"]["branching"]))
            built = base.relabel(dict(enumerate(leaves)))
            if built.universe != uni:
                raise PreconditionError("tree leaves do not match the universe")
            return cls(sig, uni, dist=built.dist, palette=built.palette,
                       tree=(int(obj["tree"]["branching"]), leaves))
        kw = {}
        if "dist" in obj:
            kw["dist"] = {frozenset((label_from_json(r[0]), label_from_json(r[1]))): Fraction(r[2])
                          for r in obj["dist"]}
        if "palette" in obj:
            kw["palette"] = tuple(Fraction(v) for v in obj["palette"])
        if "vec" in obj:
            kw["q"] = int(obj["q"])
            kw["vec"] = {label_from_json(x): tuple(v) for x, v in obj["vec"]}
        if "selector" in obj:
            kw["selector"] = {frozenset(label_from_json(x) for x in k): frozenset(label_from_json(x) for x in v)
                              for k, v in obj["selector"]}
        return cls(sig, uni, **kw)


def pure_set(labels) -> FinStructure:
    return FinStructure("pure-set", tuple(_sorted(set(labels))))


def ultrametric(distances: dict, labels=(), palette=DEFAULT_PALETTE) -> FinStructure:
    """Build from ``{(x, y): d}``; every pair of labels must be given."""
    pts = set(labels)
    dist = {}
    for (x, y), v in distances.items():
        pts.update((x, y))
        dist[frozenset((x, y))] = Fraction(v)
    s = FinStructure("ultrametric", tuple(_sorted(pts)), dist=dist,
                     palette=tuple(Fraction(v) for v in palette))
    s.check_axioms()
    return s


def vector_space(vectors: dict, q: int = 2) -> FinStructure:
    s = FinStructure("vector-space-q", tuple(_sorted(vectors)),
                     vec={x: tuple(v) for x, v in vectors.items()}, q=q)
    s.check_axioms()
    return s


def standard_space(dim: int, q: int = 2, offset: int = 0) -> FinStructure:
    """GF(q)^dim labelled by integers in lexicographic coordinate order."""
    vecs = _all_vectors(dim, q)
    return vector_space({offset + i: v for i, v in enumerate(vecs)}, q)


def quad_selector(labels, table: dict) -> FinStructure:
    s = FinStructure("quad-selector", tuple(_sorted(set(labels))),
                     selector={frozenset(k): frozenset(v) for k, v in table.items()})
    s.check_axioms()
    return s


def empty_structure(signature: str, q: int = 2, palette=DEFAULT_PALETTE) -> FinStructure:
    """The smallest structure: empty, or the zero space for vector spaces."""
    if signature == "vector-space-q":
        return FinStructure(signature, (0,), vec={0: ()}, q=q)
    if signature == "ultrametric":
        return FinStructure(signature, (), dist={}, palette=tuple(Fraction(v) for v in palette))
    if signature == "quad-selector":
        return FinStructure(signature, (), selector={})
    return FinStructure(signature, ())


def regular_ultrametric(palette=DEFAULT_PALETTE, branching: int = 3) -> FinStructure:
    """Leaves of a rooted tree where every node has ``branching`` children.

    Two leaves first splitting at depth ``i`` are at distance
    ``sorted(palette)[-1 - i]``.  Such a space is ultrahomogeneous.
    """
    levels = sorted(Fraction(v) for v in palette)[::-1]
    depth = len(levels)
    leaves = list(product(range(branching), repeat=depth))
    dist = {}
    for i, j in combinations(range(len(leaves)), 2):
        split = next(t for t in range(depth) if leaves[i][t] != leaves[j][t])
        dist[frozenset((i, j))] = levels[split]
    return FinStructure("ultrametric", tuple(range(len(leaves))), dist=dist,
                        palette=tuple(sorted(levels)), tree=(branching, tuple(range(len(leaves)))))


def widen_tree(H: FinStructure, branching: int) -> FinStructure:
    """A regular ultrametric host with more branching that contains ``H`` unchanged."""
    if H.tree is None:
        raise PreconditionError("only regular ultrametric hosts can be widened")
    old_b, leaves = H.tree
    if branching < old_b:
        raise PreconditionError("branching can only grow")
    depth = len(H.palette)
    big = regular_ultrametric(H.palette, branching)
    fresh = 1 + max((x for x in leaves if isinstance(x, int)), default=-1)
    names = []
    for digits in product(range(branching), repeat=depth):
        if all(t < old_b for t in digits):
            idx = 0
            for t in digits:
                idx = idx * old_b + t
            names.append(leaves[idx])
        else:
            names.append(fresh)
            fresh += 1
    out = big.relabel(dict(enumerate(names)))
    return FinStructure("ultrametric", out.universe, dist=out.dist, palette=out.palette,
                        tree=(branching, tuple(names)))


def _check_ultrametric(s: FinStructure):
    pts = s.universe
    for x, y in combinations(pts, 2):
        v = s.dist.get(frozenset((x, y)))
        if v is None or v <= 0:
            raise AxiomViolation(f"missing or non-positive distance {x!r}-{y!r}")
        if s.palette and v not in s.palette:
            raise AxiomViolation(f"distance {v} outside the palette")
    if len(s.dist) != len(pts) * (len(pts) - 1) // 2:
        raise AxiomViolation("distance table mentions unknown labels")
    for x, y, z in combinations(pts, 3):
        a, b, c = s.d(x, y), s.d(y, z), s.d(x, z)
        if a > max(b, c) or b > max(a, c) or c > max(a, b):
            raise AxiomViolation(f"ultrametric inequality fails on {x!r}, {y!r}, {z!r}")


def _check_vector_space(s: FinStructure):
    p = s.q
    if not _is_prime(p):
        raise AxiomViolation(f"field size {p} is not prime")
    vecs = list(s.vec.values())
    if set(s.vec) != set(s.universe) or not vecs:
        raise AxiomViolation("every label needs a vector")
    n = len(vecs[0])
    if any(len(v) != n or any(not 0 <= c < p for c in v) for v in vecs):
        raise AxiomViolation("coordinates out of range")
    if len(set(vecs)) != len(vecs):
        raise AxiomViolation("two labels share a vector")
    basis = _Basis(p)
    for v in vecs:
        basis.add(v)
    # the labelled set is closed under the operations iff it has p^rank elements
    if len(vecs) != p ** basis.dim:
        raise AxiomViolation("labels do not form a subspace")


def _check_selector(s: FinStructure):
    pts = set(s.universe)
    quads = {frozenset(c) for c in combinations(s.universe, 4)}
    if set(s.selector) != quads:
        raise AxiomViolation("selector must be defined exactly on 4-element subsets")
    for k, v in s.selector.items():
        if len(v) != 2 or not v <= k or not k <= pts:
            raise AxiomViolation("selector output must be a pair inside its quadruple")


def acl(s: FinStructure, subset) -> frozenset:
    """Algebraic closure: the span for vector spaces, the set itself otherwise."""
    subset = frozenset(subset)
    if s.signature != "vector-space-q":
        return subset
    basis = _Basis(s.q)
    for x in _sorted(subset):
        basis.add(s.vec[x])
    return frozenset(x for x in s.universe if basis.contains(s.vec[x]))


# -- maps ----------------------------------------------------------------------------


def preserves(S: FinStructure, T: FinStructure, f: dict) -> bool:
    """Whether the injective map ``f`` (defined on all of S) embeds S into T."""
    if set(f) != set(S.universe) or len(set(f.values())) != len(f):
        return False
    if not set(f.values()) <= T.labels():
        return False
    sig = S.signature
    if sig != T.signature:
        return False
    if sig == "ultrametric":
        return all(T.d(f[x], f[y]) == v for k, v in S.dist.items() for x, y in [tuple(k)])
    if sig == "quad-selector":
        for k, v in S.selector.items():
            img = frozenset(f[x] for x in k)
            if T.selector.get(img) != frozenset(f[x] for x in v):
                return False
        return True
    if sig == "vector-space-q":
        if S.q != T.q:
            return False
        p = S.q
        basis = _Basis(p)
        chosen = []
        for x in S.universe:
            if basis.add(S.vec[x]):
                chosen.append(x)
        n = len(next(iter(T.vec.values())))
        images = [T.vec[f[x]] for x in chosen]
        for x in S.universe:
            if T.vec[f[x]] != _combine(basis.coords(S.vec[x]), images, p, n):
                return False
        return True
    return True


def is_isomorphism(S: FinStructure, T: FinStructure, f: dict) -> bool:
    return len(S) == len(T) and preserves(S, T, f)


def _compatible(S, T, f, x, t, slab=None, tlab=None) -> bool:
    """Local consistency of extending ``f`` by ``x -> t``."""
    sig = S.signature
    if sig == "ultrametric":
        return all(T.d(t, f[y]) == S.d(x, y) for y in f)
    if sig == "quad-selector":
        g = dict(f)
        g[x] = t
        for others in combinations(list(f), 3):
            quad = frozenset(others + (x,))
            img = frozenset(g[y] for y in quad)
            if T.selector[img] != frozenset(g[y] for y in S.selector[quad]):
                return False
        return True
    if sig == "vector-space-q":
        p = S.q
        sx, tt = S.vec[x], T.vec[t]
        for y, ty in f.items():
            s = slab[_vadd(sx, S.vec[y], p)]
            if s in f and f[s] != tlab.get(_vadd(tt, T.vec[ty], p)):
                return False
        for c in range(2, p):
            s = slab[_vscale(c, sx, p)]
            if s in f and f[s] != tlab.get(_vscale(c, tt, p)):
                return False
        return True
    return True


def find_embedding(S: FinStructure, T: FinStructure, partial: Optional[dict] = None,
                   onto: bool = False, rng: Optional[random.Random] = None,
                   budget: int = 200000) -> Optional[dict]:
    """Backtracking search for an embedding S -> T extending ``partial``."""
    if onto and len(S) != len(T):
        return None
    sadd, tadd = _tables(S, T)
    f = {}
    for x, t in (partial or {}).items():
        if t in f.values() or not _compatible(S, T, f, x, t, sadd, tadd):
            return None
        f[x] = t
    todo = [x for x in S.universe if x not in f]
    used = set(f.values())
    steps = [0]

    def go(i):
        if i == len(todo):
            return preserves(S, T, f)
        x = todo[i]
        cands = [t for t in T.universe if t not in used]
        if rng is not None:
            rng.shuffle(cands)
        elif x in cands:
            cands.remove(x)
            cands.insert(0, x)
        for t in cands:
            steps[0] += 1
            if steps[0] > budget:
                raise SearchBudgetExceeded(f"embedding search exceeded {budget} steps")
            if _compatible(S, T, f, x, t, sadd, tadd):
                f[x] = t
                used.add(t)
                if go(i + 1):
                    return True
                del f[x]
                used.discard(t)
        return False

    return dict(f) if go(0) else None


def _tables(S, T):
    if S.signature == "vector-space-q":
        return S.label_of(), T.label_of()
    return None, None


def find_isomorphism(S, T, partial=None, rng=None) -> Optional[dict]:
    return find_embedding(S, T, partial, onto=True, rng=rng)


def compose_maps(f: dict, g: dict) -> dict:
    """``x -> f[g[x]]``."""
    return {x: f[y] for x, y in g.items()}


def invert_map(f: dict) -> dict:
    return {y: x for x, y in f.items()}


def extend_to_automorphism(H: FinStructure, partial: dict,
                           rng: Optional[random.Random] = None) -> Optional[dict]:
    """An automorphism of ``H`` extending the partial isomorphism, or None."""
    sig = H.signature
    if not set(partial) <= H.labels() or not set(partial.values()) <= H.labels():
        raise PreconditionError("partial map leaves the host")
    if sig == "pure-set":
        if len(set(partial.values())) != len(partial):
            return None
        rest_d = [x for x in H.universe if x not in partial]
        rest_c = [x for x in H.universe if x not in set(partial.values())]
        if rng is not None:
            rng.shuffle(rest_c)
        else:
            fixed = [x for x in rest_d if x in set(rest_c)]
            rest_c = fixed + [x for x in rest_c if x not in set(fixed)]
            rest_d = fixed + [x for x in rest_d if x not in set(fixed)]
        out = dict(partial)
        out.update(zip(rest_d, rest_c))
        return out
    if sig == "vector-space-q":
        return _extend_linear(H, partial, rng)
    if sig == "ultrametric":
        if any(H.d(x, y) != H.d(partial[x], partial[y]) for x, y in combinations(partial, 2)):
            return None
        return _extend_balls(H, list(H.universe), list(H.universe), dict(partial), rng)
    return find_embedding(H, H, partial, onto=True, rng=rng)


def _balls(H, pts):
    """Split ``pts`` into the classes of distance below its diameter."""
    top = max(H.d(x, y) for x, y in combinations(pts, 2))
    classes = []
    for x in pts:
        for c in classes:
            if H.d(x, c[0]) < top:
                c.append(x)
                break
        else:
            classes.append([x])
    return top, classes


def _extend_balls(H, P, Q, partial, rng) -> Optional[dict]:
    """Isometry P -> Q extending ``partial``, matching balls level by level."""
    if len(P) != len(Q):
        return None
    if len(P) <= 1:
        out = dict(zip(P, Q))
        return out if all(out[x] == y for x, y in partial.items()) else None
    dp, cp = _balls(H, P)
    dq, cq = _balls(H, Q)
    if dp != dq or len(cp) != len(cq):
        return None
    where = {x: j for j, c in enumerate(cq) for x in c}
    forced = {}
    for i, c in enumerate(cp):
        hits = {where[partial[x]] for x in c if x in partial}
        if len(hits) > 1:
            return None
        if hits:
            forced[i] = hits.pop()
    if len(set(forced.values())) != len(forced):
        return None
    out = {}
    free_q = [j for j in range(len(cq)) if j not in set(forced.values())]
    for i, j in forced.items():
        sub = {x: partial[x] for x in cp[i] if x in partial}
        got = _extend_balls(H, cp[i], cq[j], sub, rng)
        if got is None:
            return None
        out.update(got)
    free_p = [i for i in range(len(cp)) if i not in forced]
    if rng is not None:
        rng.shuffle(free_q)
    for i in free_p:
        for j in free_q:
            got = _extend_balls(H, cp[i], cq[j], {}, rng)
            if got is not None:
                out.update(got)
                free_q.remove(j)
                break
        else:
            return None
    return out


def _extend_linear(H: FinStructure, partial: dict, rng) -> Optional[dict]:
    p = H.q
    n = len(next(iter(H.vec.values())))
    dom = _Basis(p)
    cod = _Basis(p)
    dom_labels = []
    for x in _sorted(partial):
        if dom.add(H.vec[x]):
            dom_labels.append(x)
            if not cod.add(H.vec[partial[x]]):
                return None
    # partial must be linear on its domain
    images = [H.vec[partial[x]] for x in dom_labels]
    for x in partial:
        if _combine(dom.coords(H.vec[x]), images, p, n) != H.vec[partial[x]]:
            return None
    order = list(H.universe)
    if rng is not None:
        order = order[:]
        rng.shuffle(order)
    src, dst = list(dom_labels), [partial[x] for x in dom_labels]
    extra_d = [x for x in order if dom.add(H.vec[x])]
    order2 = list(H.universe)
    if rng is not None:
        order2 = order2[:]
        rng.shuffle(order2)
    elif acl(H, dst) == acl(H, src):
        order2 = extra_d + order2
    extra_c = [x for x in order2 if cod.add(H.vec[x])]
    src += extra_d
    dst += extra_c
    full = _Basis(p)
    for x in src:
        full.add(H.vec[x])
    lab = H.label_of()
    tgt = [H.vec[y] for y in dst]
    return {x: lab[_combine(full.coords(H.vec[x]), tgt, p, n)] for x in H.universe}


# -- amalgamation --------------------------------------------------------------------


@dataclass
class AmalgamResult:
    C: FinStructure
    left: dict
    right: dict

    def to_json(self) -> dict:
        enc = lambda m: [[label_to_json(k), label_to_json(v)] for k, v in sorted(m.items(), key=lambda kv: _lkey(kv[0]))]
        return {"C": self.C.to_json(), "left": enc(self.left), "right": enc(self.right)}


def _check_position(signature, A, B):
    for s in (A, B):
        if s.signature != signature:
            raise PreconditionError(f"expected signature {signature!r}, got {s.signature!r}")
        s.check_axioms()
    common = A.labels() & B.labels()
    if signature == "vector-space-q":
        if A.q != B.q:
            raise PreconditionError("different fields")
        if not common:
            raise PreconditionError("vector spaces must share at least their zero")
    sa, sb = A.induced(common), B.induced(common)
    if not preserves(sa, sb, {x: x for x in common}):
        raise PreconditionError("structures disagree on their common part")
    return common


def amalgamate(signature: str, A: FinStructure, B: FinStructure) -> AmalgamResult:
    """The canonical minimal disjoint amalgam of A and B over their common labels."""
    if signature == "quad-selector":
        raise NotAmalgamable("the quadruple-selector class has no canonical amalgamation")
    if signature not in CANONICAL:
        raise PreconditionError(f"unknown signature {signature!r}")
    common = _check_position(signature, A, B)
    ident_a = {x: x for x in A.universe}
    ident_b = {x: x for x in B.universe}
    if signature == "pure-set":
        return AmalgamResult(pure_set(A.labels() | B.labels()), ident_a, ident_b)
    if signature == "ultrametric":
        return AmalgamResult(_ultra_amalgam(A, B, common), ident_a, ident_b)
    return AmalgamResult(_vector_amalgam(A, B, common), ident_a, ident_b)


def _ultra_amalgam(A, B, common) -> FinStructure:
    palette = A.palette or B.palette or DEFAULT_PALETTE
    dist = dict(A.dist)
    dist.update(B.dist)
    zs = _sorted(common)
    for x in _sorted(A.labels() - common):
        for y in _sorted(B.labels() - common):
            dist[frozenset((x, y))] = _cross_distance(A, B, zs, x, y, palette)
    return FinStructure("ultrametric", tuple(_sorted(A.labels() | B.labels())),
                        dist=dist, palette=palette)


def _cross_distance(A, B, zs, x, y, palette) -> Fraction:
    """Largest forced value if some common point separates, else the smallest shared one."""
    if not zs:
        return max(palette)
    for z in zs:
        u, v = A.d(x, z), B.d(z, y)
        if u != v:
            return max(u, v)
    return min(A.d(x, z) for z in zs)


def _vector_amalgam(A, B, common) -> FinStructure:
    p = A.q
    kb = _Basis(p)
    k_labels = [x for x in _sorted(common) if kb.add(A.vec[x])]
    ab = _Basis(p)
    for x in k_labels:
        ab.add(A.vec[x])
    a_extra = [x for x in A.universe if ab.add(A.vec[x])]
    bb = _Basis(p)
    for x in k_labels:
        bb.add(B.vec[x])
    b_extra = [x for x in B.universe if bb.add(B.vec[x])]
    r, s, t = len(k_labels), len(a_extra), len(b_extra)

    def from_a(x):
        c = ab.coords(A.vec[x])
        return tuple(c[:r]) + tuple(c[r:]) + (0,) * t

    def from_b(y):
        c = bb.coords(B.vec[y])
        return tuple(c[:r]) + (0,) * s + tuple(c[r:])

    vec = {}
    for x in A.universe:
        vec[x] = from_a(x)
    for y in B.universe:
        v = from_b(y)
        if y in vec and vec[y] != v:
            raise PreconditionError("common part is not linearly compatible")
        vec[y] = v
    taken = set(vec.values())
    best = {}
    for x in A.universe:
        if x in common:
            continue
        va = vec[x]
        for y in B.universe:
            if y in common:
                continue
            w = _vadd(va, vec[y], p)
            if w in taken:
                continue
            key = (_lkey(x), _lkey(y))
            if w not in best or key < best[w][0]:
                best[w] = (key, ("+", x, y))
    for w, (_, lab) in best.items():
        vec[lab] = w
    out = FinStructure("vector-space-q", tuple(_sorted(vec)), vec=vec, q=p)
    if len(vec) != p ** (r + s + t):
        raise AxiomViolation("vector amalgam is not the full span")
    return out


def verify_amalgam(A: FinStructure, B: FinStructure, res: AmalgamResult) -> dict:
    """Law checks for one amalgam: axioms, embeddings, disjointness, minimality."""
    C = res.C
    checks = {}
    try:
        C.check_axioms()
        checks["axioms"] = True
    except AxiomViolation:
        checks["axioms"] = False
    checks["left_embeds"] = preserves(A, C, res.left)
    checks["right_embeds"] = preserves(B, C, res.right)
    common = A.labels() & B.labels()
    checks["agree_on_common"] = all(res.left[x] == res.right[x] for x in common)
    img_a, img_b = set(res.left.values()), set(res.right.values())
    checks["disjoint"] = img_a & img_b == {res.left[x] for x in common}
    checks["minimal"] = acl(C, img_a | img_b) == C.labels()
    if C.signature == "vector-space-q":
        da, db = A.dim, B.dim
        dk = A.induced(common).dim
        checks["dimension_law"] = C.dim == da + db - dk
    return checks


def check_invariance(signature, A, B, phi: dict, psi: dict, operator=None) -> bool:
    """Whether C(A, B) -> C(A', B') has an isomorphism extending phi and psi.

    ``A'`` and ``B'`` are the images of A and B under the relabellings phi, psi.
    ``operator`` defaults to :func:`amalgamate`; pass another to test it.
    """
    op = operator or amalgamate
    common = A.labels() & B.labels()
    if any(phi[x] != psi[x] for x in common):
        raise PreconditionError("phi and psi disagree on the common part")
    A2, B2 = A.relabel(phi), B.relabel(psi)
    if not (is_isomorphism(A, A2, phi) and is_isomorphism(B, B2, psi)):
        raise PreconditionError("phi and psi must be isomorphisms")
    r1, r2 = op(signature, A, B), op(signature, A2, B2)
    partial = {}
    for x in A.universe:
        partial[r1.left[x]] = r2.left[phi[x]]
    for y in B.universe:
        t = r2.right[psi[y]]
        if partial.get(r1.right[y], t) != t:
            return False
        partial[r1.right[y]] = t
    if len(set(partial.values())) != len(partial):
        return False
    return find_isomorphism(r1.C, r2.C, partial) is not None


def check_heredity(signature, A_sub: FinStructure, A: FinStructure, B: FinStructure,
                   operator=None) -> bool:
    """Whether C(A', B) matches the closure of A' and B inside C(A, B)."""
    op = operator or amalgamate
    common = A.labels() & B.labels()
    if not common <= A_sub.labels() or not A_sub.labels() <= A.labels():
        raise PreconditionError("A' must sit between the common part and A")
    if acl(A, A_sub.labels()) != A_sub.labels():
        raise PreconditionError("A' must be algebraically closed in A")
    if not preserves(A_sub, A, {x: x for x in A_sub.universe}):
        raise PreconditionError("A' must be an induced substructure of A")
    small = op(signature, A_sub, B)
    big = op(signature, A, B)
    seeds = {big.left[x] for x in A_sub.universe} | {big.right[y] for y in B.universe}
    closure = big.C.induced(acl(big.C, seeds))
    partial = {}
    for x in A_sub.universe:
        partial[small.left[x]] = big.left[x]
    for y in B.universe:
        partial[small.right[y]] = big.right[y]
    return find_isomorphism(small.C, closure, partial) is not None


# -- impossibility search for the selector class ---------------------------------------


@dataclass
class ImpossibilityRecord:
    signature: str
    shape: tuple
    verdict: str
    cases: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"signature": self.signature, "shape": list(self.shape),
                "verdict": self.verdict, "cases": self.cases}


def no_canonical_amalgam_search(a_size: int = 3, b_size: int = 1,
                                signature: str = "quad-selector",
                                table_limit: int = 10000) -> ImpossibilityRecord:
    """Try every candidate amalgam of disjoint bare A and B; look for invariance failures.

    A and B carry no quadruples when small, so every permutation of each is an
    automorphism.  A candidate amalgam on the union is invariant only if every
    pair of such permutations is an automorphism of it.
    """
    A = [("a", i) for i in range(a_size)]
    B = [("b", i) for i in range(b_size)]
    uni = A + B
    quads = [frozenset(c) for c in combinations(uni, 4)] if signature == "quad-selector" else []
    inner = [q for q in quads if q <= set(A) or q <= set(B)]
    if inner:
        raise PreconditionError("this search covers shapes where A and B have no quadruples")
    choices = [[frozenset(pr) for pr in combinations(_sorted(q), 2)] for q in quads]
    total = 1
    for c in choices:
        total *= len(c)
    if total > table_limit:
        raise SearchBudgetExceeded(f"{total} candidate tables exceed the limit {table_limit}")
    perms_a = list(permutations(A))
    perms_b = list(permutations(B))
    cases = []
    for picks in product(*choices):
        table = dict(zip(quads, picks))
        violation = None
        for pa in perms_a:
            for pb in perms_b:
                g = dict(zip(A, pa))
                g.update(zip(B, pb))
                bad = next((q for q in quads
                            if table[frozenset(g[x] for x in q)] != frozenset(g[x] for x in table[q])),
                           None)
                if bad is not None:
                    violation = {
                        "sigma": [[label_to_json(x), label_to_json(g[x])] for x in A],
                        "tau": [[label_to_json(x), label_to_json(g[x])] for x in B],
                        "quadruple": [label_to_json(x) for x in _sorted(bad)],
                    }
                    break
            if violation:
                break
        cases.append({
            "table": [[[label_to_json(x) for x in _sorted(q)],
                       [label_to_json(x) for x in _sorted(table[q])]] for q in quads],
            "violation": violation,
        })
    verdict = "impossible" if all(c["violation"] for c in cases) else "possible"
    return ImpossibilityRecord(signature, (a_size, b_size), verdict, cases)


def verify_impossibility(rec: ImpossibilityRecord) -> bool:
    """Re-check each logged violation and that the table list is complete."""
    a_size, b_size = rec.shape
    uni = [("a", i) for i in range(a_size)] + [("b", i) for i in range(b_size)]
    quads = [frozenset(c) for c in combinations(uni, 4)] if rec.signature == "quad-selector" else []
    if len(rec.cases) != 6 ** len(quads):
        return False
    seen = set()
    for case in rec.cases:
        table = {frozenset(label_from_json(x) for x in q): frozenset(label_from_json(x) for x in v)
                 for q, v in case["table"]}
        key = frozenset(table.items())
        if key in seen or set(table) != set(quads):
            return False
        seen.add(key)
        if any(len(v) != 2 or not v <= q for q, v in table.items()):
            return False
        vio = case["violation"]
        if vio is None:
            if rec.verdict == "impossible":
                return False
            continue
        g = {label_from_json(x): label_from_json(y) for x, y in vio["sigma"] + vio["tau"]}
        if sorted(g.values(), key=_lkey) != _sorted(g):
            return False
        if any(x[0] != y[0] for x, y in g.items()):
            return False
        q = frozenset(label_from_json(x) for x in vio["quadruple"])
        if table[frozenset(g[x] for x in q)] == frozenset(g[x] for x in table[q]):
            return False
    return rec.verdict == ("impossible" if all(c["violation"] for c in rec.cases) else "possible")


# -- Fraisse chains ------------------------------------------------------------------------


@dataclass
class FraisseChain:
    signature: str
    structures: list
    log: list
    score: Fraction
    realized: int
    total: int

    @property
    def final(self) -> FinStructure:
        return self.structures[-1]


def _fresh_ints(C: FinStructure, old: frozenset) -> FinStructure:
    start = 1 + max((x for x in old if isinstance(x, int)), default=-1)
    new = [x for x in C.universe if x not in old]
    return C.relabel({x: start + i for i, x in enumerate(new)})


def _random_extension(M: FinStructure, rng: random.Random, palette, q) -> FinStructure:
    sig = M.signature
    pts = list(M.universe)
    if sig == "pure-set":
        base = rng.sample(pts, min(len(pts), rng.randint(0, 2)))
        return pure_set(base + [("new", 0)])
    if sig == "ultrametric":
        base = rng.sample(pts, min(len(pts), rng.randint(0, 2)))
        while True:
            dist = {frozenset((x, y)): M.d(x, y) for x, y in combinations(base, 2)}
            for x in base:
                dist[frozenset((x, ("new", 0)))] = Fraction(rng.choice(palette))
            E = FinStructure("ultrametric", tuple(_sorted(base + [("new", 0)])), dist=dist,
                             palette=tuple(Fraction(v) for v in palette))
            try:
                E.check_axioms()
                return E
            except AxiomViolation:
                continue
    # vector space: a random subspace of dimension <= 1 plus one new direction
    p = M.q
    gens = rng.sample(pts, min(len(pts), rng.randint(0, 1)))
    sub = _sorted(acl(M, set(gens) | {M.zero()}))
    basis = _Basis(p)
    chosen = [x for x in sub if basis.add(M.vec[x])]
    k = len(chosen)
    vec = {}
    for x in sub:
        vec[x] = tuple(basis.coords(M.vec[x])) + (0,)
    for coeffs in product(range(p), repeat=k):
        for c in range(1, p):
            w = tuple(coeffs) + (c,)
            vec[("new", w)] = w
    return FinStructure("vector-space-q", tuple(_sorted(vec)), vec=vec, q=p)


def one_point_extensions(A: FinStructure, palette=DEFAULT_PALETTE) -> list:
    """One-point extensions of A up to isomorphism over A."""
    sig = A.signature
    new = ("ext", 0)
    if sig == "pure-set":
        return [pure_set(A.labels() | {new})]
    if sig == "ultrametric":
        out = []
        for ds in product(sorted(Fraction(v) for v in palette), repeat=len(A)):
            dist = dict(A.dist)
            for x, v in zip(A.universe, ds):
                dist[frozenset((x, new))] = v
            E = FinStructure("ultrametric", tuple(_sorted(A.labels() | {new})), dist=dist,
                             palette=tuple(Fraction(v) for v in palette))
            try:
                E.check_axioms()
                out.append(E)
            except AxiomViolation:
                pass
        return out
    if sig == "vector-space-q":
        p = A.q
        basis = _Basis(p)
        chosen = [x for x in A.universe if basis.add(A.vec[x])]
        vec = {x: tuple(basis.coords(A.vec[x])) + (0,) for x in A.universe}
        for coeffs in product(range(p), repeat=len(chosen)):
            for c in range(1, p):
                vec[("ext", tuple(coeffs) + (c,))] = tuple(coeffs) + (c,)
        return [FinStructure(sig, tuple(_sorted(vec)), vec=vec, q=p)]
    raise NotAmalgamable("no extension catalogue for this signature")


def extension_score(M: FinStructure, max_size: int = 3, palette=DEFAULT_PALETTE):
    """Fraction of (substructure, one-point extension) pairs realised in M over the substructure."""
    subs = []
    if M.signature == "vector-space-q":
        seen = set()
        top = 0
        while M.q ** (top + 1) <= max_size:
            top += 1
        for r in range(0, top + 1):
            for gens in combinations(M.universe, r):
                S = acl(M, set(gens) | {M.zero()})
                if len(S) <= max_size and S not in seen:
                    seen.add(S)
                    subs.append(S)
    else:
        for r in range(0, max_size + 1):
            subs.extend(frozenset(c) for c in combinations(M.universe, r))
    realized = total = 0
    for S in subs:
        A = M.induced(S)
        for E in one_point_extensions(A, palette):
            total += 1
            ident = {x: x for x in A.universe}
            try:
                hit = find_embedding(E, M, ident)
            except SearchBudgetExceeded:
                hit = None
            if hit is not None:
                realized += 1
    return (Fraction(realized, total) if total else Fraction(1)), realized, total


def fraisse_chain(signature: str, steps: int, seed: int = 0, palette=DEFAULT_PALETTE,
                  q: int = 2, max_size: int = 3) -> FraisseChain:
    """Grow M_0 (empty) by amalgamating sampled small extensions, then score the result."""
    if signature not in CANONICAL:
        raise NotAmalgamable(f"{signature!r} has no canonical amalgamation")
    rng = random.Random(seed)
    palette = tuple(Fraction(v) for v in palette)
    M = empty_structure(signature, q=q, palette=palette)
    chain = [M]
    log = []
    for i in range(steps):
        E = _random_extension(M, rng, palette, q)
        res = amalgamate(signature, M, E)
        nxt = _fresh_ints(res.C, M.labels())
        log.append({
            "step": i,
            "base": [label_to_json(x) for x in _sorted(M.labels() & E.labels())],
            "extension_size": len(E),
            "size": len(nxt),
        })
        M = nxt
        chain.append(M)
    score, realized, total = extension_score(M, max_size, palette)
    return FraisseChain(signature, chain, log, score, realized, total)


# -- conjugation witnesses -------------------------------------------------------------------


@dataclass
class ConjugationWitness:
    """Automorphisms delta, gamma of the host with gamma = delta core delta^-1.

    ``core`` fixes e (hence b) pointwise, ``gamma`` fixes f pointwise and
    extends pi, and ``delta`` fixes a and carries e onto f.
    """

    signature: str
    host: FinStructure
    a: frozenset
    b: frozenset
    pi: dict
    e: frozenset
    f: frozenset
    theta: dict
    delta: dict
    gamma: dict
    core: dict
    grown: bool
    checks: dict

    def to_json(self) -> dict:
        enc_set = lambda s: [label_to_json(x) for x in _sorted(s)]
        enc_map = lambda m: [[label_to_json(k), label_to_json(m[k])] for k in _sorted(m)]
        return {
            "signature": self.signature, "host": self.host.to_json(),
            "a": enc_set(self.a), "b": enc_set(self.b), "pi": enc_map(self.pi),
            "e": enc_set(self.e), "f": enc_set(self.f), "theta": enc_map(self.theta),
            "delta": enc_map(self.delta), "gamma": enc_map(self.gamma),
            "core": enc_map(self.core), "grown": self.grown, "checks": dict(self.checks),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ConjugationWitness":
        dec_set = lambda s: frozenset(label_from_json(x) for x in s)
        dec_map = lambda m: {label_from_json(k): label_from_json(v) for k, v in m}
        return cls(obj["signature"], FinStructure.from_json(obj["host"]),
                   dec_set(obj["a"]), dec_set(obj["b"]), dec_map(obj["pi"]),
                   dec_set(obj["e"]), dec_set(obj["f"]), dec_map(obj["theta"]),
                   dec_map(obj["delta"]), dec_map(obj["gamma"]), dec_map(obj["core"]),
                   bool(obj["grown"]), dict(obj["checks"]))

    def verify(self) -> dict:
        return _witness_checks(self.host, self.a, self.b, self.pi, self.e, self.f,
                               self.theta, self.delta, self.gamma, self.core)


def _witness_checks(H, a, b, pi, e, f, theta, delta, gamma, core) -> dict:
    fixes = lambda g, s: all(g.get(x) == x for x in s)
    checks = {
        "f_meets_e_in_a": (e & f) == a,
        "theta_iso_over_a": (set(theta) == set(e) and set(theta.values()) == set(f)
                             and fixes(theta, a)
                             and preserves(H.induced(e), H, theta)),
        "delta_automorphism": is_isomorphism(H, H, delta),
        "delta_fixes_a": fixes(delta, a),
        "delta_extends_theta": all(delta[x] == y for x, y in theta.items()),
        "gamma_automorphism": is_isomorphism(H, H, gamma),
        "gamma_fixes_f": fixes(gamma, f),
        "gamma_extends_pi": all(gamma[x] == y for x, y in pi.items()),
        "core_is_conjugate": core == compose_maps(invert_map(delta), compose_maps(gamma, delta)),
        "core_fixes_e": fixes(core, e),
        "core_fixes_b": fixes(core, b),
        "recomposition": compose_maps(delta, compose_maps(core, invert_map(delta))) == gamma,
    }
    return checks


def _check_witness_input(sig, M, a, b, pi):
    a, b = frozenset(a), frozenset(b)
    if not a <= b <= M.labels():
        raise PreconditionError("need a <= b inside the host")
    for s, name in ((a, "a"), (b, "b")):
        if acl(M, s) != s:
            raise PreconditionError(f"{name} must be algebraically closed")
    c, d = frozenset(pi), frozenset(pi.values())
    if acl(M, c) != c or acl(M, d) != d:
        raise PreconditionError("domain and range of pi must be algebraically closed")
    if not a <= c or any(pi[x] != x for x in a):
        raise PreconditionError("pi must fix a pointwise")
    if not preserves(M.induced(c), M, dict(pi)):
        raise PreconditionError("pi must be a partial isomorphism")
    return a, b, c, d


def conjugation_witness(signature: str, M: FinStructure, a, b, pi: dict,
                        grow: bool = True) -> ConjugationWitness:
    """Build f, theta, delta, gamma as in the simplicity argument, inside M or a grown M."""
    if signature not in CANONICAL or M.signature != signature:
        raise PreconditionError(f"conjugation witnesses need a canonical signature, got {signature!r}")
    a, b, c, d = _check_witness_input(signature, M, a, b, pi)
    e = acl(M, b | c | d)
    H = M
    grown = False
    theta = _fresh_copy(H, a, e)
    if theta is None and not grow:
        raise HostTooSmall("no copy of e over a that is independent from e fits in the host")
    if theta is None and signature == "ultrametric":
        if H.tree is None:
            raise HostTooSmall("growing an ultrametric host needs a regular tree host")
        width = H.tree[0]
        while theta is None and width < 4 * (len(e) + 2):
            width *= 2
            H = widen_tree(H, width)
            theta = _fresh_copy(H, a, e)
        if theta is None:
            raise HostTooSmall("no canonical copy of e fits even after widening the host")
        grown = True
    if theta is None:
        E = H.induced(e)
        copy = {x: ("copy", x) for x in e if x not in a}
        res = amalgamate(signature, H, E.relabel(copy))
        H = _fresh_ints(res.C, H.labels()) if signature != "vector-space-q" else res.C
        if signature != "vector-space-q":
            ren = dict(zip(_sorted(set(res.C.universe) - M.labels()),
                           _sorted(set(H.universe) - M.labels())))
        else:
            ren = {}
        theta = {x: (x if x in a else ren.get(copy[x], copy[x])) for x in e}
        grown = True
    f = frozenset(theta.values())
    delta = extend_to_automorphism(H, theta)
    fixing = dict(pi)
    fixing.update({x: x for x in f})
    gamma = extend_to_automorphism(H, fixing) if delta is not None else None
    if delta is None or gamma is None:
        raise HostTooSmall("the host has no automorphism extending the required partial map")
    core = compose_maps(invert_map(delta), compose_maps(gamma, delta))
    checks = _witness_checks(H, a, b, dict(pi), e, f, theta, delta, gamma, core)
    return ConjugationWitness(signature, H, a, b, dict(pi), e, f, theta, delta, gamma,
                              core, grown, checks)


def _fresh_copy(H: FinStructure, a: frozenset, e: frozenset) -> Optional[dict]:
    """An isomorphism e -> f over a with f canonically amalgamated with e over a."""
    sig = H.signature
    if sig == "vector-space-q":
        p = H.q
        n = len(next(iter(H.vec.values())))
        base = _Basis(p)
        for x in _sorted(a):
            base.add(H.vec[x])
        a_basis = list(base.inputs)
        extra = [x for x in _sorted(e) if base.add(H.vec[x])]
        span_e = _Basis(p)
        for x in _sorted(e):
            span_e.add(H.vec[x])
        targets = [y for y in H.universe if span_e.add(H.vec[y])][:len(extra)]
        if len(targets) < len(extra):
            return None
        images = a_basis + [H.vec[y] for y in targets]
        lab = H.label_of()
        return {x: lab[_combine(base.coords(H.vec[x]), images, p, n)] for x in e}
    E = H.induced(e)
    copy = {x: ("copy", x) for x in e if x not in a}
    target = amalgamate(sig, E, E.relabel(copy)).C
    try:
        emb = find_embedding(target, H, {x: x for x in e})
    except SearchBudgetExceeded:
        return None
    if emb is None:
        return None
    return {x: (x if x in a else emb[copy[x]]) for x in e}


def random_partial_iso(M: FinStructure, a, extra: int, rng: random.Random) -> dict:
    """Restriction of a random automorphism fixing ``a`` to acl(a plus ``extra`` points)."""
    a = frozenset(a)
    pts = [x for x in M.universe if x not in a]
    picks = rng.sample(pts, min(extra, len(pts)))
    c = acl(M, a | set(picks))
    sigma = extend_to_automorphism(M, {x: x for x in a}, rng)
    return {x: sigma[x] for x in _sorted(c)}


# -- exhaustive case generators ------------------------------------------------------------


def all_ultrametrics(labels, palette=DEFAULT_PALETTE, fixed: Optional[dict] = None):
    """Every ultrametric on ``labels`` with palette distances, agreeing with ``fixed``."""
    labels = list(labels)
    pairs = [frozenset(pq) for pq in combinations(labels, 2)]
    fixed = fixed or {}
    free = [pq for pq in pairs if pq not in fixed]
    pal = tuple(sorted(Fraction(v) for v in palette))
    for values in product(pal, repeat=len(free)):
        dist = dict(fixed)
        dist.update(zip(free, values))
        s = FinStructure("ultrametric", tuple(_sorted(labels)), dist=dist, palette=pal)
        try:
            _check_ultrametric(s)
        except AxiomViolation:
            continue
        yield s


def all_vector_spaces(labels, q: int = 2):
    """Every labelling of GF(q)^d by ``labels`` (needs len(labels) = q^d)."""
    labels = list(labels)
    n = len(labels)
    d = 0
    while q ** d < n:
        d += 1
    if q ** d != n:
        return
    vecs = _all_vectors(d, q)
    for perm in permutations(vecs):
        yield FinStructure("vector-space-q", tuple(_sorted(labels)),
                           vec=dict(zip(labels, perm)), q=q)


def amalgamation_cases(signature: str, max_a: int = 4, max_b: int = 3,
                       palette=DEFAULT_PALETTE, q: int = 2):
    """All (A, B) pairs in amalgamation position at the given sizes.

    A has labels ``0..|A|-1``; the common part is an initial segment of A (or
    a subspace of A); B adds string labels.  Every labelled A is listed, so
    fixing where the common part sits loses nothing up to isomorphism.
    """
    if signature == "pure-set":
        for na in range(max_a + 1):
            for nb in range(max_b + 1):
                for k in range(min(na, nb) + 1):
                    A = pure_set(range(na))
                    B = pure_set(list(range(k)) + [f"b{i}" for i in range(nb - k)])
                    yield A, B
        return
    if signature == "ultrametric":
        for na in range(max_a + 1):
            for A in all_ultrametrics(range(na), palette):
                for nb in range(max_b + 1):
                    for k in range(min(na, nb) + 1):
                        common = list(range(k))
                        fixed = {kk: v for kk, v in A.dist.items() if kk <= set(common)}
                        lb = common + [f"b{i}" for i in range(nb - k)]
                        for B in all_ultrametrics(lb, palette, fixed):
                            yield A, B
        return
    if signature == "vector-space-q":
        sizes_a = [q ** d for d in range(8) if q ** d <= max_a]
        sizes_b = [q ** d for d in range(8) if q ** d <= max_b]
        for na in sizes_a:
            for A in all_vector_spaces(range(na), q):
                subspaces = {acl(A, set(g) | {A.zero()}) for r in range(3)
                             for g in combinations(A.universe, r)}
                for K in sorted(subspaces, key=lambda s: (len(s), _sorted(s))):
                    KA = A.induced(K)
                    for nb in sizes_b:
                        if nb < len(K):
                            continue
                        lb = _sorted(K) + [f"b{i}" for i in range(nb - len(K))]
                        for B in all_vector_spaces(lb, q):
                            if acl(B, K) == K and preserves(KA, B, {x: x for x in K}):
                                yield A, B
        return
    raise NotAmalgamable(f"{signature!r} has no canonical amalgamation")


def closed_substructures(A: FinStructure, common: frozenset):
    """Algebraically closed A' with common <= A' <= A."""
    rest = [x for x in A.universe if x not in common]
    seen = set()
    for r in range(len(rest) + 1):
        for extra in combinations(rest, r):
            S = acl(A, common | set(extra))
            if A.signature == "vector-space-q" and not S:
                continue
            if S not in seen:
                seen.add(S)
                yield A.induced(S)


__all__ = [
    "AmalgamResult", "CANONICAL", "ConjugationWitness", "DEFAULT_PALETTE", "FinStructure",
    "FraisseChain", "ImpossibilityRecord", "SIGNATURES", "acl", "all_ultrametrics",
    "all_vector_spaces", "amalgamate", "amalgamation_cases", "check_heredity",
    "check_invariance", "closed_substructures", "compose_maps", "conjugation_witness",
    "empty_structure", "extend_to_automorphism", "extension_score", "find_embedding",
    "find_isomorphism", "fraisse_chain", "invert_map", "is_isomorphism", "label_from_json",
    "label_to_json", "no_canonical_amalgam_search", "one_point_extensions", "preserves",
    "pure_set", "quad_selector", "random_partial_iso", "regular_ultrametric", "standard_space",
    "ultrametric", "vector_space", "verify_amalgam", "verify_impossibility", "widen_tree",
]
