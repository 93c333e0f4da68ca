"""Hereditarily finite sets over atoms, the extended action, and supports.

Sets are hash-consed: building a set whose members equal those of an
existing one returns that very object, so equality is identity.  Literal
syntax: atoms ``@3`` (FiniteSym) or ``@1:2`` (grid cell ``(1, 2)``), sets
``{x, y, ...}``.  Ordered pairs are Kuratowski pairs ``{{x}, {x, y}}``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .errors import (
    NotAbelian,
    NoSupportFound,
    NoWitness,
    ParseError,
    PreconditionError,
    SearchBudgetExceeded,
    UnsupportedInstance,
)
from .ideals import AbelianGrid, DynamicalIdealInstance, FiniteSym, GridElement
from .witnesses import cover_witness_symmetric, stabilizer_generators, validate_certificate

# -- hash-consed sets --------------------------------------------------------------

_TABLE: dict = {}
_LOCK = threading.Lock()


class HFSet:
    """An atom or a finite set of HFSets; build with :func:`atom` and :func:`hfset`."""

    __slots__ = ("atom", "members", "rank", "text")

    def __init__(self, atom_label, members, rank, text):
        self.atom = atom_label
        self.members = members
        self.rank = rank
        self.text = text

    @property
    def is_atom(self) -> bool:
        return self.members is None

    def __iter__(self):
        return iter(self.members or ())

    def __len__(self):
        return len(self.members or ())

    def __contains__(self, x):
        return self.members is not None and any(m is x for m in self.members)

    def __repr__(self):
        return f"HFSet({self.text})"

    def __str__(self):
        return self.text

    def __lt__(self, other):
        return _key(self) < _key(other)

    def atoms(self) -> frozenset:
        """Atom labels in the transitive closure."""
        if self.is_atom:
            return frozenset([self.atom])
        out = set()
        for m in self.members:
            out |= m.atoms()
        return frozenset(out)

    def is_pure(self) -> bool:
        return not self.atoms()

    def nodes(self) -> list:
        """This set and everything in its transitive closure, each once."""
        seen, out, todo = set(), [], [self]
        while todo:
            x = todo.pop()
            if id(x) in seen:
                continue
            seen.add(id(x))
            out.append(x)
            if not x.is_atom:
                todo.extend(x.members)
        return out


def _key(x: HFSet):
    return (x.rank, x.text)


def _atom_text(label) -> str:
    if isinstance(label, tuple):
        return f"@{label[0]}:{label[1]}"
    return f"@{label}"


def atom(label) -> HFSet:
    key = ("atom", label)
    with _LOCK:
        hit = _TABLE.get(key)
        if hit is None:
            hit = HFSet(label, None, 0, _atom_text(label))
            _TABLE[key] = hit
        return hit


def hfset(members: Iterable[HFSet] = ()) -> HFSet:
    ms = {id(m): m for m in members}
    ordered = tuple(sorted(ms.values(), key=_key))
    key = ("set", frozenset(ms))
    with _LOCK:
        hit = _TABLE.get(key)
        if hit is None:
            rank = 1 + max((m.rank for m in ordered), default=-1)
            text = "{" + ", ".join(m.text for m in ordered) + "}"
            hit = HFSet(None, ordered, rank, text)
            _TABLE[key] = hit
        return hit


EMPTY = hfset()


def pair(x: HFSet, y: HFSet) -> HFSet:
    """Kuratowski pair ``{{x}, {x, y}}``."""
    return hfset([hfset([x]), hfset([x, y])])


def unpair(p: HFSet):
    """Inverse of :func:`pair`."""
    parts = list(p)
    if len(parts) == 1:
        (only,) = parts
        (x,) = list(only)
        return x, x
    small, big = sorted(parts, key=len)
    (x,) = list(small)
    rest = [m for m in big if m is not x]
    return x, rest[0]


def parse_hf(text: str) -> HFSet:
    """Parse ``@k``, ``@c:z`` and ``{...}`` literals."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def number():
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise ParseError(f"expected a number at column {pos + 1}")
        return int(text[start:pos])

    def item():
        nonlocal pos
        skip()
        if pos >= len(text):
            raise ParseError("unexpected end of HF literal")
        ch = text[pos]
        if ch == "@":
            pos += 1
            first = number()
            if pos < len(text) and text[pos] == ":":
                pos += 1
                return atom((first, number()))
            return atom(first)
        if ch == "{":
            pos += 1
            members = []
            skip()
            if pos < len(text) and text[pos] == "}":
                pos += 1
                return EMPTY
            while True:
                members.append(item())
                skip()
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                if pos < len(text) and text[pos] == "}":
                    pos += 1
                    return hfset(members)
                raise ParseError(f"expected ',' or '}}' at column {pos + 1}")
        raise ParseError(f"unexpected {ch!r} at column {pos + 1}")

    out = item()
    skip()
    if pos != len(text):
        raise ParseError(f"trailing text at column {pos + 1}")
    return out


# -- the extended action ---------------------------------------------------------------


def _finite(inst: DynamicalIdealInstance):
    if not isinstance(inst, (FiniteSym, AbelianGrid)):
        raise UnsupportedInstance(
            f"{inst.name}: pointwise stabilizers are not finitely generated here")


def act_hf(inst: DynamicalIdealInstance, g, A: HFSet, _memo=None) -> HFSet:
    """Image of ``A`` under the ∈-recursive extension of the action on atoms."""
    memo = {} if _memo is None else _memo
    hit = memo.get(id(A))
    if hit is not None:
        return hit
    if A.is_atom:
        out = atom(g(A.atom))
    else:
        out = hfset(act_hf(inst, g, m, memo) for m in A.members)
    memo[id(A)] = out
    return out


def ground(inst: DynamicalIdealInstance) -> list:
    _finite(inst)
    if isinstance(inst, FiniteSym):
        return list(range(inst.N))
    return inst.cells()


def pstab_generators(inst: DynamicalIdealInstance, b) -> list:
    """Generators of the pointwise stabilizer of ``b``.

    FiniteSym: adjacent transpositions of the sorted complement (they generate
    its full symmetric group).  AbelianGrid: unit shifts of the columns not
    meeting ``b`` (they generate every vector vanishing on b's columns).
    """
    _finite(inst)
    if isinstance(inst, FiniteSym):
        return stabilizer_generators(inst.N, b)
    used = inst.columns_of(b)
    return [GridElement.unit(inst.m, inst.modulus, c) for c in range(inst.m) if c not in used]


@dataclass(frozen=True)
class SupportClaim:
    A: HFSet
    support: frozenset
    verified: bool


def fixed_by_all(inst, gens, A: HFSet) -> bool:
    return all(act_hf(inst, g, A) is A for g in gens)


def check_support(inst: DynamicalIdealInstance, A: HFSet, b) -> SupportClaim:
    """Whether every generator of pstab(b) fixes ``A`` setwise."""
    b = frozenset(b)
    return SupportClaim(A, b, fixed_by_all(inst, pstab_generators(inst, b), A))


def _candidates(inst, pool=None, must=frozenset()):
    """Ideal elements containing ``must``, smallest first, drawn from ``pool``."""
    pts = [x for x in (pool if pool is not None else ground(inst)) if x not in must]
    for size in range(len(pts) + 1):
        for extra in combinations(pts, size):
            b = frozenset(must) | frozenset(extra)
            if inst.in_ideal(b):
                yield b


def find_support(inst, A: HFSet, budget: int = 100000, must=frozenset()) -> Optional[frozenset]:
    """Smallest ideal element (containing ``must``) supporting ``A``; None if none exists."""
    tried = 0
    for b in _candidates(inst, must=must):
        tried += 1
        if tried > budget:
            raise SearchBudgetExceeded(f"no support decided within {budget} candidates")
        if fixed_by_all(inst, pstab_generators(inst, b), A):
            return b
    return None


def is_hereditarily_symmetric(inst, A: HFSet, budget: int = 100000, max_rank: int = 8):
    """(answer, supports) where supports maps each node's text to a support found."""
    if A.rank > max_rank:
        raise PreconditionError(f"rank {A.rank} exceeds the configured bound {max_rank}")
    supports = {}
    for node in A.nodes():
        if node.is_atom:
            b = frozenset([node.atom])
            if not inst.in_ideal(b):
                return False, supports
            supports[node.text] = b
            continue
        b = find_support(inst, node, budget)
        if b is None:
            return False, supports
        supports[node.text] = b
    return True, supports


def definable_closure(inst: DynamicalIdealInstance, a) -> frozenset:
    """Ground points fixed by every generator of pstab(a)."""
    gens = pstab_generators(inst, a)
    return frozenset(x for x in ground(inst) if all(g(x) == x for g in gens))


def support_invariance(inst, g, b, A: HFSet) -> bool:
    """``check_support(g·A, g·b)``; always true when ``b`` supports ``A``."""
    if not check_support(inst, A, b).verified:
        raise PreconditionError("b does not support A")
    return check_support(inst, act_hf(inst, g, A), inst.act(g, frozenset(b))).verified


def wo_criterion(inst, family: HFSet, budget: int = 100000) -> frozenset:
    """Smallest ideal ``b`` whose stabilizer generators fix every member of ``family``."""
    members = list(family)
    tried = 0
    for b in _candidates(inst):
        tried += 1
        if tried > budget:
            raise SearchBudgetExceeded(f"no decision within {budget} candidates")
        gens = pstab_generators(inst, b)
        if all(fixed_by_all(inst, gens, m) for m in members):
            return b
    raise NoSupportFound("no ideal element fixes every member")


# -- choice from largeness -----------------------------------------------------------------


def orbit(inst, gens, A: HFSet) -> HFSet:
    """The orbit of ``A`` under the group generated by ``gens``, as an HFSet."""
    seen = {id(A): A}
    todo = [A]
    while todo:
        x = todo.pop()
        for g in gens:
            y = act_hf(inst, g, x)
            if id(y) not in seen:
                seen[id(y)] = y
                todo.append(y)
    return hfset(seen.values())


def choice_selector(inst, family: HFSet, a, b, certificate=None, budget: int = 100000) -> HFSet:
    """A selector ``{<B, C> : B in family}`` supported by the large set ``b``.

    For each member ``B`` pick its first element ``D`` with a support ``d``,
    move ``d`` inside ``b`` by some γ fixing ``a``, and select ``C = γ⁻¹·D``.
    """
    if not isinstance(inst, FiniteSym):
        raise UnsupportedInstance("choice_selector uses the FiniteSym cover witness")
    a, b = frozenset(a), frozenset(b)
    if certificate is not None and not validate_certificate(inst, certificate):
        raise PreconditionError("invalid largeness certificate")
    gens_a = pstab_generators(inst, a)
    pairs = []
    for B in family:
        if B.is_atom or len(B) == 0:
            raise PreconditionError("every member of the family must be a nonempty set")
        if not fixed_by_all(inst, gens_a, B):
            raise PreconditionError("a does not witness well-orderability of the family")
        D = B.members[0]
        d = find_support(inst, D, budget)
        if d is None:
            raise NoSupportFound(f"no support for {D}")
        g = cover_witness_symmetric(a, b, d, inst.N)
        C = act_hf(inst, g.inverse(), D)
        pairs.append(pair(B, C))
    f = hfset(pairs)
    if not check_support(inst, f, b).verified:
        raise PreconditionError("selector is not supported by b")
    return f


# -- the abelian grid ------------------------------------------------------------------------


def parity_class(inst: AbelianGrid, column: int, parity: int) -> HFSet:
    return hfset(atom((column, z)) for z in range(parity, inst.modulus, 2))


def class_pair(inst: AbelianGrid, column: int) -> HFSet:
    """The two parity classes of one column."""
    return hfset([parity_class(inst, column, 0), parity_class(inst, column, 1)])


def class_pairs(inst: AbelianGrid) -> HFSet:
    return hfset(class_pair(inst, c) for c in range(inst.m))


def selector_candidates(inst: AbelianGrid) -> list:
    """Every function picking one parity class per column, as a set of pairs."""
    out = []
    for bits in range(2 ** inst.m):
        out.append(hfset(pair(class_pair(inst, c), parity_class(inst, c, (bits >> c) & 1))
                         for c in range(inst.m)))
    return out


def _require_abelian(inst):
    if not isinstance(inst, AbelianGrid):
        raise NotAbelian(f"{inst.name} is not an abelian instance")


def orbit_decomposition(inst, A: HFSet, a, budget: int = 100000):
    """The pstab(a)-orbits of the members of ``A``, with the commutativity check.

    For each orbit and each member ``D`` with a support ``d``, every generator
    of pstab(d) must fix every element of the orbit.  In an abelian group this
    holds because such a generator commutes with the maps carrying ``D``
    around its orbit.
    """
    _require_abelian(inst)
    a = frozenset(a)
    if not check_support(inst, A, a).verified:
        raise PreconditionError("a does not support A")
    gens = pstab_generators(inst, a)
    orbits = {}
    for D in A:
        o = orbit(inst, gens, D)
        orbits[id(o)] = o
    checks = []
    for o in orbits.values():
        setwise = fixed_by_all(inst, gens, o)
        for D in o:
            d = find_support(inst, D, budget)
            ok = d is not None and all(
                fixed_by_all(inst, pstab_generators(inst, d), E) for E in o)
            checks.append({"orbit": o.text, "member": D.text,
                           "support": sorted(d) if d is not None else None,
                           "setwise": setwise, "fixes_orbit": ok})
    return hfset(orbits.values()), checks


def abelian_refuter(inst, f_candidate: HFSet, b):
    """A shift fixing ``b`` that moves the candidate selector.

    Returns ``(γ, column, flipped pair)``: γ is the unit shift of a column
    missed by ``b``; it swaps that column's two parity classes, so it fixes
    the pair but not the value the candidate selects.
    """
    _require_abelian(inst)
    used = inst.columns_of(frozenset(b))
    free = [c for c in range(inst.m) if c not in used]
    if not free:
        raise NoWitness("b meets every column")
    c = free[0]
    g = GridElement.unit(inst.m, inst.modulus, c)
    Y = class_pair(inst, c)
    if act_hf(inst, g, f_candidate) == f_candidate:
        raise NoWitness("the shift fixes the candidate")
    return g, c, Y


__all__ = [
    "EMPTY",
    "HFSet",
    "SupportClaim",
    "abelian_refuter",
    "act_hf",
    "atom",
    "check_support",
    "choice_selector",
    "class_pair",
    "class_pairs",
    "definable_closure",
    "find_support",
    "hfset",
    "is_hereditarily_symmetric",
    "orbit",
    "orbit_decomposition",
    "pair",
    "parity_class",
    "parse_hf",
    "pstab_generators",
    "selector_candidates",
    "support_invariance",
    "unpair",
    "wo_criterion",
]
