"""Finite relational structures, their morphisms, and basic constructions.

Universes are always initial segments of the naturals: a structure of size n
has elements 0..n-1.  All values are immutable after construction and every
operation is a pure function of its inputs.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CapExceededError, SignatureMismatchError

CANON_SIZE_CAP = 8


class FactorisationSystem(enum.Enum):
    """The two proper factorisation systems on finite relational structures.

    SE_M: quotients are surjections that reflect the relation symbols
          (every codomain tuple is an image of a domain tuple), embeddings
          are the injective homomorphisms.
    E_SM: quotients are the plain surjective homomorphisms, embeddings are
          injective homomorphisms that reflect the relation symbols.
    """

    SE_M = "se-m"
    E_SM = "e-sm"


SE_M = FactorisationSystem.SE_M
E_SM = FactorisationSystem.E_SM


class MorphismClass(enum.Enum):
    HOM = "hom"
    MONO = "mono"
    STRONG_MONO = "strong-mono"
    SURJECTION = "surjection"
    QUOTIENT = "quotient"


def embedding_class(system: FactorisationSystem) -> MorphismClass:
    """The embedding half of the given factorisation system."""
    return MorphismClass.MONO if system is SE_M else MorphismClass.STRONG_MONO


@dataclass(frozen=True)
class Signature:
    """Ordered relation symbols with arities; names unique, arity >= 1."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate relation symbol in {names}")
        for name, arity in self.symbols:
            if arity < 1:
                raise ValueError(f"arity of {name!r} must be >= 1, got {arity}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    def arity(self, name: str) -> int:
        for sym, arity in self.symbols:
            if sym == name:
                return arity
        raise KeyError(name)

    def index(self, name: str) -> int:
        for i, (sym, _) in enumerate(self.symbols):
            if sym == name:
                return i
        raise KeyError(name)


GRAPH_SIGNATURE = Signature((("E", 2),))


@dataclass(frozen=True)
class Structure:
    """A finite structure: universe 0..size-1 plus one tuple-set per symbol.

    `relations` is aligned with `signature.symbols`.
    """

    signature: Signature
    size: int
    relations: tuple[frozenset[tuple[int, ...]], ...]

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be non-negative")
        if len(self.relations) != len(self.signature.symbols):
            raise ValueError("one relation per signature symbol required")
        for (name, arity), tuples in zip(self.signature.symbols, self.relations):
            for t in tuples:
                if len(t) != arity:
                    raise ValueError(f"tuple {t} has wrong arity for {name}/{arity}")
                if any(not (0 <= x < self.size) for x in t):
                    raise ValueError(f"tuple {t} of {name} out of range 0..{self.size - 1}")

    @staticmethod
    def build(signature: Signature, size: int, relations=None) -> Structure:
        """Build from a {symbol-name: iterable of tuples} mapping; omitted
        symbols denote empty relations."""
        relations = dict(relations or {})
        unknown = set(relations) - set(signature.names)
        if unknown:
            raise ValueError(f"unknown relation symbols {sorted(unknown)}")
        rels = tuple(
            frozenset(tuple(t) for t in relations.get(name, ()))
            for name, _ in signature.symbols
        )
        return Structure(signature, size, rels)

    def relation(self, name: str) -> frozenset[tuple[int, ...]]:
        return self.relations[self.signature.index(name)]

    def total_tuples(self) -> int:
        return sum(len(r) for r in self.relations)

    def sorted_relations(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        return tuple(tuple(sorted(r)) for r in self.relations)


def _check_same_signature(a: Structure, b: Structure):
    if a.signature != b.signature:
        raise SignatureMismatchError(
            f"signatures differ: {a.signature.symbols} vs {b.signature.symbols}"
        )


def is_homomorphism(f, c: Structure, a: Structure) -> bool:
    """Is the total map f (element i of c goes to f[i]) a homomorphism c -> a?"""
    for rel_c, rel_a in zip(c.relations, a.relations):
        for t in rel_c:
            if tuple(f[x] for x in t) not in rel_a:
                return False
    return True


def reflects_relations(f, c: Structure, a: Structure) -> bool:
    """Does f reflect every relation symbol?  For injective f: whenever the
    image of a tuple lies in a relation of a, the tuple lies in the relation
    of c.  For surjective f: every tuple of a is the image of a tuple of c."""
    range_f = set(f)
    for rel_c, rel_a in zip(c.relations, a.relations):
        images = {tuple(f[x] for x in t) for t in rel_c}
        for t in rel_a:
            if all(x in range_f for x in t) and t not in images:
                # For surjections this tuple has no preimage tuple; for
                # injections the (unique) preimage tuple is missing in c.
                return False
    return True


def validate_morphism(f, c: Structure, a: Structure, cls: MorphismClass,
                      system: FactorisationSystem = SE_M) -> bool:
    """True iff f is a homomorphism c -> a satisfying the class predicate.

    mono: injective; strong-mono: injective and reflects every symbol;
    surjection: surjective; quotient: surjective and reflecting under SE_M,
    plain surjective under E_SM.
    """
    _check_same_signature(c, a)
    f = tuple(f)
    if len(f) != c.size or any(not (0 <= y < a.size) for y in f):
        raise ValueError("f must be a total map from the universe of c into a")
    if not is_homomorphism(f, c, a):
        return False
    if cls is MorphismClass.HOM:
        return True
    if cls is MorphismClass.MONO:
        return len(set(f)) == c.size
    if cls is MorphismClass.STRONG_MONO:
        return len(set(f)) == c.size and reflects_relations(f, c, a)
    surjective = len(set(f)) == a.size
    if cls is MorphismClass.SURJECTION:
        return surjective
    if cls is MorphismClass.QUOTIENT:
        if system is E_SM:
            return surjective
        return surjective and reflects_relations(f, c, a)
    raise ValueError(f"unknown morphism class {cls}")


@dataclass(frozen=True)
class Morphism:
    """A verified homomorphism with its verified class tags.

    Non-homomorphisms are rejected at construction; tags beyond `hom` are
    exactly the classes the map validates (quotient judged in `system`).
    """

    domain: Structure
    codomain: Structure
    map: tuple[int, ...]
    class_tags: frozenset[MorphismClass] = field(compare=False)

    @staticmethod
    def build(domain: Structure, codomain: Structure, f,
              system: FactorisationSystem = SE_M) -> Morphism:
        f = tuple(f)
        if not validate_morphism(f, domain, codomain, MorphismClass.HOM):
            raise ValueError(f"{f} is not a homomorphism")
        tags = {MorphismClass.HOM}
        for cls in (MorphismClass.MONO, MorphismClass.STRONG_MONO,
                    MorphismClass.SURJECTION, MorphismClass.QUOTIENT):
            if validate_morphism(f, domain, codomain, cls, system):
                tags.add(cls)
        return Morphism(domain, codomain, f, frozenset(tags))

    def __call__(self, x: int) -> int:
        return self.map[x]


def identity_morphism(a: Structure) -> Morphism:
    return Morphism.build(a, a, tuple(range(a.size)))


def disjoint_union(a: Structure, b: Structure) -> Structure:
    """a + b on the shifted universe; no cross tuples."""
    _check_same_signature(a, b)
    rels = tuple(
        frozenset(ra) | frozenset(tuple(x + a.size for x in t) for t in rb)
        for ra, rb in zip(a.relations, b.relations)
    )
    return Structure(a.signature, a.size + b.size, rels)


def pushout(f: Morphism, g: Morphism):
    """Pushout of the span f: c -> a, g: c -> b.

    Glues a + b along f(x) ~ g(x); relations are the images of the union of
    relations.  Returns (p, leg a -> p, leg b -> p).
    """
    if f.domain != g.domain:
        raise ValueError("pushout legs must share their domain")
    a, b, c = f.codomain, g.codomain, f.domain
    _check_same_signature(a, b)

    n = a.size + b.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for x in range(c.size):
        union(f.map[x], a.size + g.map[x])

    reps = sorted({find(x) for x in range(n)})
    index = {r: i for i, r in enumerate(reps)}
    proj = [index[find(x)] for x in range(n)]

    rels = tuple(
        frozenset(tuple(proj[x] for x in t) for t in ra)
        | frozenset(tuple(proj[x + a.size] for x in t) for t in rb)
        for ra, rb in zip(a.relations, b.relations)
    )
    p = Structure(a.signature, len(reps), rels)
    into_a = Morphism.build(a, p, tuple(proj[:a.size]))
    into_b = Morphism.build(b, p, tuple(proj[a.size:]))
    return p, into_a, into_b


def _element_profile(a: Structure, x: int):
    """Permutation-invariant local profile of x: per symbol and position, how
    often x occurs there, plus its count of constant (all-x) tuples."""
    prof = []
    for rel in a.relations:
        counts = {}
        diag = 0
        for t in rel:
            for j, y in enumerate(t):
                if y == x:
                    counts[j] = counts.get(j, 0) + 1
            if all(y == x for y in t):
                diag += 1
        prof.append((tuple(sorted(counts.items())), diag))
    return tuple(prof)


def _candidate_permutations(a: Structure):
    """Permutations that respect the profile classes: elements of each class
    may only be sent to that class's designated block of positions.  Minimising
    over these is exact because profiles are isomorphism-invariant."""
    classes = {}
    for x in range(a.size):
        classes.setdefault(_element_profile(a, x), []).append(x)
    ordered = [classes[k] for k in sorted(classes.keys())]
    positions = []
    start = 0
    for members in ordered:
        positions.append(range(start, start + len(members)))
        start += len(members)
    for assignment in itertools.product(
        *(itertools.permutations(pos) for pos in positions)
    ):
        perm = [0] * a.size
        for members, images in zip(ordered, assignment):
            for x, y in zip(members, images):
                perm[x] = y
        yield perm


def _serialize(signature: Signature, size: int, sorted_rels) -> bytes:
    parts = [str(size)]
    for (name, arity), tuples in zip(signature.symbols, sorted_rels):
        body = ",".join(".".join(str(x) for x in t) for t in tuples)
        parts.append(f"{name}/{arity}:{body}")
    return "|".join(parts).encode("ascii")


@lru_cache(maxsize=65536)
def _canonical(a: Structure, cap: int):
    if a.size > cap:
        raise CapExceededError(
            f"canonicalization limit {cap} exceeded by size {a.size}", count=a.size
        )
    best = None
    for perm in _candidate_permutations(a):
        rels = tuple(
            tuple(sorted(tuple(perm[x] for x in t) for t in rel))
            for rel in a.relations
        )
        if best is None or rels < best:
            best = rels
    if best is None:  # size 0
        best = tuple(() for _ in a.relations)
    return best


def canonical_form(a: Structure, cap: int = CANON_SIZE_CAP) -> bytes:
    """Canonical code: equal codes iff isomorphic.  Brute force over
    profile-pruned permutations; intended for size <= 8."""
    return _serialize(a.signature, a.size, _canonical(a, cap))


def canonical_representative(a: Structure, cap: int = CANON_SIZE_CAP) -> Structure:
    """The canonically relabeled copy of a (the one realising its code)."""
    rels = tuple(frozenset(r) for r in _canonical(a, cap))
    return Structure(a.signature, a.size, rels)


def are_isomorphic(a: Structure, b: Structure, cap: int = CANON_SIZE_CAP) -> bool:
    """Decided by canonical code equality."""
    _check_same_signature(a, b)
    if a.size != b.size or a.total_tuples() != b.total_tuples():
        return False
    return _canonical(a, cap) == _canonical(b, cap)
