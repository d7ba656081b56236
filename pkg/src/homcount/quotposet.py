"""Quotient posets of structures, incidence algebras and Moebius inversion.

A quotient class of a structure c is keyed by the kernel partition of its
projection together with the induced codomain (relation tuples are images of
c's tuples).  The order is "x <= y iff x factors through y", i.e. the kernel
of y refines the kernel of x; the identity class is the unique top element.
Exact (integer / Fraction) arithmetic throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceededError
from .sigstruct import (
    SE_M,
    FactorisationSystem,
    Morphism,
    Structure,
)

PARTITION_SIZE_CAP = 8

Partition = tuple[tuple[int, ...], ...]


def set_partitions(n: int):
    """All partitions of 0..n-1 via restricted growth strings, duplicate-free.

    Blocks are sorted internally and by least element.
    """
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def emit():
        blocks: dict[int, list[int]] = {}
        for i, b in enumerate(rgs):
            blocks.setdefault(b, []).append(i)
        yield tuple(tuple(blocks[b]) for b in sorted(blocks))

    def grow(i: int, maxval: int):
        if i == n:
            yield from emit()
            return
        for b in range(maxval + 2):
            rgs[i] = b
            yield from grow(i + 1, max(maxval, b))

    rgs[0] = 0
    yield from grow(1, 0)


def partition_refines(p: Partition, q: Partition, n: int) -> bool:
    """Every block of p lies inside a block of q."""
    block_of_q = [0] * n
    for bi, block in enumerate(q):
        for x in block:
            block_of_q[x] = bi
    return all(len({block_of_q[x] for x in block}) == 1 for block in p)


def collapse_structure(c: Structure, partition: Partition) -> tuple[Structure, tuple[int, ...]]:
    """Quotient of c by the partition: blocks become elements (ordered by
    least member), relations are images.  Returns (structure, projection)."""
    proj = [0] * c.size
    for bi, block in enumerate(partition):
        for x in block:
            proj[x] = bi
    rels = tuple(
        frozenset(tuple(proj[x] for x in t) for t in rel) for rel in c.relations
    )
    return Structure(c.signature, len(partition), rels), tuple(proj)


class FinitePoset:
    """A finite poset over elements 0..n-1 given by a leq predicate matrix."""

    def __init__(self, size: int, leq_matrix):
        self.size = size
        self._up = [frozenset(j for j in range(size) if leq_matrix[i][j])
                    for i in range(size)]
        self._down = [frozenset(i for i in range(size) if leq_matrix[i][j])
                      for j in range(size)]
        self._mobius: dict[tuple[int, int], int] = {}
        for i in range(size):
            if i not in self._up[i]:
                raise ValueError("leq must be reflexive")
            for j in self._up[i]:
                if i != j and i in self._up[j]:
                    raise ValueError("leq must be antisymmetric")
                if not self._up[j] <= self._up[i]:
                    raise ValueError("leq must be transitive")

    def leq(self, x: int, y: int) -> bool:
        return y in self._up[x]

    def down_set(self, y: int):
        return sorted(self._down[y])

    def up_set(self, x: int):
        return sorted(self._up[x])

    def zeta(self, x: int, y: int) -> int:
        return 1 if y in self._up[x] else 0

    def delta(self, x: int, y: int) -> int:
        return 1 if x == y else 0

    def mobius(self, x: int, y: int) -> int:
        """mu(x,x) = 1 and mu(x,y) = -sum_{x <= z < y} mu(x,z)."""
        if y not in self._up[x]:
            raise ValueError(f"mobius undefined: {x} is not <= {y}")
        key = (x, y)
        if key not in self._mobius:
            if x == y:
                self._mobius[key] = 1
            else:
                total = 0
                for z in self._up[x] & self._down[y]:
                    if z != y:
                        total += self.mobius(x, z)
                self._mobius[key] = -total
        return self._mobius[key]

    def top(self) -> int | None:
        tops = [y for y in range(self.size) if len(self._down[y]) == self.size]
        return tops[0] if len(tops) == 1 else None


@dataclass(frozen=True)
class QuotientClass:
    partition: Partition
    codomain: Structure
    representative: Morphism


class QuotientPoset:
    """Q(c): one class per kernel partition, ordered by factorization."""

    def __init__(self, source: Structure, elements: tuple[QuotientClass, ...],
                 poset: FinitePoset, top: int):
        self.source = source
        self.elements = elements
        self.poset = poset
        self.top = top

    def __len__(self):
        return len(self.elements)

    def index_of_partition(self, partition: Partition) -> int:
        for i, e in enumerate(self.elements):
            if e.partition == partition:
                return i
        raise KeyError(partition)


def quotient_poset(c: Structure, system: FactorisationSystem = SE_M,
                   cap: int = PARTITION_SIZE_CAP) -> QuotientPoset:
    """The partition-keyed quotient poset of c.

    For both systems the representative of a class is the image factorization
    (the projection onto the collapsed structure), so the codomain relations
    are images; the identity class is the top element.
    """
    if c.size > cap:
        raise CapExceededError(
            f"partition enumeration cap {cap} exceeded by size {c.size}",
            count=c.size,
        )
    classes = []
    for partition in set_partitions(c.size):
        quotient, proj = collapse_structure(c, partition)
        rep = Morphism.build(c, quotient, proj, system)
        classes.append(QuotientClass(partition, quotient, rep))
    n = len(classes)
    leq = [[partition_refines(classes[j].partition, classes[i].partition, c.size)
            for j in range(n)] for i in range(n)]
    # leq[i][j] as built means "j's kernel refines i's kernel" = i <= j
    poset = FinitePoset(n, leq)
    top = poset.top()
    assert top is not None and len(classes[top].partition) == c.size
    return QuotientPoset(c, tuple(classes), poset, top)


class IncidenceFunction:
    """An element of the incidence algebra of a finite poset: a rational
    function on pairs, zero whenever x is not <= y, with the convolution
    product (f g)(x,y) = sum over x <= z <= y of f(x,z) g(z,y)."""

    def __init__(self, poset: FinitePoset, values=None):
        self.poset = poset
        self._values: dict[tuple[int, int], Fraction] = {}
        for (x, y), v in (values or {}).items():
            v = Fraction(v)
            if v:
                if not poset.leq(x, y):
                    raise ValueError(f"nonzero value on incomparable pair {x},{y}")
                self._values[(x, y)] = v

    def __call__(self, x: int, y: int) -> Fraction:
        return self._values.get((x, y), Fraction(0))

    def convolve(self, other: "IncidenceFunction") -> "IncidenceFunction":
        if other.poset is not self.poset:
            raise ValueError("convolution needs a shared poset")
        p = self.poset
        values = {}
        for x in range(p.size):
            for y in p.up_set(x):
                total = sum(
                    (self(x, z) * other(z, y)
                     for z in p.up_set(x) if p.leq(z, y)),
                    start=Fraction(0),
                )
                if total:
                    values[(x, y)] = total
        return IncidenceFunction(p, values)

    def __eq__(self, other):
        return (isinstance(other, IncidenceFunction)
                and self.poset is other.poset
                and self._values == other._values)

    @staticmethod
    def delta(poset: FinitePoset) -> "IncidenceFunction":
        return IncidenceFunction(poset, {(x, x): 1 for x in range(poset.size)})

    @staticmethod
    def zeta(poset: FinitePoset) -> "IncidenceFunction":
        return IncidenceFunction(
            poset,
            {(x, y): 1 for x in range(poset.size) for y in poset.up_set(x)},
        )

    @staticmethod
    def mobius(poset: FinitePoset) -> "IncidenceFunction":
        return IncidenceFunction(
            poset,
            {(x, y): poset.mobius(x, y)
             for x in range(poset.size) for y in poset.up_set(x)},
        )


def mobius(poset: FinitePoset, x: int, y: int) -> int:
    return poset.mobius(x, y)


def mobius_invert(poset: FinitePoset, f1) -> list[Fraction]:
    """Given f1 on the poset, return f2 with f2(y) = sum_{x<=y} f1(x) mu(x,y),
    the unique solution of f1(y) = sum_{x<=y} f2(x)."""
    values = [Fraction(f1[x]) if not isinstance(f1[x], Fraction) else f1[x]
              for x in range(poset.size)]
    return [
        sum(
            (values[x] * poset.mobius(x, y) for x in poset.down_set(y)),
            start=Fraction(0),
        )
        for y in range(poset.size)
    ]


def forward_sum(poset: FinitePoset, f2) -> list[Fraction]:
    """f1(y) = sum_{x<=y} f2(x), the inverse of mobius_invert."""
    return [
        sum((Fraction(f2[x]) for x in poset.down_set(y)), start=Fraction(0))
        for y in range(poset.size)
    ]


def chain_poset(n: int) -> FinitePoset:
    return FinitePoset(n, [[i <= j for j in range(n)] for i in range(n)])
