"""Hom profiles, Moebius-based embedding counts, and isomorphism decision by
counting morphisms, at desk scale.

The distinguishing engine enumerates canonical representatives of all
structures up to a size budget in a fixed deterministic order: by size, then
by descending relation-tuple count, then by canonical code.  Testing up to
size max(|a|, |b|) is enough to decide isomorphism: equal profiles force
mutual embeddings via Moebius inversion, and mutual embeddings between
finite structures force isomorphism (the injective endomorphism monoid of a
finite structure is a group).
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import CapExceededError
from .homsearch import count_morphisms, hom_count
from .quotposet import FinitePoset, quotient_poset
from .sigstruct import (
    SE_M,
    E_SM,
    FactorisationSystem,
    MorphismClass,
    Signature,
    Structure,
    canonical_form,
    canonical_representative,
)
from .stirling import _realized_quotients

DEFAULT_STRUCTURE_CAP = 10**6

RIGHT = "right"
LEFT = "left"

DISTINGUISHED = "distinguished"
PROFILES_EQUAL = "profiles-equal-within-budget"


def structure_cap() -> int:
    """Global cap on enumerated candidate structures; HOMCOUNT_CAP overrides."""
    raw = os.environ.get("HOMCOUNT_CAP")
    return int(raw) if raw else DEFAULT_STRUCTURE_CAP


@dataclass(frozen=True)
class HomProfile:
    subject: Structure
    family: tuple[Structure, ...]
    counts: tuple[int, ...]
    side: str


@dataclass(frozen=True)
class DistinguishResult:
    witness: object | None
    counts: tuple[int, int] | None
    verdict: str
    warnings: tuple = ()

    @property
    def distinguished(self) -> bool:
        return self.verdict == DISTINGUISHED


def _count_side(test: Structure, subject: Structure, side: str,
                cls: MorphismClass, system: FactorisationSystem) -> int:
    if side == RIGHT:
        return count_morphisms(test, subject, cls, system).count
    if side == LEFT:
        return count_morphisms(subject, test, cls, system).count
    raise ValueError(f"side must be {RIGHT!r} or {LEFT!r}, got {side!r}")


def hom_profile(a: Structure, family, side: str = RIGHT,
                cls: MorphismClass = MorphismClass.HOM,
                system: FactorisationSystem = SE_M) -> HomProfile:
    """Exact morphism counts of a against each family member, in order."""
    family = tuple(family)
    counts = tuple(_count_side(t, a, side, cls, system) for t in family)
    return HomProfile(a, family, counts, side)


@lru_cache(maxsize=64)
def _structures_of_size(signature: Signature, n: int) -> tuple[Structure, ...]:
    """Canonical representatives of all structures of size n, sorted by
    descending tuple count then canonical code."""
    slot_grid = [
        list(itertools.product(range(n), repeat=arity))
        for _, arity in signature.symbols
    ]
    seen: dict[bytes, Structure] = {}
    masks = [range(1 << len(slots)) for slots in slot_grid]
    for assignment in itertools.product(*masks):
        rels = tuple(
            frozenset(slots[i] for i in range(len(slots)) if mask >> i & 1)
            for slots, mask in zip(slot_grid, assignment)
        )
        s = Structure(signature, n, rels)
        code = canonical_form(s)
        if code not in seen:
            seen[code] = canonical_representative(s)
    return tuple(
        sorted(seen.values(), key=lambda s: (-s.total_tuples(), canonical_form(s)))
    )


def iter_structures(signature: Signature, max_size: int,
                    cap: int | None = None):
    """Lazily yield canonical structures with 1..max_size elements in the
    deterministic order (size ascending, tuple count descending, canonical
    code).  The cap is checked level by level, so a consumer that stops early
    never pays for, or trips over, the larger levels."""
    if cap is None:
        cap = structure_cap()
    raw = 0
    for n in range(1, max_size + 1):
        raw += 2 ** sum(n ** arity for _, arity in signature.symbols)
        if raw > cap:
            raise CapExceededError(
                f"enumeration through size {n} spans {raw} candidate "
                f"structures, exceeding cap {cap}",
                count=raw,
            )
        yield from _structures_of_size(signature, n)


def enumerate_structures(signature: Signature, max_size: int,
                         cap: int | None = None) -> tuple[Structure, ...]:
    """All canonical structures with 1..max_size elements, deterministic order
    (size ascending, tuple count descending, canonical code)."""
    return tuple(iter_structures(signature, max_size, cap))


def embeddings_via_mobius(c: Structure, a: Structure,
                          system: FactorisationSystem = SE_M) -> int:
    """Embedding count recovered from hom counts by Moebius inversion.

    Sets f1(q) = |hom(cod q, a)| on the quotient classes of c and inverts;
    the value at the top (identity) class is the number of embeddings c -> a
    for the chosen system.  Under SE_M the classes are the kernel-partition
    collapses.  Under E_SM the poset is restricted to the classes realized by
    maps into a (plus the top): inversion over that finite sub-poset is valid
    because every class carrying generic elements of any f1-value is present.
    """
    if system is SE_M:
        q = quotient_poset(c, system)
        f1 = [hom_count(e.codomain, a) for e in q.elements]
        f2 = mobius_invert_ints(q.poset, f1)
        return f2[q.top]

    realized = _realized_quotients(c, a)
    top_key = (tuple((x,) for x in range(c.size)), c.relations)
    if top_key not in realized:
        realized = dict(realized)
        realized[top_key] = c

    def total_order(key):
        partition, rels = key
        return (len(partition), partition, tuple(tuple(sorted(r)) for r in rels))

    keys = sorted(realized.keys(), key=total_order)
    index = {k: i for i, k in enumerate(keys)}

    def leq(x_key, y_key):
        (p1, r1), (p2, r2) = x_key, y_key
        block_of_1 = {}
        for bi, block in enumerate(p1):
            for el in block:
                block_of_1[el] = bi
        coarsen = []
        for block in p2:
            targets = {block_of_1[el] for el in block}
            if len(targets) != 1:
                return False
            coarsen.append(targets.pop())
        return all(
            tuple(coarsen[x] for x in t) in rel1
            for rel2, rel1 in zip(r2, r1)
            for t in rel2
        )

    n = len(keys)
    matrix = [[leq(keys[i], keys[j]) for j in range(n)] for i in range(n)]
    poset = FinitePoset(n, matrix)
    f1 = [hom_count(realized[k], a) for k in keys]
    f2 = mobius_invert_ints(poset, f1)
    return f2[index[top_key]]


def mobius_invert_ints(poset: FinitePoset, f1) -> list[int]:
    """Integer-valued Moebius inversion (values here are always integral)."""
    out = []
    for y in range(poset.size):
        total = sum(f1[x] * poset.mobius(x, y) for x in poset.down_set(y))
        if isinstance(total, Fraction):
            assert total.denominator == 1
            total = int(total)
        out.append(total)
    return out


def distinguish(a: Structure, b: Structure, budget: int, side: str = RIGHT,
                system: FactorisationSystem = SE_M,
                cap: int | None = None) -> DistinguishResult:
    """First enumerated test structure whose counts against a and b differ."""
    if a.signature != b.signature:
        from .errors import SignatureMismatchError

        raise SignatureMismatchError("subjects must share their signature")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    for test in iter_structures(a.signature, budget, cap):
        na = _count_side(test, a, side, MorphismClass.HOM, system)
        nb = _count_side(test, b, side, MorphismClass.HOM, system)
        if na != nb:
            return DistinguishResult(test, (na, nb), DISTINGUISHED)
    return DistinguishResult(None, None, PROFILES_EQUAL)


def decide_isomorphic_by_counting(a: Structure, b: Structure,
                                  system: FactorisationSystem = SE_M,
                                  cap: int | None = None) -> bool:
    """Lovasz-style decision: no distinguishing test up to size max(|a|, |b|)
    means isomorphic."""
    budget = max(a.size, b.size, 1)
    return not distinguish(a, b, budget, RIGHT, system, cap).distinguished
