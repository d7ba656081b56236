"""Towers of finite groups as truncated inverse limits, and hom counting.

A tower is a finite chain G_0, ..., G_d with surjective connecting maps
G_{i+1} ->> G_i.  Precomposition with a surjection embeds hom(G_i, C) into
hom(G_{i+1}, C), so the level counts n_i are non-decreasing; the reported
count is the last one, flagged "stabilized" when the last two levels agree.
That flag is a truncation certificate, not a proof about the inverse limit:
whether the full limit's hom set is captured depends on the (infinite) tower
the chain was cut from.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InvariantViolationError
from .lovasz import DISTINGUISHED, PROFILES_EQUAL, DistinguishResult


@dataclass(frozen=True)
class FiniteGroup:
    """Cayley-table presentation on 0..order-1; verified at construction."""

    order: int
    table: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.order
        if n < 1 or len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValueError("table must be an order x order grid")
        if any(not 0 <= v < n for row in self.table for v in row):
            raise ValueError("table entries out of range")
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if self.table[self.table[x][y]][z] != self.table[x][self.table[y][z]]:
                        raise ValueError("operation is not associative")
        if self.identity is None:
            raise ValueError("no identity element")
        e = self.identity
        for x in range(n):
            if not any(self.table[x][y] == e and self.table[y][x] == e for y in range(n)):
                raise ValueError(f"element {x} has no inverse")

    @property
    def identity(self) -> int | None:
        for e in range(self.order):
            if all(self.table[e][x] == x == self.table[x][e] for x in range(self.order)):
                return e
        return None

    def mult(self, x: int, y: int) -> int:
        return self.table[x][y]

    def generating_set(self) -> tuple[int, ...]:
        """Greedy: keep adding the first element that enlarges the generated
        subgroup."""
        gens: list[int] = []
        closure = {self.identity}
        while len(closure) < self.order:
            nxt = next(x for x in range(self.order) if x not in closure)
            gens.append(nxt)
            closure = self._close(gens)
        return tuple(gens)

    def _close(self, gens) -> set[int]:
        closure = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in closure:
                    closure.add(y)
                    frontier.append(y)
        return closure

    def element_words(self, gens) -> dict[int, tuple[int, ...]]:
        """Express each element as a word (sequence of generator indices),
        built by breadth-first closure."""
        words = {self.identity: ()}
        frontier = [self.identity]
        while frontier:
            new = []
            for x in frontier:
                for gi, g in enumerate(gens):
                    y = self.table[x][g]
                    if y not in words:
                        words[y] = words[x] + (gi,)
                        new.append(y)
            frontier = new
        if len(words) != self.order:
            raise ValueError("given set does not generate the group")
        return words


def cyclic_group(n: int, name: str | None = None) -> FiniteGroup:
    table = tuple(tuple((x + y) % n for y in range(n)) for x in range(n))
    return FiniteGroup(n, table, name or f"Z{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str | None = None) -> FiniteGroup:
    pairs = list(itertools.product(range(g.order), range(h.order)))
    index = {p: i for i, p in enumerate(pairs)}
    table = tuple(
        tuple(
            index[(g.table[x1][x2], h.table[y1][y2])]
            for (x2, y2) in pairs
        )
        for (x1, y1) in pairs
    )
    return FiniteGroup(g.order * h.order, table,
                       name or f"{g.name or 'G'}x{h.name or 'H'}")


@dataclass(frozen=True)
class GroupHom:
    domain: FiniteGroup
    codomain: FiniteGroup
    map: tuple[int, ...]

    def __post_init__(self):
        if not is_group_hom(self.map, self.domain, self.codomain):
            raise ValueError("not a group homomorphism")

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.codomain.order

    def __call__(self, x: int) -> int:
        return self.map[x]


def is_group_hom(f, g: FiniteGroup, c: FiniteGroup) -> bool:
    if len(f) != g.order or any(not 0 <= v < c.order for v in f):
        return False
    return all(
        f[g.table[x][y]] == c.table[f[x]][f[y]]
        for x in range(g.order)
        for y in range(g.order)
    )


def enumerate_group_homs(g: FiniteGroup, c: FiniteGroup) -> list[tuple[int, ...]]:
    """Every homomorphism g -> c, by searching generator images and checking
    the induced word map against the full tables."""
    gens = g.generating_set()
    if not gens:
        return [(c.identity,) * g.order] if g.order == 1 else []
    words = g.element_words(gens)
    element_order = {}
    for x in range(g.order):
        n, y = 1, x
        while y != g.identity:
            y = g.table[y][x]
            n += 1
        element_order[x] = n
    homs = []
    for images in itertools.product(range(c.order), repeat=len(gens)):
        ok = True
        for gen, img in zip(gens, images):
            # the image's order must divide the generator's order
            n, y = 1, img
            while y != c.identity:
                y = c.table[y][img]
                n += 1
            if element_order[gen] % n:
                ok = False
                break
        if not ok:
            continue
        f = [0] * g.order
        for x, word in words.items():
            v = c.identity
            for gi in word:
                v = c.table[v][images[gi]]
            f[x] = v
        if is_group_hom(f, g, c):
            homs.append(tuple(f))
    return homs


def count_group_homs(g: FiniteGroup, c: FiniteGroup) -> int:
    return len(enumerate_group_homs(g, c))


@dataclass(frozen=True)
class Tower:
    """Levels G_0, ..., G_d with verified surjective connecting maps
    G_{i+1} -> G_i."""

    levels: tuple[FiniteGroup, ...]
    connecting: tuple[GroupHom, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.levels:
            raise ValueError("a tower has at least one level")
        if len(self.connecting) != len(self.levels) - 1:
            raise ValueError("need exactly one connecting map per step")
        for i, hom in enumerate(self.connecting):
            if hom.domain != self.levels[i + 1] or hom.codomain != self.levels[i]:
                raise ValueError(f"connecting map {i} has wrong endpoints")
            if not hom.is_surjective():
                raise ValueError(f"connecting map {i} is not surjective")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def continuous_hom_count(t: Tower, c: FiniteGroup) -> tuple[int, bool]:
    """Level counts n_i = |hom(G_i, c)| are non-decreasing (asserted); the
    result is the last count, with stabilized = the last two levels agree.
    A single-level tower carries no certificate and reports False."""
    counts = [count_group_homs(level, c) for level in t.levels]
    for lower, upper in zip(counts, counts[1:]):
        if upper < lower:
            raise InvariantViolationError(
                f"hom counts decreased along the tower: {counts}"
            )
    stabilized = len(counts) >= 2 and counts[-1] == counts[-2]
    return counts[-1], stabilized


def distinguish_towers(t1: Tower, t2: Tower, family) -> DistinguishResult:
    """First family member whose top-level counts differ.  Members whose
    counts did not stabilize on both towers are collected as inconclusive
    warnings: a difference there still rules out isomorphism of the given
    truncations, but says less about the limits they were cut from."""
    warnings = []
    for c in family:
        n1, s1 = continuous_hom_count(t1, c)
        n2, s2 = continuous_hom_count(t2, c)
        if not (s1 and s2):
            warnings.append(c)
        if n1 != n2:
            return DistinguishResult(c, (n1, n2), DISTINGUISHED, tuple(warnings))
    return DistinguishResult(None, None, PROFILES_EQUAL, tuple(warnings))


def has_surjection(g: FiniteGroup, c: FiniteGroup) -> bool:
    return any(len(set(f)) == c.order for f in enumerate_group_homs(g, c))


def surjection_profile(t: Tower, family) -> tuple[bool, ...]:
    """Per family member: does some level surject onto it?  Such a surjection
    composed with the projections witnesses a continuous surjection from the
    inverse limit."""
    return tuple(
        any(has_surjection(level, c) for level in t.levels) for c in family
    )


def groups_isomorphic(g: FiniteGroup, h: FiniteGroup) -> bool:
    if g.order != h.order:
        return False
    return any(len(set(f)) == h.order for f in enumerate_group_homs(g, h))


def towers_isomorphic(t1: Tower, t2: Tower) -> bool:
    """Levelwise isomorphisms commuting with the connecting maps, found by
    backtracking from the top level down."""
    if len(t1.levels) != len(t2.levels):
        return False
    if any(a.order != b.order for a, b in zip(t1.levels, t2.levels)):
        return False

    def isos(a, b):
        return [f for f in enumerate_group_homs(a, b) if len(set(f)) == b.order]

    def extend(i, prev_iso):
        # prev_iso: iso at level i; find one at i+1 commuting with it
        if i == t1.depth:
            return True
        p1 = t1.connecting[i].map
        p2 = t2.connecting[i].map
        for f in isos(t1.levels[i + 1], t2.levels[i + 1]):
            if all(prev_iso[p1[x]] == p2[f[x]] for x in range(len(f))):
                if extend(i + 1, f):
                    return True
        return False

    return any(extend(0, f0) for f0 in isos(t1.levels[0], t2.levels[0]))


def mod_surjection(n: int, m: int) -> GroupHom:
    """The reduction Z/n ->> Z/m (requires m | n)."""
    if n % m:
        raise ValueError("m must divide n")
    return GroupHom(cyclic_group(n), cyclic_group(m), tuple(x % m for x in range(n)))
