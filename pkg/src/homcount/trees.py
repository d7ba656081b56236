"""Finite rooted trees, tree morphisms, counting and distinguishing.

Tree morphisms send the root to the root and preserve the covering relation
(parent links), which pins each node's image to the depth of the node.  One
consequence worth knowing (though no separate morphism class exists for it):
a tree morphism whose domain is a chain is automatically injective, since
its nodes sit at pairwise distinct depths; chains are therefore the natural
probes for per-depth node counts.  A finitely branching infinite tree enters
only as a finite-state specification whose unfolding is truncated at a
chosen depth; all theorem-level statements are exercised on those
truncations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceededError
from .lovasz import DISTINGUISHED, PROFILES_EQUAL, DistinguishResult

TRUNCATION_NODE_CAP = 200_000


@dataclass(frozen=True)
class FiniteTree:
    """Rooted tree on nodes 0..size-1: parent[v] for non-roots, -1 at the root."""

    size: int
    parent: tuple[int, ...]

    def __post_init__(self):
        if self.size < 0 or len(self.parent) != self.size:
            raise ValueError("parent vector must cover the universe")
        roots = [v for v in range(self.size) if self.parent[v] == -1]
        if self.size > 0 and len(roots) != 1:
            raise ValueError("a non-empty tree has exactly one root")
        for v in range(self.size):
            p = self.parent[v]
            if p != -1 and not 0 <= p < self.size:
                raise ValueError(f"parent of {v} out of range")
        # acyclicity: every node must reach the root
        for v in range(self.size):
            seen = set()
            x = v
            while x != -1:
                if x in seen:
                    raise ValueError("parent links contain a cycle")
                seen.add(x)
                x = self.parent[x]

    @property
    def root(self) -> int | None:
        for v in range(self.size):
            if self.parent[v] == -1:
                return v
        return None

    def children(self) -> list[list[int]]:
        out = [[] for _ in range(self.size)]
        for v in range(self.size):
            if self.parent[v] != -1:
                out[self.parent[v]].append(v)
        return out

    def depths(self) -> list[int]:
        d = [0] * self.size
        for v in self._topological():
            if self.parent[v] != -1:
                d[v] = d[self.parent[v]] + 1
        return d

    def _topological(self):
        """Nodes in root-first order."""
        children = self.children()
        order = []
        if self.size:
            stack = [self.root]
            while stack:
                v = stack.pop()
                order.append(v)
                stack.extend(children[v])
        return order

    @staticmethod
    def from_parents(parents) -> FiniteTree:
        return FiniteTree(len(tuple(parents)), tuple(parents))


def chain_tree(n: int) -> FiniteTree:
    return FiniteTree(n, tuple([-1] + list(range(n - 1))) if n else ())


@dataclass(frozen=True)
class TreeMorphism:
    domain: FiniteTree
    codomain: FiniteTree
    map: tuple[int, ...]

    def __post_init__(self):
        if not is_tree_morphism(self.map, self.domain, self.codomain):
            raise ValueError("not a tree morphism")


def is_tree_morphism(f, r: FiniteTree, p: FiniteTree) -> bool:
    """Root to root; u covered by v forces f(u) covered by f(v)."""
    if r.size == 0:
        return len(f) == 0
    if p.size == 0 or len(f) != r.size:
        return False
    if f[r.root] != p.root:
        return False
    return all(
        p.parent[f[v]] == f[r.parent[v]] for v in range(r.size) if v != r.root
    )


def count_tree_morphisms(r: FiniteTree, p: FiniteTree) -> int:
    """Downward dynamic program: a node mapped to x sends each child to some
    child of x, independently."""
    if r.size == 0:
        return 1
    if p.size == 0:
        return 0
    r_children = r.children()
    p_children = p.children()

    memo: dict[tuple[int, int], int] = {}

    def ways(u: int, x: int) -> int:
        key = (u, x)
        if key not in memo:
            total = 1
            for cu in r_children[u]:
                total *= sum(ways(cu, cx) for cx in p_children[x])
                if total == 0:
                    break
            memo[key] = total
        return memo[key]

    return ways(r.root, p.root)


def enumerate_tree_morphisms(r: FiniteTree, p: FiniteTree) -> list[TreeMorphism]:
    """All tree morphisms r -> p (desk scale; used for property checks)."""
    if r.size == 0:
        return [TreeMorphism(r, p, ())]
    if p.size == 0:
        return []
    r_children = r.children()
    p_children = p.children()
    img = [0] * r.size
    out = []

    def assign(pending):
        if not pending:
            out.append(TreeMorphism(r, p, tuple(img)))
            return
        u, rest = pending[0], pending[1:]
        for x in p_children[img[r.parent[u]]]:
            img[u] = x
            assign(rest)

    img[r.root] = p.root
    order = [v for v in r._topological() if v != r.root]
    assign(order)
    return out


@dataclass(frozen=True)
class RationalTreeSpec:
    """Finite presentation of a finitely branching (possibly infinite) tree:
    per state an ordered list of child states, unfolded from `start`."""

    states: tuple[str, ...]
    children: tuple[tuple[int, ...], ...]
    start: int

    def __post_init__(self):
        if not 0 <= self.start < len(self.states):
            raise ValueError("start state out of range")
        for kids in self.children:
            for k in kids:
                if not 0 <= k < len(self.states):
                    raise ValueError("child state out of range")


def truncate(spec: RationalTreeSpec, depth: int,
             cap: int = TRUNCATION_NODE_CAP) -> FiniteTree:
    """The unfolding of spec cut at the given depth (nodes at depth <= depth)."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    parents = [-1]
    frontier = [(0, spec.start)]
    for _ in range(depth):
        new_frontier = []
        for node, state in frontier:
            for child_state in spec.children[state]:
                parents.append(node)
                if len(parents) > cap:
                    raise CapExceededError(
                        f"truncation exceeds {cap} nodes", count=len(parents)
                    )
                new_frontier.append((len(parents) - 1, child_state))
        frontier = new_frontier
    return FiniteTree(len(parents), tuple(parents))


def tree_encoding(t: FiniteTree):
    """Canonical rooted-tree code: recursively sorted tuples of child codes.
    Equal encodings iff isomorphic as rooted trees."""
    if t.size == 0:
        return None
    children = t.children()

    def enc(v):
        return tuple(sorted(enc(c) for c in children[v]))

    return enc(t.root)


def tree_from_encoding(code) -> FiniteTree:
    parents = []

    def build(node_code, parent):
        parents.append(parent)
        me = len(parents) - 1
        for sub in node_code:
            build(sub, me)

    if code is None:
        return FiniteTree(0, ())
    build(code, -1)
    return FiniteTree(len(parents), tuple(parents))


@lru_cache(maxsize=64)
def _encodings_of_size(n: int) -> tuple:
    """Sorted canonical encodings of all rooted trees with exactly n nodes."""
    if n == 0:
        return ()
    if n == 1:
        return ((),)
    results = set()

    def multisets(remaining: int, largest_allowed: int, acc):
        if remaining == 0:
            results.add(tuple(sorted(acc)))
            return
        for size in range(min(remaining, largest_allowed), 0, -1):
            for sub in _encodings_of_size(size):
                multisets(remaining - size, size, acc + [sub])

    multisets(n - 1, n - 1, [])
    return tuple(sorted(results))


def enumerate_trees(max_nodes: int) -> list[FiniteTree]:
    """All rooted trees with 1..max_nodes nodes, by size then encoding."""
    out = []
    for n in range(1, max_nodes + 1):
        out.extend(tree_from_encoding(code) for code in _encodings_of_size(n))
    return out


def distinguish_trees(p: FiniteTree, q: FiniteTree,
                      budget: int) -> DistinguishResult:
    """First enumerated test tree with differing morphism counts into p, q."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    for test in enumerate_trees(budget):
        np_, nq = count_tree_morphisms(test, p), count_tree_morphisms(test, q)
        if np_ != nq:
            return DistinguishResult(test, (np_, nq), DISTINGUISHED)
    return DistinguishResult(None, None, PROFILES_EQUAL)


def longest_root_chain(t: FiniteTree) -> int:
    """Largest n such that the n-node chain embeds from the root: height + 1."""
    if t.size == 0:
        return 0
    return max(t.depths()) + 1
