"""Counting-logic equivalence machinery: exact tree-width, enumeration of
tree-width-bounded test structures, a Weisfeiler-Leman oracle, hom-profile
comparison, and the identity-relation adjunction.

Tree-width of a structure is the tree-width of its Gaifman graph (each
relation tuple turns into a clique on its elements).  Equivalence in
k-variable counting logic is decided by (k-1)-dimensional Weisfeiler-Leman
refinement: classical colour refinement on elements for k = 2, refinement of
(k-1)-tuples by substitution neighbourhoods for k >= 3.  That correspondence
(Cai-Fuerer-Immerman / Immerman-Lander) is an external theorem this module
relies on, not something it re-proves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapExceededError, SignatureMismatchError
from .homsearch import hom_count
from .lovasz import _structures_of_size, structure_cap
from .sigstruct import (
    GRAPH_SIGNATURE,
    Signature,
    Structure,
    canonical_form,
    canonical_representative,
)
from .trees import enumerate_trees

TREEWIDTH_SIZE_CAP = 10


def gaifman_adjacency(a: Structure) -> list[set[int]]:
    adj = [set() for _ in range(a.size)]
    for rel in a.relations:
        for t in rel:
            elems = sorted(set(t))
            for x, y in itertools.combinations(elems, 2):
                adj[x].add(y)
                adj[y].add(x)
    return adj


def is_connected(a: Structure) -> bool:
    """Connectivity of the Gaifman graph; the empty structure is not connected."""
    if a.size == 0:
        return False
    adj = gaifman_adjacency(a)
    seen = {0}
    stack = [0]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == a.size


def _fill_degree(adj, mask: int, v: int, n: int) -> int:
    """Vertices outside mask|{v} reachable from v through vertices inside mask."""
    seen = 1 << v
    stack = [v]
    count = 0
    vbit = 1 << v
    while stack:
        x = stack.pop()
        for y in adj[x]:
            ybit = 1 << y
            if seen & ybit:
                continue
            seen |= ybit
            if mask & ybit:
                stack.append(y)
            elif ybit != vbit:
                count += 1
    return count


def treewidth(a: Structure, cap: int = TREEWIDTH_SIZE_CAP) -> int:
    """Exact tree-width by dynamic programming over elimination orderings."""
    return _treewidth_dp(a, cap)[0]


def _treewidth_dp(a: Structure, cap: int) -> tuple[int, list[int]]:
    """Returns (tree-width, optimal elimination order)."""
    n = a.size
    if n > cap:
        raise CapExceededError(
            f"exact tree-width cap {cap} exceeded by size {n}", count=n
        )
    if n == 0:
        return 0, []
    adj = gaifman_adjacency(a)
    full = (1 << n) - 1
    best = [0] * (full + 1)
    choice = [0] * (full + 1)
    for mask in range(1, full + 1):
        best_here = n
        pick = -1
        for v in range(n):
            vbit = 1 << v
            if not mask & vbit:
                continue
            rest = mask ^ vbit
            value = max(best[rest], _fill_degree(adj, rest, v, n))
            if value < best_here:
                best_here = value
                pick = v
        best[mask] = best_here
        choice[mask] = pick
    order = []
    mask = full
    while mask:
        v = choice[mask]
        order.append(v)
        mask ^= 1 << v
    order.reverse()
    return best[full], order


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    tree: tuple[tuple[int, int], ...]
    width: int


def tree_decomposition(a: Structure, cap: int = TREEWIDTH_SIZE_CAP) -> TreeDecomposition:
    """An optimal-width decomposition built from the DP's elimination order."""
    width, order = _treewidth_dp(a, cap)
    n = a.size
    if n == 0:
        return TreeDecomposition((), (), 0)
    position = {v: i for i, v in enumerate(order)}
    fill = [set(ns) for ns in gaifman_adjacency(a)]
    bags = []
    for v in order:
        later = {u for u in fill[v] if position[u] > position[v]}
        bags.append(frozenset({v} | later))
        for u, w in itertools.combinations(later, 2):
            fill[u].add(w)
            fill[w].add(u)
        for u in later:
            fill[u].discard(v)
    edges = []
    for i, v in enumerate(order):
        later = bags[i] - {v}
        if later:
            j = min(position[u] for u in later)
            edges.append((i, j))
        elif i + 1 < n:
            edges.append((i, i + 1))
    return TreeDecomposition(tuple(bags), tuple(edges), max(len(b) for b in bags) - 1)


def is_valid_decomposition(a: Structure, td: TreeDecomposition) -> bool:
    """Element coverage, joint tuple coverage, and subtree connectivity."""
    if a.size == 0:
        return td.bags == ()
    covered = set().union(*td.bags) if td.bags else set()
    if covered != set(range(a.size)):
        return False
    for rel in a.relations:
        for t in rel:
            if not any(set(t) <= bag for bag in td.bags):
                return False
    adj = {i: set() for i in range(len(td.bags))}
    for i, j in td.tree:
        adj[i].add(j)
        adj[j].add(i)
    if len(td.bags) > 1:
        seen = {0}
        stack = [0]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != len(td.bags):
            return False
    for x in range(a.size):
        holding = set(i for i, b in enumerate(td.bags) if x in b)
        first = min(holding)
        seen = {first}
        stack = [first]
        while stack:
            for j in adj[stack.pop()]:
                if j in holding and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if holding != seen:
            return False
    return max(len(b) for b in td.bags) - 1 == td.width


def _free_trees(n: int) -> list[list[tuple[int, int]]]:
    """Unrooted trees on n nodes as edge lists, deduplicated canonically."""
    seen = {}
    for rooted in enumerate_trees(n):
        if rooted.size != n:
            continue
        edges = [(rooted.parent[v], v) for v in range(n) if rooted.parent[v] != -1]
        arcs = {(x, y) for x, y in edges} | {(y, x) for x, y in edges}
        s = Structure.build(GRAPH_SIGNATURE, n, {"E": arcs})
        seen.setdefault(canonical_form(s), edges)
    return list(seen.values())


def _decorated_tree_structures(n: int) -> list[Structure]:
    """All connected digraphs on n nodes whose Gaifman graph is a tree: every
    tree edge carries one of {forward, backward, both}, every node may carry a
    loop."""
    out = {}
    for edges in _free_trees(n):
        m = len(edges)
        for orient in itertools.product(range(3), repeat=m):
            base = set()
            for (x, y), o in zip(edges, orient):
                if o != 1:
                    base.add((x, y))
                if o != 0:
                    base.add((y, x))
            for loopbits in range(1 << n):
                arcs = set(base)
                for v in range(n):
                    if loopbits >> v & 1:
                        arcs.add((v, v))
                s = Structure.build(GRAPH_SIGNATURE, n, {"E": arcs})
                out.setdefault(canonical_form(s), canonical_representative(s))
    return sorted(out.values(), key=lambda s: (-s.total_tuples(), canonical_form(s)))


def _symmetric_tree_structures(n: int) -> list[Structure]:
    """Trees on n nodes as symmetric loopless structures."""
    out = []
    for edges in _free_trees(n):
        arcs = {(x, y) for x, y in edges} | {(y, x) for x, y in edges}
        out.append(canonical_representative(Structure.build(GRAPH_SIGNATURE, n, {"E": arcs})))
    return sorted(out, key=lambda s: (-s.total_tuples(), canonical_form(s)))


def _is_graph_signature(sig: Signature) -> bool:
    return len(sig.symbols) == 1 and sig.symbols[0][1] == 2


def enumerate_tw_lt_k(signature: Signature, k: int, max_size: int,
                      undirected: bool = False,
                      cap: int | None = None) -> tuple[Structure, ...]:
    """All connected canonical structures with <= max_size elements and
    tree-width < k, in the deterministic (size, tuples desc, code) order.

    Connected test structures suffice for profile comparison because hom
    counts are multiplicative over disjoint unions.  With `undirected` the
    enumeration is restricted to symmetric loopless relations (one binary
    symbol only), which carries the same distinguishing power against
    symmetric subjects.  For k = 2 over one binary symbol the enumeration
    walks loop-decorated tree orientations instead of all relation subsets.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if cap is None:
        cap = structure_cap()
    if undirected and not _is_graph_signature(signature):
        raise ValueError("the undirected preset needs exactly one binary symbol")

    out: list[Structure] = []
    if k == 2 and _is_graph_signature(signature):
        for n in range(1, max_size + 1):
            out.extend(_symmetric_tree_structures(n) if undirected
                       else _decorated_tree_structures(n))
        return tuple(out)

    raw = 0
    for n in range(1, max_size + 1):
        if undirected:
            raw += 2 ** (n * (n - 1) // 2)
        else:
            raw += 2 ** sum(n ** arity for _, arity in signature.symbols)
        if raw > cap:
            raise CapExceededError(
                f"enumeration through size {n} spans {raw} candidates, "
                f"exceeding cap {cap}",
                count=raw,
            )
        seen: dict[bytes, Structure] = {}
        for s in _level_candidates(signature, n, undirected):
            if not is_connected(s) or treewidth(s) >= k:
                continue
            code = canonical_form(s)
            if code not in seen:
                seen[code] = canonical_representative(s)
        out.extend(sorted(seen.values(),
                          key=lambda s: (-s.total_tuples(), canonical_form(s))))
    return tuple(out)


def _level_candidates(signature: Signature, n: int, undirected: bool):
    if undirected:
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            chosen = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            arcs = {(x, y) for x, y in chosen} | {(y, x) for x, y in chosen}
            yield Structure.build(signature, n, {signature.symbols[0][0]: arcs})
        return
    yield from _structures_of_size(signature, n)


def _initial_colors_1(s: Structure):
    colors = {}
    for x in range(s.size):
        atom = frozenset(
            sym_idx
            for sym_idx, (_, arity) in enumerate(s.signature.symbols)
            if (x,) * arity in s.relations[sym_idx]
        )
        colors[x] = atom
    return colors


def _refine_1(s: Structure, colors):
    sigs = {}
    for x in range(s.size):
        local = []
        for sym_idx, rel in enumerate(s.relations):
            for t in rel:
                for j, y in enumerate(t):
                    if y == x:
                        local.append((sym_idx, j, tuple(colors[z] for z in t)))
        sigs[x] = (colors[x], tuple(sorted(local)))
    return sigs


def _initial_colors_d(s: Structure, d: int):
    colors = {}
    for xs in itertools.product(range(s.size), repeat=d):
        eq = tuple(min(j for j in range(i + 1) if xs[j] == xs[i]) for i in range(d))
        members = []
        for sym_idx, (_, arity) in enumerate(s.signature.symbols):
            for phi in itertools.product(range(d), repeat=arity):
                if tuple(xs[p] for p in phi) in s.relations[sym_idx]:
                    members.append((sym_idx, phi))
        colors[xs] = (eq, tuple(sorted(members)))
    return colors


def _refine_d(s: Structure, colors, d: int):
    sigs = {}
    for xs in colors:
        neigh = []
        for w in range(s.size):
            neigh.append(tuple(
                colors[xs[:i] + (w,) + xs[i + 1:]] for i in range(d)
            ))
        sigs[xs] = (colors[xs], tuple(sorted(neigh)))
    return sigs


def wl_equivalent(a: Structure, b: Structure, k: int) -> bool:
    """(k-1)-dimensional Weisfeiler-Leman indistinguishability, refined jointly
    over both structures until the colour partition stabilises."""
    if a.signature != b.signature:
        raise SignatureMismatchError("subjects must share their signature")
    if k < 2:
        raise ValueError("k must be >= 2")
    d = k - 1
    if d == 1:
        col_a, col_b = _initial_colors_1(a), _initial_colors_1(b)
        refine = _refine_1
    else:
        col_a, col_b = _initial_colors_d(a, d), _initial_colors_d(b, d)
        refine = lambda s, c: _refine_d(s, c, d)

    def normalise(ca, cb):
        table = {}
        for sig in sorted(itertools.chain(ca.values(), cb.values())):
            if sig not in table:
                table[sig] = len(table)
        return ({x: table[s] for x, s in ca.items()},
                {x: table[s] for x, s in cb.items()})

    col_a, col_b = normalise(col_a, col_b)
    while True:
        new_a, new_b = normalise(refine(a, col_a), refine(b, col_b))
        stable = (
            len(set(new_a.values()) | set(new_b.values()))
            == len(set(col_a.values()) | set(col_b.values()))
        )
        col_a, col_b = new_a, new_b
        if stable:
            break
    return sorted(col_a.values()) == sorted(col_b.values())


@dataclass(frozen=True)
class CkVerdict:
    equivalent: bool
    method: str
    witness: Structure | None = None
    counts: tuple[int, int] | None = None


def ck_equivalent_wl(a: Structure, b: Structure, k: int) -> CkVerdict:
    """The refinement oracle packaged as a verdict (no witness)."""
    return CkVerdict(wl_equivalent(a, b, k), "wl-oracle")


def ck_profile_equal(a: Structure, b: Structure, k: int, budget: int,
                     undirected: bool = False,
                     cap: int | None = None) -> CkVerdict:
    """Compare hom counts from every connected test structure of tree-width
    < k up to the size budget; first differing count wins."""
    if a.signature != b.signature:
        raise SignatureMismatchError("subjects must share their signature")
    for test in enumerate_tw_lt_k(a.signature, k, budget, undirected, cap):
        na, nb = hom_count(test, a), hom_count(test, b)
        if na != nb:
            return CkVerdict(False, "hom-profile", test, (na, nb))
    return CkVerdict(True, "hom-profile")


def add_identity_relation(a: Structure) -> Structure:
    """Same universe and relations plus I interpreted as the identity."""
    if "I" in a.signature.names:
        raise ValueError("signature already contains the symbol I")
    sig = Signature(a.signature.symbols + (("I", 2),))
    rels = a.relations + (frozenset((x, x) for x in range(a.size)),)
    return Structure(sig, a.size, rels)


def quotient_by_I(b: Structure) -> Structure:
    """Collapse along the equivalence relation generated by I; relations of
    the I-free reduct are images."""
    if "I" not in b.signature.names:
        raise ValueError("signature must contain the symbol I")
    i_idx = b.signature.index("I")
    if b.signature.symbols[i_idx][1] != 2:
        raise ValueError("I must be binary")
    parent = list(range(b.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in b.relations[i_idx]:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    reps = sorted({find(x) for x in range(b.size)})
    index = {r: i for i, r in enumerate(reps)}
    proj = [index[find(x)] for x in range(b.size)]
    sig = Signature(tuple(s for i, s in enumerate(b.signature.symbols) if i != i_idx))
    rels = tuple(
        frozenset(tuple(proj[x] for x in t) for t in rel)
        for i, rel in enumerate(b.relations)
        if i != i_idx
    )
    return Structure(sig, len(reps), rels)
