"""Brute-force reference implementations.

These are deliberately naive and exponential; they exist so that every
value produced by the main code paths can be reproduced independently
(the command line exposes them behind --oracle).  Each has a hard input
cap and raises ResourceCapError beyond it.
"""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Iterator, Optional

from .buneman import BunemanGraph
from .core import (
    CircularOrdering,
    Split,
    SplitSystem,
    TaxaSet,
    all_trivial_splits,
    compatible,
    displays,
    is_interval,
)
from .errors import ResourceCapError
from .graphs import connected_components, norm_edge
from .network import Network, classify, make_network
from .synthesis import buneman_tree

BRUTE_ORDERING_MAX_N = 10
BRUTE_ENUM_MAX_N = 5
BRUTE_BUNEMAN_MAX_SPLITS = 20


def brute_circular(sigma: SplitSystem) -> Optional[CircularOrdering]:
    """Scan all (n-1)!/2 circular orderings for one displaying sigma."""
    n = sigma.n
    if n > BRUTE_ORDERING_MAX_N:
        raise ResourceCapError(
            "brute-force ordering scan is capped at n=%d" % BRUTE_ORDERING_MAX_N, n=n
        )
    splits = sigma.sorted_splits
    for tail in permutations(range(1, n)):
        if n >= 3 and tail[0] > tail[-1]:
            continue  # reflection representative
        ordering = CircularOrdering((0,) + tail)
        if all(is_interval(ordering, s.bits) for s in splits):
            return ordering
    return None


def brute_min_cuts(net: Network) -> SplitSystem:
    """All displayed splits by enumerating edge subsets of size one and two.

    A subset is a minimal cut when its deletion leaves exactly two
    connected components and no proper subset disconnects the graph.
    """
    classify(net)
    edges = sorted(net.edges)
    nv = net.num_vertices

    def component_count(banned: frozenset) -> int:
        adj = [[w for w in net.adjacency[v] if norm_edge(v, w) not in banned] for v in range(nv)]
        return len(connected_components(nv, adj))

    def leaf_split(banned: frozenset) -> Optional[Split]:
        adj = [[w for w in net.adjacency[v] if norm_edge(v, w) not in banned] for v in range(nv)]
        comps = connected_components(nv, adj)
        if len(comps) != 2:
            return None
        mask = 0
        for v in comps[0]:
            x = net.taxon_of_leaf.get(v)
            if x is not None:
                mask |= 1 << x
        if mask == 0 or mask == net.taxa.full_mask:
            return None
        return Split.of(net.taxa.n, mask)

    disconnecting = {e: component_count(frozenset((e,))) > 1 for e in edges}
    found: set[Split] = set()
    for e in edges:
        if disconnecting[e]:
            s = leaf_split(frozenset((e,)))
            if s is not None:
                found.add(s)
    for e, f in combinations(edges, 2):
        if disconnecting[e] or disconnecting[f]:
            continue
        s = leaf_split(frozenset((e, f)))
        if s is not None:
            found.add(s)
    return SplitSystem(net.taxa, frozenset(found))


def _compatible_subsets(taxa: TaxaSet) -> Iterator[frozenset[Split]]:
    """All pairwise compatible sets of nontrivial splits (may be empty)."""
    n = taxa.n
    nontrivial = []
    for bits in range((1 << (n - 1)) - 1):
        s = Split.of(n, (bits << 1) | 1)  # every canonical side contains taxon 0
        if not s.is_trivial:
            nontrivial.append(s)
    nontrivial.sort(key=lambda s: s.bits)

    def extend(start: int, chosen: list[Split]) -> Iterator[frozenset[Split]]:
        yield frozenset(chosen)
        for i in range(start, len(nontrivial)):
            s = nontrivial[i]
            if all(compatible(s, c) for c in chosen):
                chosen.append(s)
                yield from extend(i + 1, chosen)
                chosen.pop()

    yield from extend(0, [])


def _cyclic_arrangements(items: list) -> Iterator[tuple]:
    """Distinct cyclic orders of items up to rotation and reflection."""
    if len(items) <= 2:
        yield tuple(items)
        return
    first, rest = items[0], items[1:]
    for perm in permutations(rest):
        if perm[0] <= perm[-1]:
            yield (first,) + perm


def enumerate_1nested(taxa: TaxaSet) -> Iterator[Network]:
    """All 1-nested networks on the taxa, one per equivalence class.

    Canonical representatives are maximal partially-resolved: a tree with
    some of its high-degree vertices expanded into cycles (cycle length
    equals the vertex degree, one subtree per cycle vertex).  Every tree
    arises from a pairwise compatible set of nontrivial splits.
    """
    if taxa.n > BRUTE_ENUM_MAX_N:
        raise ResourceCapError(
            "exhaustive network enumeration is capped at n=%d" % BRUTE_ENUM_MAX_N, n=taxa.n
        )
    for subset in _compatible_subsets(taxa):
        tree = buneman_tree(SplitSystem(taxa, subset | all_trivial_splits(taxa).splits))
        internal = [
            v for v in range(tree.num_vertices)
            if tree.degree[v] >= 4 and v not in tree.taxon_of_leaf
        ]
        options: list[list[Optional[tuple]]] = []
        for v in internal:
            arrangements: list[Optional[tuple]] = [None]
            arrangements.extend(_cyclic_arrangements(sorted(tree.adjacency[v])))
            options.append(arrangements)

        def expand(idx: int, chosen: list[Optional[tuple]]) -> Iterator[Network]:
            if idx == len(internal):
                yield _apply_expansions(tree, internal, chosen)
                return
            for arr in options[idx]:
                chosen.append(arr)
                yield from expand(idx + 1, chosen)
                chosen.pop()

        yield from expand(0, [])


def _apply_expansions(
    tree: Network, internal: list[int], chosen: list[Optional[tuple]]
) -> Network:
    expanded: dict[int, tuple] = {}
    for v, arr in zip(internal, chosen):
        if arr is not None:
            expanded[v] = arr

    def port(v: int, toward: int):
        """Attachment point on v for the former tree edge toward `toward`."""
        if v not in expanded:
            return ("t", v)
        return ("c", v, expanded[v].index(toward))

    pairs = set()
    for u, v in tree.edges:
        pairs.add((port(u, v), port(v, u)))
    for v, arr in expanded.items():
        k = len(arr)
        for p in range(k):
            pairs.add((("c", v, p), ("c", v, (p + 1) % k)))
    labels = {("t", leaf): x for x, leaf in enumerate(tree.leaf_of_taxon)}
    return make_network(tree.taxa, sorted(pairs), labels)


def brute_buneman(sigma: SplitSystem) -> BunemanGraph:
    """The Buneman graph by exhaustive filtering of all side selections.

    Backtracks over the splits in canonical order, pruning selections
    whose picked sides already fail to pairwise intersect; equivalent to
    filtering all 2^m maps.
    """
    m = len(sigma.splits)
    if m == 0:
        raise ResourceCapError("empty system rejected", splits=0)
    if m > BRUTE_BUNEMAN_MAX_SPLITS:
        raise ResourceCapError(
            "exhaustive Buneman enumeration is capped at %d splits" % BRUTE_BUNEMAN_MAX_SPLITS,
            splits=m,
        )
    splits = sigma.sorted_splits
    vertices: list[int] = []

    def extend(i: int, choice: int, sides: list[int]) -> None:
        if i == m:
            vertices.append(choice)
            return
        for bit, side in ((1, splits[i].bits), (0, splits[i].complement_bits)):
            if all(side & prev for prev in sides):
                sides.append(side)
                extend(i + 1, choice | (bit << i), sides)
                sides.pop()

    extend(0, 0, [])
    vertices.sort()
    index = {v: i for i, v in enumerate(vertices)}
    edges = set()
    for i, a in enumerate(vertices):
        for j in range(i + 1, len(vertices)):
            if (a ^ vertices[j]).bit_count() == 1:
                edges.add((i, j))
    return BunemanGraph(sigma, splits, tuple(vertices), frozenset(edges))
