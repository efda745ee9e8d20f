"""Shared helpers: compact builders and randomized structure generators."""

from __future__ import annotations

import random

import pytest

from splitnest.core import (
    CircularOrdering,
    Split,
    SplitSystem,
    TaxaSet,
    all_splits_of_ordering,
)
from splitnest.network import Network, classify, make_network, partially_resolve


def taxa(n: int) -> TaxaSet:
    return TaxaSet.range(n)


def split(n: int, side: str) -> Split:
    """Split from a digit string of 1-based taxa, e.g. split(5, '12')."""
    return Split.of(n, [int(c) - 1 for c in side])


def system(n: int, *sides: str) -> SplitSystem:
    return SplitSystem.of(taxa(n), [[int(c) - 1 for c in s] for s in sides])


def side_set(sigma: SplitSystem) -> set[frozenset[int]]:
    """Canonical sides as index sets, for readable comparisons."""
    return {frozenset(i for i in range(sigma.n) if (s.bits >> i) & 1) for s in sigma.splits}


def random_circular_system(rng: random.Random, n: int, m: int) -> SplitSystem:
    """m random interval splits of a hidden random ordering (deduplicated)."""
    order = list(range(n))
    rng.shuffle(order)
    ordering = CircularOrdering.of(order)
    sides = []
    for _ in range(m):
        start = rng.randrange(n)
        length = rng.randint(1, n - 1)
        sides.append(ordering.arc_mask(start, length))
    return SplitSystem.of(taxa(n), sides)


def random_subset_system(rng: random.Random, n: int, m: int) -> SplitSystem:
    """m arbitrary random splits (not necessarily circular)."""
    sides = []
    full = (1 << n) - 1
    for _ in range(m):
        mask = rng.randrange(1, full)
        sides.append(mask)
    return SplitSystem.of(taxa(n), sides)


def random_tree_network(rng: random.Random, n: int) -> Network:
    """Random multifurcating phylogenetic tree on n leaves."""
    edges: set[tuple] = set()
    hub = ("i", 0)
    nxt = 1
    for x in range(min(3, n)):
        edges.add((hub, ("leaf", x)))
    internals = [hub]
    for x in range(3, n):
        if rng.random() < 0.4:
            v = rng.choice(internals)
            edges.add((v, ("leaf", x)))
        else:
            u, w = rng.choice(sorted(edges))
            m = ("i", nxt)
            nxt += 1
            edges.discard((u, w))
            edges.add((u, m))
            edges.add((m, w))
            edges.add((m, ("leaf", x)))
            internals.append(m)
    return make_network(taxa(n), sorted(edges), {("leaf", x): x for x in range(n)})


def random_1nested_network(
    rng: random.Random, n: int, expand_p: float = 0.8, collapse_p: float = 0.3
) -> Network:
    """Random 1-nested network: a tree with cycles grown at big vertices.

    Each internal vertex of degree >= 4 is expanded into a cycle with
    probability expand_p (random attachment order); afterwards random
    inverse moves may merge a cycle vertex with a tree neighbour or two
    cycles into a shared vertex, producing partially-unresolved shapes.
    """
    tree = random_tree_network(rng, n)
    pairs: set[tuple] = set()
    expanded: dict[int, list[int]] = {}
    for v in range(tree.num_vertices):
        if v not in tree.taxon_of_leaf and tree.degree[v] >= 4 and rng.random() < expand_p:
            arr = list(tree.adjacency[v])
            rng.shuffle(arr)
            expanded[v] = arr

    def port(v: int, toward: int):
        if v in expanded:
            return ("c", v, expanded[v].index(toward))
        return ("t", v)

    for u, v in tree.edges:
        pairs.add((port(u, v), port(v, u)))
    for v, arr in expanded.items():
        k = len(arr)
        for p in range(k):
            pairs.add((("c", v, p), ("c", v, (p + 1) % k)))
    net = make_network(tree.taxa, sorted(pairs), {("t", l): x for x, l in enumerate(tree.leaf_of_taxon)})

    # random inverse moves to leave some vertices partially unresolved
    for _ in range(4):
        if rng.random() > collapse_p:
            continue
        candidates = []
        for u, v in sorted(net.edges - net.all_cycle_edges):
            if u in net.taxon_of_leaf or v in net.taxon_of_leaf:
                continue
            u_on = bool(net.cycles_at[u])
            v_on = bool(net.cycles_at[v])
            if u_on and v_on:
                candidates.append((u, "R2'", v))
            elif u_on and not v_on:
                candidates.append((u, "R1'", v))
            elif v_on and not u_on:
                candidates.append((v, "R1'", u))
        if not candidates:
            break
        vert, move, detail = rng.choice(candidates)
        net = partially_resolve(net, vert, move, detail)
    classify(net)
    return net


def random_max_resolved_network(rng: random.Random, n: int) -> Network:
    from splitnest.network import maximal_partial_resolution

    return maximal_partial_resolution(random_1nested_network(rng, n, collapse_p=0.0))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC1C)
