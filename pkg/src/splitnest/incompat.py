"""Incompatibility graph of a split system and the maximal-circularity test.

Incomp(sigma) has the splits as vertices and an edge between every
incompatible pair.  Its connected components drive both the closure
decomposition (closures act independently per component) and network
synthesis (each component with two or more splits becomes one cycle).

A circular system generates a maximal circular closure exactly when its
nontrivial part separates every pair of taxa and has a connected
incompatibility graph; `is_maximal_generator` tests those two conditions
and returns a witness on failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import Split, SplitSystem, compatible, remove_trivial


@dataclass(frozen=True)
class IncompatGraph:
    """Incompatibility graph with its connected components precomputed.

    `splits` is the canonical ordering of the system; `edges` holds index
    pairs (i < j) of incompatible splits; `component_of[i]` is the index of
    the component containing split i, components being sorted by their
    lexicographically smallest member split.
    """

    system: SplitSystem
    splits: tuple[Split, ...]
    edges: frozenset[tuple[int, int]]
    component_of: tuple[int, ...]
    component_members: tuple[tuple[int, ...], ...]

    @property
    def num_components(self) -> int:
        return len(self.component_members)

    def component_systems(self) -> tuple[SplitSystem, ...]:
        return tuple(
            SplitSystem(self.system.taxa, frozenset(self.splits[i] for i in members))
            for members in self.component_members
        )


def incompatibility_graph(sigma: SplitSystem) -> IncompatGraph:
    splits = sigma.sorted_splits
    m = len(splits)
    parent = list(range(m))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges = []
    for i in range(m):
        si = splits[i]
        for j in range(i + 1, m):
            if not compatible(si, splits[j]):
                edges.append((i, j))
                ra, rb = find(i), find(j)
                if ra != rb:
                    parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    # canonical order: by smallest member split (splits are already sorted)
    members = tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=lambda g: min(g)))
    component_of = [0] * m
    for ci, g in enumerate(members):
        for i in g:
            component_of[i] = ci
    return IncompatGraph(sigma, splits, frozenset(edges), tuple(component_of), members)


def components(sigma: SplitSystem) -> tuple[SplitSystem, ...]:
    """The connected components of Incomp(sigma), as split systems."""
    return incompatibility_graph(sigma).component_systems()


@dataclass(frozen=True)
class MaximalityResult:
    """Outcome of the maximal-circularity test, with a witness on failure."""

    is_maximal_generator: bool
    unseparated_pair: Optional[tuple[int, int]] = None
    disconnected_parts: Optional[tuple[SplitSystem, SplitSystem]] = None

    def __bool__(self) -> bool:
        return self.is_maximal_generator

    def describe(self, taxa) -> str:
        if self.is_maximal_generator:
            return "maximal generator"
        if self.disconnected_parts is not None:
            a, b = self.disconnected_parts
            return "incompatibility graph of the nontrivial part is disconnected: %s vs %s" % (
                a.format(),
                b.format(),
            )
        x, y = self.unseparated_pair
        return "taxa %s and %s are not separated by any nontrivial split" % (
            taxa.names[x],
            taxa.names[y],
        )


def is_maximal_generator(sigma: SplitSystem) -> MaximalityResult:
    """Test whether a circular system's closure is maximal circular.

    Both conditions concern the nontrivial part of the system: (i) every
    pair of taxa is separated by some nontrivial split, (ii) the
    incompatibility graph of the nontrivial part is connected.  The caller
    is responsible for circularity; on non-circular input the answer has no
    meaning (the command line front end always checks circularity first).
    """
    nt = remove_trivial(sigma)
    if not nt.splits:
        return MaximalityResult(False, unseparated_pair=(0, 1))
    graph = incompatibility_graph(nt)
    if graph.num_components > 1:
        parts = graph.component_systems()
        return MaximalityResult(False, disconnected_parts=(parts[0], parts[1]))
    n = sigma.n
    # signature of each taxon under the nontrivial splits
    sigs: dict[int, int] = {}
    for x in range(n):
        sig = 0
        for k, s in enumerate(graph.splits):
            sig |= ((s.bits >> x) & 1) << k
        if sig in sigs:
            return MaximalityResult(False, unseparated_pair=(sigs[sig], x))
        sigs[sig] = x
    return MaximalityResult(True)


def taxa_partition(splits: tuple[Split, ...], n: int) -> list[int]:
    """Masks of the classes of taxa not separated by any given split.

    Classes are ordered by smallest member.
    """
    sigs: dict[tuple[int, ...], int] = {}
    classes: list[int] = []
    for x in range(n):
        sig = tuple((s.bits >> x) & 1 for s in splits)
        at = sigs.get(sig)
        if at is None:
            sigs[sig] = len(classes)
            classes.append(1 << x)
        else:
            classes[at] |= 1 << x
    return classes
