"""Leaf-labeled phylogenetic networks whose blocks are edges or cycles.

A phylogenetic network here is a simple connected graph whose degree-one
vertices are bijectively labeled by the taxa, every other vertex has degree
at least three, and every cycle has length at least four.  It is 1-nested
when any two cycles share at most one vertex; equivalently, every
biconnected block is a single edge or a single cycle.  Level-1 additionally
requires all internal degrees to be exactly three (which forces cycles to
be vertex-disjoint).

A split is displayed by the network when some set-inclusion minimal edge
cut (a bridge, or a pair of edges of one cycle) separates the leaves into
its two blocks.  `splits_of` enumerates all of them; a displayed split can
be induced by up to three distinct minimal cuts (`split_multiplicity`).

The partial-resolution moves exchange a cycle vertex carrying two or more
pendant subtrees, or a vertex shared by two cycles, for a cut-edge (and
back); they never change the displayed split set, which is why networks are
compared by `equivalent` (split-set equality) rather than graph isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .core import Split, SplitSystem, TaxaSet
from .errors import NetworkInvariantError, ValidationError
from .graphs import biconnected_components, is_connected, norm_edge

Edge = tuple[int, int]


@dataclass(frozen=True)
class NetworkClass:
    is_1nested: bool
    is_level1: bool
    is_simple: bool
    is_max_partially_resolved: bool


@dataclass(frozen=True)
class Network:
    """Immutable undirected network; vertices are 0..num_vertices-1.

    `leaf_of_taxon[x]` is the vertex carrying taxon x.  Use `make_network`
    to build one from arbitrary vertex ids.
    """

    taxa: TaxaSet
    num_vertices: int
    edges: frozenset[Edge]
    leaf_of_taxon: tuple[int, ...]

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < v < self.num_vertices):
                raise ValidationError("bad edge (%d, %d)" % (u, v))
        if len(self.leaf_of_taxon) != self.taxa.n:
            raise ValidationError("leaf labeling must cover every taxon")

    # -- cached structure ------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degree(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @cached_property
    def taxon_of_leaf(self) -> dict[int, int]:
        return {v: x for x, v in enumerate(self.leaf_of_taxon)}

    @cached_property
    def blocks(self) -> tuple[tuple[Edge, ...], ...]:
        raw = biconnected_components(self.num_vertices, self.adjacency)
        return tuple(
            tuple(sorted(norm_edge(u, v) for u, v in comp))
            for comp in sorted(raw, key=lambda c: min(norm_edge(u, v) for u, v in c))
        )

    @cached_property
    def bridges(self) -> frozenset[Edge]:
        return frozenset(b[0] for b in self.blocks if len(b) == 1)

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Each cycle block as a canonically ordered vertex tuple.

        Starts at the smallest vertex and proceeds toward its smaller
        cycle neighbour.
        """
        out = []
        for block in self.blocks:
            if len(block) == 1:
                continue
            verts = sorted({v for e in block for v in e})
            if len(block) != len(verts):
                continue  # 2-connected but not a cycle; classification handles it
            nbr: dict[int, list[int]] = {v: [] for v in verts}
            for u, v in block:
                nbr[u].append(v)
                nbr[v].append(u)
            if any(len(ns) != 2 for ns in nbr.values()):
                continue
            start = verts[0]
            walk = [start, min(nbr[start])]
            while len(walk) < len(verts):
                a, b = walk[-2], walk[-1]
                walk.append(nbr[b][0] if nbr[b][0] != a else nbr[b][1])
            out.append(tuple(walk))
        return tuple(sorted(out))

    @cached_property
    def cycle_edge_sets(self) -> tuple[frozenset[Edge], ...]:
        out = []
        for cyc in self.cycles:
            k = len(cyc)
            out.append(frozenset(norm_edge(cyc[i], cyc[(i + 1) % k]) for i in range(k)))
        return tuple(out)

    @cached_property
    def all_cycle_edges(self) -> frozenset[Edge]:
        acc: frozenset[Edge] = frozenset()
        for es in self.cycle_edge_sets:
            acc |= es
        return acc

    @cached_property
    def cycles_at(self) -> tuple[tuple[int, ...], ...]:
        at: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for ci, cyc in enumerate(self.cycles):
            for v in cyc:
                at[v].append(ci)
        return tuple(tuple(a) for a in at)

    def non_cycle_edges_at(self, v: int) -> list[Edge]:
        return [norm_edge(v, w) for w in self.adjacency[v] if norm_edge(v, w) not in self.all_cycle_edges]

    # -- validation and classification ------------------------------------

    def classify(self) -> NetworkClass:
        return classify(self)

    def require_1nested(self) -> None:
        if not self.classify().is_1nested:
            raise NetworkInvariantError("not-1-nested", "operation requires a 1-nested network")

    # -- leaf masks -------------------------------------------------------

    def leaf_mask_from(self, start: int, banned: frozenset[Edge]) -> int:
        """Mask of taxa reachable from `start` without using banned edges."""
        seen = [False] * self.num_vertices
        seen[start] = True
        stack = [start]
        mask = 0
        tol = self.taxon_of_leaf
        while stack:
            v = stack.pop()
            x = tol.get(v)
            if x is not None:
                mask |= 1 << x
            for w in self.adjacency[v]:
                if not seen[w] and norm_edge(v, w) not in banned:
                    seen[w] = True
                    stack.append(w)
        return mask

    @cached_property
    def cycle_classes(self) -> tuple[tuple[int, ...], ...]:
        """For each cycle, the leaf mask hanging at each cycle vertex."""
        out = []
        for ci, cyc in enumerate(self.cycles):
            banned = self.cycle_edge_sets[ci]
            out.append(tuple(self.leaf_mask_from(v, banned) for v in cyc))
        return tuple(out)


def make_network(
    taxa: TaxaSet,
    edges: Iterable[tuple],
    labels: Mapping,
) -> Network:
    """Build a Network from arbitrary hashable vertex ids.

    `labels` maps a vertex id to a taxon name or index; exactly the labeled
    vertices may have degree one.
    """
    ids = sorted({v for e in edges for v in e} | set(labels.keys()), key=repr)
    index = {v: i for i, v in enumerate(ids)}
    norm = set()
    for u, v in edges:
        if u == v:
            raise ValidationError("self-loop at vertex %r" % (u,))
        norm.add(norm_edge(index[u], index[v]))
    leaf_of_taxon = [-1] * taxa.n
    for vid, t in labels.items():
        x = t if isinstance(t, int) else taxa.index(str(t))
        if not 0 <= x < taxa.n:
            raise ValidationError("unknown taxon index %r" % (t,))
        if leaf_of_taxon[x] != -1:
            raise ValidationError("taxon %s labels two vertices" % taxa.names[x])
        leaf_of_taxon[x] = index[vid]
    if any(v == -1 for v in leaf_of_taxon):
        missing = [taxa.names[x] for x, v in enumerate(leaf_of_taxon) if v == -1]
        raise ValidationError("taxa without a leaf: %s" % " ".join(missing))
    return Network(taxa, len(ids), frozenset(norm), tuple(leaf_of_taxon))


def classify(net: Network) -> NetworkClass:
    """Validate the base invariants and classify the network.

    Raises NetworkInvariantError for violated base invariants; returns the
    classification record otherwise.
    """
    nv = net.num_vertices
    if nv == 0:
        raise NetworkInvariantError("not-connected", "empty graph")
    if not is_connected(nv, net.adjacency):
        raise NetworkInvariantError("not-connected", "the graph is not connected")
    leaves = {v for v in range(nv) if net.degree[v] == 1}
    labeled = set(net.leaf_of_taxon)
    if len(labeled) != net.taxa.n or leaves != labeled:
        raise NetworkInvariantError(
            "leaf-labeling",
            "degree-one vertices must be labeled bijectively by the taxa "
            "(leaves: %s, labeled: %s)" % (sorted(leaves), sorted(labeled)),
        )
    for v in range(nv):
        if v not in leaves and net.degree[v] < 3:
            raise NetworkInvariantError(
                "degree", "internal vertex %d has degree %d < 3" % (v, net.degree[v])
            )
    cycle_blocks = 0
    is_1nested = True
    for block in net.blocks:
        if len(block) == 1:
            continue
        verts = {v for e in block for v in e}
        if len(block) == len(verts):
            if len(verts) == 3:
                raise NetworkInvariantError("cycle-length", "cycle of length 3 is not allowed")
            cycle_blocks += 1
        else:
            is_1nested = False
    if not is_1nested:
        # a non-1-nested block may still hide short cycles
        for u, v in net.edges:
            if set(net.adjacency[u]) & set(net.adjacency[v]):
                raise NetworkInvariantError("cycle-length", "cycle of length 3 is not allowed")
    is_level1 = is_1nested and all(
        net.degree[v] == 3 for v in range(nv) if v not in leaves
    )
    is_simple_net = all(
        net.degree[u] == 1 or net.degree[v] == 1 for u, v in net.bridges
    )
    maxres = is_1nested
    if is_1nested:
        for v in range(nv):
            if len(net.cycles_at[v]) >= 2:
                maxres = False
                break
            if net.cycles_at[v] and len(net.non_cycle_edges_at(v)) >= 2:
                maxres = False
                break
    return NetworkClass(is_1nested, is_level1, is_simple_net, maxres)


# -- displayed splits ------------------------------------------------------


def _bridge_split(net: Network, e: Edge) -> Split:
    return Split.of(net.taxa.n, net.leaf_mask_from(e[0], frozenset((e,))))


def splits_of(net: Network) -> SplitSystem:
    """All splits displayed by minimal cuts of a 1-nested network."""
    net.require_1nested()
    acc: set[Split] = set()
    for e in net.bridges:
        acc.add(_bridge_split(net, e))
    n = net.taxa.n
    for ci, cyc in enumerate(net.cycles):
        classes = net.cycle_classes[ci]
        k = len(cyc)
        for i in range(k):
            m = 0
            for j in range(i + 1, k):
                m |= classes[j]
                acc.add(Split.of(n, m))
    return SplitSystem(net.taxa, frozenset(acc))


def _find_cycle(net: Network, cycle) -> int:
    want = frozenset(cycle)
    for ci, cyc in enumerate(net.cycles):
        if frozenset(cyc) == want:
            return ci
    raise ValidationError("no cycle on vertices %s in this network" % sorted(want))


def m_splits(net: Network, cycle) -> SplitSystem:
    """The k vertex splits of a cycle: delete the two cycle edges at v.

    These are the splits of multiplicity two or more contributed by the
    cycle in a maximal partial-resolution.
    """
    ci = _find_cycle(net, cycle)
    n = net.taxa.n
    return SplitSystem.of(net.taxa, (m for m in net.cycle_classes[ci]))


def split_multiplicity(net: Network, s: Split) -> int:
    """Number of distinct minimal cuts inducing s (0..3)."""
    net.require_1nested()
    if s.n != net.taxa.n:
        raise ValidationError("split over a different taxa count")
    count = 0
    for e in net.bridges:
        if _bridge_split(net, e) == s:
            count += 1
    n = net.taxa.n
    for ci in range(len(net.cycles)):
        classes = net.cycle_classes[ci]
        k = len(classes)
        for i in range(k):
            m = 0
            for j in range(i + 1, k):
                m |= classes[j]
                if Split.of(n, m) == s:
                    count += 1
    return count


def equivalent(net1: Network, net2: Network) -> bool:
    """Split-set equality: the network-level notion of sameness.

    Networks inducing equal split systems are identical up to isomorphism
    and partial-resolution, which is the right granularity here.
    """
    if net1.taxa != net2.taxa:
        raise ValidationError("networks over different taxa sets")
    return splits_of(net1).splits == splits_of(net2).splits


# -- partial resolution -----------------------------------------------------


def _rebuild(taxa: TaxaSet, edges: set[Edge], leaf_of_taxon: Sequence[int]) -> Network:
    verts = sorted({v for e in edges for v in e})
    remap = {v: i for i, v in enumerate(verts)}
    return Network(
        taxa,
        len(verts),
        frozenset(norm_edge(remap[u], remap[v]) for u, v in edges),
        tuple(remap[v] for v in leaf_of_taxon),
    )


def _contract(net: Network, v: int, w: int) -> Network:
    """Merge w into v along the edge {v, w}."""
    edges = set(net.edges)
    edges.discard(norm_edge(v, w))
    for x in net.adjacency[w]:
        if x != v:
            edges.discard(norm_edge(w, x))
            edges.add(norm_edge(v, x))
    return _rebuild(net.taxa, edges, net.leaf_of_taxon)


def partially_resolve(net: Network, vertex: int, move: str, detail: Optional[int] = None) -> Network:
    """Apply one partial-resolution move (R1, R2) or its inverse (R1', R2').

    R1 pulls the non-cycle edges of a cycle vertex onto a new neighbour;
    R2 separates two cycles sharing `vertex` by a new cut-edge (detail may
    name a vertex of the cycle to move; default is the lexicographically
    largest cycle).  The primed moves contract the cut-edge {vertex, detail}
    back.  The displayed split set is unchanged in all cases.
    """
    net.require_1nested()
    if not 0 <= vertex < net.num_vertices:
        raise ValidationError("unknown vertex %d" % vertex)
    if move == "R1":
        if not net.cycles_at[vertex]:
            raise ValidationError("R1 needs a cycle vertex; %d is on no cycle" % vertex)
        pend = net.non_cycle_edges_at(vertex)
        if len(pend) < 2:
            raise ValidationError("R1 needs >= 2 non-cycle edges at the vertex, found %d" % len(pend))
        w = net.num_vertices
        edges = set(net.edges)
        for e in pend:
            other = e[0] if e[1] == vertex else e[1]
            edges.discard(e)
            edges.add(norm_edge(w, other))
        edges.add(norm_edge(vertex, w))
        return _rebuild(net.taxa, edges, net.leaf_of_taxon)
    if move == "R2":
        at = net.cycles_at[vertex]
        if len(at) < 2:
            raise ValidationError("R2 needs a vertex shared by two cycles")
        if detail is not None:
            choices = [ci for ci in at if detail in net.cycles[ci] and detail != vertex]
            if not choices:
                raise ValidationError("detail %d does not name a cycle at vertex %d" % (detail, vertex))
            ci = choices[0]
        else:
            ci = max(at, key=lambda c: net.cycles[c])
        w = net.num_vertices
        edges = set(net.edges)
        for x in net.adjacency[vertex]:
            e = norm_edge(vertex, x)
            if e in net.cycle_edge_sets[ci]:
                edges.discard(e)
                edges.add(norm_edge(w, x))
        edges.add(norm_edge(vertex, w))
        return _rebuild(net.taxa, edges, net.leaf_of_taxon)
    if move in ("R1'", "R2'"):
        if detail is None:
            raise ValidationError("%s needs the neighbour to contract as detail" % move)
        e = norm_edge(vertex, detail)
        if e not in net.edges:
            raise ValidationError("no edge {%d, %d}" % (vertex, detail))
        if e in net.all_cycle_edges:
            raise ValidationError("%s contracts cut-edges, not cycle edges" % move)
        v_on = bool(net.cycles_at[vertex])
        w_on = bool(net.cycles_at[detail])
        if detail in net.taxon_of_leaf or vertex in net.taxon_of_leaf:
            raise ValidationError("cannot contract a leaf edge")
        if move == "R1'":
            if not (v_on and not w_on):
                raise ValidationError("R1' contracts {cycle vertex, non-cycle vertex}")
        else:
            if not (v_on and w_on):
                raise ValidationError("R2' contracts an edge joining two cycles")
        return _contract(net, vertex, detail)
    raise ValidationError("unknown move %r (use R1, R2, R1', R2')" % move)


def maximal_partial_resolution(net: Network) -> Network:
    """Apply R1/R2 exhaustively; the result admits only the primed moves."""
    net.require_1nested()
    current = net
    while True:
        cls = classify(current)
        if cls.is_max_partially_resolved:
            return current
        applied = False
        for v in range(current.num_vertices):
            if len(current.cycles_at[v]) >= 2:
                current = partially_resolve(current, v, "R2")
                applied = True
                break
            if current.cycles_at[v] and len(current.non_cycle_edges_at(v)) >= 2:
                current = partially_resolve(current, v, "R1")
                applied = True
                break
        if not applied:  # pragma: no cover - classify() said a move exists
            return current
