"""The Buneman graph of a split system and its structure theory.

A vertex of the Buneman graph picks one side of every split such that any
two picked sides intersect; two vertices are adjacent when they differ on
exactly one split.  Vertices are encoded as int bitmasks over the canonical
split order of the system: bit i set means the vertex picks split i's
canonical side (the one containing taxon 0).

Construction expands breadth-first from the Kuratowski maps (pick S(x) for
every split) using the neighbour rule: flipping a vertex at any split whose
picked side is set-inclusion minimal among the picked sides gives exactly
the neighbours, so the degree equals the number of minimal picked sides.

Blocks of the graph (counting cut-edges) correspond bijectively to the
connected components of the incompatibility graph.  Inside the block of a
cycle-like component sits a marguerite: a flower-shaped subgraph given by
closed formulas whose external vertices are the gates of the block, i.e.
the nearest-point projections of the rest of the graph.  Gates drive both
the embedding of a 1-nested network into its Buneman graph and the inverse
extraction of the optimal 1-nested network from the graph.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .core import Split, SplitSystem, compatible, indices_of
from .errors import NotCircularError, ResourceCapError, SplitnestError, ValidationError
from .graphs import biconnected_components, norm_edge
from .incompat import incompatibility_graph, taxa_partition
from .network import Network, classify, make_network, splits_of
from .synthesis import component_class_ordering

DEFAULT_VERTEX_CAP = 10**6
VERTEX_CAP_ENV = "SPLITNEST_MAX_VERTICES"


def vertex_cap() -> int:
    raw = os.environ.get(VERTEX_CAP_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValidationError("%s must be an integer, got %r" % (VERTEX_CAP_ENV, raw))
    return DEFAULT_VERTEX_CAP


def max_side(s: Split, other: Split) -> int:
    """The side of s meeting both sides of a distinct compatible split."""
    if s == other or not compatible(s, other):
        raise ValidationError("max side needs a distinct compatible split")
    a = s.bits
    if a & other.bits and a & other.complement_bits:
        return a
    return s.complement_bits


def max_side_vs(s: Split, comp: Sequence[Split]) -> int:
    """max(S | component): the side of s meeting both sides of every member.

    Well-defined whenever s lies outside the component (any member gives
    the same side); computed from the first member.
    """
    return max_side(s, comp[0])


@dataclass(frozen=True)
class BunemanGraph:
    """Buneman graph with vertices as side-selection masks over `splits`."""

    system: SplitSystem
    splits: tuple[Split, ...]
    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]]  # pairs of indices into `vertices`

    @cached_property
    def index(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in self.vertices]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def kuratowski_masks(self) -> tuple[int, ...]:
        return tuple(kuratowski_mask(self.splits, x) for x in range(self.system.n))

    def side_mask(self, choice: int, i: int) -> int:
        """Taxa mask of the side picked at split i by selection `choice`."""
        s = self.splits[i]
        return s.bits if (choice >> i) & 1 else s.complement_bits

    def has_vertex(self, choice: int) -> bool:
        return choice in self.index

    @cached_property
    def split_index(self) -> dict[Split, int]:
        return {s: i for i, s in enumerate(self.splits)}

    @cached_property
    def components(self) -> tuple[tuple[Split, ...], ...]:
        graph = incompatibility_graph(self.system)
        return tuple(
            tuple(graph.splits[i] for i in members) for members in graph.component_members
        )

    @cached_property
    def blocks(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        raw = biconnected_components(len(self.vertices), self.adjacency)
        return tuple(
            tuple(sorted(norm_edge(u, v) for u, v in b))
            for b in sorted(raw, key=lambda b: min(norm_edge(u, v) for u, v in b))
        )

    def theta_block_vertices(self, comp: Sequence[Split]) -> frozenset[int]:
        """Vertex set of the block corresponding to a component, by formula.

        A vertex belongs to the block iff outside the component it picks
        max(S | component) everywhere.
        """
        want = 0
        mask = 0
        comp_set = set(comp)
        for i, s in enumerate(self.splits):
            if s in comp_set:
                continue
            mask |= 1 << i
            if max_side_vs(s, list(comp)) == s.bits:
                want |= 1 << i
        return frozenset(v for v, m in enumerate(self.vertices) if m & mask == want)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def kuratowski_mask(splits: Sequence[Split], x: int) -> int:
    m = 0
    for i, s in enumerate(splits):
        m |= ((s.bits >> x) & 1) << i
    return m


def kuratowski(sigma: SplitSystem, x: int) -> int:
    """The selection mask of the Kuratowski map of taxon x (pick S(x))."""
    if not 0 <= x < sigma.n:
        raise ValidationError("unknown taxon index %d" % x)
    return kuratowski_mask(sigma.sorted_splits, x)


def _min_support(splits: Sequence[Split], choice: int) -> list[int]:
    """Indices of the set-inclusion minimal picked sides."""
    m = len(splits)
    sides = [
        splits[i].bits if (choice >> i) & 1 else splits[i].complement_bits for i in range(m)
    ]
    out = []
    for i in range(m):
        si = sides[i]
        minimal = True
        for j in range(m):
            if j != i and sides[j] & ~si == 0:
                minimal = False
                break
        if minimal:
            out.append(i)
    return out


def buneman_graph(sigma: SplitSystem, max_vertices: Optional[int] = None) -> BunemanGraph:
    """Build the Buneman graph by BFS from the Kuratowski maps.

    Relies on connectivity of the graph (a standard fact, cross-checked
    against the exhaustive oracle in the tests).  Raises ResourceCapError
    with partial statistics when more than `max_vertices` vertices appear
    (default from SPLITNEST_MAX_VERTICES or 10**6).
    """
    if not sigma.splits:
        raise ValidationError("the Buneman graph of an empty system is not provided")
    cap = vertex_cap() if max_vertices is None else max_vertices
    splits = sigma.sorted_splits
    seen: dict[int, None] = {}
    edges: set[tuple[int, int]] = set()
    queue: deque[int] = deque()
    for x in range(sigma.n):
        m = kuratowski_mask(splits, x)
        if m not in seen:
            seen[m] = None
            queue.append(m)
    adjacency_pairs: list[tuple[int, int]] = []
    while queue:
        v = queue.popleft()
        for i in _min_support(splits, v):
            w = v ^ (1 << i)
            adjacency_pairs.append((v, w))
            if w not in seen:
                if len(seen) >= cap:
                    raise ResourceCapError(
                        "Buneman graph exceeded %d vertices" % cap,
                        cap=cap,
                        vertices_seen=len(seen),
                        splits=len(splits),
                    )
                seen[w] = None
                queue.append(w)
    vertices = tuple(sorted(seen))
    index = {m: i for i, m in enumerate(vertices)}
    for v, w in adjacency_pairs:
        edges.add(norm_edge(index[v], index[w]))
    return BunemanGraph(sigma, splits, vertices, frozenset(edges))


def degree_support(g: BunemanGraph, choice: int) -> SplitSystem:
    """The splits whose picked side is minimal; their count is the degree."""
    if choice not in g.index:
        raise ValidationError("not a vertex of this Buneman graph")
    return SplitSystem(
        g.system.taxa, frozenset(g.splits[i] for i in _min_support(g.splits, choice))
    )


def _resolve_component(g: BunemanGraph, component) -> tuple[Split, ...]:
    if isinstance(component, int):
        return g.components[component]
    if isinstance(component, SplitSystem):
        want = component.splits
    else:
        want = frozenset(component)
    for comp in g.components:
        if frozenset(comp) == want:
            return comp
    raise ValidationError("not a component of the incompatibility graph of this system")


def gate(g: BunemanGraph, choice: int, component) -> int:
    """The gate of a vertex in the block of a component.

    Keeps the vertex's picks on the component and switches every other
    split to max(S | component); satisfies the metric gate identity
    D(phi, psi) = D(phi, gate) + D(gate, psi) for psi in the block.
    """
    if choice not in g.index:
        raise ValidationError("not a vertex of this Buneman graph")
    comp = _resolve_component(g, component)
    comp_idx = {g.split_index[s] for s in comp}
    out = 0
    for i, s in enumerate(g.splits):
        if i in comp_idx:
            out |= choice & (1 << i)
        elif max_side_vs(s, list(comp)) == s.bits:
            out |= 1 << i
    return out


def gates_of(g: BunemanGraph) -> frozenset[int]:
    """All proper gates: projections of the Kuratowski maps into the blocks.

    Leaves are their own gates in their pendant blocks and are excluded;
    with all trivial splits present this is exactly the image of the
    non-leaf vertices of the displaying network under its embedding.
    """
    out = set()
    for comp in g.components:
        for x in range(g.system.n):
            out.add(gate(g, g.kuratowski_masks[x], comp))
    return frozenset(out) - frozenset(g.kuratowski_masks)


def distance(g: BunemanGraph, a: int, b: int) -> int:
    """Graph metric between two vertices: the size of their difference set."""
    return (a ^ b).bit_count()


# -- marguerites ---------------------------------------------------------------


@dataclass(frozen=True)
class Marguerite:
    """The flower subgraph of a full-cycle block, by closed formulas.

    `classes[p]` is the taxa mask at cyclic position p; `phi[(i, j)]` for
    j in 0..k-3 are the external-path vertices (phi[(i, k-3)] equals
    phi[(i+1, 0)]); `psi[(i, j)]` for j in 1..k-4 are the inner vertices.
    `psi_identities` records the boundary identifications that actually
    hold among the inner vertices, as measured on the graph.
    """

    k: int
    classes: tuple[int, ...]
    phi: dict[tuple[int, int], int]
    psi: dict[tuple[int, int], int]
    psi_identities: tuple[tuple[tuple[int, int], tuple[int, int]], ...]

    @property
    def external_vertices(self) -> tuple[int, ...]:
        return tuple(self.phi[(i, 0)] for i in range(self.k))

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.phi.values()) | frozenset(self.psi.values())


def _interval_positions(k: int, a: int, b: int) -> int:
    """Position mask of the cyclic interval a..b (inclusive, mod k)."""
    m = 0
    p = a % k
    while True:
        m |= 1 << p
        if p == b % k:
            return m
        p = (p + 1) % k


def marguerite(g: BunemanGraph, component, k: Optional[int] = None) -> Marguerite:
    """The marguerite of the block of a full-cycle component.

    The component must have two or more splits (a cut-edge block has no
    marguerite) and must quotient to the complete nontrivial interval
    system on its classes, which is the case for every component of the
    split system of a 1-nested network.
    """
    comp = _resolve_component(g, component)
    if len(comp) < 2:
        raise ValidationError("a cut-edge block has no marguerite")
    n = g.system.n
    classes = taxa_partition(comp, n)
    if k is not None and k != len(classes):
        raise ValidationError("component has %d classes, not k=%d" % (len(classes), k))
    k = len(classes)
    from .core import TaxaSet

    qtaxa = TaxaSet.of("c%d" % i for i in range(k))
    qsides = []
    for s in comp:
        qside = 0
        for qi, m in enumerate(classes):
            if m & s.bits == m:
                qside |= 1 << qi
        qsides.append(qside)
    qsys = SplitSystem.of(qtaxa, qsides)
    if len(qsys) != k * (k - 1) // 2 - k:
        raise ValidationError(
            "component is not a full cycle system (%d of %d splits); marguerite undefined"
            % (len(qsys), k * (k - 1) // 2 - k)
        )
    ordering = component_class_ordering(qsys)
    if ordering is None:
        raise ValidationError("component classes admit no cyclic ordering")
    # classes in cyclic position order
    pos_classes = tuple(classes[ordering.order[p]] for p in range(k))
    zero_pos = next(p for p in range(k) if pos_classes[p] & 1)

    comp_set = set(comp)
    lift_bits = 0  # picks outside the component, fixed by max(S | component)
    outside_mask = 0
    for t, s in enumerate(g.splits):
        if s in comp_set:
            continue
        outside_mask |= 1 << t
        if max_side_vs(s, list(comp)) == s.bits:
            lift_bits |= 1 << t

    # position mask of each component split's side containing position p
    qside_at: dict[int, int] = {}
    for s in comp:
        m = 0
        for p in range(k):
            if pos_classes[p] & s.bits == pos_classes[p]:
                m |= 1 << p
        qside_at[g.split_index[s]] = m

    def phi_mask(i: int, j: int) -> int:
        window = _interval_positions(k, i - j, i)
        out = lift_bits
        for t, s in enumerate(g.splits):
            if s not in comp_set:
                continue
            side_i = qside_at[t] if (qside_at[t] >> (i % k)) & 1 else (
                ((1 << k) - 1) & ~qside_at[t]
            )
            if side_i & ~window == 0:
                side = ((1 << k) - 1) & ~side_i
            else:
                side = side_i
            if (side >> zero_pos) & 1:
                out |= 1 << t
        return out

    def plus_split_index(i: int) -> int:
        pair = (1 << (i % k)) | (1 << ((i + 1) % k))
        for t, m in qside_at.items():
            if m == pair or m == ((1 << k) - 1) & ~pair:
                return t
        raise SplitnestError("adjacent-pair split missing from a full cycle system")

    phi: dict[tuple[int, int], int] = {}
    psi: dict[tuple[int, int], int] = {}
    for i in range(k):
        for j in range(k - 2):
            phi[(i, j)] = phi_mask(i, j)
        sp = plus_split_index(i)
        for j in range(1, k - 3):
            psi[(i, j)] = phi[(i, j)] ^ (1 << sp)
    for key, m in list(phi.items()) + list(psi.items()):
        if m not in g.index:
            raise SplitnestError("closed-form marguerite vertex %s is not in the graph" % (key,))
    identities = []
    seenpairs = set()
    items = sorted(psi.items())
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            if items[a][1] == items[b][1]:
                pair = (items[a][0], items[b][0])
                if pair not in seenpairs:
                    seenpairs.add(pair)
                    identities.append(pair)
    return Marguerite(k, pos_classes, phi, psi, tuple(identities))


def marguerites(g: BunemanGraph) -> tuple[Marguerite, ...]:
    return tuple(
        marguerite(g, comp) for comp in g.components if len(comp) >= 2
    )


# -- embedding a network -------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """The embedding of a 1-nested network into its Buneman graph.

    `vertex_image` maps every network vertex to a graph selection mask
    (leaves to their Kuratowski maps, internal vertices to gates);
    `edge_paths` maps every network edge to the path of masks replacing it
    (cycle edges expand to external marguerite paths).
    """

    network: Network
    graph: BunemanGraph
    vertex_image: dict[int, int]
    edge_paths: dict[tuple[int, int], tuple[int, ...]]

    def image_edges(self) -> frozenset[tuple[int, int]]:
        out = set()
        for path in self.edge_paths.values():
            for a, b in zip(path, path[1:]):
                out.add((min(a, b), max(a, b)))
        return out


def embed_network(net: Network) -> Embedding:
    """Embed a maximal partially-resolved 1-nested network into its graph.

    Leaves map to Kuratowski maps; a vertex on a cycle maps to the gate
    determined by its cycle's splits; a vertex on cut-edges only maps to
    the gate of its canonically chosen incident edge.  The map is a
    bijection onto the gates, and cycle edges expand to the external paths
    of the corresponding marguerites.
    """
    cls = classify(net)
    if not cls.is_1nested:
        raise ValidationError("embedding needs a 1-nested network")
    if not cls.is_max_partially_resolved:
        raise ValidationError("embedding needs a maximal partially-resolved network")
    sigma = splits_of(net)
    g = buneman_graph(sigma)
    n = net.taxa.n

    # the incompatibility component of a cycle: its splits spanning at
    # least two classes on both sides (the class splits are compatible
    # with everything and sit in blocks of their own)
    comp_of_cycle: dict[int, tuple[Split, ...]] = {}
    for ci, cyc in enumerate(net.cycles):
        classes = net.cycle_classes[ci]
        k = len(cyc)
        members: set[Split] = set()
        for i in range(k):
            m = 0
            for j in range(i + 1, k):
                m |= classes[j]
                if 2 <= j - i <= k - 2:
                    members.add(Split.of(n, m))
        comp_of_cycle[ci] = tuple(sorted(members, key=lambda s: s.bits))

    vertex_image: dict[int, int] = {}
    for x in range(n):
        vertex_image[net.leaf_of_taxon[x]] = g.kuratowski_masks[x]
    for v in range(net.num_vertices):
        if v in net.taxon_of_leaf:
            continue
        if net.cycles_at[v]:
            ci = net.cycles_at[v][0]
            comp = comp_of_cycle[ci]
            at = net.cycles[ci].index(v)
            near = net.cycle_classes[ci][at]
        else:
            e_v = min(norm_edge(v, w) for w in net.adjacency[v])
            near = net.leaf_mask_from(v, frozenset((e_v,)))
            comp = (Split.of(n, near),)
        x_v = (near & -near).bit_length() - 1
        comp_set = set(comp)
        mask = 0
        for t, s in enumerate(g.splits):
            if s in comp_set:
                mask |= ((s.bits >> x_v) & 1) << t
            elif max_side_vs(s, list(comp)) == s.bits:
                mask |= 1 << t
        if mask not in g.index:
            raise SplitnestError("network vertex image is not a Buneman vertex")
        vertex_image[v] = mask

    edge_paths: dict[tuple[int, int], tuple[int, ...]] = {}
    cycle_paths_done: set[tuple[int, int]] = set()
    for ci, cyc in enumerate(net.cycles):
        marg = marguerite(g, comp_of_cycle[ci])
        k = len(cyc)
        # cyclic position of each cycle vertex: match its class mask
        pos_of_vertex = {}
        for at, v in enumerate(cyc):
            mask = net.cycle_classes[ci][at]
            pos_of_vertex[v] = marg.classes.index(mask)
        for at, v in enumerate(cyc):
            w = cyc[(at + 1) % k]
            i, i2 = pos_of_vertex[v], pos_of_vertex[w]
            if (i2 - i) % k == 1:
                path = tuple(marg.phi[(i, j)] for j in range(k - 2))
            elif (i - i2) % k == 1:
                path = tuple(reversed([marg.phi[(i2, j)] for j in range(k - 2)]))
            else:  # pragma: no cover - cycle orders always agree
                raise SplitnestError("cycle order does not match marguerite order")
            if path[0] != vertex_image[v] or path[-1] != vertex_image[w]:
                raise SplitnestError("external path does not join the vertex gates")
            if v > w:
                path = path[::-1]  # orient along the normalized edge key
            edge_paths[norm_edge(v, w)] = path
            cycle_paths_done.add(norm_edge(v, w))
    for u, v in net.edges:
        e = norm_edge(u, v)
        if e not in cycle_paths_done:
            edge_paths[e] = (vertex_image[u], vertex_image[v])
    return Embedding(net, g, vertex_image, edge_paths)


# -- extracting a network ------------------------------------------------------


def extract_network(g: BunemanGraph) -> Network:
    """The optimal 1-nested network sitting inside a Buneman graph.

    For every multi-split block, joins consecutive gates by new edges and
    deletes the remaining block interior; then labels the Kuratowski leaves
    by their taxa and suppresses degree-two vertices.  The result displays
    the system of the graph's splits with as few displayed splits as
    possible.  Requires all trivial splits and a circular system.
    """
    sigma = g.system
    if not sigma.has_all_trivial():
        raise ValidationError("network extraction needs all trivial splits present")
    n = sigma.n
    verts: set[int] = set(g.vertices)
    edges: set[tuple[int, int]] = set()
    for u, v in g.edges:
        edges.add(norm_edge(g.vertices[u], g.vertices[v]))

    for comp in g.components:
        if len(comp) < 2:
            continue
        classes = taxa_partition(comp, n)
        k = len(classes)
        from .core import TaxaSet

        qtaxa = TaxaSet.of("c%d" % i for i in range(k))
        qsides = []
        for s in comp:
            qside = 0
            for qi, m in enumerate(classes):
                if m & s.bits == m:
                    qside |= 1 << qi
            qsides.append(qside)
        ordering = component_class_ordering(SplitSystem.of(qtaxa, qsides))
        if ordering is None:
            raise NotCircularError(
                "a block's component admits no cyclic class ordering",
                witness=SplitSystem(sigma.taxa, frozenset(comp)).format(),
            )
        gates = []
        for p in range(k):
            cls_mask = classes[ordering.order[p]]
            x = (cls_mask & -cls_mask).bit_length() - 1
            gates.append(gate(g, g.kuratowski_masks[x], comp))
        block_vertices = {g.vertices[i] for i in g.theta_block_vertices(comp)}
        doomed = block_vertices - set(gates)
        verts -= doomed
        edges = {e for e in edges if e[0] not in doomed and e[1] not in doomed}
        edges -= {e for e in edges if e[0] in block_vertices and e[1] in block_vertices}
        for p in range(k):
            edges.add(norm_edge(gates[p], gates[(p + 1) % k]))

    # suppress degree-two vertices (leaves are Kuratowski maps, never suppressed)
    leaf_masks = set(g.kuratowski_masks)
    changed = True
    while changed:
        changed = False
        deg: dict[int, list[int]] = {v: [] for v in verts}
        for a, b in edges:
            deg[a].append(b)
            deg[b].append(a)
        for v in verts:
            if v in leaf_masks:
                continue
            if len(deg[v]) == 2:
                a, b = deg[v]
                edges.discard(norm_edge(a, v))
                edges.discard(norm_edge(b, v))
                if a != b:
                    edges.add(norm_edge(a, b))
                verts.discard(v)
                changed = True
                break

    labels = {g.kuratowski_masks[x]: x for x in range(n)}
    net = make_network(sigma.taxa, sorted(edges), labels)
    classify(net)
    return net
