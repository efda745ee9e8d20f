"""Constructing networks from split systems.

The pipeline: decompose the incompatibility graph into components; each
component with two or more splits determines a partition of the taxa into
classes and, when the input is circular, a unique cyclic ordering of those
classes (recovered from the adjacent-pair splits of the component's
iota-closure, or for large components from a verified spectral seriation
of the separation counts).  The class splits of all cycles together with
the singleton components and the trivial splits form a compatible system;
its unique tree, with each cycle re-expanded in place of the corresponding
tree vertex, is the displaying network with the fewest displayed splits.

Circularity recognition falls out of the same construction: it succeeds
exactly on circular systems, and every returned ordering is re-verified
against the input before being reported, so a positive answer is always
sound.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .closure import i_closure_bounded, is_i_closed
from .core import (
    CircularOrdering,
    Split,
    SplitSystem,
    TaxaSet,
    all_trivial_splits,
    displays,
    indices_of,
    is_interval,
)
from .errors import NotCircularError, SplitnestError, ValidationError
from .incompat import incompatibility_graph, taxa_partition
from .network import Network, Edge, classify, make_network, splits_of

# components with at most this many classes use the exact closure route;
# larger ones try spectral seriation first (every answer is verified)
EXACT_ORDERING_MAX_CLASSES = 45


# -- trees -------------------------------------------------------------------


def buneman_tree(sigma: SplitSystem) -> Network:
    """The unique unrooted phylogenetic tree displaying a compatible system.

    Requires all trivial splits to be present (so that every taxon is a
    leaf) and pairwise compatibility.  Assembled directly from the laminar
    family of split sides away from taxon 0.
    """
    n = sigma.n
    if not sigma.has_all_trivial():
        missing = [
            sigma.taxa.names[x]
            for x in range(n)
            if Split.of(n, 1 << x) not in sigma.splits
        ]
        raise ValidationError("missing trivial splits for taxa: %s" % " ".join(missing))
    clusters = sorted((s.complement_bits for s in sigma.splits), key=lambda m: (m.bit_count(), m))
    for i, c in enumerate(clusters):
        for j in range(i + 1, len(clusters)):
            d = clusters[j]
            if c & d and c & ~d and d & ~c:
                raise ValidationError(
                    "system is not compatible: sides %s and %s cross"
                    % (
                        " ".join(sigma.taxa.names_of(c)),
                        " ".join(sigma.taxa.names_of(d)),
                    )
                )
    parent: dict[int, Optional[int]] = {}
    for i, c in enumerate(clusters):
        parent[c] = None
        for j in range(i + 1, len(clusters)):
            if c & ~clusters[j] == 0:
                parent[c] = clusters[j]  # first superset in size order: the minimal one
                break
    # parent[c] is None only for the top cluster X - {0}
    vid: dict[int, int] = {}
    for x in range(n):
        vid[1 << x] = x
    nxt = n
    for c in clusters:
        if c not in vid:
            vid[c] = nxt
            nxt += 1
    edges = set()
    top = sigma.taxa.full_mask & ~1
    for c in clusters:
        p = parent[c]
        if p is None:
            if c != top:
                raise ValidationError("system is not compatible (no parent for a side)")
            edges.add(tuple(sorted((0, vid[c]))))
        else:
            edges.add(tuple(sorted((vid[c], vid[p]))))
    leaf_of_taxon = tuple(range(n))
    net = Network(sigma.taxa, nxt, frozenset(edges), leaf_of_taxon)
    classify(net)
    return net


def simple_level1_from_maximal(sigma: SplitSystem) -> Network:
    """The cycle network of a maximal circular system (unique ordering).

    One pendant leaf per cycle vertex.  For n = 3 the maximal system is the
    three trivial splits and the displaying network is the star tree.
    """
    n = sigma.n
    want = n * (n - 1) // 2
    if len(sigma) != want:
        raise ValidationError(
            "not maximal circular: %d splits, a maximal system on %d taxa has %d"
            % (len(sigma), n, want)
        )
    if n == 3:
        return buneman_tree(sigma)
    ordering = _ordering_from_pair_splits(sigma)
    if ordering is None or not displays(ordering, sigma):
        raise ValidationError("not maximal circular: the 2-splits do not define a displaying cycle")
    edges = []
    for p in range(n):
        edges.append((("cyc", p), ("cyc", (p + 1) % n)))
        edges.append((("cyc", p), ("leaf", ordering.order[p])))
    return make_network(sigma.taxa, edges, {("leaf", x): x for x in range(n)})


def _ordering_from_pair_splits(sigma: SplitSystem) -> Optional[CircularOrdering]:
    """Read the cyclic ordering from the size-2 splits, if they form a cycle."""
    n = sigma.n
    nbrs: dict[int, set[int]] = {x: set() for x in range(n)}
    for s in sigma.splits:
        for side in s.sides():
            if side.bit_count() == 2:
                a, b = indices_of(side)
                nbrs[a].add(b)
                nbrs[b].add(a)
    if any(len(v) != 2 for v in nbrs.values()):
        return None
    walk = [0, min(nbrs[0])]
    while len(walk) < n:
        a, b = walk[-2], walk[-1]
        nxt = [w for w in nbrs[b] if w != a]
        if not nxt:
            return None
        walk.append(nxt[0])
    if walk[-1] not in nbrs[0] or len(set(walk)) != n:
        return None
    return CircularOrdering.of(walk)


# -- ordering recovery per component ------------------------------------------


def _spectral_candidates(qsys: SplitSystem) -> list[CircularOrdering]:
    """Seriation guesses for the class ordering of a large component.

    Both candidates order the classes by the angle of a 2-dimensional
    embedding of the split-separation counts (classical MDS, and the
    Laplacian eigenmap of the co-occurrence similarity).  Guesses are
    verified by the caller; a wrong guess is harmless.
    """
    k = qsys.n
    rows = np.zeros((len(qsys.splits), k), dtype=np.float64)
    for r, s in enumerate(qsys.sorted_splits):
        for x in indices_of(s.bits):
            rows[r, x] = 1.0
    colsum = rows.sum(axis=0)
    gram = rows.T @ rows
    dist = colsum[:, None] + colsum[None, :] - 2.0 * gram
    out = []
    try:
        # classical MDS on squared distances
        d2 = dist * dist
        centering = np.eye(k) - np.full((k, k), 1.0 / k)
        b = -0.5 * centering @ d2 @ centering
        _, vecs = np.linalg.eigh(b)
        xy = vecs[:, -2:]
        out.append(np.argsort(np.arctan2(xy[:, 0], xy[:, 1])))
        # Laplacian eigenmap on similarity
        w = dist.max() - dist
        np.fill_diagonal(w, 0.0)
        lap = np.diag(w.sum(axis=1)) - w
        _, vecs = np.linalg.eigh(lap)
        xy = vecs[:, 1:3]
        out.append(np.argsort(np.arctan2(xy[:, 0], xy[:, 1])))
    except np.linalg.LinAlgError:  # pragma: no cover - eigh on symmetric input
        pass
    orderings = []
    seen = set()
    for perm in out:
        o = CircularOrdering.of(int(v) for v in perm)
        if o.order not in seen:
            seen.add(o.order)
            orderings.append(o)
    return orderings


def component_class_ordering(qsys: SplitSystem) -> Optional[CircularOrdering]:
    """Cyclic ordering of the classes of one incompatibility component.

    `qsys` is the quotient system of the component (nontrivial on the
    classes, connected, all class pairs separated).  Returns a verified
    ordering displaying it, or None when there is none.

    Small components go through the iota-closure: for circular input the
    closure is the full interval system of the hidden ordering, whose
    adjacent-pair splits spell out the cycle.  The closure of a circular
    system never exceeds k(k-1)/2 splits, so overflowing that bound
    refutes circularity.
    """
    k = qsys.n
    if k > EXACT_ORDERING_MAX_CLASSES:
        for cand in _spectral_candidates(qsys):
            if displays(cand, qsys):
                return cand
        # fall through to the exact route
    bound = k * (k - 1) // 2
    closed = i_closure_bounded(qsys, bound)
    if closed is None:
        return None
    ordering = _ordering_from_pair_splits(closed)
    if ordering is None or not displays(ordering, qsys):
        return None
    return ordering


# -- the main construction ----------------------------------------------------


def _tree_vertex_partition(net: Network, v: int) -> frozenset[int]:
    """Leaf masks of the components of net minus an internal vertex v."""
    masks = []
    for w in net.adjacency[v]:
        e = (v, w) if v < w else (w, v)
        masks.append(net.leaf_mask_from(w, frozenset((e,))))
    return frozenset(masks)


def _expand_cycles(tree: Network, expansions: list[tuple[list[int], CircularOrdering]]) -> Network:
    """Replace one tree vertex per expansion by a cycle in the given class order."""
    taxa = tree.taxa
    next_id = tree.num_vertices
    # phase 1: locate each cycle's tree vertex and its ring layout
    ring_base: dict[int, int] = {}
    ring_k: dict[int, int] = {}
    port_of: dict[tuple[int, int], int] = {}  # (site, neighbour) -> ring position
    for classes, ordering in expansions:
        class_set = frozenset(classes)
        k = len(classes)
        site = None
        for v in range(tree.num_vertices):
            if tree.degree[v] == k and v not in tree.taxon_of_leaf and v not in ring_base:
                if _tree_vertex_partition(tree, v) == class_set:
                    site = v
                    break
        if site is None:
            raise NotCircularError(
                "no tree vertex matches a cycle's class partition",
                witness="classes %s" % [sorted(indices_of(c)) for c in classes],
            )
        pos_of_class = {ordering.order[p]: p for p in range(k)}
        for w in tree.adjacency[site]:
            e = (site, w) if site < w else (w, site)
            mask = tree.leaf_mask_from(w, frozenset((e,)))
            port_of[(site, w)] = pos_of_class[classes.index(mask)]
        ring_base[site] = next_id
        ring_k[site] = k
        next_id += k
    # phase 2: rebuild the edge set through the ring ports
    def end(v: int, toward: int) -> int:
        if v in ring_base:
            return ring_base[v] + port_of[(v, toward)]
        return v

    all_edges: set[tuple[int, int]] = set()
    for u, v in tree.edges:
        a, b = end(u, v), end(v, u)
        all_edges.add((a, b) if a < b else (b, a))
    for site, base in ring_base.items():
        k = ring_k[site]
        for p in range(k):
            a, b = base + p, base + (p + 1) % k
            all_edges.add((a, b) if a < b else (b, a))
    verts = sorted({v for e in all_edges for v in e})
    remap = {v: i for i, v in enumerate(verts)}
    return Network(
        taxa,
        len(verts),
        frozenset(tuple(sorted((remap[u], remap[v]))) for u, v in all_edges),
        tuple(remap[v] for v in tree.leaf_of_taxon),
    )


def _construct(sigma: SplitSystem) -> tuple[CircularOrdering, Network]:
    """Displaying network with minimal split count, plus a displaying ordering.

    Raises NotCircularError (with a witness) when sigma is not circular.
    Trivial splits are supplied automatically; the returned network is
    level-1 and maximal partially-resolved.
    """
    taxa = sigma.taxa
    n = taxa.n
    nontrivial = sigma.nontrivial()
    tree_splits: set[Split] = set(all_trivial_splits(taxa).splits)
    expansions: list[tuple[list[int], CircularOrdering]] = []
    if nontrivial.splits:
        graph = incompatibility_graph(nontrivial)
        for members in graph.component_members:
            comp_splits = tuple(graph.splits[i] for i in members)
            if len(comp_splits) == 1:
                tree_splits.add(comp_splits[0])
                continue
            classes = taxa_partition(comp_splits, n)
            k = len(classes)
            qtaxa = TaxaSet.of("c%d" % i for i in range(k))
            qsides = []
            for s in comp_splits:
                qside = 0
                for qi, m in enumerate(classes):
                    if m & s.bits == m:
                        qside |= 1 << qi
                    elif m & s.bits:
                        raise SplitnestError("class partition violated")  # pragma: no cover
                qsides.append(qside)
            qsys = SplitSystem.of(qtaxa, qsides)
            ordering = component_class_ordering(qsys)
            if ordering is None:
                raise NotCircularError(
                    "an incompatibility component admits no cyclic class ordering",
                    witness="component %s" % SplitSystem(taxa, frozenset(comp_splits)).format(),
                )
            for m in classes:
                if 0 < m.bit_count() < n:
                    tree_splits.add(Split.of(n, m))
            expansions.append((classes, ordering))
    skeleton = SplitSystem(taxa, frozenset(tree_splits))
    try:
        tree = buneman_tree(skeleton)
    except ValidationError as exc:
        raise NotCircularError("cycle and bridge splits are incompatible", witness=str(exc))
    net = _expand_cycles(tree, expansions) if expansions else tree
    ordering = circular_ordering_of(net)
    for s in sigma.splits:
        if not is_interval(ordering, s.bits):
            raise NotCircularError(
                "split not displayed by the constructed ordering",
                witness=s.format(taxa),
            )
    return ordering, net


def is_circular(sigma: SplitSystem) -> Optional[CircularOrdering]:
    """Some circular ordering displaying sigma, or None if there is none."""
    try:
        ordering, _ = _construct(sigma)
        return ordering
    except NotCircularError:
        return None


def minimal_1nested(sigma: SplitSystem) -> Network:
    """The displaying 1-nested network with the fewest displayed splits.

    Requires circular input (NotCircularError with a witness otherwise);
    trivial splits are added automatically when absent.  The result is
    unique up to `equivalent`.
    """
    _, net = _construct(sigma)
    return net


def splits_equivalence_check(sigma: SplitSystem) -> Optional[Network]:
    """The network displaying exactly sigma, when one exists.

    Requires all trivial splits.  A 1-nested network with split system
    equal to sigma exists iff sigma is circular and iota-closed; in that
    case the network is unique up to `equivalent` and is returned.
    """
    if not sigma.has_all_trivial():
        raise ValidationError("splits-equivalence check needs all trivial splits present")
    try:
        _, net = _construct(sigma)
    except NotCircularError:
        return None
    if not is_i_closed(sigma):
        return None
    got = splits_of(net)
    if got.splits != sigma.splits:  # pragma: no cover - excluded by theory
        raise SplitnestError("internal: minimal network of a closed system displays extra splits")
    return net


# -- reading an ordering off a network ----------------------------------------


def circular_ordering_of(net: Network) -> CircularOrdering:
    """A circular ordering displaying all splits of a 1-nested network.

    Reads the leaves off a planar traversal: cycles are walked around,
    pendant subtrees are emitted in place.
    """
    net.require_1nested()
    walked: set[int] = set()
    order: list[int] = []
    tol = net.taxon_of_leaf
    cyc_edges = net.all_cycle_edges

    def visit(v: int, in_edge: Optional[Edge]) -> None:
        x = tol.get(v)
        if x is not None:
            order.append(x)
            return
        for ci in net.cycles_at[v]:
            if ci in walked:
                continue
            walked.add(ci)
            cyc = net.cycles[ci]
            at = cyc.index(v)
            for t in range(1, len(cyc)):
                visit(cyc[(at + t) % len(cyc)], None)
        for w in net.adjacency[v]:
            e = (v, w) if v < w else (w, v)
            if e == in_edge or e in cyc_edges:
                continue
            visit(w, e)

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * net.num_vertices + 100))
    try:
        start = net.leaf_of_taxon[0]
        nbr = net.adjacency[start][0]
        order.append(0)
        visit(nbr, (min(start, nbr), max(start, nbr)))
    finally:
        sys.setrecursionlimit(old)
    return CircularOrdering.of(order)
