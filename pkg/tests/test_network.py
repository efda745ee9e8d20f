"""Networks: validation, displayed splits, multiplicity, resolution moves."""

import itertools
import random

import pytest

import splitnest as sn
from splitnest.network import make_network
from splitnest.oracle import brute_min_cuts

from conftest import (
    random_1nested_network,
    random_max_resolved_network,
    split,
    system,
    taxa,
)


def simple_cycle_network(n: int) -> sn.Network:
    edges = []
    for p in range(n):
        edges.append((("c", p), ("c", (p + 1) % n)))
        edges.append((("c", p), ("leaf", p)))
    return make_network(taxa(n), edges, {("leaf", x): x for x in range(n)})


def star_tree(n: int) -> sn.Network:
    edges = [(("hub",), ("leaf", x)) for x in range(n)]
    return make_network(taxa(n), edges, {("leaf", x): x for x in range(n)})


def theta_network() -> sn.Network:
    """Two 4-cycles sharing an edge (not 1-nested)."""
    edges = [
        ("u", "v"), ("u", "a"), ("a", "b"), ("b", "v"),
        ("u", "c"), ("c", "d"), ("d", "v"),
        ("a", ("leaf", 0)), ("b", ("leaf", 1)), ("c", ("leaf", 2)), ("d", ("leaf", 3)),
    ]
    return make_network(taxa(4), edges, {("leaf", x): x for x in range(4)})


def test_classify_simple_cycle():
    cls = sn.classify(simple_cycle_network(4))
    assert cls.is_1nested and cls.is_level1 and cls.is_simple
    assert cls.is_max_partially_resolved


def test_classify_star():
    cls = sn.classify(star_tree(4))
    assert cls.is_1nested
    assert not cls.is_level1  # degree-4 hub
    assert cls.is_simple  # all cut-edges are leaf edges
    assert cls.is_max_partially_resolved


def test_classify_theta_not_1nested():
    cls = sn.classify(theta_network())
    assert not cls.is_1nested
    with pytest.raises(sn.NetworkInvariantError, match="1-nested"):
        sn.splits_of(theta_network())


def test_base_invariant_errors():
    # triangle cycle
    edges = [("a", "b"), ("b", "c"), ("c", "a"),
             ("a", ("leaf", 0)), ("b", ("leaf", 1)), ("c", ("leaf", 2))]
    tri = make_network(taxa(3), edges, {("leaf", x): x for x in range(3)})
    with pytest.raises(sn.NetworkInvariantError) as err:
        sn.classify(tri)
    assert err.value.reason == "cycle-length"
    # degree-two internal vertex
    path = make_network(
        taxa(3),
        [("h", "m"), ("m", ("leaf", 0)), ("h", ("leaf", 1)), ("h", ("leaf", 2))],
        {("leaf", x): x for x in range(3)},
    )
    with pytest.raises(sn.NetworkInvariantError) as err:
        sn.classify(path)
    assert err.value.reason in ("degree", "leaf-labeling")
    # disconnected
    disc = sn.Network(taxa(3), 5, frozenset({(0, 3), (1, 3), (2, 3)}), (0, 1, 2))
    with pytest.raises(sn.NetworkInvariantError) as err:
        sn.classify(disc)
    assert err.value.reason == "not-connected"


def test_splits_of_simple_cycle4():
    got = sn.splits_of(simple_cycle_network(4))
    want = system(4, "1", "2", "3", "4", "12", "23")
    assert got.splits == want.splits
    assert got.splits == brute_min_cuts(simple_cycle_network(4)).splits


def test_splits_of_tree_is_edge_splits():
    tr = sn.buneman_tree(system(5, "12", "123").with_all_trivial())
    got = sn.splits_of(tr)
    assert got.splits == system(5, "12", "123").with_all_trivial().splits
    assert got.splits == brute_min_cuts(tr).splits


INTRO_SIDES = ["81", "78", "781", "234", "34", "345", "2345", "3456", "56"]


def intro_network() -> sn.Network:
    return sn.minimal_1nested(system(8, *INTRO_SIDES).with_all_trivial())


def test_m_splits_of_intro_4cycle():
    net = intro_network()
    four = next(c for c in net.cycles if len(c) == 4)
    got = sn.m_splits(net, four)
    want = system(8, "7", "8", "1", "781")
    assert got.splits == want.splits
    five = next(c for c in net.cycles if len(c) == 5)
    assert len(sn.m_splits(net, five)) == 5
    with pytest.raises(sn.ValidationError):
        sn.m_splits(net, (0, 1, 2))


def test_m_splits_simple_cycle_trivial():
    net = simple_cycle_network(4)
    got = sn.m_splits(net, net.cycles[0])
    assert got.splits == sn.all_trivial_splits(taxa(4)).splits


def multiplicity_oracle(net: sn.Network, s: sn.Split) -> int:
    """Count minimal cuts inducing s by explicit subset enumeration."""
    from splitnest.graphs import connected_components, norm_edge

    count = 0
    edges = sorted(net.edges)
    nv = net.num_vertices

    def leafsets(banned):
        adj = [[w for w in net.adjacency[v] if norm_edge(v, w) not in banned] for v in range(nv)]
        comps = connected_components(nv, adj)
        masks = []
        for comp in comps:
            m = 0
            for v in comp:
                x = net.taxon_of_leaf.get(v)
                if x is not None:
                    m |= 1 << x
            masks.append(m)
        return comps, masks

    def disconnects(banned):
        return len(leafsets(banned)[0]) > 1

    for e in edges:
        comps, masks = leafsets(frozenset((e,)))
        if len(comps) == 2 and 0 not in masks and sn.Split.of(net.taxa.n, masks[0]) == s:
            count += 1
    for e, f in itertools.combinations(edges, 2):
        if disconnects(frozenset((e,))) or disconnects(frozenset((f,))):
            continue
        comps, masks = leafsets(frozenset((e, f)))
        if len(comps) == 2 and 0 not in masks and sn.Split.of(net.taxa.n, masks[0]) == s:
            count += 1
    return count


def test_split_multiplicity_examples():
    net = intro_network()
    # trivial split at a leaf hanging off a cycle vertex: bridge + cycle pair
    s7 = split(8, "7")
    assert sn.split_multiplicity(net, s7) == 2 == multiplicity_oracle(net, s7)
    # interior tree edge not touching a cycle: multiplicity one
    tr = sn.buneman_tree(system(6, "123").with_all_trivial())
    s = split(6, "123")
    assert sn.split_multiplicity(tr, s) == 1 == multiplicity_oracle(tr, s)
    # splits never displayed
    assert sn.split_multiplicity(net, split(8, "13")) == 0


def test_split_multiplicity_three():
    """A cut-edge bridging two cycles is one of three cuts for its split."""
    edges = []
    for side, leaves in (("A", (0, 1, 2)), ("B", (3, 4, 5))):
        ring = [(side, p) for p in range(4)]
        for p in range(4):
            edges.append((ring[p], ring[(p + 1) % 4]))
        for i, x in enumerate(leaves):
            edges.append(((side, i + 1), ("leaf", x)))
    edges.append((("A", 0), ("B", 0)))
    net = make_network(taxa(6), edges, {("leaf", x): x for x in range(6)})
    assert sn.classify(net).is_1nested
    s = split(6, "123")
    assert sn.split_multiplicity(net, s) == 3 == multiplicity_oracle(net, s)


def test_splits_of_agrees_with_cut_oracle_randomized(rng):
    for _ in range(25):
        n = rng.randint(4, 8)
        net = random_1nested_network(rng, n)
        assert sn.splits_of(net).splits == brute_min_cuts(net).splits


# -- resolution moves -----------------------------------------------------------


def test_r2_recovers_bridge_between_cycles():
    net = intro_network()
    bridge = next(
        e for e in net.bridges
        if net.cycles_at[e[0]] and net.cycles_at[e[1]]
    )
    collapsed = sn.partially_resolve(net, bridge[0], "R2'", bridge[1])
    assert not sn.classify(collapsed).is_max_partially_resolved
    shared = next(v for v in range(collapsed.num_vertices) if len(collapsed.cycles_at[v]) == 2)
    back = sn.partially_resolve(collapsed, shared, "R2")
    assert sn.equivalent(net, back)
    assert back.num_vertices == net.num_vertices
    assert sn.equivalent(net, sn.maximal_partial_resolution(collapsed))


def test_r1_and_inverse_are_identity_up_to_iso():
    # 4-cycle where one vertex carries two leaves via R1' collapse
    edges = []
    ring = [("c", p) for p in range(4)]
    for p in range(4):
        edges.append((ring[p], ring[(p + 1) % 4]))
    for x in range(3):
        edges.append((ring[x], ("leaf", x)))
    edges += [(ring[3], "w"), ("w", ("leaf", 3)), ("w", ("leaf", 4))]
    net = make_network(taxa(5), edges, {("leaf", x): x for x in range(5)})
    # collapse the {cycle vertex, w} cut-edge, then resolve back
    v = next(v for v in range(net.num_vertices) if net.cycles_at[v] and any(
        w not in net.taxon_of_leaf and not net.cycles_at[w] for w in net.adjacency[v]))
    w = next(w for w in net.adjacency[v] if w not in net.taxon_of_leaf and not net.cycles_at[w])
    collapsed = sn.partially_resolve(net, v, "R1'", w)
    assert sn.splits_of(collapsed).splits == sn.splits_of(net).splits
    vv = next(u for u in range(collapsed.num_vertices) if collapsed.cycles_at[u] and len(collapsed.non_cycle_edges_at(u)) == 2)
    back = sn.partially_resolve(collapsed, vv, "R1")
    assert sn.equivalent(net, back)
    assert back.num_vertices == net.num_vertices and len(back.edges) == len(net.edges)


def test_move_preconditions():
    net = simple_cycle_network(4)
    with pytest.raises(sn.ValidationError, match="R1 needs"):
        sn.partially_resolve(net, 0, "R1")
    with pytest.raises(sn.ValidationError, match="R2 needs"):
        sn.partially_resolve(net, 0, "R2")
    with pytest.raises(sn.ValidationError, match="unknown move"):
        sn.partially_resolve(net, 0, "R9")


def test_moves_preserve_split_sets_randomized(rng):
    for _ in range(20):
        net = random_1nested_network(rng, rng.randint(5, 8))
        before = sn.splits_of(net).splits
        moved = None
        for v in range(net.num_vertices):
            if len(net.cycles_at[v]) >= 2:
                moved = sn.partially_resolve(net, v, "R2")
                break
            if net.cycles_at[v] and len(net.non_cycle_edges_at(v)) >= 2:
                moved = sn.partially_resolve(net, v, "R1")
                break
        if moved is not None:
            assert sn.splits_of(moved).splits == before
        resolved = sn.maximal_partial_resolution(net)
        assert sn.classify(resolved).is_max_partially_resolved
        assert sn.splits_of(resolved).splits == before


def test_maximal_resolution_fixpoint():
    net = intro_network()
    again = sn.maximal_partial_resolution(net)
    assert again.num_vertices == net.num_vertices
    assert sn.equivalent(net, again)


def test_resolution_confluence_randomized(rng):
    """Different collapse orders resolve back to the same canonical shape."""
    for _ in range(10):
        net = random_max_resolved_network(rng, rng.randint(5, 7))
        variants = []
        for seed in (1, 2):
            r = random.Random(seed)
            cur = net
            for _ in range(3):
                cands = []
                for u, v in sorted(cur.edges - cur.all_cycle_edges):
                    if u in cur.taxon_of_leaf or v in cur.taxon_of_leaf:
                        continue
                    u_on, v_on = bool(cur.cycles_at[u]), bool(cur.cycles_at[v])
                    if u_on and v_on:
                        cands.append((u, "R2'", v))
                    elif u_on:
                        cands.append((u, "R1'", v))
                    elif v_on:
                        cands.append((v, "R1'", u))
                if not cands:
                    break
                cur = sn.partially_resolve(cur, *r.choice(cands))
            variants.append(sn.maximal_partial_resolution(cur))
        a, b = variants
        assert sn.equivalent(a, b)
        assert a.num_vertices == b.num_vertices and len(a.edges) == len(b.edges)


def test_equivalent_examples():
    n1 = simple_cycle_network(4)
    assert sn.equivalent(n1, n1)
    edges = []
    order = [0, 2, 1, 3]
    for p in range(4):
        edges.append((("c", p), ("c", (p + 1) % 4)))
        edges.append((("c", p), ("leaf", order[p])))
    n2 = make_network(taxa(4), edges, {("leaf", x): x for x in range(4)})
    assert not sn.equivalent(n1, n2)


# -- split-system-level properties of displayed systems --------------------------


def test_displayed_systems_are_circular_and_closed(rng):
    from splitnest.closure import is_i_closed
    from splitnest.oracle import brute_circular

    for _ in range(20):
        n = rng.randint(4, 8)
        net = random_1nested_network(rng, n)
        sig = sn.splits_of(net)
        assert sig.has_all_trivial()
        assert is_i_closed(sig)
        assert brute_circular(sig) is not None
        for s1, s2 in itertools.combinations(sig.sorted_splits, 2):
            if not sn.compatible(s1, s2):
                assert sn.i_intersection(s1, s2) <= sig.splits


def test_incompatible_iff_same_cycle(rng):
    """Two displayed splits are incompatible iff some single cycle displays
    both via edge pairs."""
    for _ in range(12):
        net = random_1nested_network(rng, rng.randint(5, 8))
        n = net.taxa.n
        per_cycle = []
        for ci in range(len(net.cycles)):
            classes = net.cycle_classes[ci]
            k = len(classes)
            sp = set()
            for i in range(k):
                m = 0
                for j in range(i + 1, k):
                    m |= classes[j]
                    sp.add(sn.Split.of(n, m))
            per_cycle.append(sp)
        sig = sn.splits_of(net)
        for s1, s2 in itertools.combinations(sig.sorted_splits, 2):
            same_cycle = any(s1 in sp and s2 in sp for sp in per_cycle)
            if not sn.compatible(s1, s2):
                assert same_cycle


def test_level1_iff_no_outside_compatible_split(rng):
    """On maximal partially-resolved networks: level-1 exactly when no
    absent split is compatible with the whole displayed system."""
    cases = 0
    while cases < 12:
        net = random_max_resolved_network(rng, rng.randint(4, 7))
        sig = sn.splits_of(net)
        n = net.taxa.n
        full = (1 << n) - 1
        outside_ok = False
        for bits in range(1, full):
            s = sn.Split.of(n, bits)
            if s in sig.splits:
                continue
            if all(sn.compatible(s, t) for t in sig.splits):
                outside_ok = True
                break
        assert sn.classify(net).is_level1 == (not outside_ok)
        cases += 1
