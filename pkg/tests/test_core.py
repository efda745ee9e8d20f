"""Core value types: splits, systems, orderings, compatibility."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import splitnest as sn
from splitnest.core import indices_of, mask_of

from conftest import side_set, split, system, taxa


def blocks_of(s: sn.Split) -> tuple[frozenset, frozenset]:
    return frozenset(indices_of(s.bits)), frozenset(indices_of(s.complement_bits))


def compatible_by_sets(s1: sn.Split, s2: sn.Split) -> bool:
    """Independent check: some of the four block intersections is empty."""
    if s1 == s2:
        return True
    a1, b1 = blocks_of(s1)
    a2, b2 = blocks_of(s2)
    return any(len(x & y) == 0 for x in (a1, b1) for y in (a2, b2))


# -- splits and canonical form -------------------------------------------------


def test_split_canonical_equality():
    s = split(5, "12")
    t = split(5, "345")
    assert s == t and hash(s) == hash(t)
    assert s.size == 2 and not s.is_trivial
    assert split(5, "1").is_trivial


def test_split_rejects_improper_sides():
    with pytest.raises(sn.ValidationError):
        sn.Split.of(4, [])
    with pytest.raises(sn.ValidationError):
        sn.Split.of(4, [0, 1, 2, 3])
    with pytest.raises(sn.ValidationError):
        sn.Split.of(4, [5])


def test_side_of_examples():
    s = split(5, "12")
    assert sn.side_of(s, 0) == {0, 1}
    assert sn.side_of(s, 3) == {2, 3, 4}
    for x in range(4):
        t = sn.Split.of(4, [x])
        assert sn.side_of(t, x) == {x}
    with pytest.raises(sn.ValidationError):
        sn.side_of(s, 7)


# -- compatibility --------------------------------------------------------------


def test_compatible_examples_against_set_oracle():
    cases = [
        (split(5, "12"), split(5, "123"), True),
        (split(5, "12"), split(5, "23"), False),
        (split(4, "12"), split(4, "23"), False),
    ]
    for s1, s2, expect in cases:
        assert compatible_by_sets(s1, s2) == expect
        assert sn.compatible(s1, s2) == expect


def test_compatible_symmetric_reflexive_and_matches_oracle():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(3, 8)
        full = (1 << n) - 1
        s1 = sn.Split.of(n, rng.randrange(1, full))
        s2 = sn.Split.of(n, rng.randrange(1, full))
        assert sn.compatible(s1, s1)
        assert sn.compatible(s1, s2) == sn.compatible(s2, s1) == compatible_by_sets(s1, s2)
        if not sn.compatible(s1, s2):
            a1, b1 = blocks_of(s1)
            a2, b2 = blocks_of(s2)
            assert all(x & y for x in (a1, b1) for y in (a2, b2))


def test_compatible_rejects_taxa_mismatch():
    with pytest.raises(sn.ValidationError):
        sn.compatible(split(4, "12"), split(5, "12"))


def test_is_compatible_system():
    assert sn.is_compatible_system(system(5, "12", "123", "1"))
    assert not sn.is_compatible_system(system(4, "12", "23"))
    assert sn.is_compatible_system(system(4, "12"))


# -- orderings -------------------------------------------------------------------


def test_ordering_canonical_under_rotation_and_reflection():
    base = sn.CircularOrdering.of([0, 1, 2, 3, 4])
    for rot in range(5):
        seq = [(i + rot) % 5 for i in range(5)]
        assert sn.CircularOrdering.of(seq) == base
        assert sn.CircularOrdering.of(list(reversed(seq))) == base


def test_ordering_rejects_non_permutation():
    with pytest.raises(sn.ValidationError):
        sn.CircularOrdering.of([0, 1, 1, 3])


def test_is_interval_examples():
    o = sn.CircularOrdering.identity(5)
    assert sn.is_interval(o, [1, 2])
    assert sn.is_interval(o, [4, 0])  # wraps
    assert not sn.is_interval(o, [0, 2])
    with pytest.raises(sn.ValidationError):
        sn.is_interval(o, [])


def test_displays_examples():
    o = sn.CircularOrdering.identity(5)
    assert sn.displays(o, system(5, "12", "23"))
    assert not sn.displays(o, system(5, "13"))
    assert sn.displays(o, sn.all_trivial_splits(taxa(5)))


def test_displays_invariant_under_rotation_reflection():
    sig = system(5, "12", "23")
    for rot in range(5):
        seq = [(i + rot) % 5 for i in range(5)]
        assert sn.displays(sn.CircularOrdering.of(seq), sig)
        assert sn.displays(sn.CircularOrdering.of(list(reversed(seq))), sig)


# -- interval split enumeration ---------------------------------------------------


def arcs_by_enumeration(o: sn.CircularOrdering, n: int) -> set[frozenset]:
    """Oracle: enumerate every arc by start/length explicitly."""
    out = set()
    for start in range(n):
        for length in range(1, n):
            out.add(frozenset(o.order[(start + t) % n] for t in range(length)))
    # identify complements
    dedup = set()
    for a in out:
        b = frozenset(range(n)) - a
        dedup.add(a if 0 in a else b)
    return dedup


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_all_splits_of_ordering_matches_arc_enumeration(n):
    o = sn.CircularOrdering.identity(n)
    got = sn.all_splits_of_ordering(o, taxa(n))
    assert len(got) == n * (n - 1) // 2
    assert side_set(got) == arcs_by_enumeration(o, n)
    assert sn.displays(o, got)


def test_all_splits_n4_content():
    o = sn.CircularOrdering.identity(4)
    got = sn.all_splits_of_ordering(o, taxa(4))
    want = system(4, "1", "2", "3", "4", "12", "23")
    assert got.splits == want.splits


def test_sigma_d_examples():
    o5 = sn.CircularOrdering.identity(5)
    got = sn.sigma_d(o5, taxa(5))
    assert got.splits == system(5, "12", "23", "34", "45", "51").splits
    o4 = sn.CircularOrdering.identity(4)
    assert sn.sigma_d(o4, taxa(4)).splits == system(4, "12", "23").splits
    o6 = sn.CircularOrdering.identity(6)
    assert len(sn.sigma_d(o6, taxa(6))) == 6
    with pytest.raises(sn.ValidationError):
        sn.sigma_d(sn.CircularOrdering.identity(3), taxa(3))
    assert sn.sigma_d(o5, taxa(5)).splits <= sn.all_splits_of_ordering(o5, taxa(5)).splits


def test_remove_trivial():
    sig = system(5, "1", "12")
    assert sn.remove_trivial(sig).splits == system(5, "12").splits
    assert not sn.remove_trivial(sn.all_trivial_splits(taxa(5))).splits
    nt = system(5, "12", "23")
    assert sn.remove_trivial(nt).splits == nt.splits


# -- quotient ----------------------------------------------------------------------


def test_quotient_examples():
    sig = system(5, "12")
    q = sn.quotient(sig, [[0, 1], [2], [3, 4]])
    assert q.taxa.names == ("1", "3", "4")
    assert side_set(q) == {frozenset([0])}
    singletons = sn.quotient(sig, [[0], [1], [2], [3], [4]])
    assert side_set(singletons) == side_set(sig)
    with pytest.raises(sn.ValidationError, match="cuts partition block"):
        sn.quotient(sig, [[0, 2], [1], [3, 4]])
    with pytest.raises(sn.ValidationError):
        sn.quotient(sig, [[0, 1], [2]])  # not covering
    with pytest.raises(sn.ValidationError):
        sn.quotient(sig, [[0, 1, 2], [3, 4]])  # fewer than 3 blocks


# -- light property coverage --------------------------------------------------------


@settings(max_examples=120, deadline=None)
@given(st.integers(3, 8), st.data())
def test_split_roundtrip_properties(n, data):
    full = (1 << n) - 1
    bits = data.draw(st.integers(1, full - 1))
    s = sn.Split.of(n, bits)
    assert s == sn.Split.of(n, full & ~bits)
    assert s.bits & 1
    assert mask_of(sn.side_of(s, 0)) == s.bits
    x = data.draw(st.integers(0, n - 1))
    assert (s.separates(0, x)) == (x not in sn.side_of(s, 0))
