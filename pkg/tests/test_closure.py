"""Intersections and the two closure operators."""

import itertools
import random

import pytest

import splitnest as sn
from splitnest.closure import _pair_intersections, is_i_closed

from conftest import random_circular_system, random_subset_system, side_set, split, system, taxa


def all_splits_on(n: int) -> list[sn.Split]:
    full = (1 << n) - 1
    return sorted(
        {sn.Split.of(n, bits) for bits in range(1, full)}, key=lambda s: s.bits
    )


def naive_closure(sigma: sn.SplitSystem, only_incompatible: bool, rng=None) -> sn.SplitSystem:
    """Oracle: repeated full rescans (in shuffled order) until no growth."""
    current = set(sigma.splits)
    while True:
        pairs = list(itertools.combinations(sorted(current, key=lambda s: s.bits), 2))
        if rng is not None:
            rng.shuffle(pairs)
        added = False
        for s1, s2 in pairs:
            if only_incompatible and sn.compatible(s1, s2):
                continue
            for s in _pair_intersections(s1, s2):
                if s not in current:
                    current.add(s)
                    added = True
        if not added:
            return sn.SplitSystem(sigma.taxa, frozenset(current))


# -- pair intersections ---------------------------------------------------------


def test_intersections_compatible_pair():
    got = sn.intersections(split(5, "12"), split(5, "123"))
    assert len(got) == 3
    assert split(5, "12") in got and split(5, "123") in got
    # the third element, by direct evaluation of the block choices
    assert got - {split(5, "12"), split(5, "123")} == {split(5, "3")}


def test_intersections_incompatible_pair():
    got = sn.intersections(split(4, "12"), split(4, "23"))
    assert got == {split(4, "1"), split(4, "2"), split(4, "3"), split(4, "4")}


def test_intersections_rejects_equal_inputs():
    with pytest.raises(sn.ValidationError):
        sn.intersections(split(4, "12"), split(4, "34"))


def test_i_intersection_examples():
    got = sn.i_intersection(split(4, "12"), split(4, "23"))
    assert got == {split(4, "1"), split(4, "2"), split(4, "3"), split(4, "4")}
    got6 = sn.i_intersection(split(6, "12"), split(6, "23"))
    assert got6 == {split(6, "1"), split(6, "2"), split(6, "3"), split(6, "456")}
    with pytest.raises(sn.ValidationError):
        sn.i_intersection(split(5, "12"), split(5, "123"))


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_i_intersection_structure_exhaustive(n):
    """For every incompatible pair: |iota| = 4, compatible quadruple that
    excludes and is compatible with both inputs."""
    splits = all_splits_on(n)
    for i, s1 in enumerate(splits):
        for s2 in splits[i + 1 :]:
            if sn.compatible(s1, s2):
                continue
            iota = sn.i_intersection(s1, s2)
            assert len(iota) == 4
            assert s1 not in iota and s2 not in iota
            members = sorted(iota, key=lambda s: s.bits)
            for a, b in itertools.combinations(members, 2):
                assert sn.compatible(a, b)
            for m in members:
                assert sn.compatible(m, s1) and sn.compatible(m, s2)


def test_iota_propagation_counterexample():
    """The tempting claim "when {S1,S2} and {S2,S3} are incompatible, two
    members of iota(S1,S2) are incompatible with S3" is false: for the
    three pairwise incompatible splits on four taxa, iota is the four
    trivial splits, which are compatible with everything."""
    s1, s2, s3 = split(4, "12"), split(4, "13"), split(4, "14")
    assert not sn.compatible(s1, s2) and not sn.compatible(s2, s3)
    iota = sn.i_intersection(s1, s2)
    assert iota == {split(4, "1"), split(4, "2"), split(4, "3"), split(4, "4")}
    assert all(sn.compatible(m, s3) for m in iota)


def test_iota_propagation_weak_form_exhaustive():
    """What closure decomposition actually needs: a split compatible with
    both generators is compatible with every member of their iota."""
    for n in (4, 5, 6):
        splits = all_splits_on(n)
        for s1, s2 in itertools.combinations(splits, 2):
            if sn.compatible(s1, s2):
                continue
            iota = sn.i_intersection(s1, s2)
            for s3 in splits:
                if sn.compatible(s3, s1) and sn.compatible(s3, s2):
                    assert all(sn.compatible(m, s3) for m in iota)


def test_side_nesting_guard_exhaustive():
    """S3(x) inside S1(x), S3 compatible with S2, S1 incompatible with S2
    forces S3(x) and S2(x) to nest."""
    for n in (4, 5, 6):
        splits = all_splits_on(n)
        for s1, s2 in itertools.permutations(splits, 2):
            if sn.compatible(s1, s2):
                continue
            for s3 in splits:
                if s3 in (s1, s2) or not sn.compatible(s3, s2):
                    continue
                for x in range(n):
                    a1 = s1.side_mask_of(x)
                    a3 = s3.side_mask_of(x)
                    if a3 & ~a1:
                        continue
                    a2 = s2.side_mask_of(x)
                    assert a3 & ~a2 == 0 or a2 & ~a3 == 0


# -- closures ----------------------------------------------------------------------


def test_int_closure_worked_example():
    sig = system(5, "12", "23")
    got = sn.int_closure(sig)
    want = system(5, "12", "23", "1", "2", "3", "13", "123")
    assert got.splits == want.splits


def test_int_closure_single_split_identity():
    sig = system(5, "123")
    assert sn.int_closure(sig).splits == sig.splits


def test_i_closure_examples():
    got = sn.i_closure(system(4, "12", "23"))
    want = system(4, "12", "23", "1", "2", "3", "4")
    assert got.splits == want.splits
    assert len(want) == 6  # the maximal circular system on 4 taxa
    o5 = sn.CircularOrdering.identity(5)
    sd = sn.sigma_d(o5, taxa(5))
    assert sn.i_closure(sd).splits == sn.all_splits_of_ordering(o5, taxa(5)).splits
    compat = system(5, "12", "123", "1")
    assert sn.i_closure(compat).splits == compat.splits


def test_closures_match_naive_rescan_oracle_and_are_closures():
    rng = random.Random(99)
    for _ in range(60):
        n = rng.randint(4, 7)
        sig = random_subset_system(rng, n, rng.randint(1, 5))
        for op, only_inc in ((sn.int_closure, False), (sn.i_closure, True)):
            got = op(sig)
            # order independence: shuffled naive rescans agree
            assert got.splits == naive_closure(sig, only_inc, rng).splits
            # (C1) containment and (C2) idempotence
            assert sig.splits <= got.splits
            assert op(got).splits == got.splits
        # (C3) monotonicity
        bigger = sig.with_splits(random_subset_system(rng, n, 2).splits)
        assert sn.int_closure(sig).splits <= sn.int_closure(bigger).splits
        assert sn.i_closure(sig).splits <= sn.i_closure(bigger).splits


def test_i_closure_preserves_display_ordering():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(4, 8)
        sig = random_circular_system(rng, n, rng.randint(2, 2 * n))
        ordering = sn.is_circular(sig)
        assert ordering is not None
        closed = sn.i_closure(sig)
        assert sn.displays(ordering, closed)
        allsp = sn.all_splits_of_ordering(ordering, sig.taxa)
        for s1, s2 in itertools.combinations(sig.sorted_splits, 2):
            if not sn.compatible(s1, s2):
                assert sn.i_intersection(s1, s2) <= allsp.splits


def test_closure_cap():
    sig = system(6, "12", "23", "34", "45", "56")
    with pytest.raises(sn.ResourceCapError):
        sn.int_closure(sig, cap=6)
    assert is_i_closed(sn.i_closure(sig))
    assert not is_i_closed(sig)
