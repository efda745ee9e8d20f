"""Splits, split systems and circular orderings over a finite taxa set.

Conventions used throughout the package:

- Taxa are dense integer indices 0..n-1; a TaxaSet maps indices to names.
- A subset of taxa is an int bitmask (bit x set <=> taxon x in the subset).
- A Split stores only its canonical side, defined as the side containing
  taxon 0.  A|B and B|A therefore construct equal (hash-equal) values.
- A CircularOrdering is a cyclic sequence of all taxa, stored canonically:
  taxon 0 first, followed by the smaller of its two neighbours.  Two
  orderings equal up to rotation and reflection compare equal.

Two splits are compatible when one of the four pairwise side intersections
is empty (equivalently, some side of one is strictly contained in a side of
the other).  Identical splits are compatible by convention, which keeps the
predicate total; set-valued systems never contain identical pairs anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import ValidationError


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


@dataclass(frozen=True, slots=True)
class TaxaSet:
    """An ordered set of distinct taxon labels; indices are 0..n-1."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(self.names) < 3:
            raise ValidationError("a taxa set needs at least 3 taxa, got %d" % len(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValidationError("duplicate taxon labels")
        for name in self.names:
            if not name or any(c.isspace() for c in name) or "|" in name or "#" in name:
                raise ValidationError("bad taxon label %r (empty, whitespace, '|' or '#')" % name)

    @classmethod
    def of(cls, names: Iterable[str]) -> "TaxaSet":
        return cls(tuple(names))

    @classmethod
    def range(cls, n: int) -> "TaxaSet":
        """Taxa named "1".."n" (the conventional small examples)."""
        return cls(tuple(str(i + 1) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError("unknown taxon %r" % name) from None

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.names[i] for i in indices_of(mask))


@dataclass(frozen=True, slots=True)
class Split:
    """A bipartition of {0..n-1}; `bits` is the side containing taxon 0."""

    n: int
    bits: int

    def __post_init__(self):
        full = (1 << self.n) - 1
        if not 0 < self.bits < full:
            raise ValidationError("split side must be a proper nonempty subset")
        if not self.bits & 1:
            raise ValidationError("canonical split side must contain taxon 0")

    @classmethod
    def of(cls, n: int, side: Iterable[int] | int) -> "Split":
        """Build from either side of the bipartition, canonicalizing."""
        mask = side if isinstance(side, int) else mask_of(side)
        full = (1 << n) - 1
        if mask & ~full:
            raise ValidationError("split side contains an index outside 0..%d" % (n - 1))
        if not 0 < mask < full:
            raise ValidationError("split side must be a proper nonempty subset")
        if not mask & 1:
            mask = full & ~mask
        return cls(n, mask)

    @property
    def complement_bits(self) -> int:
        return ((1 << self.n) - 1) & ~self.bits

    @property
    def size(self) -> int:
        """min(|A|, |B|); a split of size one is trivial."""
        k = self.bits.bit_count()
        return min(k, self.n - k)

    @property
    def is_trivial(self) -> bool:
        return self.size == 1

    def side_mask_of(self, x: int) -> int:
        if not 0 <= x < self.n:
            raise ValidationError("unknown taxon index %d" % x)
        return self.bits if (self.bits >> x) & 1 else self.complement_bits

    def separates(self, x: int, y: int) -> bool:
        return ((self.bits >> x) ^ (self.bits >> y)) & 1 == 1

    def sides(self) -> tuple[int, int]:
        return self.bits, self.complement_bits

    def format(self, taxa: TaxaSet) -> str:
        a = " ".join(taxa.names_of(self.bits))
        b = " ".join(taxa.names_of(self.complement_bits))
        return f"{a} | {b}"


def side_of(split: Split, x: int) -> frozenset[int]:
    """The block of the split containing taxon x, as a set of indices."""
    return frozenset(indices_of(split.side_mask_of(x)))


def compatible(s1: Split, s2: Split) -> bool:
    """True iff some pairwise block intersection is empty (or s1 == s2)."""
    if s1.n != s2.n:
        raise ValidationError("splits range over different taxa counts")
    a, ac = s1.bits, s1.complement_bits
    b, bc = s2.bits, s2.complement_bits
    return a & b == 0 or a & bc == 0 or ac & b == 0 or ac & bc == 0


def incompatible(s1: Split, s2: Split) -> bool:
    return not compatible(s1, s2)


@dataclass(frozen=True)
class SplitSystem:
    """A deduplicated set of splits over a shared taxa set.

    The empty system is permitted here even though most of the theory
    assumes non-empty input; command line tools warn about it.
    """

    taxa: TaxaSet
    splits: frozenset[Split]

    def __post_init__(self):
        for s in self.splits:
            if s.n != self.taxa.n:
                raise ValidationError("split over %d taxa in a system over %d" % (s.n, self.taxa.n))

    @classmethod
    def of(cls, taxa: TaxaSet, sides: Iterable[Iterable[int] | int | Split]) -> "SplitSystem":
        splits = []
        for side in sides:
            splits.append(side if isinstance(side, Split) else Split.of(taxa.n, side))
        return cls(taxa, frozenset(splits))

    @cached_property
    def sorted_splits(self) -> tuple[Split, ...]:
        """Canonical iteration order: ascending canonical-side bitmask."""
        return tuple(sorted(self.splits, key=lambda s: s.bits))

    def __iter__(self) -> Iterator[Split]:
        return iter(self.sorted_splits)

    def __len__(self) -> int:
        return len(self.splits)

    def __contains__(self, split: Split) -> bool:
        return split in self.splits

    @property
    def n(self) -> int:
        return self.taxa.n

    def with_splits(self, extra: Iterable[Split]) -> "SplitSystem":
        return SplitSystem(self.taxa, self.splits | frozenset(extra))

    def restrict(self, keep) -> "SplitSystem":
        return SplitSystem(self.taxa, frozenset(s for s in self.splits if keep(s)))

    def nontrivial(self) -> "SplitSystem":
        return self.restrict(lambda s: not s.is_trivial)

    def has_all_trivial(self) -> bool:
        return all(Split.of(self.n, 1 << x) in self.splits for x in range(self.n))

    def with_all_trivial(self) -> "SplitSystem":
        return self.with_splits(Split.of(self.n, 1 << x) for x in range(self.n))

    def format(self) -> str:
        return "{" + ", ".join(s.format(self.taxa) for s in self) + "}"


def all_trivial_splits(taxa: TaxaSet) -> SplitSystem:
    return SplitSystem.of(taxa, (1 << x for x in range(taxa.n)))


def is_compatible_system(sigma: SplitSystem) -> bool:
    """True iff every pair of splits in the system is compatible."""
    splits = sigma.sorted_splits
    for i in range(len(splits)):
        for j in range(i + 1, len(splits)):
            if not compatible(splits[i], splits[j]):
                return False
    return True


def remove_trivial(sigma: SplitSystem) -> SplitSystem:
    """The system with all size-one splits deleted (possibly empty)."""
    return sigma.nontrivial()


@dataclass(frozen=True)
class CircularOrdering:
    """A cyclic sequence of all taxa, canonical up to rotation/reflection."""

    order: tuple[int, ...]

    def __post_init__(self):
        n = len(self.order)
        if sorted(self.order) != list(range(n)):
            raise ValidationError("ordering must contain each taxon index exactly once")
        if self.order[0] != 0 or (n >= 3 and self.order[1] > self.order[-1]):
            raise ValidationError("ordering not in canonical form; use CircularOrdering.of")

    @classmethod
    def of(cls, seq: Sequence[int]) -> "CircularOrdering":
        seq = list(seq)
        n = len(seq)
        if sorted(seq) != list(range(n)):
            raise ValidationError("ordering must contain each taxon index exactly once")
        at = seq.index(0)
        seq = seq[at:] + seq[:at]
        if n >= 3 and seq[1] > seq[-1]:
            seq = [0] + seq[:0:-1]
        return cls(tuple(seq))

    @classmethod
    def identity(cls, n: int) -> "CircularOrdering":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.order)

    @cached_property
    def position(self) -> tuple[int, ...]:
        pos = [0] * self.n
        for p, x in enumerate(self.order):
            pos[x] = p
        return tuple(pos)

    def arc_mask(self, start_pos: int, length: int) -> int:
        """Taxa mask of the arc of `length` positions starting at `start_pos`."""
        m = 0
        for t in range(length):
            m |= 1 << self.order[(start_pos + t) % self.n]
        return m

    def format(self, taxa: TaxaSet) -> str:
        return " ".join(taxa.names[x] for x in self.order)


def is_interval(ordering: CircularOrdering, block: Iterable[int] | int) -> bool:
    """True iff the block is a contiguous arc of the ordering."""
    mask = block if isinstance(block, int) else mask_of(block)
    n = ordering.n
    full = (1 << n) - 1
    if mask & ~full or mask == 0 or mask == full:
        raise ValidationError("block must be a nonempty proper subset of the taxa")
    pos = 0
    for x in indices_of(mask):
        pos |= 1 << ordering.position[x]
    succ = ((pos << 1) | (pos >> (n - 1))) & full
    # exactly one position in the block whose predecessor is outside it
    return (pos & ~succ).bit_count() == 1


def displays(ordering: CircularOrdering, sigma: SplitSystem) -> bool:
    """True iff both blocks of every split are arcs of the ordering."""
    if ordering.n != sigma.n:
        raise ValidationError("ordering and system range over different taxa counts")
    return all(is_interval(ordering, s.bits) for s in sigma.splits)


def all_splits_of_ordering(ordering: CircularOrdering, taxa: TaxaSet) -> SplitSystem:
    """The maximal circular split system of the ordering: all interval splits.

    Has exactly n(n-1)/2 elements.
    """
    if taxa.n != ordering.n:
        raise ValidationError("ordering and taxa set disagree on n")
    n = ordering.n
    seen = set()
    for start in range(n):
        m = 1 << ordering.order[start]
        for length in range(1, n):
            seen.add(Split.of(n, m))
            m |= 1 << ordering.order[(start + length) % n]
    return SplitSystem(taxa, frozenset(seen))


def sigma_d(ordering: CircularOrdering, taxa: TaxaSet) -> SplitSystem:
    """The n adjacent-pair splits {x_i, x_(i+1)} | rest of the ordering.

    Rejected for n = 3, where a "2-split" is already trivial and the
    adjacent-pair system degenerates.
    """
    if taxa.n != ordering.n:
        raise ValidationError("ordering and taxa set disagree on n")
    n = ordering.n
    if n < 4:
        raise ValidationError("adjacent-pair splits need n >= 4; on 3 taxa they are trivial")
    return SplitSystem.of(
        taxa,
        ((1 << ordering.order[i]) | (1 << ordering.order[(i + 1) % n]) for i in range(n)),
    )


def quotient(sigma: SplitSystem, partition: Sequence[Iterable[int] | int]) -> SplitSystem:
    """Collapse each partition block to a single taxon and induce the system.

    Every split must respect the partition (each block entirely inside one
    side); violating splits are reported.  Blocks are represented by their
    smallest member's name, and there must be at least 3 of them.
    """
    n = sigma.n
    masks = [b if isinstance(b, int) else mask_of(b) for b in partition]
    if any(m == 0 for m in masks):
        raise ValidationError("empty partition block")
    union = 0
    for m in masks:
        if union & m:
            raise ValidationError("partition blocks overlap")
        union |= m
    if union != sigma.taxa.full_mask:
        raise ValidationError("partition does not cover the taxa set")
    if len(masks) < 3:
        raise ValidationError("quotient needs at least 3 blocks to form a taxa set")
    masks.sort(key=lambda m: (m & -m).bit_length())
    reps = [(m & -m).bit_length() - 1 for m in masks]
    qtaxa = TaxaSet.of(sigma.taxa.names[r] for r in reps)
    qsplits = []
    for s in sigma.splits:
        qside = 0
        for qi, m in enumerate(masks):
            inter = s.bits & m
            if inter == m:
                qside |= 1 << qi
            elif inter:
                raise ValidationError(
                    "split %s cuts partition block {%s}"
                    % (s.format(sigma.taxa), " ".join(sigma.taxa.names_of(m)))
                )
        qsplits.append(Split.of(len(masks), qside))
    return SplitSystem(qtaxa, frozenset(qsplits))
