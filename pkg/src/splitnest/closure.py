"""Intersections of splits and the two intersection-closure operators.

For distinct splits S1, S2 and sides A1 of S1, A2 of S2 with A1 & A2
nonempty, the split  A1 n A2 | complement  is an intersection of S1 and S2.
`intersections` collects all of them (up to four).  For a compatible pair
the result has size three and contains both inputs; for an incompatible
pair all four side intersections are nonempty and the result -- written
iota(S1, S2) -- is a compatible quadruple that excludes both inputs.

`int_closure` closes a system under intersections of all distinct pairs;
`i_closure` closes only under iota of incompatible pairs.  Both are
least-fixpoint operators (containment, idempotence, monotonicity) and are
independent of the order in which pairs are processed.

Closures of circular systems have at most n(n-1)/2 elements.  No polynomial
bound is claimed for arbitrary systems, so a configurable cap (default
200000 splits) aborts with a diagnostic.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Iterable, Optional

from .core import Split, SplitSystem, compatible
from .errors import ResourceCapError, ValidationError

DEFAULT_SPLIT_CAP = 200_000


def _pair_intersections(s1: Split, s2: Split) -> list[Split]:
    full = (1 << s1.n) - 1
    out = []
    for a in (s1.bits, full & ~s1.bits):
        for b in (s2.bits, full & ~s2.bits):
            inter = a & b
            if inter:
                out.append(Split.of(s1.n, inter))
    return out


def intersections(s1: Split, s2: Split) -> frozenset[Split]:
    """All intersections of two distinct splits.

    Size 3 (including both inputs) for a compatible pair, 4 otherwise.
    """
    if s1.n != s2.n:
        raise ValidationError("splits range over different taxa counts")
    if s1 == s2:
        raise ValidationError("intersections need two distinct splits")
    return frozenset(_pair_intersections(s1, s2))


def i_intersection(s1: Split, s2: Split) -> frozenset[Split]:
    """iota(S1, S2): the four intersections of an incompatible pair."""
    if s1.n != s2.n:
        raise ValidationError("splits range over different taxa counts")
    if s1 == s2 or compatible(s1, s2):
        raise ValidationError("iota is only defined for incompatible pairs")
    return frozenset(_pair_intersections(s1, s2))


def _close(
    sigma: SplitSystem,
    rule: Callable[[Split, Split], Iterable[Split]],
    cap: int,
) -> Optional[SplitSystem]:
    """Least superset of sigma closed under `rule` on distinct pairs.

    Returns None when more than `cap` splits accumulate; callers decide
    whether that is a resource error or a negative certificate.
    """
    splits: list[Split] = list(sigma.sorted_splits)
    index: set[Split] = set(splits)
    queue: deque[tuple[int, int]] = deque(
        (i, j) for i in range(len(splits)) for j in range(i + 1, len(splits))
    )
    while queue:
        i, j = queue.popleft()
        for s in rule(splits[i], splits[j]):
            if s not in index:
                if len(splits) >= cap:
                    return None
                index.add(s)
                k = len(splits)
                splits.append(s)
                queue.extend((t, k) for t in range(k))
    return SplitSystem(sigma.taxa, frozenset(splits))


def _iota_rule(s1: Split, s2: Split) -> Iterable[Split]:
    if compatible(s1, s2):
        return ()
    return _pair_intersections(s1, s2)


def int_closure(sigma: SplitSystem, cap: int = DEFAULT_SPLIT_CAP) -> SplitSystem:
    """Least superset of sigma closed under intersections of distinct pairs."""
    closed = _close(sigma, _pair_intersections, cap)
    if closed is None:
        raise ResourceCapError(
            "intersection closure exceeded the cap of %d splits" % cap, cap=cap, n=sigma.n
        )
    return closed


def i_closure(sigma: SplitSystem, cap: int = DEFAULT_SPLIT_CAP) -> SplitSystem:
    """Least superset of sigma closed under iota of incompatible pairs."""
    closed = _close(sigma, _iota_rule, cap)
    if closed is None:
        raise ResourceCapError(
            "iota-intersection closure exceeded the cap of %d splits" % cap, cap=cap, n=sigma.n
        )
    return closed


def i_closure_bounded(sigma: SplitSystem, cap: int) -> Optional[SplitSystem]:
    """i_closure that reports cap overflow as None instead of raising.

    Used where the cap is a theoretical bound (circular closures never
    exceed n(n-1)/2 splits), so overflowing it refutes circularity.
    """
    return _close(sigma, _iota_rule, cap)


def is_i_closed(sigma: SplitSystem) -> bool:
    """True iff iota of every incompatible pair is already inside sigma."""
    splits = sigma.sorted_splits
    for i in range(len(splits)):
        for j in range(i + 1, len(splits)):
            if not compatible(splits[i], splits[j]):
                for s in _pair_intersections(splits[i], splits[j]):
                    if s not in sigma.splits:
                        return False
    return True
