"""Enumeration of k-term arithmetic progressions over [n] and Z_n.

Every progression is yielded exactly once as a set, in a deterministic order
(difference ascending, then start ascending).  In Z_n the pair (a, d) and its
reversal (a+(k-1)d, n-d) describe the same set; the representation kept is
the one with the smaller difference d <= n//2, ties broken by smallest start.
Representations with repeated elements are excluded entirely.

The solver consumes the raw index tuples produced by `sorted_index_tuples`;
the Progression objects are the user-facing view of the same enumeration.
"""

from __future__ import annotations

from typing import Iterator

from .model import GroupInstance, GroupKind, Progression


def _canonical_reps(group: GroupInstance, k: int) -> Iterator[tuple[int, int]]:
    """(start, difference) canonical representations, d ascending then start."""
    n = group.order
    if group.kind is GroupKind.INTERVAL:
        for d in range(1, (n - 1) // (k - 1) + 1):
            for a in range(1, n - (k - 1) * d + 1):
                yield a, d
    else:
        seen: set[frozenset[int]] = set()
        for d in range(1, n // 2 + 1):
            for a in range(n):
                elems = frozenset((a + i * d) % n for i in range(k))
                if len(elems) < k or elems in seen:
                    continue
                seen.add(elems)
                yield a, d


def enumerate_aps(group: GroupInstance, k: int) -> Iterator[Progression]:
    """All k-element AP sets of the group, each exactly once, in fixed order."""
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    for a, d in _canonical_reps(group, k):
        yield Progression.make(group, a, d, k)


def interval_ap_count(n: int, k: int) -> int:
    """Closed-form count of k-APs in [n]: sum over d of (n - (k-1)d)."""
    return sum(n - (k - 1) * d for d in range(1, (n - 1) // (k - 1) + 1))


def aps_through(group: GroupInstance, k: int, x: int) -> Iterator[Progression]:
    """Exactly the progressions from enumerate_aps that contain element x."""
    if not group.contains(x):
        raise ValueError(f"{x} is not an element of {group}")
    for prog in enumerate_aps(group, k):
        if x in prog.elements:
            yield prog


def ap_index(group: GroupInstance, k: int) -> dict[int, list[tuple[Progression, int]]]:
    """Element -> list of (progression, position of the element in it).

    Precomputed inverse of aps_through: index[x] lists the same progressions
    aps_through(group, k, x) yields, in the same order.
    """
    index: dict[int, list[tuple[Progression, int]]] = {x: [] for x in group.elements()}
    for prog in enumerate_aps(group, k):
        for pos, x in enumerate(prog.elements):
            index[x].append((prog, pos))
    return index


def sorted_index_tuples(group: GroupInstance, k: int) -> list[tuple[int, ...]]:
    """Each AP set as a sorted tuple of 0-based element indexes (solver input)."""
    n = group.order
    out = []
    if group.kind is GroupKind.INTERVAL:
        for a, d in _canonical_reps(group, k):
            out.append(tuple(a - 1 + i * d for i in range(k)))
    else:
        for a, d in _canonical_reps(group, k):
            out.append(tuple(sorted((a + i * d) % n for i in range(k))))
    return out
