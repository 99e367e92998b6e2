"""Rainbow detection and structural predicates on colorings.

This module is the oracle side of the toolkit: everything here re-derives its
answer from first principles (scan every progression, count every class) so
that solver outputs and constructions can be checked independently.
"""

from __future__ import annotations

from collections import namedtuple
from typing import Iterator, Sequence

import numpy as np

from .model import (
    APFreeSet,
    Coloring,
    GroupKind,
    Progression,
    SpecialCertificate,
    color_classes,
    interval,
)
from .progressions import enumerate_aps, sorted_index_tuples


def find_rainbow(c: Coloring, k: int) -> Progression | None:
    """First k-AP (in enumeration order) whose elements have pairwise distinct colors."""
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    assignment = c.assignment
    group = c.group
    for prog in enumerate_aps(group, k):
        seen = 0
        for x in prog.elements:
            bit = 1 << assignment[group.index_of(x)]
            if seen & bit:
                break
            seen |= bit
        else:
            return prog
    return None


def is_rainbow_free(c: Coloring, k: int) -> bool:
    return find_rainbow(c, k) is None


def has_rainbow_3ap(values: Sequence[int]) -> bool:
    """Vectorized full scan for a rainbow 3-AP over interval semantics.

    Equivalent to `not is_rainbow_free(c, 3)` for interval colorings; used
    where the O(n^2) scan over large n would be too slow element-by-element.
    """
    a = np.asarray(values)
    n = len(a)
    for d in range(1, (n - 1) // 2 + 1):
        x, y, z = a[: n - 2 * d], a[d : n - d], a[2 * d :]
        if bool(np.any((x != y) & (y != z) & (x != z))):
            return True
    return False


def residue_color_count(c: Coloring, residue: int) -> int:
    """Number of distinct colors on elements of [n] congruent to residue mod 3."""
    if c.group.kind is not GroupKind.INTERVAL:
        raise ValueError("residue_color_count is defined over integer intervals")
    if residue not in (0, 1, 2):
        raise ValueError(f"residue must be 0, 1 or 2, got {residue}")
    return len({c.color_of(x) for x in c.group.elements() if x % 3 == residue})


def is_special(c: Coloring) -> SpecialCertificate | None:
    """Certificate iff c matches the special pattern on [7q+1].

    Purely structural: n = 7q+1, endpoints uniquely colored, one color class
    exactly {q+1, 2q+1, 4q+1} and another exactly {3q+1, 5q+1, 6q+1}.
    No rainbow-freeness is required here.
    """
    if c.group.kind is not GroupKind.INTERVAL:
        raise ValueError("special colorings are defined over integer intervals")
    n = c.group.order
    if n % 7 != 1 or n < 8:
        return None
    q = (n - 1) // 7
    classes = color_classes(c)
    first, last = c.color_of(1), c.color_of(n)
    if len(classes[first]) != 1 or len(classes[last]) != 1:
        return None
    alpha_pos = frozenset((q + 1, 2 * q + 1, 4 * q + 1))
    beta_pos = frozenset((3 * q + 1, 5 * q + 1, 6 * q + 1))
    alpha = beta = None
    for color, members in classes.items():
        if members == alpha_pos:
            alpha = color
        elif members == beta_pos:
            beta = color
    if alpha is None or beta is None:
        return None
    return SpecialCertificate(
        q=q,
        alpha=alpha,
        beta=beta,
        alpha_positions=tuple(sorted(alpha_pos)),
        beta_positions=tuple(sorted(beta_pos)),
        endpoint_colors=(first, last),
    )


class DichotomyPreconditionError(ValueError):
    """The coloring does not qualify for the endpoint dichotomy check."""


DichotomyResult = namedtuple("DichotomyResult", ["holds", "branch"])


def dichotomy_holds(c: Coloring) -> DichotomyResult:
    """Special-or-residue dichotomy for rainbow-free colorings with unique endpoints.

    Preconditions (violations raise DichotomyPreconditionError, they are never
    reported as dichotomy failures): c is over [N], exact, rainbow-3-AP-free,
    and the colors of 1 and N are each used exactly once.

    Returns (True, branch) with branch in {"special", "residue-1", "residue-N"},
    or (False, None) if no branch applies.
    """
    if c.group.kind is not GroupKind.INTERVAL:
        raise DichotomyPreconditionError("coloring must be over an integer interval")
    n = c.group.order
    classes = color_classes(c)
    if len(classes[c.color_of(1)]) != 1:
        raise DichotomyPreconditionError("color of 1 must be used exactly once")
    if len(classes[c.color_of(n)]) != 1:
        raise DichotomyPreconditionError("color of N must be used exactly once")
    witness = find_rainbow(c, 3)
    if witness is not None:
        raise DichotomyPreconditionError(
            f"coloring has a rainbow 3-AP at {sorted(witness.elements)}"
        )
    r = c.palette
    if is_special(c) is not None:
        return DichotomyResult(True, "special")
    if residue_color_count(c, 1 % 3) >= r - 1:
        return DichotomyResult(True, "residue-1")
    if residue_color_count(c, n % 3) >= r - 1:
        return DichotomyResult(True, "residue-N")
    return DichotomyResult(False, None)


def is_ap_free(candidate: APFreeSet) -> bool:
    """True iff no k-term AP lies entirely inside the member set."""
    k = candidate.forbidden_length
    members = set(candidate.members)
    for x in candidate.members:
        for y in candidate.members:
            if y <= x:
                continue
            d = y - x
            if x + (k - 1) * d > candidate.ambient_n:
                continue
            if all(x + i * d in members for i in range(2, k)):
                return False
    return True


def iter_endpoint_unique_rainbow_free(n: int) -> Iterator[tuple[int, ...]]:
    """Canonical representatives of every exact rainbow-3-AP-free coloring of [n]
    whose endpoint colors are each used exactly once.

    Backtracking enumeration: element 1 is pinned to color 1 and color 1 is
    never reused (endpoint uniqueness up to relabeling), new colors are
    introduced in first-occurrence order, and partial assignments are pruned
    as soon as a fully colored 3-AP is rainbow.  The dichotomy and residue
    predicates are invariant under color relabeling, so checking canonical
    representatives checks all qualifying colorings.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    group = interval(n)
    if n == 1:
        yield (1,)
        return
    pairs_at: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for ap in sorted_index_tuples(group, 3):
        pairs_at[ap[2]].append((ap[0], ap[1]))
    colors = [0] * n
    colors[0] = 1
    counts = [0] * (n + 2)
    counts[1] = 1

    def rec(t: int, used: int) -> Iterator[tuple[int, ...]]:
        if t == n:
            if counts[colors[n - 1]] == 1:
                yield tuple(colors)
            return
        # color 1 is reserved for element 1; try 2..used then one fresh color
        hi = min(used + 1, n)
        for u in range(2, hi + 1):
            ok = True
            for a, b in pairs_at[t]:
                ca, cb = colors[a], colors[b]
                if ca != cb and ca != u and cb != u:
                    ok = False
                    break
            if not ok:
                continue
            colors[t] = u
            counts[u] += 1
            yield from rec(t + 1, max(used, u))
            counts[u] -= 1
            colors[t] = 0

    yield from rec(1, 1)
