"""Extremal and lower-bound colorings, progression-free sets, and unfoldings.

The recursive builders c1/c2 lift a unitary rainbow-3-AP-free coloring of a
third-sized interval to [n] by planting it on one residue class mod 3 and
flooding the rest with a fresh color; `construct_extremal` drives them to a
unitary rainbow-3-AP-free coloring of [n] with exactly f(n)-1 colors for
every n >= 1.  `canonical_special` unfolds a cyclic filler into the special
pattern on [7q+1].  `behrend_set` searches sphere shells of bounded-digit
lattice boxes for large 3-AP-free sets, and `greedy_ap_free_set` is the
first-fit baseline it is measured against.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .model import (
    APFreeSet,
    Coloring,
    GroupKind,
    canonical_relabel,
    cyclic,
    interval,
)
from .formulas import m_of
from .verify import has_rainbow_3ap, is_ap_free, is_rainbow_free

# Bases already known to be unitary and rainbow-3-AP-free; keyed by assignment
# so the extremal sweep re-verifies each distinct base once, not per caller.
_CHECKED_BASES: set[tuple[int, ...]] = set()


def _require_unitary_rainbow_free_base(base: Coloring) -> None:
    if base.group.kind is not GroupKind.INTERVAL:
        raise ValueError("base coloring must be over an integer interval")
    if base.assignment in _CHECKED_BASES:
        return
    sizes = [0] * (base.palette + 1)
    for c in base.assignment:
        sizes[c] += 1
    if 1 not in sizes:
        raise ValueError("base coloring must be unitary (some color used exactly once)")
    if has_rainbow_3ap(base.assignment):
        raise ValueError("base coloring has a rainbow 3-AP")
    if len(_CHECKED_BASES) > 4096:
        _CHECKED_BASES.clear()
    _CHECKED_BASES.add(base.assignment)


def construct_c1(n: int, base: Coloring) -> Coloring:
    """Plant base on elements = 1 mod 3 (x -> base((x+2)/3)), fresh color elsewhere.

    Requires n = 3h - s with s in {0,1,2} for h = |base| and 2 <= h < n; the
    output is exact, unitary, has palette(base)+1 colors, and inherits
    rainbow-3-AP-freeness from the base.
    """
    if n < 4:
        raise ValueError(f"construct_c1 requires n >= 4, got {n}")
    h = base.group.order
    s = 3 * h - n
    if s not in (0, 1, 2) or not 2 <= h < n:
        raise ValueError(f"need n = 3h - s with s in {{0,1,2}} and 2 <= h < n; got n={n}, h={h}")
    _require_unitary_rainbow_free_base(base)
    red = base.palette + 1
    values = [
        base.assignment[(x + 2) // 3 - 1] if x % 3 == 1 else red
        for x in range(1, n + 1)
    ]
    return Coloring(interval(n), values)


def construct_c2(n: int, base: Coloring) -> Coloring:
    """Plant base on multiples of 3 (3j -> base(j)), fresh color elsewhere.

    Defined only for n = 3h - s with s in {1,2}, where the base covers
    [h-1] = the multiples of 3 inside [n].  Same postconditions as c1.
    """
    h = base.group.order + 1
    s = 3 * h - n
    if s == 0:
        raise ValueError("construct_c2 is undefined for n = 3h (s = 0)")
    if s not in (1, 2) or not 2 <= h < n:
        raise ValueError(f"need n = 3h - s with s in {{1,2}} and 2 <= h < n; got n={n}, h={h}")
    _require_unitary_rainbow_free_base(base)
    red = base.palette + 1
    values = [
        base.assignment[x // 3 - 1] if x % 3 == 0 else red
        for x in range(1, n + 1)
    ]
    return Coloring(interval(n), values)


def _special_eight() -> Coloring:
    """The special coloring of [8]; the one extremal base the recursion cannot reach."""
    c8 = canonical_special(1, Coloring(cyclic(2), (1, 2)))
    if has_rainbow_3ap(c8.assignment):
        raise AssertionError("special coloring of [8] failed the rainbow-free check")
    return c8


@lru_cache(maxsize=None)
def construct_extremal(n: int) -> Coloring:
    """Unitary rainbow-3-AP-free coloring of [n] with exactly f(n)-1 colors.

    Recursion: h = ceil(n/3) and c1, except at n = 3^m - t (t in {1,2}, m >= 3)
    where c2 over the extremal coloring of [3^(m-1)-1] gains the extra color.
    Base cases: [1], [2], [3] explicitly, and [8] via the special pattern
    (the window arithmetic only feeds the c2 case from m >= 3 upward).
    """
    if n < 1:
        raise ValueError(f"construct_extremal requires n >= 1, got {n}")
    if n == 1:
        return Coloring(interval(1), (1,))
    if n == 2:
        return Coloring(interval(2), (1, 2))
    if n == 3:
        return Coloring(interval(3), (1, 2, 2))
    if n == 8:
        return _special_eight()
    m = m_of(n)
    power = 3 ** m
    if n in (power - 1, power - 2) and m >= 3:
        h = power // 3
        return construct_c2(n, construct_extremal(h - 1))
    h = (n + 2) // 3
    return construct_c1(n, construct_extremal(h))


def canonical_special(q: int, filler: Coloring) -> Coloring:
    """Unfold a rainbow-3-AP-free cyclic filler into the special pattern on [7q+1].

    Elements 1 and 7q+1 get fresh unique colors, alpha sits on
    {q+1, 2q+1, 4q+1}, beta on {3q+1, 5q+1, 6q+1}, and each gap between
    consecutive anchors is the mirror image of its predecessor, seeded by the
    filler values at residues 1..q-1.  The output always satisfies is_special;
    whether it is rainbow-3-AP-free is an empirical question the caller must
    check - the reflection structure is necessary for special colorings, and
    this operation attempts the converse direction.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if filler.group.kind is not GroupKind.CYCLIC or filler.group.order != 2 * q:
        raise ValueError(f"filler must color Z_{2 * q}")
    if not is_rainbow_free(filler, 3):
        raise ValueError("filler must be rainbow-3-AP-free")
    n = 7 * q + 1
    rf = filler.palette
    alpha, beta, first, last = rf + 1, rf + 2, rf + 3, rf + 4
    alpha_pos = {q + 1, 2 * q + 1, 4 * q + 1}
    beta_pos = {3 * q + 1, 5 * q + 1, 6 * q + 1}
    segment = [filler.assignment[j] for j in range(1, q)]  # residues 1..q-1
    values = []
    for x in range(1, n + 1):
        if x == 1:
            values.append(first)
        elif x == n:
            values.append(last)
        elif x in alpha_pos:
            values.append(alpha)
        elif x in beta_pos:
            values.append(beta)
        else:
            seg_index, offset = divmod(x - 1, q)  # offset in 1..q-1
            if seg_index % 2 == 0:
                values.append(segment[offset - 1])
            else:
                values.append(segment[q - 1 - offset])
    return Coloring(interval(n), canonical_relabel(values))


def greedy_ap_free_set(n: int, k: int = 3) -> APFreeSet:
    """First-fit baseline: scan 1..n, keep x whenever it closes no k-AP."""
    if n < 1:
        raise ValueError("n must be >= 1")
    members: list[int] = []
    chosen: set[int] = set()
    for x in range(1, n + 1):
        if k == 3:
            bad = any(2 * b - x in chosen for b in members)
        else:
            bad = False
            for d in range(1, (x - 1) // (k - 1) + 1):
                if all(x - i * d in chosen for i in range(1, k)):
                    bad = True
                    break
        if not bad:
            members.append(x)
            chosen.add(x)
    return APFreeSet(ambient_n=n, members=tuple(members), forbidden_length=k)


def _behrend_candidates(n: int, max_dim: int = 12):
    """(dim, d, shell, members) per parameter choice, deterministic order.

    Digits 0..d-1 in base 2d+1, dimension up to max_dim; d runs up to the
    smallest value whose box covers [n] ((2d+1)^dim >= n+1), so the candidate
    family only grows with n.  Vectors map to 1 + sum x_i (2d+1)^i, keeping
    values inside [n]; each squared-norm shell is one candidate set.
    """
    for dim in range(1, max_dim + 1):
        d_cover = 1
        while (2 * d_cover + 1) ** dim < n + 1 and d_cover < n:
            d_cover += 1
        if dim == 1:
            d_cover = 1  # one-dimensional shells are singletons; {1} represents them all
        for d in range(1, d_cover + 1):
            if d ** dim > 2_000_000:
                break
            base = 2 * d + 1
            weights = [base ** i for i in range(dim)]
            shells: dict[int, list[int]] = {}
            for vec in product(range(d), repeat=dim):
                value = 1 + sum(x * w for x, w in zip(vec, weights))
                if value > n:
                    continue
                shells.setdefault(sum(x * x for x in vec), []).append(value)
            for shell in sorted(shells):
                yield dim, d, shell, sorted(shells[shell])


def behrend_search(n: int, max_dim: int = 12):
    """Best sphere-shell set and its parameters: (APFreeSet, dim, d, shell)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    best = None
    for dim, d, shell, members in _behrend_candidates(n, max_dim):
        if best is None or len(members) > len(best[3]):
            best = (dim, d, shell, members)
    assert best is not None  # dim=1, d=1 always yields {1}
    dim, d, shell, members = best
    result = APFreeSet(ambient_n=n, members=tuple(members), forbidden_length=3)
    if not is_ap_free(result):
        raise AssertionError(f"behrend shell dim={dim} d={d} shell={shell} contains a 3-AP")
    return result, dim, d, shell


def behrend_set(n: int) -> APFreeSet:
    """Largest verified 3-AP-free sphere-shell subset of [n] over the parameter sweep."""
    return behrend_search(n)[0]


def lower_bound_coloring(n: int, b: APFreeSet, k: int) -> Coloring | None:
    """Distinct colors on b, one shared fresh color elsewhere; verified or rejected.

    Returns the coloring only when the verifier confirms it has no rainbow
    k-AP (then palette r certifies aw([n],k) >= r+1); otherwise None.  The
    composition is checked empirically, never assumed.
    """
    if b.ambient_n > n or (b.members and b.members[-1] > n):
        raise ValueError("b must live inside [n]")
    member_color = {x: i + 1 for i, x in enumerate(b.members)}
    filler = len(b.members) + 1
    values = [member_color.get(x, filler) for x in range(1, n + 1)]
    coloring = Coloring(interval(n), values)
    if is_rainbow_free(coloring, k):
        return coloring
    return None
