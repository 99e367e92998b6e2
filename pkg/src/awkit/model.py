"""Domain model for rainbow-free coloring computations over [n] and Z_n.

Value types shared by every other module: ambient groups, exact colorings,
arithmetic progressions, solver outcomes and structural certificates, plus
the plain-text coloring format used by the CLI and the result store.
No algorithms live here; enumeration, verification and search sit in the
sibling modules.

Conventions fixed here and relied on everywhere else:

* Elements of the interval [n] are 1..n; elements of Z_n are residues 0..n-1.
* Color ids are consecutive positive integers 1..r and every coloring is
  exact (surjective onto its palette).
* The canonical labeling relabels colors so that the first occurrence of
  color i precedes the first occurrence of color i+1.  Solver witnesses and
  stored records are always canonical; arbitrary exact labelings are still
  accepted as input.
* Progressions are k-element *sets* {a, a+d, ..., a+(k-1)d}; representations
  with repeated elements (possible in Z_n) are not progressions at all.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence


class GroupKind(Enum):
    INTERVAL = "interval"
    CYCLIC = "cyclic"


class ColoringError(ValueError):
    """An assignment violates the exact-coloring contract."""


@dataclass(frozen=True)
class GroupInstance:
    """Ambient structure: the integer interval [n] = {1,...,n} or the cyclic group Z_n."""

    kind: GroupKind
    order: int

    def __post_init__(self) -> None:
        if not isinstance(self.order, int) or self.order < 1:
            raise ValueError(f"group order must be a positive integer, got {self.order!r}")

    def elements(self) -> range:
        """Elements in element order (1..n for intervals, 0..n-1 for Z_n)."""
        if self.kind is GroupKind.INTERVAL:
            return range(1, self.order + 1)
        return range(self.order)

    def contains(self, x: int) -> bool:
        if self.kind is GroupKind.INTERVAL:
            return 1 <= x <= self.order
        return 0 <= x < self.order

    def index_of(self, x: int) -> int:
        """0-based position of element x in element order."""
        if not self.contains(x):
            raise ValueError(f"{x} is not an element of {self}")
        return x - 1 if self.kind is GroupKind.INTERVAL else x

    def element_at(self, idx: int) -> int:
        if not 0 <= idx < self.order:
            raise ValueError(f"index {idx} out of range for order {self.order}")
        return idx + 1 if self.kind is GroupKind.INTERVAL else idx

    def __str__(self) -> str:
        return f"[{self.order}]" if self.kind is GroupKind.INTERVAL else f"Z_{self.order}"


def interval(n: int) -> GroupInstance:
    return GroupInstance(GroupKind.INTERVAL, n)


def cyclic(n: int) -> GroupInstance:
    return GroupInstance(GroupKind.CYCLIC, n)


def canonical_relabel(values: Sequence[int]) -> tuple[int, ...]:
    """Relabel a sequence so values get ids 1,2,... in first-occurrence order.

    Works on any label set (gaps and arbitrary ids allowed); the result is a
    surjective assignment onto 1..r with canonical label order.
    """
    mapping: dict[int, int] = {}
    out = []
    for v in values:
        if v not in mapping:
            mapping[v] = len(mapping) + 1
        out.append(mapping[v])
    return tuple(out)


@dataclass(frozen=True)
class Coloring:
    """An exact coloring: one color id per element, surjective onto 1..palette."""

    group: GroupInstance
    assignment: tuple[int, ...]
    palette: int = field(init=False)

    def __init__(self, group: GroupInstance, assignment: Iterable[int]) -> None:
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "assignment", tuple(assignment))
        if len(self.assignment) != group.order:
            raise ColoringError(
                f"assignment length {len(self.assignment)} != group order {group.order}"
            )
        colors = set(self.assignment)
        if any(not isinstance(c, int) or c < 1 for c in colors):
            raise ColoringError("color ids must be positive integers")
        r = max(colors)
        if colors != set(range(1, r + 1)):
            missing = sorted(set(range(1, r + 1)) - colors)
            raise ColoringError(f"coloring is not exact: color ids {missing} unused")
        object.__setattr__(self, "palette", r)

    def color_of(self, x: int) -> int:
        return self.assignment[self.group.index_of(x)]

    @property
    def is_canonical(self) -> bool:
        """True iff first occurrences of 1..palette appear in increasing order."""
        seen = 0
        for c in self.assignment:
            if c == seen + 1:
                seen += 1
            elif c > seen:
                return False
        return True

    def relabeled(self, mapping: Mapping[int, int]) -> "Coloring":
        return Coloring(self.group, tuple(mapping[c] for c in self.assignment))


def canonicalize(c: Coloring) -> Coloring:
    """Relabel colors into first-occurrence order; idempotent, classes preserved."""
    return Coloring(c.group, canonical_relabel(c.assignment))


def color_classes(c: Coloring) -> dict[int, frozenset[int]]:
    """Map color id -> set of elements carrying it; classes partition the group."""
    out: dict[int, set[int]] = {i: set() for i in range(1, c.palette + 1)}
    for x in c.group.elements():
        out[c.color_of(x)].add(x)
    return {i: frozenset(s) for i, s in out.items()}


@dataclass(frozen=True)
class Progression:
    """A k-term arithmetic progression, treated as a set of k distinct elements.

    `elements` lists start + i*difference in order (reduced mod n in Z_n);
    `start`/`difference` record the canonical representation chosen by the
    enumeration module (smallest difference, then smallest start).
    """

    group: GroupInstance
    start: int
    difference: int
    length: int
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.group.order
        k = self.length
        if k < 3:
            raise ValueError(f"progression length must be >= 3, got {k}")
        if len(self.elements) != k or len(set(self.elements)) != k:
            raise ValueError("progression must consist of k distinct elements")
        if self.group.kind is GroupKind.INTERVAL:
            if self.difference < 1:
                raise ValueError("difference must be >= 1")
            if self.start + (k - 1) * self.difference > n:
                raise ValueError("progression leaves the interval")
        else:
            if not 1 <= self.difference <= n - 1:
                raise ValueError("cyclic difference must be in 1..n-1")
        for x in self.elements:
            if not self.group.contains(x):
                raise ValueError(f"element {x} outside {self.group}")

    @classmethod
    def make(cls, group: GroupInstance, start: int, difference: int, length: int) -> "Progression":
        if group.kind is GroupKind.INTERVAL:
            elems = tuple(start + i * difference for i in range(length))
        else:
            elems = tuple((start + i * difference) % group.order for i in range(length))
        return cls(group, start, difference, length, elems)

    def as_set(self) -> frozenset[int]:
        return frozenset(self.elements)


@dataclass(frozen=True)
class SolverOutcome:
    """Result of an exact aw/aw_u computation with its extremal witness."""

    aw_value: int
    witness: Coloring | None
    unitary: bool
    nodes_explored: int
    elapsed: float


@dataclass(frozen=True)
class SpecialCertificate:
    """Witness that a coloring of [7q+1] is special.

    alpha occupies exactly {q+1, 2q+1, 4q+1}, beta exactly {3q+1, 5q+1, 6q+1},
    and the endpoint colors occur exactly once each.
    """

    q: int
    alpha: int
    beta: int
    alpha_positions: tuple[int, int, int]
    beta_positions: tuple[int, int, int]
    endpoint_colors: tuple[int, int]


@dataclass(frozen=True)
class Factorization:
    """Prime decomposition n = 2^e0 * prod p_i^e_i with per-prime aw(Z_p,3) classes."""

    n: int
    exponent_of_2: int
    odd_factors: tuple[tuple[int, int], ...]
    classification: Mapping[int, int]

    def __post_init__(self) -> None:
        m = 2 ** self.exponent_of_2
        for p, e in self.odd_factors:
            m *= p ** e
        if m != self.n:
            raise ValueError("factorization does not multiply back to n")
        for p, _ in self.odd_factors:
            if p not in self.classification:
                raise ValueError(f"odd prime factor {p} has no classification")
            if self.classification[p] not in (3, 4):
                raise ValueError(f"classification of {p} must be 3 or 4")


@dataclass(frozen=True)
class APFreeSet:
    """A subset of [n] intended to contain no k-term AP (checked by the verifier)."""

    ambient_n: int
    members: tuple[int, ...]
    forbidden_length: int = 3

    def __post_init__(self) -> None:
        if self.ambient_n < 1:
            raise ValueError("ambient_n must be >= 1")
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be strictly increasing and duplicate-free")
        if self.members and not (1 <= self.members[0] and self.members[-1] <= self.ambient_n):
            raise ValueError("members must lie in [1, ambient_n]")
        if self.forbidden_length < 3:
            raise ValueError("forbidden_length must be >= 3")

    def __len__(self) -> int:
        return len(self.members)


_HEADER_RE = re.compile(r"^group=(interval|cyclic)\s+n=(\d+)\s*$")


def format_coloring(c: Coloring) -> str:
    """Two-line text form: `group=<kind> n=<n>` then space-separated color ids."""
    head = f"group={c.group.kind.value} n={c.group.order}"
    body = " ".join(str(v) for v in c.assignment)
    return f"{head}\n{body}\n"


def parse_coloring(text: str) -> Coloring:
    """Inverse of format_coloring; rejects malformed headers and non-exact bodies."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2:
        raise ColoringError(f"expected 2 non-empty lines, got {len(lines)}")
    m = _HEADER_RE.match(lines[0].strip())
    if not m:
        raise ColoringError(f"malformed header: {lines[0]!r}")
    kind = GroupKind(m.group(1))
    n = int(m.group(2))
    try:
        values = [int(tok) for tok in lines[1].split()]
    except ValueError as exc:
        raise ColoringError(f"malformed body: {exc}") from exc
    return Coloring(GroupInstance(kind, n), values)
