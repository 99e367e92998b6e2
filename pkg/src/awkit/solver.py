"""Exact computation of aw(G,k) and aw_u(G,k) by canonical backtracking.

The solver maximizes the palette size over exact rainbow-k-AP-free colorings
(aw = r_max + 1).  Elements are colored in element order under the canonical
branching rule: element t may receive color u only if u <= (max color used on
the prefix) + 1, which removes color-permutation symmetry without losing any
canonical coloring.

Search runs in two phases so that parallel value computation can never
perturb the reported witness:

* value phase - computes r_max only.  Branches try a fresh color first so a
  large palette is found early and the branch-and-bound cut tightens fast.
  Top-level branches may be distributed across workers; the maximum is
  associative, so the result is identical for every worker count.
* witness phase - single-threaded lexicographic descent with the known
  r_max as target; the first leaf reached is the lexicographically smallest
  canonical maximum-palette coloring.

Pruning (all sound, tested against a no-pruning oracle):

* a partial coloring is abandoned as soon as a fully colored k-AP is rainbow;
* bound cut: palette of any completion <= colors used + (future new colors).
  Future new colors are bounded by (a) the count of positions that can still
  accept a brand-new color (an AP whose other k-1 elements are already
  colored pairwise-distinct permanently blocks its maximum element), and
  (b) for intervals, a spacing bound: first occurrences x < y of two colors
  force the 3-AP {2x-y, x, y} to be rainbow unless 2x-y < 1, so first
  occurrences at least double; for k >= 4 the same argument over (k-1)-APs
  with a backward extension gives a precomputed per-suffix bound.

Two interchangeable engines run the identical search: a pure-Python
recursion (reference, always available) and a numba-compiled twin in
_native.py used automatically when importable (set AWKIT_PURE=1 to disable).
Rainbow and blocking checks test color distinctness through machine-word
bitmasks over color ids (one bit per color, O(1) per element).
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from time import perf_counter
from typing import Sequence

import numpy as np

from .model import (
    Coloring,
    GroupInstance,
    GroupKind,
    SolverOutcome,
    canonical_relabel,
)
from .progressions import sorted_index_tuples

if os.environ.get("AWKIT_PURE"):
    _native = None
else:
    try:
        from . import _native
    except ImportError:  # numba missing; the Python engine covers everything
        _native = None


class SolverTimeout(RuntimeError):
    """Raised when a solver call exceeds its deadline."""


_TIMEOUT_CHECK_MASK = 0x3FF
_BOUND_NONE, _BOUND_CHAIN, _BOUND_SUFFIX = 0, 1, 2


class _Tables:
    """Immutable per-(group, k) search tables, shared across solver calls."""

    __slots__ = (
        "n", "k", "kind", "pairs_at", "aps_at", "block_at", "chain_from", "hbound",
        "bound_kind", "_flat", "_flat_lock",
    )

    def __init__(self, group: GroupInstance, k: int) -> None:
        n = group.order
        self.n = n
        self.k = k
        self.kind = group.kind
        aps = sorted_index_tuples(group, k)
        tmp_pairs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        tmp_aps: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
        tmp_block: list[list[tuple]] = [[] for _ in range(n)]
        for ap in aps:
            tmp_aps[ap[-1]].append(ap[:-1])
            if k == 3:
                tmp_pairs[ap[2]].append((ap[0], ap[1]))
                tmp_block[ap[1]].append((ap[0], ap[2]))
            else:
                tmp_block[ap[-2]].append((ap[:-2], ap[-1]))
        self.pairs_at = [tuple(rows) for rows in tmp_pairs]
        self.aps_at = [tuple(rows) for rows in tmp_aps]
        self.block_at = [tuple(rows) for rows in tmp_block]
        self.chain_from = None
        self.hbound = None
        self.bound_kind = _BOUND_NONE
        if group.kind is GroupKind.INTERVAL:
            if k == 3:
                chain = [0] * (n + 2)
                for e in range(n, 0, -1):
                    chain[e] = 1 + (chain[2 * e] if 2 * e <= n else 0)
                self.chain_from = chain
                self.bound_kind = _BOUND_CHAIN
            else:
                self.hbound = _interval_future_bounds(n, k)
                self.bound_kind = _BOUND_SUFFIX
        self._flat = None
        self._flat_lock = threading.Lock()

    def flat(self):
        """CSR-flattened tables for the native kernels (built once, lazily)."""
        with self._flat_lock:
            if self._flat is None:
                n, k = self.n, self.k
                w = k - 1
                rc_ptr = np.zeros(n + 1, np.int64)
                bl_ptr = np.zeros(n + 1, np.int64)
                rc_rows: list[int] = []
                bl_rows: list[int] = []
                for t in range(n):
                    rc_ptr[t + 1] = rc_ptr[t] + len(self.aps_at[t])
                    for row in self.aps_at[t]:
                        rc_rows.extend(row)
                    if k == 3:
                        bl_ptr[t + 1] = bl_ptr[t] + len(self.block_at[t])
                        for a, x in self.block_at[t]:
                            bl_rows.extend((a, x))
                    else:
                        bl_ptr[t + 1] = bl_ptr[t] + len(self.block_at[t])
                        for others, x in self.block_at[t]:
                            bl_rows.extend(others)
                            bl_rows.append(x)
                rc_dat = np.asarray(rc_rows, np.int64) if rc_rows else np.zeros(0, np.int64)
                bl_dat = np.asarray(bl_rows, np.int64) if bl_rows else np.zeros(0, np.int64)
                assert rc_dat.size == rc_ptr[-1] * w and bl_dat.size == bl_ptr[-1] * w
                chain = np.asarray(self.chain_from or [0] * (n + 2), np.int64)
                hbound = np.asarray(self.hbound or [0] * (n + 2), np.int64)
                self._flat = (rc_ptr, rc_dat, bl_ptr, bl_dat, chain, hbound)
            return self._flat


_TABLES_CACHE: dict[tuple[GroupKind, int, int], _Tables] = {}
_TABLES_LOCK = threading.Lock()


def _tables(group: GroupInstance, k: int) -> _Tables:
    key = (group.kind, group.order, k)
    with _TABLES_LOCK:
        tb = _TABLES_CACHE.get(key)
        if tb is None:
            tb = _Tables(group, k)
            _TABLES_CACHE[key] = tb
        return tb


def _interval_future_bounds(n: int, k: int, node_cap: int = 200_000) -> list[int]:
    """H[t] = bound on the number of first occurrences among elements > t.

    Exact maximum subset of {t+1..n} containing no k-AP and no (k-1)-AP whose
    backward extension stays >= 1; computed by descending t with the fact
    H[t] <= H[t+1] + 1.  If the decision search exceeds node_cap the sound
    fallback H[t+1] + 1 is used.
    """

    def extendable(x: int, chosen: set[int]) -> bool:
        for y in chosen:
            d = x - y
            if x - (k - 1) * d >= 1 and all(x - j * d in chosen for j in range(2, k - 1)):
                return False
            if all(x - j * d in chosen for j in range(2, k)):
                return False
        return True

    def exists_of_size(lo: int, target: int) -> bool:
        nodes = 0
        chosen: set[int] = set()

        def rec(e: int, count: int) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > node_cap:
                return True  # give up: treat as attainable, which keeps the bound sound
            if count == target:
                return True
            if count + (n - e + 1) < target or e > n:
                return False
            if extendable(e, chosen):
                chosen.add(e)
                if rec(e + 1, count + 1):
                    return True
                chosen.remove(e)
            return rec(e + 1, count)

        return rec(lo, 0)

    H = [0] * (n + 2)
    for t in range(n - 1, -1, -1):
        cap = H[t + 1] + 1
        H[t] = cap if exists_of_size(t + 1, cap) else H[t + 1]
    return H


def _canonical_prefixes(depth: int, base: tuple[int, ...] = ()) -> list[tuple[int, ...]]:
    """Canonical color prefixes of the given depth extending `base` (no feasibility pruning)."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], used: int) -> None:
        if len(prefix) == depth:
            out.append(tuple(prefix))
            return
        t = len(prefix)
        choices = (base[t],) if t < len(base) else range(1, used + 2)
        for u in choices:
            prefix.append(u)
            rec(prefix, max(used, u))
            prefix.pop()

    rec([], 0)
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _value_phase_base(group: GroupInstance, k: int) -> tuple[int, ...]:
    """Sound symmetry restriction for the value phase only.

    For prime n in the cyclic case (with k <= n, so a k-AP exists and the
    all-distinct coloring is rainbow), every exact rainbow-free coloring has
    two equal-colored elements; the affine map z -> (z-x)/g sends such a pair
    {x, x+g} to {0, 1} and maps AP sets to AP sets, preserving palette,
    rainbow-freeness and unitarity.  Hence the maximum palette is attained on
    colorings with c(0) = c(1), and the value search may pin both to color 1.
    The witness phase never uses this restriction.
    """
    if group.kind is GroupKind.CYCLIC and k <= group.order and _is_prime(group.order):
        return (1, 1)
    return ()


class _ValueSearch:
    """One value-phase task: exhausts a region of the tree, raising the shared best."""

    def __init__(self, tb: _Tables, unitary: bool, shared_best: list[int],
                 lock: threading.Lock, deadline: float | None) -> None:
        self.tb = tb
        self.unitary = unitary
        self.shared_best = shared_best
        self.lock = lock
        self.deadline = deadline
        self.nodes = 0

    def run(self, forced: tuple[int, ...] = ()) -> None:
        tb = self.tb
        n = tb.n
        colors = [0] * n
        counts = [0] * (n + 2)
        blocked = bytearray(n)
        self._rec(0, 0, n, 0, 0, colors, counts, blocked, forced)

    def _rec(self, t: int, used: int, avail: int, singles: int, s_last: int,
             colors: list[int], counts: list[int], blocked: bytearray,
             forced: tuple[int, ...]) -> None:
        tb = self.tb
        n = tb.n
        best = self.shared_best[0]
        if t < len(forced):
            candidates: Sequence[int] = (forced[t],)
        else:
            candidates = range(used + 1, 0, -1)
        pairs = tb.pairs_at[t] if tb.k == 3 else None
        aps = tb.aps_at[t]
        block = tb.block_at[t]
        t_unblocked = 0 if blocked[t] else 1
        kk = tb.k
        for u in candidates:
            if u > used + 1:
                continue
            # with fewer than k colors in play no k-AP can be rainbow
            if used >= kk or u >= kk:
                if pairs is not None:
                    ok = True
                    for a, b in pairs:
                        ca = colors[a]
                        cb = colors[b]
                        if ca != cb and ca != u and cb != u:
                            ok = False
                            break
                    if not ok:
                        continue
                else:
                    ok = True
                    for others in aps:
                        seen = 1 << u
                        rainbow = True
                        for e in others:
                            bit = 1 << colors[e]
                            if seen & bit:
                                rainbow = False
                                break
                            seen |= bit
                        if rainbow:
                            ok = False
                            break
                    if not ok:
                        continue
            self.nodes += 1
            if (self.nodes & _TIMEOUT_CHECK_MASK) == 0 and self.deadline is not None:
                if perf_counter() > self.deadline:
                    raise SolverTimeout
            colors[t] = u
            counts[u] += 1
            cu = counts[u]
            nsingles = singles + (1 if cu == 1 else (-1 if cu == 2 else 0))
            nused = used + 1 if u > used else used
            ns_last = t + 1 if u > used else s_last
            newly = []
            if tb.k == 3:
                for a, x in block:
                    if not blocked[x] and colors[a] != u:
                        blocked[x] = 1
                        newly.append(x)
            else:
                for others, x in block:
                    if blocked[x]:
                        continue
                    seen = 1 << u
                    distinct = True
                    for e in others:
                        bit = 1 << colors[e]
                        if seen & bit:
                            distinct = False
                            break
                        seen |= bit
                    if distinct:
                        blocked[x] = 1
                        newly.append(x)
            navail = avail - t_unblocked - len(newly)
            if t + 1 == n:
                if nused > best and (not self.unitary or nsingles > 0):
                    with self.lock:
                        if nused > self.shared_best[0]:
                            self.shared_best[0] = nused
                    best = self.shared_best[0]
            else:
                fb = navail
                chain = tb.chain_from
                if chain is not None:
                    start = 2 * ns_last
                    if start < t + 2:
                        start = t + 2
                    cf = chain[start] if start <= n else 0
                    if cf < fb:
                        fb = cf
                elif tb.hbound is not None:
                    hb = tb.hbound[t + 1]
                    if hb < fb:
                        fb = hb
                if nused + fb > best:
                    self._rec(t + 1, nused, navail, nsingles, ns_last,
                              colors, counts, blocked, forced)
                    best = self.shared_best[0]
            for x in newly:
                blocked[x] = 0
            counts[u] -= 1
            colors[t] = 0


def _witness_search(tb: _Tables, target: int, unitary: bool,
                    deadline: float | None) -> tuple[tuple[int, ...], int]:
    """Lexicographically smallest canonical coloring with exactly `target` colors."""
    n = tb.n
    colors = [0] * n
    counts = [0] * (n + 2)
    blocked = bytearray(n)
    nodes = 0

    def rec(t: int, used: int, avail: int, singles: int, s_last: int) -> tuple[int, ...] | None:
        nonlocal nodes
        pairs = tb.pairs_at[t] if tb.k == 3 else None
        aps = tb.aps_at[t]
        block = tb.block_at[t]
        t_unblocked = 0 if blocked[t] else 1
        hi = used + 1 if used < target else used
        kk = tb.k
        for u in range(1, hi + 1):
            # with fewer than k colors in play no k-AP can be rainbow
            if used >= kk or u >= kk:
                if pairs is not None:
                    ok = True
                    for a, b in pairs:
                        ca = colors[a]
                        cb = colors[b]
                        if ca != cb and ca != u and cb != u:
                            ok = False
                            break
                    if not ok:
                        continue
                else:
                    ok = True
                    for others in aps:
                        seen = 1 << u
                        rainbow = True
                        for e in others:
                            bit = 1 << colors[e]
                            if seen & bit:
                                rainbow = False
                                break
                            seen |= bit
                        if rainbow:
                            ok = False
                            break
                    if not ok:
                        continue
            nodes += 1
            if (nodes & _TIMEOUT_CHECK_MASK) == 0 and deadline is not None:
                if perf_counter() > deadline:
                    raise SolverTimeout
            colors[t] = u
            counts[u] += 1
            cu = counts[u]
            nsingles = singles + (1 if cu == 1 else (-1 if cu == 2 else 0))
            nused = used + 1 if u > used else used
            ns_last = t + 1 if u > used else s_last
            if t + 1 == n:
                if nused == target and (not unitary or nsingles > 0):
                    return tuple(colors)
                counts[u] -= 1
                colors[t] = 0
                continue
            newly = []
            if tb.k == 3:
                for a, x in block:
                    if not blocked[x] and colors[a] != u:
                        blocked[x] = 1
                        newly.append(x)
            else:
                for others, x in block:
                    if blocked[x]:
                        continue
                    seen = 1 << u
                    distinct = True
                    for e in others:
                        bit = 1 << colors[e]
                        if seen & bit:
                            distinct = False
                            break
                        seen |= bit
                    if distinct:
                        blocked[x] = 1
                        newly.append(x)
            navail = avail - t_unblocked - len(newly)
            fb = navail
            chain = tb.chain_from
            if chain is not None:
                start = 2 * ns_last
                if start < t + 2:
                    start = t + 2
                cf = chain[start] if start <= n else 0
                if cf < fb:
                    fb = cf
            elif tb.hbound is not None:
                hb = tb.hbound[t + 1]
                if hb < fb:
                    fb = hb
            prune = nused + fb < target
            if not prune and unitary and nsingles == 0 and nused == target:
                prune = True  # all classes >= 2 already and no new color may appear
            if not prune:
                found = rec(t + 1, nused, navail, nsingles, ns_last)
                if found is not None:
                    return found
            for x in newly:
                blocked[x] = 0
            counts[u] -= 1
            colors[t] = 0
        return None

    witness = rec(0, 0, n, 0, 0)
    if witness is None:
        raise RuntimeError(f"no coloring with {target} colors found; value phase disagrees")
    return witness, nodes


def _engine(engine: str | None) -> str:
    if engine is None:
        return "native" if _native is not None else "python"
    if engine not in ("native", "python"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "native" and _native is None:
        raise RuntimeError("native engine requested but numba is unavailable")
    return engine


def _native_value(tb: _Tables, unitary: bool, deadline: float | None,
                  workers: int, base: tuple[int, ...]) -> tuple[int, int]:
    rc_ptr, rc_dat, bl_ptr, bl_dat, chain, hbound = tb.flat()
    dl = deadline if deadline is not None else 0.0
    uni = 1 if unitary else 0

    def run(forced: np.ndarray, best_init: int) -> tuple[int, int]:
        best, nodes, status = _native.value_kernel(
            tb.n, tb.k, rc_ptr, rc_dat, bl_ptr, bl_dat, tb.bound_kind,
            chain, hbound, uni, forced, best_init, dl,
        )
        if status == 1:
            raise SolverTimeout
        return int(best), int(nodes)

    if workers == 1 or tb.n < 4:
        return run(np.asarray(base, np.int64), 0)
    depth = max(2, len(base))
    prefixes = _canonical_prefixes(depth, base)
    while len(prefixes) < 4 * workers and depth < min(tb.n, 8):
        depth += 1
        prefixes = _canonical_prefixes(depth, base)
    shared = [0]
    lock = threading.Lock()
    total_nodes = 0

    def task(prefix: tuple[int, ...]) -> int:
        best, nodes = run(np.asarray(prefix, np.int64), shared[0])
        with lock:
            if best > shared[0]:
                shared[0] = best
        return nodes

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for nodes in pool.map(task, prefixes):
            total_nodes += nodes
    return shared[0], total_nodes


def _native_witness(tb: _Tables, target: int, unitary: bool,
                    deadline: float | None) -> tuple[tuple[int, ...], int]:
    rc_ptr, rc_dat, bl_ptr, bl_dat, chain, hbound = tb.flat()
    out = np.zeros(tb.n, np.int64)
    found, nodes, status = _native.witness_kernel(
        tb.n, tb.k, rc_ptr, rc_dat, bl_ptr, bl_dat, tb.bound_kind,
        chain, hbound, 1 if unitary else 0, target,
        deadline if deadline is not None else 0.0, out,
    )
    if status == 1:
        raise SolverTimeout
    if not found:
        raise RuntimeError(f"no coloring with {target} colors found; value phase disagrees")
    return tuple(int(v) for v in out), int(nodes)


def max_rainbow_free_palette(
    group: GroupInstance,
    k: int,
    unitary: bool = False,
    *,
    workers: int = 1,
    timeout: float | None = None,
    engine: str | None = None,
) -> tuple[int, Coloring, int, float]:
    """(r_max, witness, nodes, elapsed) for the given group and progression length.

    r_max is the maximum palette over exact (optionally unitary) rainbow-k-AP-free
    colorings; witness is the lexicographically smallest canonical coloring
    achieving it.  Identical results for every worker count and engine.
    """
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    eng = _engine(engine)
    t0 = perf_counter()
    deadline = t0 + timeout if timeout is not None else None
    tb = _tables(group, k)
    base = _value_phase_base(group, k)
    if eng == "native":
        r_max, nodes = _native_value(tb, unitary, deadline, workers, base)
        witness_assignment, wnodes = _native_witness(tb, r_max, unitary, deadline)
    else:
        shared_best = [0]
        lock = threading.Lock()
        if workers == 1 or group.order < 4:
            task = _ValueSearch(tb, unitary, shared_best, lock, deadline)
            task.run(base)
            nodes = task.nodes
        else:
            depth = max(2, len(base))
            prefixes = _canonical_prefixes(depth, base)
            while len(prefixes) < 4 * workers and depth < min(group.order, 8):
                depth += 1
                prefixes = _canonical_prefixes(depth, base)
            tasks = [_ValueSearch(tb, unitary, shared_best, lock, deadline) for _ in prefixes]
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(task.run, prefix)
                           for task, prefix in zip(tasks, prefixes)]
                for fut in futures:
                    fut.result()
            nodes = sum(task.nodes for task in tasks)
        r_max = shared_best[0]
        witness_assignment, wnodes = _witness_search(tb, r_max, unitary, deadline)
    witness = Coloring(group, witness_assignment)
    return r_max, witness, nodes + wnodes, perf_counter() - t0


def _solve(group: GroupInstance, k: int, unitary: bool, workers: int,
           timeout: float | None, store, engine: str | None) -> SolverOutcome:
    if store is not None:
        cached = store.get(group.kind.value, group.order, k, unitary, verify=True)
        if cached is not None:
            return SolverOutcome(
                aw_value=cached.aw_value,
                witness=cached.witness_coloring(),
                unitary=unitary,
                nodes_explored=0,
                elapsed=0.0,
            )
    r_max, witness, nodes, elapsed = max_rainbow_free_palette(
        group, k, unitary, workers=workers, timeout=timeout, engine=engine
    )
    outcome = SolverOutcome(
        aw_value=r_max + 1,
        witness=witness,
        unitary=unitary,
        nodes_explored=nodes,
        elapsed=elapsed,
    )
    if store is not None:
        store.put_outcome(group, k, unitary, outcome)
    return outcome


def aw(group: GroupInstance, k: int, *, workers: int = 1, timeout: float | None = None,
       store=None, engine: str | None = None) -> SolverOutcome:
    """aw(G,k): smallest r such that every exact r-coloring has a rainbow k-AP."""
    return _solve(group, k, False, workers, timeout, store, engine)


def aw_u(group: GroupInstance, k: int, *, workers: int = 1, timeout: float | None = None,
         store=None, engine: str | None = None) -> SolverOutcome:
    """aw_u(G,k): as aw but quantified over unitary exact colorings only."""
    return _solve(group, k, True, workers, timeout, store, engine)


def merge_colors(c: Coloring, i: int, j: int) -> Coloring:
    """Merge color classes i and j (both in use, i != j); palette drops by one."""
    if i == j:
        raise ValueError("cannot merge a color with itself")
    for color in (i, j):
        if not 1 <= color <= c.palette:
            raise ValueError(f"color {color} not used (palette is 1..{c.palette})")
    merged = [i if v == j else v for v in c.assignment]
    return Coloring(c.group, canonical_relabel(merged))
