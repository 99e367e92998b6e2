"""Numba-compiled twin of the backtracking search in solver.py.

Same canonical branching, same pruning, same candidate order as the pure
Python engine, so values, witnesses and search structure are identical; the
kernels just run the hot loop natively (and release the GIL so worker
threads actually overlap).  solver.py falls back to the Python engine when
numba is unavailable or AWKIT_PURE is set.

Layout: progressions are flattened CSR-style.  For position t,
rc_dat[rc_ptr[t]:rc_ptr[t+1]] holds rows of width k-1 listing the other
elements of each AP whose maximum is t (rainbow checks), and
bl_dat[bl_ptr[t]:bl_ptr[t+1]] holds rows of width k-1 listing the k-2
elements below t plus the AP maximum (new-color blocking).
bound_kind: 0 = none (cyclic), 1 = doubling chain (intervals, k=3),
2 = precomputed suffix bound (intervals, k>=4).
"""

from __future__ import annotations

import time
import warnings

import numpy as np
from numba import njit, objmode
from numba.core.errors import NumbaWarning

# The objmode escape hatch used for deadline checks triggers a cosmetic
# compile-time warning about parallel execution; the block runs once per
# ~260k nodes, so the serialization it warns about is irrelevant here.
warnings.filterwarnings("ignore", category=NumbaWarning, message=".*object mode.*")

_TIME_MASK = (1 << 18) - 1


@njit(cache=True, nogil=True)
def _rainbow_blocked(colors, u, row, width):
    """True iff the AP row plus color u at its maximum would be rainbow."""
    for i in range(width):
        ci = colors[row[i]]
        if ci == u:
            return False
        for j in range(i):
            if colors[row[j]] == ci:
                return False
    return True


@njit(cache=True, nogil=True)
def value_kernel(n, k, rc_ptr, rc_dat, bl_ptr, bl_dat, bound_kind, chain, hbound,
                 unitary, forced, best_init, deadline):
    """Max palette over exact rainbow-free (optionally unitary) colorings.

    Returns (best, nodes, status); status 1 means the deadline was hit.
    """
    w = k - 1
    colors = np.zeros(n, np.int64)
    counts = np.zeros(n + 2, np.int64)
    blocked = np.zeros(n, np.uint8)
    undo = np.zeros(n + 1, np.int64)
    undo_top = 0
    nb_start = np.zeros(n + 1, np.int64)
    cand = np.zeros(n + 1, np.int64)
    lo = np.ones(n + 1, np.int64)
    used_s = np.zeros(n + 1, np.int64)
    avail_s = np.zeros(n + 1, np.int64)
    sing_s = np.zeros(n + 1, np.int64)
    slast_s = np.zeros(n + 1, np.int64)
    flen = forced.shape[0]
    best = best_init
    nodes = 0
    status = 0

    avail_s[0] = n
    if flen > 0:
        cand[0] = forced[0]
        lo[0] = forced[0]
    else:
        cand[0] = 1
        lo[0] = 1
    t = 0
    while t >= 0:
        u = cand[t]
        if u < lo[t]:
            t -= 1
            if t >= 0:
                c = colors[t]
                counts[c] -= 1
                colors[t] = 0
                while undo_top > nb_start[t]:
                    undo_top -= 1
                    blocked[undo[undo_top]] = 0
            continue
        cand[t] = u - 1
        used = used_s[t]
        # rainbow check against every AP whose maximum element is t; with
        # fewer than k colors in play no k-AP can be rainbow at all
        ok = True
        if used >= k or u >= k:
            if k == 3:
                for r in range(rc_ptr[t], rc_ptr[t + 1]):
                    base = r * 2
                    ca = colors[rc_dat[base]]
                    cb = colors[rc_dat[base + 1]]
                    if ca != cb and ca != u and cb != u:
                        ok = False
                        break
            else:
                for r in range(rc_ptr[t], rc_ptr[t + 1]):
                    if _rainbow_blocked(colors, u, rc_dat[r * w:(r + 1) * w], w):
                        ok = False
                        break
        if not ok:
            continue
        nodes += 1
        if (nodes & _TIME_MASK) == 0 and deadline > 0.0:
            with objmode(now="f8"):
                now = time.perf_counter()
            if now > deadline:
                status = 1
                break
        colors[t] = u
        counts[u] += 1
        cu = counts[u]
        nused = used + 1 if u > used else used
        nsing = sing_s[t] + (1 if cu == 1 else (-1 if cu == 2 else 0))
        nslast = t + 1 if u > used else slast_s[t]
        nb_start[t] = undo_top
        tub = 0 if blocked[t] else 1
        if k == 3:
            for r in range(bl_ptr[t], bl_ptr[t + 1]):
                base = r * 2
                x = bl_dat[base + 1]
                if not blocked[x] and colors[bl_dat[base]] != u:
                    blocked[x] = 1
                    undo[undo_top] = x
                    undo_top += 1
        else:
            for r in range(bl_ptr[t], bl_ptr[t + 1]):
                base = r * w
                x = bl_dat[base + w - 1]
                if blocked[x]:
                    continue
                distinct = True
                for i in range(w - 1):
                    ci = colors[bl_dat[base + i]]
                    if ci == u:
                        distinct = False
                        break
                    for j in range(i):
                        if colors[bl_dat[base + j]] == ci:
                            distinct = False
                            break
                    if not distinct:
                        break
                if distinct:
                    blocked[x] = 1
                    undo[undo_top] = x
                    undo_top += 1
        navail = avail_s[t] - tub - (undo_top - nb_start[t])
        if t + 1 == n:
            if nused > best and (unitary == 0 or nsing > 0):
                best = nused
            counts[u] -= 1
            colors[t] = 0
            while undo_top > nb_start[t]:
                undo_top -= 1
                blocked[undo[undo_top]] = 0
            continue
        fb = navail
        if bound_kind == 1:
            start = 2 * nslast
            if start < t + 2:
                start = t + 2
            cf = chain[start] if start <= n else 0
            if cf < fb:
                fb = cf
        elif bound_kind == 2:
            if hbound[t + 1] < fb:
                fb = hbound[t + 1]
        if nused + fb <= best:
            counts[u] -= 1
            colors[t] = 0
            while undo_top > nb_start[t]:
                undo_top -= 1
                blocked[undo[undo_top]] = 0
            continue
        t += 1
        used_s[t] = nused
        avail_s[t] = navail
        sing_s[t] = nsing
        slast_s[t] = nslast
        if t < flen:
            cand[t] = forced[t]
            lo[t] = forced[t]
        else:
            cand[t] = nused + 1
            lo[t] = 1
    return best, nodes, status


@njit(cache=True, nogil=True)
def witness_kernel(n, k, rc_ptr, rc_dat, bl_ptr, bl_dat, bound_kind, chain, hbound,
                   unitary, target, deadline, out):
    """Lexicographically first canonical coloring with exactly `target` colors.

    Fills `out` and returns (found, nodes, status).
    """
    w = k - 1
    colors = np.zeros(n, np.int64)
    counts = np.zeros(n + 2, np.int64)
    blocked = np.zeros(n, np.uint8)
    undo = np.zeros(n + 1, np.int64)
    undo_top = 0
    nb_start = np.zeros(n + 1, np.int64)
    cand = np.zeros(n + 1, np.int64)
    hi = np.zeros(n + 1, np.int64)
    used_s = np.zeros(n + 1, np.int64)
    avail_s = np.zeros(n + 1, np.int64)
    sing_s = np.zeros(n + 1, np.int64)
    slast_s = np.zeros(n + 1, np.int64)
    nodes = 0
    status = 0
    found = 0

    avail_s[0] = n
    cand[0] = 1
    hi[0] = 1 if target >= 1 else 0
    t = 0
    while t >= 0:
        u = cand[t]
        if u > hi[t]:
            t -= 1
            if t >= 0:
                c = colors[t]
                counts[c] -= 1
                colors[t] = 0
                while undo_top > nb_start[t]:
                    undo_top -= 1
                    blocked[undo[undo_top]] = 0
            continue
        cand[t] = u + 1
        used = used_s[t]
        ok = True
        if used >= k or u >= k:
            if k == 3:
                for r in range(rc_ptr[t], rc_ptr[t + 1]):
                    base = r * 2
                    ca = colors[rc_dat[base]]
                    cb = colors[rc_dat[base + 1]]
                    if ca != cb and ca != u and cb != u:
                        ok = False
                        break
            else:
                for r in range(rc_ptr[t], rc_ptr[t + 1]):
                    if _rainbow_blocked(colors, u, rc_dat[r * w:(r + 1) * w], w):
                        ok = False
                        break
        if not ok:
            continue
        nodes += 1
        if (nodes & _TIME_MASK) == 0 and deadline > 0.0:
            with objmode(now="f8"):
                now = time.perf_counter()
            if now > deadline:
                status = 1
                break
        colors[t] = u
        counts[u] += 1
        cu = counts[u]
        nused = used + 1 if u > used else used
        nsing = sing_s[t] + (1 if cu == 1 else (-1 if cu == 2 else 0))
        nslast = t + 1 if u > used else slast_s[t]
        nb_start[t] = undo_top
        tub = 0 if blocked[t] else 1
        if k == 3:
            for r in range(bl_ptr[t], bl_ptr[t + 1]):
                base = r * 2
                x = bl_dat[base + 1]
                if not blocked[x] and colors[bl_dat[base]] != u:
                    blocked[x] = 1
                    undo[undo_top] = x
                    undo_top += 1
        else:
            for r in range(bl_ptr[t], bl_ptr[t + 1]):
                base = r * w
                x = bl_dat[base + w - 1]
                if blocked[x]:
                    continue
                distinct = True
                for i in range(w - 1):
                    ci = colors[bl_dat[base + i]]
                    if ci == u:
                        distinct = False
                        break
                    for j in range(i):
                        if colors[bl_dat[base + j]] == ci:
                            distinct = False
                            break
                    if not distinct:
                        break
                if distinct:
                    blocked[x] = 1
                    undo[undo_top] = x
                    undo_top += 1
        navail = avail_s[t] - tub - (undo_top - nb_start[t])
        if t + 1 == n:
            if nused == target and (unitary == 0 or nsing > 0):
                for i in range(n):
                    out[i] = colors[i]
                found = 1
                break
            counts[u] -= 1
            colors[t] = 0
            while undo_top > nb_start[t]:
                undo_top -= 1
                blocked[undo[undo_top]] = 0
            continue
        fb = navail
        if bound_kind == 1:
            start = 2 * nslast
            if start < t + 2:
                start = t + 2
            cf = chain[start] if start <= n else 0
            if cf < fb:
                fb = cf
        elif bound_kind == 2:
            if hbound[t + 1] < fb:
                fb = hbound[t + 1]
        prune = nused + fb < target
        if not prune and unitary == 1 and nsing == 0 and nused == target:
            prune = True  # all classes >= 2 and no new color may appear
        if prune:
            counts[u] -= 1
            colors[t] = 0
            while undo_top > nb_start[t]:
                undo_top -= 1
                blocked[undo[undo_top]] = 0
            continue
        t += 1
        used_s[t] = nused
        avail_s[t] = navail
        sing_s[t] = nsing
        slast_s[t] = nslast
        cand[t] = 1
        hi[t] = nused + 1 if nused < target else nused
    return found, nodes, status
