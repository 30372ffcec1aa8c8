"""Compiled inner loops.

All kernels release the GIL so worker threads run them concurrently.  Each
returns its instrumentation counts in a small int64 array laid out as
``STAT_*``; counting is skipped when ``instrument`` is False.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .core import PLANE_DTYPE, QUERY

STAT_TOUCHES = 0
STAT_COMPARISONS = 1
STAT_COPIES = 2
STAT_REGROWTHS = 3
STAT_MAX_ACTIVE = 4
N_STATS = 5

_JIT = dict(nogil=True, cache=True)


@njit(**_JIT)
def better(ay, aid, by, bid):
    """True iff answer a is strictly higher than b in (y, id) order."""
    return ay > by or (ay == by and aid > bid)


# --------------------------------------------------------------------------
# slab location and the max segment tree


@njit(**_JIT)
def locate(b, k, x, uniform):
    """Index i with b[i] <= x < b[i+1] (last slab closed); returns (i, comparisons)."""
    c = 0
    if uniform:
        i = int((x - b[0]) / (b[k] - b[0]) * k)
        if i < 0:
            i = 0
        elif i > k - 1:
            i = k - 1
        c += 1
        while i > 0 and x < b[i]:
            i -= 1
            c += 1
        c += 1
        while i < k - 1 and x >= b[i + 1]:
            i += 1
            c += 1
        return i, c
    lo = 0
    hi = k - 1
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        c += 1
        if b[mid] <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo, c


@njit(**_JIT)
def span_range(b, k, x1, x2, i1, in1, i2, in2):
    """Inclusive range [l, r] of slabs i with x1 <= b[i] and b[i+1] <= x2."""
    if not in1:
        l = 0 if x1 < b[0] else k
    elif b[i1] == x1:
        l = i1
    else:
        l = i1 + 1
    if not in2:
        r = k - 1 if x2 > b[k] else -1
    elif x2 == b[k]:
        r = k - 1
    else:
        r = i2 - 1
    return l, r


@njit(**_JIT)
def tree_update(ty, tid, k, l, r, y, sid):
    """MAX (y, sid) into the canonical nodes of leaf range [l, r]; returns nodes touched."""
    lo = l + k
    hi = r + k + 1
    c = 0
    while lo < hi:
        if lo & 1:
            c += 1
            if better(y, sid, ty[lo], tid[lo]):
                ty[lo] = y
                tid[lo] = sid
            lo += 1
        if hi & 1:
            hi -= 1
            c += 1
            if better(y, sid, ty[hi], tid[hi]):
                ty[hi] = y
                tid[hi] = sid
        lo >>= 1
        hi >>= 1
    return c


@njit(**_JIT)
def tree_query(ty, tid, k, i):
    """MAX over the root-to-leaf path of leaf i; returns (y, id, nodes read)."""
    v = i + k
    by = -np.inf
    bid = 0
    c = 0
    while v >= 1:
        c += 1
        if better(ty[v], tid[v], by, bid):
            by = ty[v]
            bid = tid[v]
        v >>= 1
    return by, bid, c


@njit(**_JIT)
def array_update(ty, tid, k, l, r, y, sid):
    """Naive per-slab update: every spanned leaf individually."""
    c = 0
    for i in range(l, r + 1):
        c += 1
        v = i + k
        if better(y, sid, ty[v], tid[v]):
            ty[v] = y
            tid[v] = sid
    return c


# --------------------------------------------------------------------------
# distribution pass


@njit(**_JIT)
def _grow(buf, offs, caps, cnt, i, t, n):
    """Reallocate after slab i overflowed while placing object t of n.

    Slab i at least doubles; past the first sixteenth of the input every
    slab is also resized to 10% above its fill rate extrapolated to n, so a
    skewed partition costs a few regrowths rather than one per slab.
    """
    caps[i] *= 2
    if 16 * t >= n:
        scale = 1.1 * n / (t + 1)
        for j in range(caps.shape[0]):
            want = int(cnt[j] * scale) + 8
            if want > caps[j]:
                caps[j] = want
    total = 0
    new_offs = np.empty_like(offs)
    for j in range(caps.shape[0]):
        new_offs[j] = total
        total += caps[j]
    out = np.empty(total, dtype=PLANE_DTYPE)
    for j in range(caps.shape[0]):
        out[new_offs[j] : new_offs[j] + cnt[j]] = buf[offs[j] : offs[j] + cnt[j]]
    offs[:] = new_offs
    return out


@njit(**_JIT)
def distribute(objs, b, k, uniform, ty, tid, naive, instrument):
    """One y-ordered sweep over ``objs`` distributing copies into k child slabs.

    Queries pick up the path maximum of the tree (ty, tid) for their slab;
    segments update the tree over the slabs they span and are copied to the
    slab of each endpoint lying inside [b[0], b[k]].

    Returns (buf, offs, cnt, seg_cnt, qry_cnt, pts_cnt, xlo, xhi, stats): the
    copies for slab i are ``buf[offs[i] : offs[i] + cnt[i]]``; pts_cnt counts
    query points and endpoints per slab, xlo/xhi their x-extent.
    """
    n = objs.shape[0]
    # every copy holds at least one of the slab's points, so size by points
    pts = 0
    for t in range(n):
        pts += 1 if objs[t].kind == QUERY else 2
    cap = max(int(1.1 * pts / k) + 1, 8)
    caps = np.full(k, cap, dtype=np.int64)
    offs = np.arange(k, dtype=np.int64) * cap
    buf = np.empty(k * cap, dtype=PLANE_DTYPE)
    cnt = np.zeros(k, dtype=np.int64)
    seg_cnt = np.zeros(k, dtype=np.int64)
    qry_cnt = np.zeros(k, dtype=np.int64)
    pts_cnt = np.zeros(k, dtype=np.int64)
    xlo = np.full(k, np.inf)
    xhi = np.full(k, -np.inf)
    stats = np.zeros(N_STATS, dtype=np.int64)
    touches = 0
    cmps = 0
    copies = 0
    regrow = 0
    bmin = b[0]
    bmax = b[k]
    for t in range(n):
        kind = objs[t].kind
        if instrument and objs[t].primary:
            touches += 1
        if kind == QUERY:
            x = objs[t].x1
            i, c = locate(b, k, x, uniform)
            if naive:
                py = ty[i + k]
                pid = tid[i + k]
                c += 1
            else:
                py, pid, c2 = tree_query(ty, tid, k, i)
                c += c2
            if instrument:
                cmps += c
            if cnt[i] == caps[i]:
                buf = _grow(buf, offs, caps, cnt, i, t, n)
                regrow += 1
            p = offs[i] + cnt[i]
            buf[p] = objs[t]
            if better(py, pid, buf[p].ans_y, buf[p].ans_id):
                buf[p].ans_y = py
                buf[p].ans_id = pid
            cnt[i] += 1
            qry_cnt[i] += 1
            pts_cnt[i] += 1
            if x < xlo[i]:
                xlo[i] = x
            if x > xhi[i]:
                xhi[i] = x
        else:
            x1 = objs[t].x1
            x2 = objs[t].x2
            in1 = bmin <= x1 and x1 <= bmax
            in2 = bmin <= x2 and x2 <= bmax
            i1 = -1
            i2 = -1
            c = 0
            if in1:
                i1, c1 = locate(b, k, x1, uniform)
                c += c1
            if in2:
                i2, c1 = locate(b, k, x2, uniform)
                c += c1
            l, r = span_range(b, k, x1, x2, i1, in1, i2, in2)
            # a split segment counts on one side only, alternating with id
            # parity so per-slab touches follow per-slab records
            split = in1 and in2 and i1 != i2
            if l <= r:
                if naive:
                    c += array_update(ty, tid, k, l, r, objs[t].y, objs[t].id)
                else:
                    c += tree_update(ty, tid, k, l, r, objs[t].y, objs[t].id)
            if instrument:
                cmps += c
            if in1:
                if cnt[i1] == caps[i1]:
                    buf = _grow(buf, offs, caps, cnt, i1, t, n)
                    regrow += 1
                p = offs[i1] + cnt[i1]
                buf[p] = objs[t]
                if split and objs[t].id & 1:
                    buf[p].primary = 0
                cnt[i1] += 1
                seg_cnt[i1] += 1
                pts_cnt[i1] += 1
                if x1 < xlo[i1]:
                    xlo[i1] = x1
                if x1 > xhi[i1]:
                    xhi[i1] = x1
            if in2:
                if in1 and i2 == i1:
                    pts_cnt[i1] += 1
                    if x2 > xhi[i1]:
                        xhi[i1] = x2
                else:
                    if cnt[i2] == caps[i2]:
                        buf = _grow(buf, offs, caps, cnt, i2, t, n)
                        regrow += 1
                    p = offs[i2] + cnt[i2]
                    buf[p] = objs[t]
                    if split:
                        if not objs[t].id & 1:
                            buf[p].primary = 0
                        copies += 1
                    cnt[i2] += 1
                    seg_cnt[i2] += 1
                    pts_cnt[i2] += 1
                    if x2 < xlo[i2]:
                        xlo[i2] = x2
                    if x2 > xhi[i2]:
                        xhi[i2] = x2
    stats[STAT_TOUCHES] = touches
    stats[STAT_COMPARISONS] = cmps
    stats[STAT_COPIES] = copies
    stats[STAT_REGROWTHS] = regrow
    return buf, offs, cnt, seg_cnt, qry_cnt, pts_cnt, xlo, xhi, stats


@njit(**_JIT)
def copy_propagate(out, pos, chunk, py, pid, instrument):
    """Copy ``chunk`` to ``out[pos:]``; sentinel queries take (py, pid)."""
    touches = 0
    for t in range(chunk.shape[0]):
        out[pos + t] = chunk[t]
        if instrument and chunk[t].primary:
            touches += 1
        if chunk[t].kind == QUERY and chunk[t].ans_id == 0 and pid != 0:
            out[pos + t].ans_y = py
            out[pos + t].ans_id = pid
    return touches


@njit(**_JIT)
def flush_answers(objs, res_y, res_id):
    for t in range(objs.shape[0]):
        if objs[t].kind == QUERY:
            res_y[objs[t].id] = objs[t].ans_y
            res_id[objs[t].id] = objs[t].ans_id


# --------------------------------------------------------------------------
# plane sweep


@njit(**_JIT)
def sweep_events(objs):
    """Event order for a y-sorted slab: x ascending; inserts, queries, deletes at ties.

    Returns (events, rank, s).  A query event is stored as ``-1 - t``; a
    segment ``t`` appears twice as ``t``, first visit inserts, second deletes.
    ``rank[t]`` is the local y-rank of segment ``objs[t]``.
    """
    n = objs.shape[0]
    s = 0
    for t in range(n):
        if objs[t].kind != QUERY:
            s += 1
    q = n - s
    ev_x = np.empty(2 * s + q)
    ev_obj = np.empty(2 * s + q, dtype=np.int64)
    rank = np.full(n, -1, dtype=np.int64)
    si = 0
    qi = 0
    for t in range(n):
        if objs[t].kind == QUERY:
            ev_x[s + qi] = objs[t].x1
            ev_obj[s + qi] = t
            qi += 1
        else:
            rank[t] = si
            ev_x[si] = objs[t].x1
            ev_obj[si] = t
            ev_x[s + q + si] = objs[t].x2
            ev_obj[s + q + si] = t
            si += 1
    order = np.argsort(ev_x, kind="mergesort")
    out = np.empty(2 * s + q, dtype=np.int64)
    for e in range(order.shape[0]):
        j = order[e]
        out[e] = ev_obj[j] if j < s or j >= s + q else -1 - ev_obj[j]
    return out, rank, s


@njit(**_JIT)
def _predecessor(tree, size, t):
    """Largest present leaf index < t, or -1; returns (index, nodes inspected)."""
    if t <= 0:
        return -1, 0
    pos = t - 1 + size
    c = 1
    if tree[pos] > 0:
        return t - 1, c
    while pos > 1:
        c += 1
        if (pos & 1) and tree[pos - 1] > 0:
            pos -= 1
            while pos < size:
                c += 1
                if tree[2 * pos + 1] > 0:
                    pos = 2 * pos + 1
                else:
                    pos = 2 * pos
            return pos - size, c
        pos >>= 1
    return -1, c


@njit(**_JIT)
def sweep_run(objs, events, rank, s, res_y, res_id, instrument, active_log):
    """Sweep the events, answering every query against the active set.

    The active set is an ordered set over local y-ranks; a query's key is
    the number of local segments strictly below it, found by binary search.
    Answers are MAXed with the query's carried answer and written to both
    the record and (res_y, res_id)[query id].  If ``active_log`` is
    non-empty, the active-set size at query number j is stored there.
    """
    n = objs.shape[0]
    stats = np.zeros(N_STATS, dtype=np.int64)
    seg_y = np.empty(s)
    seg_obj = np.empty(s, dtype=np.int64)
    touches = 0
    for t in range(n):
        if rank[t] >= 0:
            seg_y[rank[t]] = objs[t].y
            seg_obj[rank[t]] = t
        if instrument and objs[t].primary:
            touches += 1
    size = 1
    depth = 1
    while size < s:
        size <<= 1
        depth += 1
    tree = np.zeros(2 * size, dtype=np.int32)
    inserted = np.zeros(s, dtype=np.bool_)
    active = 0
    max_active = 0
    cmps = 0
    qn = 0
    log = active_log.shape[0] > 0
    for e in range(events.shape[0]):
        ev = events[e]
        if ev >= 0:
            r = rank[ev]
            pos = r + size
            if not inserted[r]:
                inserted[r] = True
                active += 1
                if active > max_active:
                    max_active = active
                while pos >= 1:
                    tree[pos] += 1
                    pos >>= 1
            else:
                active -= 1
                while pos >= 1:
                    tree[pos] -= 1
                    pos >>= 1
            if instrument:
                cmps += depth
        else:
            t = -1 - ev
            y = objs[t].y
            lo = 0
            hi = s
            while lo < hi:
                mid = (lo + hi) >> 1
                if instrument:
                    cmps += 1
                if seg_y[mid] < y:
                    lo = mid + 1
                else:
                    hi = mid
            p, c = _predecessor(tree, size, lo)
            if instrument:
                cmps += c
            if p >= 0:
                o = seg_obj[p]
                if better(objs[o].y, objs[o].id, objs[t].ans_y, objs[t].ans_id):
                    objs[t].ans_y = objs[o].y
                    objs[t].ans_id = objs[o].id
            res_y[objs[t].id] = objs[t].ans_y
            res_id[objs[t].id] = objs[t].ans_id
            if log:
                active_log[qn] = active
            qn += 1
    stats[STAT_TOUCHES] = touches
    stats[STAT_COMPARISONS] = cmps
    stats[STAT_MAX_ACTIVE] = max_active
    return stats


@njit(**_JIT)
def base_case(objs, res_y, res_id, instrument):
    events, rank, s = sweep_events(objs)
    return sweep_run(objs, events, rank, s, res_y, res_id, instrument, np.empty(0, dtype=np.int64))
