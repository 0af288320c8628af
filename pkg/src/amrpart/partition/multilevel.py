"""Serial multilevel recursive bisection for graphs and hypergraphs.

Each bisection coarsens the problem by matching vertices that share many
nets, splits the coarsest level (exhaustively when it is small, otherwise
by growing a region from several seeds), and then walks back up the
hierarchy refining the projected split with two-way Fiduccia-Mattheyses
passes. Graphs are handled as hypergraphs whose nets are the edges, so
the two-way cut-net cost is the edge cut for graphs and the
connectivity-1 cost for hypergraphs. Recursion splits cut nets so that
the sum of bisection costs is the k-way connectivity-1 cost.

Balance: a side with target weight ``t`` may hold up to
``max((1 + d) * t, t + w_max / 2)`` where ``w_max`` is the heaviest vertex
of the subproblem; the second term keeps the constraint satisfiable when
vertices are coarse compared with the slack. With ``n > 2`` parts the
tolerance is split across the ``ceil(log2 n)`` recursion levels as
``d = (1 + delta)^(1 / levels) - 1`` so that the imbalances compound to
at most ``delta``.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from amrpart.errors import DegenerateSplitError, InvalidArgumentError
from amrpart.partition.common import (
    PartitionAssignment,
    PartitionerParams,
    check_n_parts,
    split_counts,
)

MODES = ("graph", "hypergraph")
# Nets larger than this are ignored when scoring matches (they say little
# about which pair belongs together and dominate the cost).
MATCH_NET_LIMIT = 512
# Seeds tried when the coarsest level is too large for exhaustive search.
GROW_TRIALS = 8
# Stop coarsening when a level shrinks the vertex count by less than this.
STALL_RATIO = 0.95


# ---------------------------------------------------------------------------
# hypergraph plumbing


@numba.njit(cache=True)
def _incidence(n, ptr, pins):
    vptr = np.zeros(n + 1, dtype=np.int64)
    for p in pins:
        vptr[p + 1] += 1
    for v in range(n):
        vptr[v + 1] += vptr[v]
    fill = vptr[:-1].copy()
    vnets = np.empty(len(pins), dtype=np.int64)
    for e in range(len(ptr) - 1):
        for b in range(ptr[e], ptr[e + 1]):
            v = pins[b]
            vnets[fill[v]] = e
            fill[v] += 1
    return vptr, vnets


@numba.njit(cache=True)
def _match(n, vw, ptr, pins, vptr, vnets, order, cap, net_limit):
    """Greedy matching by number of shared nets; returns (cmap, n_coarse)."""
    mate = np.full(n, -1, dtype=np.int64)
    score = np.zeros(n, dtype=np.int64)
    touched = np.empty(n, dtype=np.int64)
    for u in order:
        if mate[u] >= 0:
            continue
        nt = 0
        for a in range(vptr[u], vptr[u + 1]):
            e = vnets[a]
            if ptr[e + 1] - ptr[e] > net_limit:
                continue
            for b in range(ptr[e], ptr[e + 1]):
                v = pins[b]
                if v == u or mate[v] >= 0 or vw[u] + vw[v] > cap:
                    continue
                if score[v] == 0:
                    touched[nt] = v
                    nt += 1
                score[v] += 1
        best = -1
        best_score = 0
        best_w = np.inf
        for t in range(nt):
            v = touched[t]
            s = score[v]
            if s > best_score or (s == best_score and (vw[v] < best_w or (vw[v] == best_w and v < best))):
                best, best_score, best_w = v, s, vw[v]
            score[v] = 0
        if best >= 0:
            mate[u] = best
            mate[best] = u
    cmap = np.full(n, -1, dtype=np.int64)
    nc = 0
    for u in range(n):
        if cmap[u] < 0:
            cmap[u] = nc
            if mate[u] >= 0:
                cmap[mate[u]] = nc
            nc += 1
    return cmap, nc


@numba.njit(cache=True)
def _sort_slice(a, lo, hi):
    if hi - lo > 32:
        a[lo:hi] = np.sort(a[lo:hi])
        return
    for i in range(lo + 1, hi):
        x = a[i]
        j = i - 1
        while j >= lo and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x


@numba.njit(cache=True)
def _contract_nets(ptr, pins, nw, cmap, nc):
    """Map pins through ``cmap``, drop repeated pins and nets left with one pin."""
    m = len(ptr) - 1
    stamp = np.full(nc, -1, dtype=np.int64)
    out_ptr = np.zeros(m + 1, dtype=np.int64)
    out_pins = np.empty(len(pins), dtype=np.int64)
    out_w = np.empty(m, dtype=np.float64)
    k = 0
    q = 0
    for e in range(m):
        start = q
        for b in range(ptr[e], ptr[e + 1]):
            c = cmap[pins[b]]
            if stamp[c] != e:
                stamp[c] = e
                out_pins[q] = c
                q += 1
        if q - start >= 2:
            _sort_slice(out_pins, start, q)
            out_w[k] = nw[e]
            k += 1
            out_ptr[k] = q
        else:
            q = start
    return out_ptr[: k + 1].copy(), out_pins[:q].copy(), out_w[:k].copy()


@numba.njit(cache=True)
def _net_hashes(ptr, pins):
    m = len(ptr) - 1
    out = np.empty(m, dtype=np.uint64)
    for e in range(m):
        h = np.uint64(1469598103934665603)
        for b in range(ptr[e], ptr[e + 1]):
            h = (h ^ np.uint64(pins[b] + 1)) * np.uint64(1099511628211)
        out[e] = h
    return out


@numba.njit(cache=True)
def _merge_identical(ptr, pins, nw, order, hashes):
    """Fold nets with identical (sorted) pin lists into one, summing weights."""
    m = len(ptr) - 1
    rep = np.arange(m)
    prev = -1
    for idx in range(m):
        e = order[idx]
        if prev >= 0 and hashes[e] == hashes[prev]:
            size = ptr[e + 1] - ptr[e]
            same = size == ptr[prev + 1] - ptr[prev]
            if same:
                for t in range(size):
                    if pins[ptr[e] + t] != pins[ptr[prev] + t]:
                        same = False
                        break
            if same:
                rep[e] = prev
                continue
        prev = e
    weight = np.zeros(m, dtype=np.float64)
    for e in range(m):
        weight[rep[e]] += nw[e]
    keep = 0
    total = 0
    for e in range(m):
        if rep[e] == e:
            keep += 1
            total += ptr[e + 1] - ptr[e]
    out_ptr = np.zeros(keep + 1, dtype=np.int64)
    out_pins = np.empty(total, dtype=np.int64)
    out_w = np.empty(keep, dtype=np.float64)
    k = 0
    q = 0
    for e in range(m):
        if rep[e] == e:
            for b in range(ptr[e], ptr[e + 1]):
                out_pins[q] = pins[b]
                q += 1
            out_w[k] = weight[e]
            k += 1
            out_ptr[k] = q
    return out_ptr, out_pins, out_w


def _coarsen_nets(ptr, pins, nw, cmap, nc):
    ptr, pins, nw = _contract_nets(ptr, pins, nw, cmap, nc)
    if len(nw) < 2:
        return ptr, pins, nw
    hashes = _net_hashes(ptr, pins)
    order = np.lexsort((np.diff(ptr), hashes))
    return _merge_identical(ptr, pins, nw, order, hashes)


@numba.njit(cache=True)
def _split_nets(ptr, pins, nw, side, local, which):
    """Nets restricted to the vertices on ``which``; one-pin leftovers are dropped."""
    m = len(ptr) - 1
    out_ptr = np.zeros(m + 1, dtype=np.int64)
    out_pins = np.empty(len(pins), dtype=np.int64)
    out_w = np.empty(m, dtype=np.float64)
    k = 0
    q = 0
    for e in range(m):
        start = q
        for b in range(ptr[e], ptr[e + 1]):
            v = pins[b]
            if side[v] == which:
                out_pins[q] = local[v]
                q += 1
        if q - start >= 2:
            out_w[k] = nw[e]
            k += 1
            out_ptr[k] = q
        else:
            q = start
    return out_ptr[: k + 1].copy(), out_pins[:q].copy(), out_w[:k].copy()


# ---------------------------------------------------------------------------
# two-way cost bookkeeping


@numba.njit(cache=True)
def _pin_counts(ptr, pins, side):
    m = len(ptr) - 1
    cnt = np.zeros((m, 2), dtype=np.int64)
    for e in range(m):
        for b in range(ptr[e], ptr[e + 1]):
            cnt[e, side[pins[b]]] += 1
    return cnt


@numba.njit(cache=True)
def _cut_from_counts(cnt, nw):
    total = 0.0
    for e in range(len(nw)):
        if cnt[e, 0] > 0 and cnt[e, 1] > 0:
            total += nw[e]
    return total


@numba.njit(cache=True)
def _infeasibility(w0, w1, allowed):
    return max(0.0, w0 - allowed[0]) + max(0.0, w1 - allowed[1])


def two_way_cut(ptr, pins, nw, side) -> float:
    return float(_cut_from_counts(_pin_counts(ptr, pins, np.asarray(side, dtype=np.int64)), nw))


# ---------------------------------------------------------------------------
# indexed max-heaps, one per side; ties go to the lower vertex id


@numba.njit(cache=True)
def _before(gain, a, b):
    return gain[a] > gain[b] or (gain[a] == gain[b] and a < b)


@numba.njit(cache=True)
def _sift_up(heap, size, pos, gain, s, i):
    v = heap[s, i]
    while i > 0:
        parent = (i - 1) // 2
        u = heap[s, parent]
        if not _before(gain, v, u):
            break
        heap[s, i] = u
        pos[u] = i
        i = parent
    heap[s, i] = v
    pos[v] = i


@numba.njit(cache=True)
def _sift_down(heap, size, pos, gain, s, i):
    v = heap[s, i]
    n = size[s]
    while True:
        child = 2 * i + 1
        if child >= n:
            break
        if child + 1 < n and _before(gain, heap[s, child + 1], heap[s, child]):
            child += 1
        u = heap[s, child]
        if not _before(gain, u, v):
            break
        heap[s, i] = u
        pos[u] = i
        i = child
    heap[s, i] = v
    pos[v] = i


@numba.njit(cache=True)
def _heap_push(heap, size, pos, gain, s, v):
    heap[s, size[s]] = v
    size[s] += 1
    _sift_up(heap, size, pos, gain, s, size[s] - 1)


@numba.njit(cache=True)
def _heap_remove(heap, size, pos, gain, s, v):
    i = pos[v]
    size[s] -= 1
    last = heap[s, size[s]]
    pos[v] = -1
    if i < size[s]:
        heap[s, i] = last
        pos[last] = i
        _sift_up(heap, size, pos, gain, s, i)
        _sift_down(heap, size, pos, gain, s, pos[last])


@numba.njit(cache=True)
def _heap_fix(heap, size, pos, gain, s, v):
    _sift_up(heap, size, pos, gain, s, pos[v])
    _sift_down(heap, size, pos, gain, s, pos[v])


@numba.njit(cache=True)
def _touch(heap, size, pos, gain, locked, side, u, delta):
    if locked[u]:
        return
    gain[u] += delta
    if pos[u] >= 0:
        _heap_fix(heap, size, pos, gain, side[u], u)
    else:
        _heap_push(heap, size, pos, gain, side[u], u)


# ---------------------------------------------------------------------------
# Fiduccia-Mattheyses


@numba.njit(cache=True)
def _better(mode, inf, cut, best_inf, best_cut, inf_start, tol_w, tol_c):
    if mode == 0:
        if inf < best_inf - tol_w:
            return True
        return inf <= best_inf + tol_w and cut < best_cut - tol_c
    # mode 1: cut first, never worse balance than the starting point
    if inf > max(inf_start, 0.0) + tol_w:
        return False
    if cut < best_cut - tol_c:
        return True
    return cut <= best_cut + tol_c and inf < best_inf - tol_w


@numba.njit(cache=True)
def _fm(vw, ptr, pins, nw, vptr, vnets, side, allowed, max_passes, stall_limit, mode):
    """Two-way FM passes with rollback to the best prefix of each pass.

    ``mode`` 0 ranks states by (imbalance excess, cut); ``mode`` 1 ranks by
    cut and never accepts a state with more imbalance excess than the
    input. Returns the refined side array.
    """
    n = len(vw)
    side = side.copy()
    # tentative moves may overshoot a side by one vertex; only states that
    # rank better than the start are kept
    slack = vw.max() if n else 0.0
    cnt = _pin_counts(ptr, pins, side)
    w = np.zeros(2)
    for v in range(n):
        w[side[v]] += vw[v]
    total_w = w[0] + w[1]
    tol_w = 1e-12 * max(total_w, 1.0)
    tol_c = 1e-12 * max(nw.sum(), 1.0)
    cut = _cut_from_counts(cnt, nw)
    inf_start = _infeasibility(w[0], w[1], allowed)

    gain = np.zeros(n)
    heap = np.empty((2, n), dtype=np.int64)
    size = np.zeros(2, dtype=np.int64)
    pos = np.full(n, -1, dtype=np.int64)
    locked = np.zeros(n, dtype=np.bool_)
    moves = np.empty(n, dtype=np.int64)

    for _ in range(max_passes):
        # gains and the boundary vertices
        size[:] = 0
        pos[:] = -1
        locked[:] = False
        gain[:] = 0.0
        for v in range(n):
            s = side[v]
            boundary = False
            for a in range(vptr[v], vptr[v + 1]):
                e = vnets[a]
                if cnt[e, s] == 1:
                    gain[v] += nw[e]
                if cnt[e, 1 - s] == 0:
                    gain[v] -= nw[e]
                else:
                    boundary = True
            if boundary:
                _heap_push(heap, size, pos, gain, s, v)

        inf = _infeasibility(w[0], w[1], allowed)
        best_cut, best_inf, best_idx = cut, inf, 0
        cur_cut = cut
        n_moves = 0
        since_best = 0
        while True:
            pick = -1
            pick_side = -1
            for s in range(2):
                t = 1 - s
                while size[s] > 0:
                    v = heap[s, 0]
                    new_t = w[t] + vw[v]
                    new_inf = _infeasibility(w[0] - vw[v], w[1] + vw[v], allowed) if s == 0 else \
                        _infeasibility(w[0] + vw[v], w[1] - vw[v], allowed)
                    if new_t <= allowed[t] + slack + tol_w or new_inf < inf - tol_w:
                        break
                    # cannot move now; keep it out of this pass
                    _heap_remove(heap, size, pos, gain, s, v)
                    locked[v] = True
                if size[s] > 0:
                    v = heap[s, 0]
                    if pick < 0 or gain[v] > gain[pick] or (
                        gain[v] == gain[pick] and w[s] / allowed[s] > w[pick_side] / allowed[pick_side]
                    ):
                        pick, pick_side = v, s
            if pick < 0:
                break
            v, s = pick, pick_side
            t = 1 - s
            g = gain[v]
            _heap_remove(heap, size, pos, gain, s, v)
            locked[v] = True
            for a in range(vptr[v], vptr[v + 1]):
                e = vnets[a]
                we = nw[e]
                if cnt[e, t] == 0:
                    for b in range(ptr[e], ptr[e + 1]):
                        u = pins[b]
                        if u != v:
                            _touch(heap, size, pos, gain, locked, side, u, we)
                elif cnt[e, t] == 1:
                    for b in range(ptr[e], ptr[e + 1]):
                        u = pins[b]
                        if side[u] == t:
                            _touch(heap, size, pos, gain, locked, side, u, -we)
                            break
                cnt[e, s] -= 1
                cnt[e, t] += 1
                if cnt[e, s] == 0:
                    for b in range(ptr[e], ptr[e + 1]):
                        u = pins[b]
                        if u != v:
                            _touch(heap, size, pos, gain, locked, side, u, -we)
                elif cnt[e, s] == 1:
                    for b in range(ptr[e], ptr[e + 1]):
                        u = pins[b]
                        if u != v and side[u] == s:
                            _touch(heap, size, pos, gain, locked, side, u, we)
                            break
            side[v] = t
            w[s] -= vw[v]
            w[t] += vw[v]
            cur_cut -= g
            moves[n_moves] = v
            n_moves += 1
            inf = _infeasibility(w[0], w[1], allowed)
            if _better(mode, inf, cur_cut, best_inf, best_cut, inf_start, tol_w, tol_c):
                best_cut, best_inf, best_idx = cur_cut, inf, n_moves
                since_best = 0
            else:
                since_best += 1
                if since_best > stall_limit:
                    break
        # roll back past the best prefix
        for idx in range(n_moves - 1, best_idx - 1, -1):
            v = moves[idx]
            s = side[v]
            t = 1 - s
            for a in range(vptr[v], vptr[v + 1]):
                e = vnets[a]
                cnt[e, s] -= 1
                cnt[e, t] += 1
            side[v] = t
            w[s] -= vw[v]
            w[t] += vw[v]
        cut = _cut_from_counts(cnt, nw)
        if best_idx == 0:
            break
    return side


# ---------------------------------------------------------------------------
# initial splits


@numba.njit(cache=True)
def _exhaustive(vw, ptr, pins, nw, vptr, vnets, target0, allowed):
    """Best of all 2^n splits by (imbalance excess, cut, distance to target)."""
    n = len(vw)
    m = len(nw)
    sizes = np.empty(m, dtype=np.int64)
    for e in range(m):
        sizes[e] = ptr[e + 1] - ptr[e]
    ones = np.zeros(m, dtype=np.int64)
    total = vw.sum()
    tol = 1e-12 * max(total, 1.0)
    tol_c = 1e-12 * max(nw.sum(), 1.0)
    w1 = 0.0
    cut = 0.0
    best_code = 0
    best_inf = _infeasibility(total, 0.0, allowed)
    best_cut = 0.0
    best_dev = abs(total - target0)
    gray = 0
    for i in range(1, 1 << n):
        v = 0
        while not (i >> v) & 1:
            v += 1
        gray ^= 1 << v
        into_one = (gray >> v) & 1
        w1 += vw[v] if into_one else -vw[v]
        for a in range(vptr[v], vptr[v + 1]):
            e = vnets[a]
            was_cut = 0 < ones[e] < sizes[e]
            ones[e] += 1 if into_one else -1
            now_cut = 0 < ones[e] < sizes[e]
            if now_cut and not was_cut:
                cut += nw[e]
            elif was_cut and not now_cut:
                cut -= nw[e]
        w0 = total - w1
        inf = _infeasibility(w0, w1, allowed)
        dev = abs(w0 - target0)
        better = False
        if inf < best_inf - tol:
            better = True
        elif inf <= best_inf + tol:
            if cut < best_cut - tol_c:
                better = True
            elif cut <= best_cut + tol_c and dev < best_dev - tol:
                better = True
        if better:
            best_code, best_inf, best_cut, best_dev = gray, inf, cut, dev
    side = np.zeros(n, dtype=np.int64)
    for v in range(n):
        side[v] = (best_code >> v) & 1
    return side


@numba.njit(cache=True)
def _grow(vw, ptr, pins, vptr, vnets, seed, target0):
    """Breadth-first region growth from ``seed`` until side 0 reaches its target."""
    n = len(vw)
    side = np.ones(n, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    queue[tail] = seed
    tail += 1
    seen[seed] = True
    w0 = 0.0
    next_unseen = 0
    while w0 < target0:
        if head == tail:
            while next_unseen < n and seen[next_unseen]:
                next_unseen += 1
            if next_unseen == n:
                break
            queue[tail] = next_unseen
            tail += 1
            seen[next_unseen] = True
        v = queue[head]
        head += 1
        if abs(w0 + vw[v] - target0) <= abs(w0 - target0):
            side[v] = 0
            w0 += vw[v]
            for a in range(vptr[v], vptr[v + 1]):
                e = vnets[a]
                for b in range(ptr[e], ptr[e + 1]):
                    u = pins[b]
                    if not seen[u]:
                        seen[u] = True
                        queue[tail] = u
                        tail += 1
        elif w0 > 0.0:
            break
    return side


def _rank(side, vw, ptr, pins, nw, allowed):
    w1 = float(vw[side == 1].sum())
    w0 = float(vw.sum()) - w1
    return (round(float(_infeasibility(w0, w1, allowed)), 12), round(two_way_cut(ptr, pins, nw, side), 12))


# ---------------------------------------------------------------------------
# one bisection


def _stall_limit(n: int) -> int:
    return max(50, n // 100)


def _bisect(vw, ptr, pins, nw, frac0, delta, params: PartitionerParams, rng) -> np.ndarray:
    """Two-way split giving side 0 about ``frac0`` of the weight."""
    total = float(vw.sum())
    targets = np.array([total * frac0, total * (1.0 - frac0)])
    slack = float(vw.max()) / 2.0 if len(vw) else 0.0
    allowed = np.maximum((1.0 + delta) * targets, targets + slack)
    cap = total / max(params.coarsen_stop / 2.0, 1.0)

    hierarchy = []
    levels = [(vw, ptr, pins, nw)]
    while len(levels[-1][0]) > params.coarsen_stop:
        cvw, cptr, cpins, cnw = levels[-1]
        n = len(cvw)
        vptr, vnets = _incidence(n, cptr, cpins)
        cmap, nc = _match(n, cvw, cptr, cpins, vptr, vnets, rng.permutation(n), cap, MATCH_NET_LIMIT)
        if nc > STALL_RATIO * n:
            break
        coarse_w = np.bincount(cmap, weights=cvw, minlength=nc)
        hierarchy.append(cmap)
        levels.append((coarse_w, *_coarsen_nets(cptr, cpins, cnw, cmap, nc)))

    cvw, cptr, cpins, cnw = levels[-1]
    n = len(cvw)
    vptr, vnets = _incidence(n, cptr, cpins)
    if n <= params.exhaustive_limit:
        side = _exhaustive(cvw, cptr, cpins, cnw, vptr, vnets, targets[0], allowed)
    else:
        best = None
        seeds = rng.choice(n, size=min(GROW_TRIALS, n), replace=False)
        for seed in seeds:
            trial = _grow(cvw, cptr, cpins, vptr, vnets, int(seed), targets[0])
            trial = _fm(cvw, cptr, cpins, cnw, vptr, vnets, trial, allowed,
                        max(params.refine_passes, 1), _stall_limit(n), 0)
            rank = _rank(trial, cvw, cptr, cpins, cnw, allowed)
            if best is None or rank < best[0]:
                best = (rank, trial)
        side = best[1]

    for cmap, (fvw, fptr, fpins, fnw) in zip(reversed(hierarchy), reversed(levels[:-1])):
        side = side[cmap]
        if params.refine_passes:
            fvptr, fvnets = _incidence(len(fvw), fptr, fpins)
            side = _fm(fvw, fptr, fpins, fnw, fvptr, fvnets, side, allowed,
                       params.refine_passes, _stall_limit(len(fvw)), 0)
    return np.asarray(side, dtype=np.int64)


# ---------------------------------------------------------------------------
# public API


def _nets_of(hg, mode: str):
    if mode not in MODES:
        raise InvalidArgumentError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "graph":
        if not hg.is_graph:
            raise InvalidArgumentError("graph mode needs a hypergraph with a pairwise edge view")
        pairs = np.asarray(hg.pairs, dtype=np.int64)
        ptr = np.arange(0, 2 * len(pairs) + 1, 2, dtype=np.int64)
        return ptr, pairs.ravel().copy(), np.asarray(hg.pair_weights, dtype=np.float64).copy()
    ptr = np.asarray(hg.edge_ptr, dtype=np.int64)
    pins = np.asarray(hg.pins, dtype=np.int64)
    nw = np.asarray(hg.edge_weights, dtype=np.float64)
    keep = np.diff(ptr) >= 2
    if keep.all():
        return ptr.copy(), pins.copy(), nw.copy()
    sizes = np.diff(ptr)[keep]
    starts = ptr[:-1][keep]
    idx = np.concatenate([np.arange(s, s + k) for s, k in zip(starts, sizes)]) if len(sizes) else np.zeros(0, np.int64)
    new_ptr = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    return new_ptr, pins[idx].astype(np.int64), nw[keep].copy()


def level_tolerance(delta: float, n: int) -> float:
    """Per-bisection tolerance so that ``ceil(log2 n)`` levels compound to ``delta``."""
    levels = max(1, math.ceil(math.log2(n))) if n > 1 else 1
    return (1.0 + delta) ** (1.0 / levels) - 1.0


def multilevel_bisection(hg, n: int, params: PartitionerParams | None = None,
                         mode: str = "hypergraph") -> PartitionAssignment:
    """Recursive multilevel bisection of ``hg`` into ``n`` parts.

    Args:
        hg: Graph or hypergraph; graph mode needs the pairwise view.
        n: Number of parts, at most the number of vertices.
        params: Tolerance, coarsening stop size, exhaustive-split limit,
            refinement pass limit and seed are taken from here.
        mode: ``"graph"`` (edge cut) or ``"hypergraph"`` (connectivity-1).

    Raises:
        InvalidArgumentError: Bad ``n`` or ``mode``.
        DegenerateSplitError: A subproblem ends up with fewer vertices than
            the parts it has to provide.
    """
    check_n_parts(n)
    params = params or PartitionerParams(method=mode)
    ptr, pins, nw = _nets_of(hg, mode)
    n_vertices = hg.n_vertices
    if n > n_vertices:
        raise InvalidArgumentError(f"cannot split {n_vertices} vertices into {n} parts")
    vw_all = np.asarray(hg.vertex_weights, dtype=np.float64)
    part_of = np.zeros(n_vertices, dtype=np.int64)
    delta = level_tolerance(params.imbalance_tol, n)
    stack = [(np.arange(n_vertices, dtype=np.int64), ptr, pins, nw, 0, n)]
    while stack:
        ids, sptr, spins, snw, first, parts = stack.pop()
        if parts == 1:
            part_of[ids] = first
            continue
        if len(ids) < parts:
            raise DegenerateSplitError(f"{len(ids)} vertices left for {parts} parts at part {first}")
        n_left, n_right = split_counts(parts)
        rng = np.random.default_rng([params.seed, first, parts])
        side = _bisect(vw_all[ids], sptr, spins, snw, n_left / parts, delta, params, rng)
        local = np.empty(len(ids), dtype=np.int64)
        for which, k, offset in ((1, n_right, first + n_left), (0, n_left, first)):
            members = np.flatnonzero(side == which)
            local[members] = np.arange(len(members))
            sub = _split_nets(sptr, spins, snw, side, local, which)
            stack.append((ids[members], *sub, offset, k))
    return PartitionAssignment(n, part_of)


def fm_refine(hg, assignment: PartitionAssignment, params: PartitionerParams | None = None,
              mode: str = "hypergraph") -> PartitionAssignment:
    """FM refinement of a two-part assignment.

    The result never has a larger cut than the input, and its imbalance
    never exceeds the larger of the input imbalance and the tolerance.
    """
    params = params or PartitionerParams(method=mode)
    if assignment.n_parts != 2:
        raise InvalidArgumentError("fm_refine works on two-part assignments")
    if len(assignment) != hg.n_vertices:
        raise InvalidArgumentError("assignment does not match the hypergraph")
    ptr, pins, nw = _nets_of(hg, mode)
    vw = np.asarray(hg.vertex_weights, dtype=np.float64)
    allowed = np.full(2, (1.0 + params.imbalance_tol) * vw.sum() / 2.0)
    vptr, vnets = _incidence(len(vw), ptr, pins)
    side = np.asarray(assignment.part_of, dtype=np.int64)
    refined = _fm(vw, ptr, pins, nw, vptr, vnets, side, allowed,
                  params.refine_passes, _stall_limit(len(vw)), 1)
    return PartitionAssignment(2, refined)
