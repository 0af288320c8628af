"""Slow, obviously-correct reference implementations used as test oracles."""

from __future__ import annotations

import itertools

import numpy as np


def fine_boxes(mesh):
    """Half-open boxes ``[lo, hi)`` of every leaf on the finest lattice."""
    shift = mesh.max_level - np.asarray(mesh.level, dtype=np.int64)
    size = np.left_shift(1, shift)
    lo = np.asarray(mesh.ijk) * size[:, None]
    return lo, lo + size[:, None], size


def brute_neighbors(mesh, rule="coarse"):
    """Neighbor sets by direct box intersection over all pairs of leaves."""
    lo, hi, size = fine_boxes(mesh)
    n = len(mesh)
    grown_lo = lo - 2 * size[:, None]
    grown_hi = hi + 2 * size[:, None]
    reach = np.zeros((n, n), dtype=bool)
    for u in range(n):
        overlap = np.all((lo < grown_hi[u]) & (hi > grown_lo[u]), axis=1)
        overlap[u] = False
        reach[u] = overlap
    sym = reach | reach.T if rule == "coarse" else reach & reach.T
    return [set(np.flatnonzero(sym[u]).tolist()) for u in range(n)]


def enumerate_leaves(base_dims, region, target_level):
    """Recursive octree descent: leaf count per level for a refine call."""
    counts = [0] * (target_level + 1)

    def visit(level, ijk):
        center = (np.asarray(ijk) + 0.5) / (1 << level)
        if level < target_level and region(center[None, :])[0]:
            for off in itertools.product((0, 1), repeat=3):
                visit(level + 1, tuple(2 * c + o for c, o in zip(ijk, off)))
        else:
            counts[level] += 1

    for ijk in itertools.product(*(range(d) for d in base_dims)):
        visit(0, ijk)
    return counts


def best_split(weights, n):
    """Smallest achievable maximum part weight over all assignments."""
    weights = list(weights)
    best = float("inf")
    for labels in itertools.product(range(n), repeat=len(weights)):
        loads = [0.0] * n
        for w, p in zip(weights, labels):
            loads[p] += w
        best = min(best, max(loads))
    return best


def graph_cut(edges, weights, part):
    return float(sum(w for (u, v), w in zip(edges, weights) if part[u] != part[v]))


def connectivity_recount(hyperedges, part):
    return float(sum(w * (len({part[v] for v in pins}) - 1) for pins, w in hyperedges))


def balance_limit(vertex_weights, delta):
    """Largest side weight a bisection may have: the tolerance or one vertex of slack."""
    vw = np.asarray(vertex_weights, dtype=float)
    half = vw.sum() / 2.0
    return max((1.0 + delta) * half, half + vw.max() / 2.0)


def balanced_min_cut(n_vertices, edges, weights, vertex_weights, delta):
    """Exhaustive optimum over all 2-way splits meeting the balance constraint."""
    vw = np.asarray(vertex_weights, dtype=float)
    limit = balance_limit(vw, delta)
    best = float("inf")
    for mask in range(1 << n_vertices):
        part = [(mask >> v) & 1 for v in range(n_vertices)]
        loads = np.bincount(part, weights=vw, minlength=2)
        if loads.max() > limit + 1e-12:
            continue
        best = min(best, graph_cut(edges, weights, part))
    return best


def dilation_brute(table, order):
    """WL_1, WL_2, WL_inf over all key pairs, entry points from the scalar codec."""
    from amrpart.sfc import CurveKey, sfc_decode

    depth = 21 - order
    pts = np.array(
        [sfc_decode(table, CurveKey(i << (3 * depth), 21)) for i in range(8**order)], dtype=float
    )
    pts = (pts + 0.5) / (1 << depth)
    best = np.zeros(3)
    for i in range(len(pts) - 1):
        d = np.abs(pts[i + 1:] - pts[i])
        lag = np.arange(1, len(pts) - i)
        best[0] = max(best[0], (d.sum(axis=1) ** 3 / lag).max())
        best[1] = max(best[1], (np.sqrt((d * d).sum(axis=1)) ** 3 / lag).max())
        best[2] = max(best[2], (d.max(axis=1) ** 3 / lag).max())
    return best


def optimal_makespan(weights, n):
    """Exact minimum of the largest part weight, by depth-first branch and bound."""
    items = sorted((float(w) for w in weights), reverse=True)
    total = sum(items)
    lower = max(items[0] if items else 0.0, total / n)
    # the LPT value is the first incumbent
    loads = [0.0] * n
    for w in items:
        loads[loads.index(min(loads))] += w
    best = [max(loads)]
    loads = [0.0] * n

    def place(i):
        if best[0] <= lower + 1e-12:
            return
        if i == len(items):
            best[0] = min(best[0], max(loads))
            return
        seen = set()
        for p in range(n):
            if loads[p] in seen:
                continue
            seen.add(loads[p])
            if loads[p] + items[i] >= best[0] - 1e-12:
                continue
            loads[p] += items[i]
            place(i + 1)
            loads[p] -= items[i]

    place(0)
    return best[0]
