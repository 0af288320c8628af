"""Communication neighborhoods on AMR meshes.

A leaf ``u`` at level ``l`` *reaches* a leaf ``v`` when ``v`` overlaps the
box of ``u`` grown by two level-``l`` cell widths on every side (clipped at
the domain boundary). On a uniform grid this is the 5x5x5 stencil with
diagonals. Reach is not symmetric across refinement levels, so two rules
combine it into a neighbor relation:

``"coarse"``
    ``u`` and ``v`` are neighbors if either reaches the other. Equivalent to
    applying the stencil at the coarser cell's resolution. Default.
``"fine"``
    both must reach each other (stencil at the finer cell's resolution).
"""

from __future__ import annotations

import numpy as np

from amrpart.errors import InvalidArgumentError

STENCIL_RADIUS = 2
NEIGHBOR_RULES = ("coarse", "fine")

_OFFSETS = np.array(
    [
        (a, b, c)
        for a in range(-STENCIL_RADIUS, STENCIL_RADIUS + 1)
        for b in range(-STENCIL_RADIUS, STENCIL_RADIUS + 1)
        for c in range(-STENCIL_RADIUS, STENCIL_RADIUS + 1)
        if (a, b, c) != (0, 0, 0)
    ],
    dtype=np.int64,
)


def _keys(ijk: np.ndarray, dims: np.ndarray) -> np.ndarray:
    return (ijk[:, 0] * dims[1] + ijk[:, 1]) * dims[2] + ijk[:, 2]


def reach_pairs(mesh) -> tuple[np.ndarray, np.ndarray]:
    """All directed pairs ``(u, v)`` with ``u`` reaching ``v``, deduplicated."""
    level = mesh.level.astype(np.int64)
    n = len(level)
    max_level = mesh.max_level
    by_level = [np.flatnonzero(level == lv) for lv in range(max_level + 1)]

    # leaves of each level, sorted by key
    leaf_keys, leaf_idx = [], []
    for lv in range(max_level + 1):
        idx = by_level[lv]
        keys = _keys(mesh.ijk[idx], mesh.level_dims(lv))
        order = np.argsort(keys, kind="stable")
        leaf_keys.append(keys[order])
        leaf_idx.append(idx[order])

    chunks_u, chunks_v = [], []
    for lv in range(max_level + 1):
        src = by_level[lv]
        if len(src) == 0:
            continue
        dims = mesh.level_dims(lv)
        # finer leaves grouped by their ancestor position at this level
        finer = []
        for fl in range(lv + 1, max_level + 1):
            idx = by_level[fl]
            if len(idx) == 0:
                continue
            anc = _keys(mesh.ijk[idx] >> (fl - lv), dims)
            order = np.argsort(anc, kind="stable")
            finer.append((anc[order], idx[order]))
        base = mesh.ijk[src]
        for off in _OFFSETS:
            pos = base + off
            inside = np.all((pos >= 0) & (pos < dims), axis=1)
            u = src[inside]
            pos = pos[inside]
            if len(u) == 0:
                continue
            # a coarser-or-equal leaf covering the position
            for cl in range(lv + 1):
                if len(leaf_keys[cl]) == 0:
                    continue
                k = _keys(pos >> (lv - cl), mesh.level_dims(cl))
                at = np.searchsorted(leaf_keys[cl], k)
                at_c = np.minimum(at, len(leaf_keys[cl]) - 1)
                hit = leaf_keys[cl][at_c] == k
                chunks_u.append(u[hit])
                chunks_v.append(leaf_idx[cl][at_c[hit]])
            # or the finer leaves refining it
            k = _keys(pos, dims)
            for anc, idx in finer:
                lo = np.searchsorted(anc, k, side="left")
                hi = np.searchsorted(anc, k, side="right")
                cnt = hi - lo
                if not cnt.any():
                    continue
                rep_u = np.repeat(u, cnt)
                starts = np.repeat(lo - np.cumsum(cnt) + cnt, cnt)
                chunks_u.append(rep_u)
                chunks_v.append(idx[np.arange(len(rep_u)) + starts])
    if not chunks_u:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    pair = np.concatenate(chunks_u) * n + np.concatenate(chunks_v)
    pair = np.unique(pair)
    return pair // n, pair % n


def neighbor_csr(mesh, rule: str = "coarse") -> tuple[np.ndarray, np.ndarray]:
    """Symmetric neighbor lists as CSR arrays ``(indptr, indices)``.

    Row ``u`` holds the neighbor indices of cell ``u`` in ascending order.
    """
    if rule not in NEIGHBOR_RULES:
        raise InvalidArgumentError(f"unknown neighbor rule {rule!r}; expected one of {NEIGHBOR_RULES}")
    n = len(mesh)
    u, v = reach_pairs(mesh)
    forward = u * n + v
    backward = v * n + u
    if rule == "coarse":
        pair = np.union1d(forward, backward)
    else:
        pair = np.intersect1d(forward, np.sort(backward), assume_unique=True)
    del forward, backward, u, v
    rows = pair // n
    cols = pair % n
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return indptr, cols


def neighbors(mesh, cell, rule: str = "coarse"):
    """Neighbor leaves of ``cell`` as :class:`~amrpart.grid.mesh.Cell` objects."""
    index = mesh.locate(cell)
    return [mesh.cell(int(i)) for i in mesh.neighbor_indices(index, rule)]
