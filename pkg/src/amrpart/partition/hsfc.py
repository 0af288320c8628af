"""Space-filling-curve partitioning: greedy binning along the curve plus refinement."""

from __future__ import annotations

import logging
import math

import numpy as np

from amrpart.partition.common import PartitionAssignment, PartitionerParams, check_n_parts
from amrpart.sfc.catalogue import curve_table
from amrpart.sfc.codec import encode_many, morton_encode_many

log = logging.getLogger(__name__)


def required_order(mesh) -> int:
    """Smallest curve order whose lattice resolves every finest-level cell."""
    extent = max(mesh.base_dims) << mesh.max_level
    return max(1, math.ceil(math.log2(extent)))


def cell_keys(mesh, params: PartitionerParams) -> np.ndarray:
    """Curve key of every cell center on the order-resolution lattice."""
    order = params.order or required_order(mesh)
    lo, size = mesh.fine_bounds()
    finest_bits = required_order(mesh)
    # finest-lattice point inside each cell, rescaled to the curve lattice
    point = lo + (size // 2)[:, None]
    shift = finest_bits - order
    point = point >> shift if shift >= 0 else point << -shift
    if params.curve == "morton":
        keys = morton_encode_many(point, order)
    else:
        keys = encode_many(curve_table(params.curve), point, order, params.axes)
    if len(np.unique(keys)) < len(keys):
        log.warning("curve order %d maps several cells to one key; ties broken by cell id", order)
    return keys


def greedy_bins(weights: np.ndarray, n: int) -> np.ndarray:
    """Bin index of each item, in curve order.

    An item joins the bin whose range ``[b * W / n, (b + 1) * W / n)``
    contains the weight accumulated before it. So the item that pushes a
    bin past its threshold stays in that bin, while a bin that is filled
    exactly is closed. The last bin takes everything left.
    """
    weights = np.asarray(weights, dtype=np.float64)
    cumulative = np.cumsum(weights)
    total = cumulative[-1] if len(cumulative) else 0.0
    thresholds = np.arange(1, n) * (total / n)
    before = np.concatenate([[0.0], cumulative[:-1]])
    return np.searchsorted(thresholds, before, side="right").astype(np.int64)


def refine_bins(weights: np.ndarray, bins: np.ndarray, n: int, passes: int) -> np.ndarray:
    """Move single boundary items between adjacent bins.

    One sweep visits every boundary left to right and moves at most one
    item across it, and only when that lowers the heavier of the two bins.
    Sweeps repeat until nothing moves or ``passes`` is reached. Bins stay
    contiguous and nonempty.
    """
    bins = bins.copy()
    load = np.bincount(bins, weights=weights, minlength=n)
    count = np.bincount(bins, minlength=n)
    # first index of each bin (bins are contiguous and ordered)
    start = np.concatenate([[0], np.cumsum(count)])
    for _ in range(passes):
        moved = False
        for b in range(n - 1):
            if count[b] == 0 or count[b + 1] == 0:
                continue
            heavier = max(load[b], load[b + 1])
            last = start[b + 1] - 1
            first = start[b + 1]
            if load[b] > load[b + 1] and count[b] > 1:
                w = weights[last]
                if max(load[b] - w, load[b + 1] + w) < heavier:
                    bins[last] = b + 1
                    load[b] -= w
                    load[b + 1] += w
                    count[b] -= 1
                    count[b + 1] += 1
                    start[b + 1] -= 1
                    moved = True
            elif load[b + 1] > load[b] and count[b + 1] > 1:
                w = weights[first]
                if max(load[b] + w, load[b + 1] - w) < heavier:
                    bins[first] = b
                    load[b] += w
                    load[b + 1] -= w
                    count[b] += 1
                    count[b + 1] -= 1
                    start[b + 1] += 1
                    moved = True
        if not moved:
            break
    return bins


def partition_sequence(weights, n: int, passes: int) -> np.ndarray:
    """Greedy binning then refinement for items already in curve order."""
    check_n_parts(n)
    weights = np.asarray(weights, dtype=np.float64)
    return refine_bins(weights, greedy_bins(weights, n), n, passes)


def hsfc(mesh, n: int, params: PartitionerParams | None = None) -> PartitionAssignment:
    """Partition cells into contiguous intervals of a space-filling curve."""
    check_n_parts(n)
    params = params or PartitionerParams(method="hsfc")
    keys = cell_keys(mesh, params)
    order = np.lexsort((np.asarray(mesh.ids), keys))
    bins = partition_sequence(np.asarray(mesh.weight)[order], n, params.refine_passes)
    part_of = np.empty(len(mesh), dtype=np.int64)
    part_of[order] = bins
    return PartitionAssignment(n, part_of)
