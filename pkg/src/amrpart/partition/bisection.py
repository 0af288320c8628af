"""Recursive coordinate and inertial bisection."""

from __future__ import annotations

from typing import Callable

import numpy as np

from amrpart.errors import DegenerateSplitError
from amrpart.partition.common import (
    PartitionAssignment,
    PartitionerParams,
    check_n_parts,
    split_counts,
)

# Relative tolerance for treating inertia eigenvalues as equal.
EIGEN_TIE_RTOL = 1e-9

# (cells, n_parts) -> (sort key per cell, allowed cut positions or None)
Direction = Callable[[np.ndarray, int], tuple[np.ndarray, np.ndarray | None]]


def best_prefix(weights: np.ndarray, target: float, allowed: np.ndarray | None = None) -> int:
    """Number of leading items whose weight sum is closest to ``target``.

    Only cut positions in ``1..len-1`` are considered (both sides keep at
    least one item); ``allowed`` restricts them further. Ties go to the
    smaller prefix.
    """
    prefix = np.cumsum(weights)[:-1]
    candidates = np.arange(1, len(weights))
    if allowed is not None and allowed.any():
        candidates = candidates[allowed]
        prefix = prefix[allowed]
    return int(candidates[np.argmin(np.abs(prefix - target))])


def _recursive_bisection(mesh, n: int, direction: Direction, trace=None) -> PartitionAssignment:
    check_n_parts(n)
    part_of = np.zeros(len(mesh), dtype=np.int64)
    weights = np.asarray(mesh.weight)
    ids = np.asarray(mesh.ids)
    stack = [(np.arange(len(mesh)), 0, n)]
    while stack:
        cells, first_part, parts = stack.pop()
        if parts == 1:
            part_of[cells] = first_part
            continue
        if len(cells) < 2:
            raise DegenerateSplitError(
                f"{len(cells)} cell(s) left for {parts} parts starting at part {first_part}"
            )
        n_left, n_right = split_counts(parts)
        key, allowed = direction(cells, parts)
        order = np.lexsort((ids[cells], key))
        cells = cells[order]
        w = weights[cells]
        target = w.sum() * n_left / parts
        cut = best_prefix(w, target, None if allowed is None else allowed[order][1:] != allowed[order][:-1])
        if trace is not None:
            trace.append({"cells": len(cells), "target": target, "left": float(w[:cut].sum()),
                          "max_weight": float(w.max())})
        stack.append((cells[cut:], first_part + n_left, n_right))
        stack.append((cells[:cut], first_part, n_left))
    return PartitionAssignment(n, part_of)


def rcb(mesh, n: int, params: PartitionerParams | None = None, trace=None) -> PartitionAssignment:
    """Recursive coordinate bisection.

    Each step cuts along the longest axis of the subdomain's bounding box
    (ties: x, then y, then z), splitting the weight in proportion to the
    parts assigned to either side. With ``params.rectilinear`` the cut only
    falls between distinct cell-center planes.
    """
    params = params or PartitionerParams(method="rcb")
    centers = mesh.centers()
    lo, size = mesh.fine_bounds()
    hi = lo + size[:, None]

    def direction(cells, parts):
        extent = hi[cells].max(axis=0) - lo[cells].min(axis=0)
        axis = int(np.argmax(extent))
        key = centers[cells, axis]
        # a cut is allowed where the plane value changes between neighbors
        return key, (key if params.rectilinear else None)

    return _recursive_bisection(mesh, n, direction, trace)


def inertia_tensor(points: np.ndarray, weights: np.ndarray) -> np.ndarray:
    com = np.average(points, axis=0, weights=weights) if weights.sum() > 0 else points.mean(axis=0)
    r = points - com
    r2 = np.einsum("ij,ij->i", r, r)
    return np.eye(3) * np.dot(weights, r2) - np.einsum("i,ij,ik->jk", weights, r, r)


def min_inertia_axis(tensor: np.ndarray) -> np.ndarray:
    """Unit eigenvector of the smallest eigenvalue.

    When that eigenvalue is repeated, the direction within its eigenspace
    closest to x (then y, then z) is returned.
    """
    values, vectors = np.linalg.eigh(tensor)
    scale = max(abs(values).max(), 1e-300)
    tied = np.abs(values - values[0]) <= EIGEN_TIE_RTOL * scale
    basis = vectors[:, tied]
    for axis in range(3):
        e = np.zeros(3)
        e[axis] = 1.0
        proj = basis @ (basis.T @ e)
        norm = np.linalg.norm(proj)
        if norm > 1e-6:
            direction = proj / norm
            break
    # snap to axis-aligned when numerically so
    direction[np.abs(direction) < 1e-12] = 0.0
    nz = np.flatnonzero(direction)
    if direction[nz[0]] < 0:
        direction = -direction
    return direction


def rib(mesh, n: int, params: PartitionerParams | None = None, trace=None) -> PartitionAssignment:
    """Recursive inertial bisection: cut perpendicular to the minimum-inertia axis."""
    centers = mesh.centers()
    weights = np.asarray(mesh.weight)

    def direction(cells, parts):
        axis = min_inertia_axis(inertia_tensor(centers[cells], weights[cells]))
        return centers[cells] @ axis, None

    return _recursive_bisection(mesh, n, direction, trace)
