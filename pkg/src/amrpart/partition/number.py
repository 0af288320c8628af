"""Geometry-free multiway number partitioning (greedy and LPT)."""

from __future__ import annotations

import heapq

import numpy as np

from amrpart.errors import InvalidArgumentError
from amrpart.partition.common import PartitionAssignment, check_n_parts


def number_partition(weights, n: int, sorted_first: bool = False) -> PartitionAssignment:
    """Place each item on the currently lightest part.

    With ``sorted_first`` items are taken heaviest first (LPT), which
    improves the worst-case ratio to the optimum from 2 to 4/3. Ties go to
    the lowest part index; equal weights keep their input order.
    """
    check_n_parts(n)
    weights = np.asarray(weights, dtype=np.float64).ravel()
    if len(weights) == 0:
        raise InvalidArgumentError("at least one weight is required")
    if np.any(weights < 0):
        raise InvalidArgumentError("weights must be non-negative")
    order = np.argsort(-weights, kind="stable") if sorted_first else np.arange(len(weights))
    heap = [(0.0, p) for p in range(n)]
    part_of = np.zeros(len(weights), dtype=np.int64)
    for item in order:
        load, p = heapq.heappop(heap)
        part_of[item] = p
        heapq.heappush(heap, (load + weights[item], p))
    return PartitionAssignment(n, part_of)


def greedy(weights, n: int) -> PartitionAssignment:
    return number_partition(weights, n, sorted_first=False)


def lpt(weights, n: int) -> PartitionAssignment:
    return number_partition(weights, n, sorted_first=True)
