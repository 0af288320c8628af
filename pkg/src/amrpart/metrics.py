"""Partition quality: imbalance, cuts and ghost cells."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numba
import numpy as np

from amrpart.errors import InvalidArgumentError, UndefinedMetricError


def _parts(assignment) -> np.ndarray:
    return np.asarray(assignment.part_of, dtype=np.int64)


def part_weights(assignment, weights) -> np.ndarray:
    """Weight per part, summed in cell order so the result is reproducible."""
    return np.bincount(_parts(assignment), weights=np.asarray(weights, dtype=np.float64),
                       minlength=assignment.n_parts)


def epsilon(assignment, weights) -> float:
    """Imbalance ``max_i w_i / (W / n) - 1``; empty parts still count in ``n``.

    Raises:
        UndefinedMetricError: When the total weight is zero.
    """
    loads = part_weights(assignment, weights)
    total = loads.sum()
    if not total > 0:
        raise UndefinedMetricError("imbalance is undefined for zero total weight")
    return float(loads.max() / (total / assignment.n_parts) - 1.0)


def edge_cut(graph, assignment) -> float:
    """Total weight of edges whose endpoints lie in different parts."""
    if not graph.is_graph:
        raise InvalidArgumentError("edge_cut needs a graph with a pairwise edge view")
    part = _parts(assignment)
    pairs = np.asarray(graph.pairs)
    if len(pairs) == 0:
        return 0.0
    crossing = part[pairs[:, 0]] != part[pairs[:, 1]]
    return float(np.asarray(graph.pair_weights)[crossing].sum())


@numba.njit(cache=True)
def _lambdas(edge_ptr, pins, part, n_parts):
    m = len(edge_ptr) - 1
    out = np.zeros(m, dtype=np.int64)
    stamp = np.full(n_parts, -1, dtype=np.int64)
    for e in range(m):
        count = 0
        for b in range(edge_ptr[e], edge_ptr[e + 1]):
            p = part[pins[b]]
            if stamp[p] != e:
                stamp[p] = e
                count += 1
        out[e] = count
    return out


def hyperedge_lambdas(hypergraph, assignment) -> np.ndarray:
    """Number of distinct parts among each hyperedge's pins."""
    return _lambdas(np.asarray(hypergraph.edge_ptr), np.asarray(hypergraph.pins),
                    _parts(assignment), assignment.n_parts)


def connectivity_cut(hypergraph, assignment) -> float:
    """``sum_e w_e * (lambda_e - 1)``."""
    lam = hyperedge_lambdas(hypergraph, assignment)
    return float(np.dot(np.asarray(hypergraph.edge_weights), lam - 1))


def cut_net(hypergraph, assignment) -> float:
    """Total weight of hyperedges that span more than one part."""
    lam = hyperedge_lambdas(hypergraph, assignment)
    return float(np.asarray(hypergraph.edge_weights)[lam > 1].sum())


def ghost_stats(mesh, assignment, rule: str = "coarse") -> tuple[np.ndarray, np.ndarray]:
    """Per-part ghost cell count and ghost weight.

    A ghost of part ``p`` is a cell outside ``p`` that is a neighbor of some
    cell in ``p``; each ghost is counted once per part.
    """
    part = _parts(assignment)
    n_parts = assignment.n_parts
    indptr, indices = mesh.adjacency(rule)
    owner = np.repeat(part, np.diff(indptr))
    remote = part[indices] != owner
    key = np.unique(owner[remote] * np.int64(len(mesh)) + indices[remote])
    ghost_part = key // len(mesh)
    ghost_cell = key % len(mesh)
    counts = np.bincount(ghost_part, minlength=n_parts)
    weights = np.bincount(ghost_part, weights=np.asarray(mesh.weight)[ghost_cell], minlength=n_parts)
    return counts, weights


@dataclass(frozen=True)
class MetricsReport:
    """All metrics of one assignment; ``per_part`` arrays are indexed by part."""

    n_parts: int
    epsilon: float
    edge_cut: float
    connectivity_cut: float
    cut_net: float
    total_weight: float
    part_weight: np.ndarray
    part_cells: np.ndarray
    ghost_cells: np.ndarray
    ghost_weight: np.ndarray

    @property
    def max_ghost_weight(self) -> float:
        return float(self.ghost_weight.max()) if self.n_parts else 0.0

    def to_dict(self) -> dict:
        return {
            "n_parts": self.n_parts,
            "epsilon": self.epsilon,
            "edge_cut": self.edge_cut,
            "connectivity_cut": self.connectivity_cut,
            "cut_net": self.cut_net,
            "total_weight": self.total_weight,
            "max_ghost_weight": self.max_ghost_weight,
            "per_part": [
                {
                    "part": p,
                    "weight": float(self.part_weight[p]),
                    "cells": int(self.part_cells[p]),
                    "ghost_cells": int(self.ghost_cells[p]),
                    "ghost_weight": float(self.ghost_weight[p]),
                }
                for p in range(self.n_parts)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_long_csv(self) -> str:
        """Rows ``metric,part,value``; global metrics use an empty part field."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["metric", "part", "value"])
        for name in ("epsilon", "edge_cut", "connectivity_cut", "cut_net", "total_weight"):
            writer.writerow([name, "", repr(float(getattr(self, name)))])
        for name, values in (
            ("weight", self.part_weight),
            ("cells", self.part_cells),
            ("ghost_cells", self.ghost_cells),
            ("ghost_weight", self.ghost_weight),
        ):
            for p, value in enumerate(values):
                writer.writerow([name, p, repr(value.item())])
        return buf.getvalue()


def full_report(mesh, hypergraph, assignment, graph=None, rule: str = "coarse") -> MetricsReport:
    """Every metric for one assignment.

    ``graph`` supplies the edge cut; without it the edge cut is computed
    from the mesh neighborhoods with the ``w_u + w_v`` edge weights.
    """
    weights = np.asarray(mesh.weight, dtype=np.float64)
    loads = part_weights(assignment, weights)
    if graph is not None:
        ecut = edge_cut(graph, assignment)
    else:
        part = _parts(assignment)
        indptr, indices = mesh.adjacency(rule)
        rows = np.repeat(np.arange(len(mesh)), np.diff(indptr))
        upper = (rows < indices) & (part[rows] != part[indices])
        ecut = float((weights[rows[upper]] + weights[indices[upper]]).sum())
    lam = hyperedge_lambdas(hypergraph, assignment)
    ew = np.asarray(hypergraph.edge_weights)
    ghosts, ghost_w = ghost_stats(mesh, assignment, rule)
    return MetricsReport(
        n_parts=assignment.n_parts,
        epsilon=epsilon(assignment, weights),
        edge_cut=ecut,
        connectivity_cut=float(np.dot(ew, lam - 1)),
        cut_net=float(ew[lam > 1].sum()),
        total_weight=float(weights.sum()),
        part_weight=loads,
        part_cells=np.bincount(_parts(assignment), minlength=assignment.n_parts),
        ghost_cells=ghosts,
        ghost_weight=ghost_w,
    )
