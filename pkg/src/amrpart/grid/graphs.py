"""Communication graph and hypergraph built from mesh neighborhoods."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from amrpart.errors import ValidationError


def _csr_from_lists(groups) -> tuple[np.ndarray, np.ndarray]:
    groups = [np.asarray(g, dtype=np.int64).ravel() for g in groups]
    ptr = np.zeros(len(groups) + 1, dtype=np.int64)
    np.cumsum([len(g) for g in groups], out=ptr[1:])
    pins = np.concatenate(groups) if groups else np.zeros(0, dtype=np.int64)
    return ptr, pins


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """Weighted vertices plus weighted pin lists in CSR form.

    ``edge_ptr``/``pins`` hold hyperedge ``e`` as
    ``pins[edge_ptr[e]:edge_ptr[e + 1]]``. Graphs are stored as degree-2
    hyperedges and additionally carry the pairwise view ``pairs`` (E, 2)
    with ``pair_weights``.
    """

    vertex_weights: np.ndarray
    edge_ptr: np.ndarray
    pins: np.ndarray
    edge_weights: np.ndarray
    pairs: np.ndarray | None = None
    pair_weights: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for name in ("vertex_weights", "edge_ptr", "pins", "edge_weights", "pairs", "pair_weights"):
            value = getattr(self, name)
            if value is not None:
                value.setflags(write=False)

    @classmethod
    def from_hyperedges(cls, vertex_weights, hyperedges, validate: bool = True) -> "Hypergraph":
        """Build from an iterable of ``(pins, weight)``."""
        hyperedges = list(hyperedges)
        ptr, pins = _csr_from_lists([p for p, _ in hyperedges])
        hg = cls(
            vertex_weights=np.array(vertex_weights, dtype=np.float64),
            edge_ptr=ptr,
            pins=pins,
            edge_weights=np.array([w for _, w in hyperedges], dtype=np.float64),
        )
        if validate:
            hg.validate()
        return hg

    @classmethod
    def from_edges(cls, vertex_weights, edges, weights=None, validate: bool = True) -> "Hypergraph":
        """Build a graph from pairs ``(u, v)``; ``weights`` defaults to 1."""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        weights = (
            np.ones(len(edges)) if weights is None else np.array(weights, dtype=np.float64)
        )
        hg = cls(
            vertex_weights=np.array(vertex_weights, dtype=np.float64),
            edge_ptr=np.arange(0, 2 * len(edges) + 1, 2, dtype=np.int64),
            pins=edges.ravel().copy(),
            edge_weights=weights,
            pairs=edges.copy(),
            pair_weights=weights.copy(),
        )
        if validate:
            hg.validate()
        return hg

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_weights)

    @property
    def n_edges(self) -> int:
        return len(self.edge_weights)

    @property
    def is_graph(self) -> bool:
        return self.pairs is not None

    def edge_pins(self, e: int) -> np.ndarray:
        return self.pins[self.edge_ptr[e] : self.edge_ptr[e + 1]]

    @property
    def hyperedges(self) -> list[tuple[np.ndarray, float]]:
        return [(self.edge_pins(e), float(self.edge_weights[e])) for e in range(self.n_edges)]

    def degrees(self) -> np.ndarray:
        return np.diff(self.edge_ptr)

    def incidence(self) -> tuple[np.ndarray, np.ndarray]:
        """Vertex-to-hyperedge CSR ``(vertex_ptr, edges)``."""
        if "incidence" not in self._cache:
            edge_of_pin = np.repeat(np.arange(self.n_edges, dtype=np.int64), self.degrees())
            order = np.argsort(self.pins, kind="stable")
            ptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
            np.cumsum(np.bincount(self.pins, minlength=self.n_vertices), out=ptr[1:])
            self._cache["incidence"] = (ptr, edge_of_pin[order])
        return self._cache["incidence"]

    def validate(self) -> None:
        n = self.n_vertices
        if np.any(self.vertex_weights < 0) or not np.all(np.isfinite(self.vertex_weights)):
            raise ValidationError("vertex weights must be finite and non-negative")
        if np.any(self.edge_weights < 0) or not np.all(np.isfinite(self.edge_weights)):
            raise ValidationError("hyperedge weights must be finite and non-negative")
        if len(self.edge_ptr) != self.n_edges + 1 or self.edge_ptr[-1] != len(self.pins):
            raise ValidationError("hyperedge index arrays are inconsistent")
        if np.any(np.diff(self.edge_ptr) <= 0):
            raise ValidationError("empty hyperedge")
        if len(self.pins) and (self.pins.min() < 0 or self.pins.max() >= n):
            raise ValidationError("pin refers to a missing vertex")
        if self.pairs is not None:
            u, v = self.pairs[:, 0], self.pairs[:, 1]
            if np.any(u == v):
                raise ValidationError("self loop in pairwise view")
            lo, hi = np.minimum(u, v), np.maximum(u, v)
            if len(np.unique(lo * n + hi)) != len(u):
                raise ValidationError("duplicate edge in pairwise view")


def build_graph(mesh, rule: str = "coarse") -> Hypergraph:
    """One undirected edge per neighbor pair, weighted ``w_u + w_v``.

    Boundary cells use their (already reduced) weight like any other cell.
    """
    indptr, indices = mesh.adjacency(rule)
    rows = np.repeat(np.arange(len(mesh), dtype=np.int64), np.diff(indptr))
    upper = rows < indices
    edges = np.stack([rows[upper], indices[upper]], axis=1)
    weights = mesh.weight[edges[:, 0]] + mesh.weight[edges[:, 1]]
    return Hypergraph.from_edges(mesh.weight, edges, weights, validate=False)


def build_hypergraph(mesh, rule: str = "coarse") -> Hypergraph:
    """One hyperedge per cell: the cell and its neighbors, weighted by the cell."""
    indptr, indices = mesh.adjacency(rule)
    n = len(mesh)
    # own cell first, then its neighbors
    pins = np.empty(len(indices) + n, dtype=np.int64)
    edge_ptr = indptr + np.arange(n + 1, dtype=np.int64)
    pins[edge_ptr[:-1]] = np.arange(n)
    slots = np.ones(len(pins), dtype=bool)
    slots[edge_ptr[:-1]] = False
    pins[slots] = indices
    return Hypergraph(
        vertex_weights=np.array(mesh.weight, dtype=np.float64),
        edge_ptr=edge_ptr,
        pins=pins,
        edge_weights=np.array(mesh.weight, dtype=np.float64),
    )
