"""Partitioners and the method-string dispatcher."""

from __future__ import annotations

from dataclasses import replace

from amrpart.errors import InvalidArgumentError
from amrpart.partition.bisection import rcb, rib
from amrpart.partition.common import PartitionAssignment, PartitionerParams, split_counts
from amrpart.partition.hsfc import hsfc
from amrpart.partition.multilevel import fm_refine, multilevel_bisection
from amrpart.partition.number import greedy, lpt, number_partition

METHODS = ("greedy", "lpt", "rcb", "rib", "hsfc", "morton", "graph", "hypergraph")


def parse_method(method: str) -> tuple[str, str | None]:
    """Split ``"hsfc:beta"`` into ``("hsfc", "beta")``; other methods carry no curve."""
    name, _, curve = method.strip().lower().partition(":")
    if name not in METHODS:
        raise InvalidArgumentError(f"unknown method {method!r}; known: {', '.join(METHODS)}")
    if name == "hsfc":
        return name, curve or "beta"
    if curve:
        raise InvalidArgumentError(f"method {name!r} takes no curve")
    return name, None


def partition_mesh(mesh, method: str, n: int, params: PartitionerParams | None = None,
                   hypergraph=None, graph=None) -> PartitionAssignment:
    """Run the partitioner named by ``method`` on ``mesh``.

    Prebuilt ``graph``/``hypergraph`` objects are used when given, which
    saves rebuilding them for every run on the same mesh.
    """
    name, curve = parse_method(method)
    params = params or PartitionerParams()
    params = replace(params, method=name, curve=curve or params.curve)
    if name == "greedy":
        return greedy(mesh.weight, n)
    if name == "lpt":
        return lpt(mesh.weight, n)
    if name == "rcb":
        return rcb(mesh, n, params)
    if name == "rib":
        return rib(mesh, n, params)
    if name == "hsfc":
        return hsfc(mesh, n, params)
    if name == "morton":
        return hsfc(mesh, n, replace(params, curve="morton"))
    from amrpart.grid.graphs import build_graph, build_hypergraph

    if name == "graph":
        return multilevel_bisection(graph if graph is not None else build_graph(mesh), n, params, "graph")
    return multilevel_bisection(
        hypergraph if hypergraph is not None else build_hypergraph(mesh), n, params, "hypergraph"
    )


__all__ = [
    "METHODS",
    "PartitionAssignment",
    "PartitionerParams",
    "fm_refine",
    "greedy",
    "hsfc",
    "lpt",
    "multilevel_bisection",
    "number_partition",
    "parse_method",
    "partition_mesh",
    "rcb",
    "rib",
    "split_counts",
]
