"""AMR meshes, neighborhoods, weights, (hyper)graphs, synthetic workloads and file I/O."""

from amrpart.grid.graphs import Hypergraph, build_graph, build_hypergraph
from amrpart.grid.io import dumps_mesh, load_mesh, loads_mesh, save_mesh
from amrpart.grid.mesh import AmrMesh, Cell, build_uniform, refine
from amrpart.grid.neighbors import NEIGHBOR_RULES, neighbor_csr, neighbors
from amrpart.grid.synthetic import (
    PRESETS,
    Ellipsoid,
    SyntheticConfig,
    generate_synthetic,
    level_shares,
    preset_config,
    s_like_config,
    trivial_config,
)
from amrpart.grid.weights import Bump, WeightFieldSpec, assign_weights, domain_faces, no_boundary

__all__ = [
    "NEIGHBOR_RULES",
    "PRESETS",
    "AmrMesh",
    "Bump",
    "Cell",
    "Ellipsoid",
    "Hypergraph",
    "SyntheticConfig",
    "WeightFieldSpec",
    "assign_weights",
    "build_graph",
    "build_hypergraph",
    "build_uniform",
    "domain_faces",
    "dumps_mesh",
    "generate_synthetic",
    "level_shares",
    "load_mesh",
    "loads_mesh",
    "neighbor_csr",
    "neighbors",
    "no_boundary",
    "preset_config",
    "refine",
    "s_like_config",
    "save_mesh",
    "trivial_config",
]
