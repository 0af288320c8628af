"""Load-balancing toolkit for octree AMR meshes.

Subpackages: :mod:`amrpart.grid` (meshes, neighborhoods, weights),
:mod:`amrpart.sfc` (space-filling curves), :mod:`amrpart.partition`
(partitioners), plus :mod:`amrpart.locality` (curve dilation) and
:mod:`amrpart.metrics` (partition quality).
"""

__version__ = "0.1.0"
