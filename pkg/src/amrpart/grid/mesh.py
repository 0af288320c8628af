"""Octree AMR mesh: leaf cells on a rectilinear base grid."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from amrpart.errors import InvalidArgumentError, NotFoundError, ValidationError

# Keys for the whole finest lattice must fit in 63 bits.
MAX_SUPPORTED_LEVEL = 16

Region = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Cell:
    """Read-only view of one leaf of an :class:`AmrMesh`."""

    id: int
    level: int
    ijk: tuple[int, int, int]
    weight: float
    is_boundary: bool

    def center(self) -> tuple[float, float, float]:
        """Cell center in base-grid units (level-0 cell widths)."""
        scale = 1.0 / (1 << self.level)
        return tuple((c + 0.5) * scale for c in self.ijk)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AmrMesh:
    """Leaf cells of an octree-refined box, stored as parallel arrays.

    Leaves are kept sorted by ``(level, i, j, k)``. ``ijk`` holds integer
    coordinates at each cell's own level. All arrays are read-only, so a
    mesh can be shared between workers without copying.
    """

    base_dims: tuple[int, int, int]
    max_level: int
    level: np.ndarray
    ijk: np.ndarray
    weight: np.ndarray
    boundary: np.ndarray
    ids: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_arrays(
        cls,
        base_dims,
        max_level: int,
        level,
        ijk,
        weight=None,
        boundary=None,
        ids=None,
        validate: bool = True,
    ) -> "AmrMesh":
        level = np.asarray(level, dtype=np.int64)
        ijk = np.asarray(ijk, dtype=np.int64).reshape(-1, 3)
        n = len(level)
        weight = np.ones(n) if weight is None else np.asarray(weight, dtype=np.float64)
        boundary = (
            np.zeros(n, dtype=bool) if boundary is None else np.asarray(boundary, dtype=bool)
        )
        order = np.lexsort((ijk[:, 2], ijk[:, 1], ijk[:, 0], level))
        if ids is None:
            ids = np.arange(n, dtype=np.uint64)
        else:
            ids = np.asarray(ids, dtype=np.uint64)[order]
        mesh = cls(
            base_dims=tuple(int(d) for d in base_dims),
            max_level=int(max_level),
            level=_readonly(level[order].astype(np.uint8)),
            ijk=_readonly(ijk[order]),
            weight=_readonly(weight[order]),
            boundary=_readonly(boundary[order]),
            ids=_readonly(ids),
        )
        if validate:
            mesh.validate()
        return mesh

    def __len__(self) -> int:
        return len(self.level)

    @property
    def n_cells(self) -> int:
        return len(self.level)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AmrMesh):
            return NotImplemented
        return (
            self.base_dims == other.base_dims
            and self.max_level == other.max_level
            and np.array_equal(self.level, other.level)
            and np.array_equal(self.ijk, other.ijk)
            and np.array_equal(self.weight, other.weight)
            and np.array_equal(self.boundary, other.boundary)
            and np.array_equal(self.ids, other.ids)
        )

    __hash__ = None

    # geometry -------------------------------------------------------------

    def level_dims(self, level: int) -> np.ndarray:
        return np.array(self.base_dims, dtype=np.int64) << level

    def centers(self) -> np.ndarray:
        """Cell centers in base-grid units, shape (N, 3)."""
        if "centers" not in self._cache:
            scale = 1.0 / (1 << self.level.astype(np.int64))
            self._cache["centers"] = _readonly((self.ijk + 0.5) * scale[:, None])
        return self._cache["centers"]

    def fine_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower corner and edge length of every cell on the finest lattice."""
        shift = self.max_level - self.level.astype(np.int64)
        return self.ijk << shift[:, None], np.left_shift(1, shift)

    def volumes(self) -> np.ndarray:
        """Number of finest-level unit cubes covered by each cell."""
        return np.left_shift(1, 3 * (self.max_level - self.level.astype(np.int64)))

    def total_weight(self) -> float:
        return float(self.weight.sum())

    # cell access ----------------------------------------------------------

    def cell(self, index: int) -> Cell:
        return Cell(
            id=int(self.ids[index]),
            level=int(self.level[index]),
            ijk=tuple(int(c) for c in self.ijk[index]),
            weight=float(self.weight[index]),
            is_boundary=bool(self.boundary[index]),
        )

    def cells(self) -> Iterator[Cell]:
        for index in range(len(self)):
            yield self.cell(index)

    def index_of(self, cell_id: int) -> int:
        lookup = self._cache.get("id_index")
        if lookup is None:
            lookup = {int(c): i for i, c in enumerate(self.ids)}
            self._cache["id_index"] = lookup
        try:
            return lookup[int(cell_id)]
        except KeyError:
            raise NotFoundError(f"cell id {cell_id} is not a leaf of this mesh") from None

    def locate(self, cell: Cell) -> int:
        """Index of ``cell`` in this mesh; raises NotFoundError if absent."""
        index = self.index_of(cell.id)
        if int(self.level[index]) != cell.level or tuple(self.ijk[index]) != tuple(cell.ijk):
            raise NotFoundError(f"cell {cell.id} does not match the mesh leaf with that id")
        return index

    def with_weights(self, weight, boundary=None) -> "AmrMesh":
        weight = np.asarray(weight, dtype=np.float64)
        if weight.shape != (len(self),):
            raise InvalidArgumentError("weight array does not match the cell count")
        if boundary is None:
            boundary = self.boundary
        mesh = AmrMesh(
            base_dims=self.base_dims,
            max_level=self.max_level,
            level=self.level,
            ijk=self.ijk,
            weight=_readonly(weight.copy()),
            boundary=_readonly(np.asarray(boundary, dtype=bool).copy()),
            ids=self.ids,
        )
        # geometry-only caches stay valid
        for key in ("centers", "id_index"):
            if key in self._cache:
                mesh._cache[key] = self._cache[key]
        for key, value in self._cache.items():
            if key.startswith("adjacency"):
                mesh._cache[key] = value
        return mesh

    # neighbors ------------------------------------------------------------

    def adjacency(self, rule: str = "coarse"):
        """Cached CSR neighbor structure ``(indptr, indices)``; see :mod:`.neighbors`."""
        key = f"adjacency:{rule}"
        if key not in self._cache:
            from amrpart.grid.neighbors import neighbor_csr

            indptr, indices = neighbor_csr(self, rule)
            self._cache[key] = (_readonly(indptr), _readonly(indices))
        return self._cache[key]

    def neighbor_indices(self, index: int, rule: str = "coarse") -> np.ndarray:
        indptr, indices = self.adjacency(rule)
        return indices[indptr[index] : indptr[index + 1]]

    # validation -----------------------------------------------------------

    def validate(self) -> None:
        """Raise ValidationError unless all mesh invariants hold."""
        if len(self.base_dims) != 3 or min(self.base_dims) < 1:
            raise ValidationError(f"invalid base dims {self.base_dims}")
        if not 0 <= self.max_level <= MAX_SUPPORTED_LEVEL:
            raise ValidationError(f"max_level {self.max_level} out of range")
        n = len(self)
        if not (self.ijk.shape == (n, 3) and self.weight.shape == (n,) and self.ids.shape == (n,)):
            raise ValidationError("cell arrays have inconsistent lengths")
        level = self.level.astype(np.int64)
        if n and level.max() > self.max_level:
            raise ValidationError("cell level exceeds max_level")
        dims = np.array(self.base_dims, dtype=np.int64)[None, :] << level[:, None]
        if np.any(self.ijk < 0) or np.any(self.ijk >= dims):
            bad = int(np.flatnonzero(np.any((self.ijk < 0) | (self.ijk >= dims), axis=1))[0])
            raise ValidationError(f"cell {int(self.ids[bad])} lies outside the domain")
        if not np.all(np.isfinite(self.weight)) or np.any(self.weight < 0):
            raise ValidationError("cell weights must be finite and non-negative")
        if len(np.unique(self.ids)) != n:
            raise ValidationError("cell ids are not unique")
        _check_leaf_cover(self)


def _level_keys(ijk: np.ndarray, dims: np.ndarray) -> np.ndarray:
    return (ijk[:, 0] * dims[1] + ijk[:, 1]) * dims[2] + ijk[:, 2]


def _check_leaf_cover(mesh: AmrMesh) -> None:
    expected = int(np.prod(mesh.base_dims)) << (3 * mesh.max_level)
    level = mesh.level.astype(np.int64)
    keys_by_level = []
    for lv in range(mesh.max_level + 1):
        sel = level == lv
        keys = _level_keys(mesh.ijk[sel], mesh.level_dims(lv))
        uniq = np.unique(keys)
        if len(uniq) != len(keys):
            raise ValidationError(f"duplicate leaves at level {lv}")
        keys_by_level.append(uniq)
    # octree-aligned cells overlap only if one is an ancestor of the other
    for lv in range(1, mesh.max_level + 1):
        ijk = mesh.ijk[level == lv]
        for coarse in range(lv):
            anc = _level_keys(ijk >> (lv - coarse), mesh.level_dims(coarse))
            if np.any(np.isin(anc, keys_by_level[coarse])):
                raise ValidationError(
                    f"overlapping leaves: a level-{lv} cell lies inside a level-{coarse} leaf"
                )
    covered = int(mesh.volumes().sum())
    if covered != expected:
        raise ValidationError(f"leaves cover {covered} of {expected} finest units")


def build_uniform(nx: int, ny: int, nz: int, max_level: int) -> AmrMesh:
    """Mesh whose leaves are exactly the ``nx*ny*nz`` level-0 cells."""
    dims = (nx, ny, nz)
    if any(int(d) != d or d < 1 for d in dims):
        raise InvalidArgumentError(f"grid dimensions must be positive integers, got {dims}")
    if int(max_level) != max_level or not 0 <= max_level <= MAX_SUPPORTED_LEVEL:
        raise InvalidArgumentError(f"max_level must be in [0, {MAX_SUPPORTED_LEVEL}]")
    grid = np.indices(dims).reshape(3, -1).T
    return AmrMesh.from_arrays(
        dims, max_level, np.zeros(len(grid), dtype=np.int64), grid, validate=False
    )


_CHILD_OFFSETS = np.array([[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)])


def refine(mesh: AmrMesh, region: Region, target_level: int) -> AmrMesh:
    """Split leaves whose centers satisfy ``region`` until they reach ``target_level``.

    ``region`` receives an (M, 3) array of centers in base-grid units and
    returns a boolean mask. Children inherit the parent's weight and
    boundary flag.
    """
    if target_level > mesh.max_level:
        raise InvalidArgumentError(
            f"target level {target_level} exceeds max_level {mesh.max_level}"
        )
    level = mesh.level.astype(np.int64)
    ijk = np.asarray(mesh.ijk)
    weight = np.asarray(mesh.weight)
    boundary = np.asarray(mesh.boundary)
    while True:
        scale = 1.0 / (1 << level)
        centers = (ijk + 0.5) * scale[:, None]
        split = (level < target_level) & np.asarray(region(centers), dtype=bool)
        if not split.any():
            break
        keep = ~split
        children = ((ijk[split] << 1)[:, None, :] + _CHILD_OFFSETS[None, :, :]).reshape(-1, 3)
        level = np.concatenate([level[keep], np.repeat(level[split] + 1, 8)])
        ijk = np.concatenate([ijk[keep], children])
        weight = np.concatenate([weight[keep], np.repeat(weight[split], 8)])
        boundary = np.concatenate([boundary[keep], np.repeat(boundary[split], 8)])
    return AmrMesh.from_arrays(
        mesh.base_dims, mesh.max_level, level, ijk, weight, boundary, validate=False
    )
