"""Shared partition types."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from amrpart.errors import InvalidArgumentError
from amrpart.sfc.codec import IDENTITY, AxisPermutation


@dataclass(frozen=True, eq=False)
class PartitionAssignment:
    """Total map from cell index to part; ``part_of[i]`` is the part of cell ``i``."""

    n_parts: int
    part_of: np.ndarray

    def __post_init__(self):
        part_of = np.ascontiguousarray(self.part_of, dtype=np.int64)
        if self.n_parts < 1:
            raise InvalidArgumentError("n_parts must be >= 1")
        if len(part_of) and (part_of.min() < 0 or part_of.max() >= self.n_parts):
            raise InvalidArgumentError("part index outside [0, n_parts)")
        part_of.setflags(write=False)
        object.__setattr__(self, "part_of", part_of)

    def __len__(self) -> int:
        return len(self.part_of)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartitionAssignment):
            return NotImplemented
        return self.n_parts == other.n_parts and np.array_equal(self.part_of, other.part_of)

    __hash__ = None

    def part_weights(self, weights) -> np.ndarray:
        return np.bincount(self.part_of, weights=np.asarray(weights, float), minlength=self.n_parts)

    def n_nonempty(self) -> int:
        return int(np.count_nonzero(np.bincount(self.part_of, minlength=self.n_parts)))


@dataclass(frozen=True)
class PartitionerParams:
    method: str = "rcb"
    curve: str = "beta"
    order: int | None = None
    axes: AxisPermutation = IDENTITY
    imbalance_tol: float = 0.02
    rectilinear: bool = False
    coarsen_stop: int = 100
    exhaustive_limit: int = 20
    refine_passes: int = 16
    seed: int = 0

    def __post_init__(self):
        if not self.imbalance_tol > 0:
            raise InvalidArgumentError("imbalance tolerance must be positive")
        if self.coarsen_stop < 2:
            raise InvalidArgumentError("coarsening stop size must be >= 2")
        if self.refine_passes < 0:
            raise InvalidArgumentError("refinement pass limit must be >= 0")


def split_counts(n: int) -> tuple[int, int]:
    """Parts given to the two halves of a bisection: ceil(n/2), floor(n/2)."""
    return (n + 1) // 2, n // 2


def check_n_parts(n: int) -> None:
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"number of parts must be a positive integer, got {n}")
