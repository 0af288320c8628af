"""Per-cell work weights: a smooth field of Gaussian bumps over a background."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from amrpart.errors import InvalidArgumentError

BOUNDARY_FACTOR = 1.0 / 6.0

BoundaryPredicate = Callable[["object"], np.ndarray]


@dataclass(frozen=True)
class Bump:
    center: tuple[float, float, float]
    radius: float
    amplitude: float


@dataclass(frozen=True)
class WeightFieldSpec:
    """Weight field ``background + sum(a * exp(-|x - c|^2 / (2 r^2)))``.

    Coordinates are in base-grid units. ``dynamic_range_target`` is used by
    the synthetic generator to rescale bump amplitudes; evaluating the field
    directly ignores it.
    """

    background: float = 1.0
    bumps: tuple[Bump, ...] = ()
    boundary_factor: float = BOUNDARY_FACTOR
    dynamic_range_target: float = 100.0

    def __post_init__(self):
        bumps = tuple(b if isinstance(b, Bump) else Bump(*b) for b in self.bumps)
        object.__setattr__(self, "bumps", bumps)
        if not self.background > 0:
            raise InvalidArgumentError("background weight must be positive")
        for b in bumps:
            if not (b.radius > 0 and b.amplitude > 0):
                raise InvalidArgumentError(f"bump radius and amplitude must be positive: {b}")
        if not 0 < self.boundary_factor <= 1:
            raise InvalidArgumentError("boundary_factor must lie in (0, 1]")
        if not self.dynamic_range_target >= 1:
            raise InvalidArgumentError("dynamic_range_target must be >= 1")

    def bump_field(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        total = np.zeros(len(points))
        for b in self.bumps:
            d2 = np.sum((points - np.asarray(b.center)) ** 2, axis=1)
            total += b.amplitude * np.exp(-d2 / (2.0 * b.radius**2))
        return total

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return self.background + self.bump_field(points)


def no_boundary(mesh) -> np.ndarray:
    return np.zeros(len(mesh), dtype=bool)


def domain_faces(mesh, axes=(0, 1, 2), depth: int = 1) -> np.ndarray:
    """Cells within ``depth`` base-grid layers of the domain faces along ``axes``."""
    lo, size = mesh.fine_bounds()
    unit = 1 << mesh.max_level
    hi = lo + size[:, None]
    mask = np.zeros(len(mesh), dtype=bool)
    for axis in axes:
        extent = mesh.base_dims[axis] * unit
        mask |= lo[:, axis] < depth * unit
        mask |= hi[:, axis] > extent - depth * unit
    return mask


def assign_weights(mesh, spec: WeightFieldSpec, boundary_predicate: BoundaryPredicate | None = None):
    """Evaluate ``spec`` at cell centers; boundary cells are scaled by ``boundary_factor``."""
    weight = spec.evaluate(mesh.centers())
    boundary = (
        no_boundary(mesh)
        if boundary_predicate is None
        else np.asarray(boundary_predicate(mesh), dtype=bool)
    )
    weight = np.where(boundary, weight * spec.boundary_factor, weight)
    return mesh.with_weights(weight, boundary)
