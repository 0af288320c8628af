"""Synthetic AMR workloads: nested refinement regions plus a bumpy weight field."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from amrpart.errors import InvalidArgumentError
from amrpart.grid.mesh import AmrMesh, build_uniform, refine
from amrpart.grid.weights import Bump, WeightFieldSpec, assign_weights, domain_faces

# Level shares (percent, levels 0..3) and leaf count of the reference run
# the S-like preset imitates.
S_REFERENCE_LEVEL_SHARES = (26.4, 12.3, 36.5, 24.8)
S_REFERENCE_CELLS = 285972


@dataclass(frozen=True)
class Ellipsoid:
    """Axis-aligned ellipsoid in base-grid units, refined to ``level``."""

    center: tuple[float, float, float]
    semi_axes: tuple[float, float, float]
    level: int

    def contains(self, points: np.ndarray) -> np.ndarray:
        scaled = (points - np.asarray(self.center)) / np.asarray(self.semi_axes)
        return np.einsum("ij,ij->i", scaled, scaled) <= 1.0


@dataclass(frozen=True)
class SyntheticConfig:
    """Everything that defines a synthetic mesh apart from the seed.

    Attributes:
        base_dims: Level-0 grid shape.
        max_level: Deepest refinement level allowed.
        regions: Refinement regions, applied in order.
        weights: Background and fixed bumps of the weight field.
        random_bumps: Number of extra bumps drawn from the seed. Their
            centers fall inside the first refinement region (or anywhere
            in the domain when there is none).
        boundary_depth: Base-cell layers at the domain faces flagged as
            boundary; 0 disables boundary cells.
        rescale: Rescale bump amplitudes so interior weights span
            ``weights.dynamic_range_target``.
    """

    base_dims: tuple[int, int, int]
    max_level: int
    regions: tuple[Ellipsoid, ...] = ()
    weights: WeightFieldSpec = field(default_factory=WeightFieldSpec)
    random_bumps: int = 0
    boundary_depth: int = 0
    rescale: bool = True

    def __post_init__(self):
        if len(self.base_dims) != 3 or min(self.base_dims) < 1:
            raise InvalidArgumentError(f"bad base grid {self.base_dims}")
        for region in self.regions:
            if not 0 <= region.level <= self.max_level:
                raise InvalidArgumentError(f"region level {region.level} outside 0..{self.max_level}")
            if min(region.semi_axes) <= 0:
                raise InvalidArgumentError("ellipsoid semi-axes must be positive")
        if self.random_bumps < 0 or self.boundary_depth < 0:
            raise InvalidArgumentError("random_bumps and boundary_depth must be non-negative")


def _random_bumps(config: SyntheticConfig, rng: np.random.Generator) -> tuple[Bump, ...]:
    dims = np.asarray(config.base_dims, dtype=np.float64)
    if config.regions:
        anchor = config.regions[0]
        center, spread = np.asarray(anchor.center), np.asarray(anchor.semi_axes)
    else:
        center, spread = dims / 2, dims / 2
    bumps = []
    for _ in range(config.random_bumps):
        c = np.clip(center + rng.uniform(-1.0, 1.0, 3) * spread, 0.0, dims)
        radius = float(rng.uniform(0.05, 0.2) * dims.min())
        amplitude = float(rng.uniform(0.5, 1.0))
        bumps.append(Bump(tuple(float(v) for v in c), radius, amplitude))
    return tuple(bumps)


def _rescaled(spec: WeightFieldSpec, points: np.ndarray) -> WeightFieldSpec:
    """Scale all amplitudes so max/min of the field over ``points`` hits the target."""
    if not spec.bumps or spec.dynamic_range_target <= 1:
        return spec
    field_values = spec.bump_field(points)
    hi, lo = field_values.max(), field_values.min()
    target, bg = spec.dynamic_range_target, spec.background
    # (bg + s*hi) / (bg + s*lo) = target
    denom = hi - target * lo
    if denom <= 0:
        raise InvalidArgumentError(
            f"bumps too flat to reach dynamic range {target}: field spans {lo:.3g}..{hi:.3g}"
        )
    scale = bg * (target - 1.0) / denom
    bumps = tuple(replace(b, amplitude=b.amplitude * scale) for b in spec.bumps)
    return replace(spec, bumps=bumps)


def generate_synthetic(config: SyntheticConfig, seed: int = 0) -> AmrMesh:
    """Build a refined mesh and assign weights, deterministically in ``(config, seed)``."""
    if not 0 <= int(seed) < 2**64:
        raise InvalidArgumentError("seed must be a 64-bit unsigned integer")
    rng = np.random.default_rng(int(seed))
    mesh = build_uniform(*config.base_dims, config.max_level)
    for region in config.regions:
        mesh = refine(mesh, region.contains, region.level)
    spec = replace(config.weights, bumps=config.weights.bumps + _random_bumps(config, rng))
    if config.boundary_depth:
        boundary = domain_faces(mesh, depth=config.boundary_depth)
    else:
        boundary = np.zeros(len(mesh), dtype=bool)
    if config.rescale:
        interior = mesh.centers()[~boundary] if (~boundary).any() else mesh.centers()
        spec = _rescaled(spec, interior)
    return assign_weights(mesh, spec, lambda m: boundary)


def s_like_config() -> SyntheticConfig:
    """51x40x40 base grid with three nested refinement shells around a dayside obstacle."""
    center = (34.0, 20.0, 20.0)
    return SyntheticConfig(
        base_dims=(51, 40, 40),
        max_level=3,
        regions=(
            Ellipsoid(center, (10.2, 9.4, 9.4), 1),
            Ellipsoid(center, (6.8, 5.5, 5.5), 2),
            Ellipsoid(center, (2.8, 2.3, 2.3), 3),
        ),
        weights=WeightFieldSpec(background=1.0, bumps=(Bump(center, 6.0, 1.0),)),
        random_bumps=6,
        boundary_depth=1,
    )


def trivial_config(nx: int = 4, ny: int = 4, nz: int = 4) -> SyntheticConfig:
    """Uniform mesh, unit weights, no refinement and no boundary layer."""
    return SyntheticConfig(base_dims=(nx, ny, nz), max_level=0, rescale=False)


PRESETS = {"s-like": s_like_config, "trivial": trivial_config}


def preset_config(name: str) -> SyntheticConfig:
    key = name.strip().lower().replace("_", "-")
    if key not in PRESETS:
        raise InvalidArgumentError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
    return PRESETS[key]()


def level_shares(mesh: AmrMesh) -> np.ndarray:
    """Percentage of leaves on each level 0..max_level."""
    counts = np.bincount(np.asarray(mesh.level), minlength=mesh.max_level + 1)
    return 100.0 * counts / counts.sum()
