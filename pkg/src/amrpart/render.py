"""Axis-aligned slice images of a partition, colored by part modulo 64."""

from __future__ import annotations

import colorsys
from pathlib import Path

import numpy as np

from amrpart.errors import InvalidArgumentError

PALETTE_SIZE = 64


def _palette() -> np.ndarray:
    # golden-ratio hue walk over three lightness bands: neighbors in part
    # order get well separated colors
    colors = np.empty((PALETTE_SIZE, 3), dtype=np.uint8)
    for i in range(PALETTE_SIZE):
        hue = (i * 0.618033988749895) % 1.0
        light = (0.45, 0.62, 0.32)[i % 3]
        r, g, b = colorsys.hls_to_rgb(hue, light, 0.75)
        colors[i] = [round(255 * r), round(255 * g), round(255 * b)]
    return colors


PALETTE = _palette()
PALETTE.setflags(write=False)


def slice_image(mesh, assignment, axis: int, index: int) -> np.ndarray:
    """RGB array of the slice ``index`` (finest-level units) normal to ``axis``.

    Rows run along the second remaining axis and columns along the first,
    so for ``axis=2`` the image shows x to the right and y downward.
    """
    if axis not in (0, 1, 2):
        raise InvalidArgumentError(f"axis must be 0, 1 or 2, got {axis}")
    extent = np.asarray(mesh.base_dims, dtype=np.int64) << mesh.max_level
    if not 0 <= index < extent[axis]:
        raise InvalidArgumentError(f"slice {index} outside 0..{extent[axis] - 1} along axis {axis}")
    lo, size = mesh.fine_bounds()
    hit = (lo[:, axis] <= index) & (index < lo[:, axis] + size)
    u_axis, v_axis = [a for a in range(3) if a != axis]
    width, height = int(extent[u_axis]), int(extent[v_axis])
    part_img = np.zeros((height, width), dtype=np.int64)
    part = np.asarray(assignment.part_of)
    for c in np.flatnonzero(hit):
        u0, v0, s = lo[c, u_axis], lo[c, v_axis], size[c]
        part_img[v0:v0 + s, u0:u0 + s] = part[c]
    return PALETTE[part_img % PALETTE_SIZE]


def encode_ppm(image: np.ndarray) -> bytes:
    """Binary PPM (P6) encoding of an (H, W, 3) uint8 array."""
    height, width, _ = image.shape
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(image, dtype=np.uint8).tobytes()


def render_slice(mesh, assignment, axis: int, index: int, path) -> Path:
    """Write the slice as a P6 image and return its path."""
    path = Path(path)
    path.write_bytes(encode_ppm(slice_image(mesh, assignment, axis, index)))
    return path
