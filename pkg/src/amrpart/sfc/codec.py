"""Bit-wise conversion between lattice coordinates and curve keys."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from amrpart.errors import InvalidArgumentError
from amrpart.sfc.tables import CurveTable

MAX_ORDER = 21


@dataclass(frozen=True)
class CurveKey:
    value: int
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise InvalidArgumentError("curve order must be >= 1")
        if not 0 <= self.value < 8**self.order:
            raise InvalidArgumentError(f"key {self.value} out of range for order {self.order}")


@dataclass(frozen=True)
class AxisPermutation:
    """Coordinate relabelling applied before encoding.

    Reflections act first (``c -> 2^order - 1 - c`` on flagged axes), then
    output axis ``d`` takes the reflected input axis ``perm[d]``.
    """

    perm: tuple[int, ...] = (0, 1, 2)
    reflect: tuple[bool, ...] = (False, False, False)

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise InvalidArgumentError(f"{self.perm} is not a permutation of the axes")
        if len(self.reflect) != len(self.perm):
            raise InvalidArgumentError("reflection flags do not match the dimension")

    @classmethod
    def parse(cls, text: str) -> "AxisPermutation":
        """``"zyx"`` or with reflections ``"-z+y+x"``."""
        text = text.strip().lower()
        if all(ch in "xyz" for ch in text):
            return cls(tuple("xyz".index(ch) for ch in text), (False,) * len(text))
        perm, reflect = [], []
        for sign, axis in zip(text[::2], text[1::2]):
            if sign not in "+-" or axis not in "xyz":
                raise InvalidArgumentError(f"cannot parse axis permutation {text!r}")
            perm.append("xyz".index(axis))
            reflect.append(sign == "-")
        return cls(tuple(perm), tuple(reflect))

    @property
    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm))) and not any(self.reflect)

    def apply(self, coords: np.ndarray, order: int) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        top = (1 << order) - 1
        flipped = np.where(np.asarray(self.reflect), top - coords, coords)
        return flipped[..., list(self.perm)]

    def invert(self, coords: np.ndarray, order: int) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        out = np.empty_like(coords)
        out[..., list(self.perm)] = coords
        top = (1 << order) - 1
        return np.where(np.asarray(self.reflect), top - out, out)


IDENTITY = AxisPermutation()


def _check_order(order: int) -> None:
    if not 1 <= order <= MAX_ORDER:
        raise InvalidArgumentError(f"order must be in [1, {MAX_ORDER}], got {order}")


def encode_many(
    table: CurveTable, coords, order: int, axes: AxisPermutation = IDENTITY
) -> np.ndarray:
    """Curve keys (uint64) of an (N, d) array of lattice coordinates."""
    _check_order(order)
    dim = table.dimension
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, dim)
    if np.any(coords < 0) or np.any(coords >= (1 << order)):
        raise InvalidArgumentError(f"coordinates must lie in [0, {1 << order})")
    if not axes.is_identity:
        if len(axes.perm) != dim:
            raise InvalidArgumentError("axis permutation dimension does not match the table")
        coords = axes.apply(coords, order)
    state = np.zeros(len(coords), dtype=np.int64)
    key = np.zeros(len(coords), dtype=np.uint64)
    for level in range(order - 1, -1, -1):
        bits = (coords >> level) & 1
        code = np.zeros(len(coords), dtype=np.int64)
        for d in range(dim):
            code = (code << 1) | bits[:, d]
        pos = table.position[state, code]
        key = (key << np.uint64(dim)) | pos.astype(np.uint64)
        state = table.next_state[state, pos]
    return key


def decode_many(
    table: CurveTable, keys, order: int, axes: AxisPermutation = IDENTITY
) -> np.ndarray:
    """Inverse of :func:`encode_many`; returns an (N, d) int64 array."""
    _check_order(order)
    dim = table.dimension
    keys = np.asarray(keys).astype(np.uint64).ravel()
    if len(keys) and int(keys.max()) >= 1 << (dim * order):
        raise InvalidArgumentError(f"key out of range for order {order}")
    state = np.zeros(len(keys), dtype=np.int64)
    coords = np.zeros((len(keys), dim), dtype=np.int64)
    mask = np.uint64((1 << dim) - 1)
    for level in range(order - 1, -1, -1):
        pos = ((keys >> np.uint64(dim * level)) & mask).astype(np.int64)
        code = table.subcube[state, pos]
        for d in range(dim):
            coords[:, d] = (coords[:, d] << 1) | ((code >> (dim - 1 - d)) & 1)
        state = table.next_state[state, pos]
    if axes.is_identity:
        return coords
    if len(axes.perm) != dim:
        raise InvalidArgumentError("axis permutation dimension does not match the table")
    return axes.invert(coords, order)


def sfc_encode(table: CurveTable, coords, order: int, axes: AxisPermutation = IDENTITY) -> CurveKey:
    value = int(encode_many(table, np.asarray(coords)[None, :], order, axes)[0])
    return CurveKey(value, order)


def sfc_decode(table: CurveTable, key: CurveKey, axes: AxisPermutation = IDENTITY) -> tuple[int, ...]:
    if not 0 <= key.value < 1 << (table.dimension * key.order):
        raise InvalidArgumentError(f"key {key.value} out of range for order {key.order}")
    return tuple(int(c) for c in decode_many(table, [key.value], key.order, axes)[0])


def traversal(table: CurveTable, order: int, axes: AxisPermutation = IDENTITY) -> np.ndarray:
    """Coordinates of every cell in curve order, shape (2^(d*order), d)."""
    n = 1 << (table.dimension * order)
    return decode_many(table, np.arange(n, dtype=np.uint64), order, axes)


# Morton / Z-order -----------------------------------------------------------


def morton_encode_many(coords, order: int) -> np.ndarray:
    """Interleave bits x-major: key bits ... x_i y_i z_i ... (x most significant)."""
    _check_order(order)
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, 3)
    if np.any(coords < 0) or np.any(coords >= (1 << order)):
        raise InvalidArgumentError(f"coordinates must lie in [0, {1 << order})")
    key = np.zeros(len(coords), dtype=np.uint64)
    for level in range(order - 1, -1, -1):
        for d in range(3):
            key = (key << np.uint64(1)) | ((coords[:, d] >> level) & 1).astype(np.uint64)
    return key


def morton_decode_many(keys, order: int) -> np.ndarray:
    _check_order(order)
    keys = np.asarray(keys).astype(np.uint64).ravel()
    if len(keys) and int(keys.max()) >= 1 << (3 * order):
        raise InvalidArgumentError(f"key out of range for order {order}")
    coords = np.zeros((len(keys), 3), dtype=np.int64)
    for level in range(order):
        for d in range(3):
            bit = (keys >> np.uint64(3 * level + 2 - d)) & np.uint64(1)
            coords[:, d] |= bit.astype(np.int64) << level
    return coords


def morton_key(coords, order: int) -> CurveKey:
    return CurveKey(int(morton_encode_many(np.asarray(coords)[None, :], order)[0]), order)


def morton_coords(key: CurveKey) -> tuple[int, int, int]:
    return tuple(int(c) for c in morton_decode_many([key.value], key.order)[0])
