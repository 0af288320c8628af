"""Discrete L_p-dilation of space-filling curves.

At order ``k`` the curve parameter ``a(i) = i / 8^k`` is where the curve
enters the ``i``-th cell, and ``tau(i)`` is the point of the cube where
that happens. The estimate is

    WL_p = max over i < j of D_p(tau(i), tau(j))^3 / (a(j) - a(i)).

Every ``tau(i)`` lies on the curve, so the estimate never exceeds the
continuous dilation, and the order-``k`` point set is contained in the
order-``k+1`` set, so estimates never decrease with the order. Cell
centers would be cheaper but are not points of the curve, and with them
the estimate can overshoot the continuous value (Butz in the max norm
does at order 5).

The entry point is found by descending from cell ``i`` through first
subcells down to the deepest supported order, which pins it to within
``2^-(21-k)`` of a cell width. In units of order-``k`` cells the ratio is
``D_p^3 / (j - i)``, which is what the kernel evaluates.

The pair scan is pruned with blocks of consecutive keys: the distance
between any two cells of blocks ``A`` and ``B`` is bounded by the extent
of their joint bounding box, and their key gap is at least the gap between
the blocks, so whole block pairs that cannot beat the running maximum are
skipped. The result equals the exhaustive maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from amrpart.errors import InvalidArgumentError
from amrpart.sfc.codec import MAX_ORDER, decode_many
from amrpart.sfc.tables import CurveTable

MAX_DILATION_ORDER = 5
P_VALUES = ("1", "2", "inf")
NAMED_CURVES = ("butz", "alfa", "harmonious", "sasburg", "basecamp", "beta")

# Reference cube roots (L1, L2, Linf) of the continuous dilation.
TABLE1 = {
    "butz": (4.62, 2.97, 2.89),
    "octree_order": (4.62, 2.97, 2.89),
    "alfa": (4.64, 2.84, 2.32),
    "harmonious": (4.63, 3.07, 3.04),
    "sasburg": (4.58, 3.00, 2.66),
    "basecamp": (5.27, 3.21, 3.04),
    "beta": (4.48, 2.65, 2.41),
}


@dataclass(frozen=True)
class DilationEstimate:
    curve: str
    p: str
    order: int
    wl_p: float

    @property
    def cube_root(self) -> float:
        return float(np.cbrt(self.wl_p))


def normalize_p(p) -> str:
    """Canonical spelling of a norm exponent: ``"1"``, ``"2"`` or ``"inf"``."""
    text = str(p).strip().lower()
    if text in ("1", "1.0"):
        return "1"
    if text in ("2", "2.0"):
        return "2"
    if text in ("inf", "infinity", "∞") or (isinstance(p, float) and math.isinf(p)):
        return "inf"
    raise InvalidArgumentError(f"unsupported norm p={p!r}; expected 1, 2 or inf")


@numba.njit(cache=True)
def _block_bounds(points, block):
    n_blocks = points.shape[0] // block
    lo = np.empty((n_blocks, 3))
    hi = np.empty((n_blocks, 3))
    for b in range(n_blocks):
        for d in range(3):
            seg = points[b * block:(b + 1) * block, d]
            lo[b, d] = seg.min()
            hi[b, d] = seg.max()
    return lo, hi


@numba.njit(cache=True)
def _dilation_kernel(points, block, near):
    """Maximum of D^3 / lag for L1, L2, Linf over all ordered pairs."""
    n = points.shape[0]
    n_blocks = n // block
    lo, hi = _block_bounds(points, block)
    best = np.zeros(3)
    # close block pairs first: they usually hold the maximum, which makes
    # the bound for the long-range pairs tight early
    for sweep in range(2):
        for a in range(n_blocks):
            for b in range(a, n_blocks):
                is_near = (b - a) <= near
                if (sweep == 0) != is_near:
                    continue
                lag = max(1, (b - a - 1) * block + 1)
                dx = max(hi[b, 0] - lo[a, 0], hi[a, 0] - lo[b, 0])
                dy = max(hi[b, 1] - lo[a, 1], hi[a, 1] - lo[b, 1])
                dz = max(hi[b, 2] - lo[a, 2], hi[a, 2] - lo[b, 2])
                bound1 = (dx + dy + dz) ** 3 / lag
                bound2 = (dx * dx + dy * dy + dz * dz) ** 1.5 / lag
                bound_inf = max(dx, max(dy, dz)) ** 3 / lag
                if bound1 <= best[0] and bound2 <= best[1] and bound_inf <= best[2]:
                    continue
                for i in range(a * block, (a + 1) * block):
                    for j in range(max(i + 1, b * block), (b + 1) * block):
                        ex = abs(points[i, 0] - points[j, 0])
                        ey = abs(points[i, 1] - points[j, 1])
                        ez = abs(points[i, 2] - points[j, 2])
                        lag_ij = j - i
                        v = (ex + ey + ez) ** 3 / lag_ij
                        if v > best[0]:
                            best[0] = v
                        v = (ex * ex + ey * ey + ez * ez) ** 1.5 / lag_ij
                        if v > best[1]:
                            best[1] = v
                        v = max(ex, max(ey, ez)) ** 3 / lag_ij
                        if v > best[2]:
                            best[2] = v
    return best


def entry_points(table: CurveTable, order: int) -> np.ndarray:
    """Point where the curve enters each order-``order`` cell, in cell units."""
    depth = MAX_ORDER - order
    keys = np.arange(8**order, dtype=np.uint64) << np.uint64(3 * depth)
    fine = decode_many(table, keys, MAX_ORDER).astype(np.float64)
    return (fine + 0.5) / float(1 << depth)


def dilation_all_norms(table: CurveTable, order: int) -> dict[str, float]:
    """WL_1, WL_2 and WL_inf of ``table`` at ``order`` from a single pair scan."""
    if not 1 <= order <= MAX_DILATION_ORDER:
        raise InvalidArgumentError(f"order must be in 1..{MAX_DILATION_ORDER}, got {order}")
    points = entry_points(table, order)
    block = min(len(points), 64 if order >= 5 else 16)
    best = _dilation_kernel(points, block, 8)
    return dict(zip(P_VALUES, (float(v) for v in best)))


def discrete_dilation(table: CurveTable, order: int, p) -> DilationEstimate:
    """Discrete L_p-dilation estimate of a curve at the given order.

    Args:
        table: Curve state table.
        order: Curve order, 1 to 5.
        p: 1, 2 or ``"inf"``.

    Raises:
        InvalidArgumentError: For any other ``p`` or an order out of range.
    """
    key = normalize_p(p)
    return DilationEstimate(table.name, key, order, dilation_all_norms(table, order)[key])


@dataclass(frozen=True)
class FingerprintRow:
    estimate: DilationEstimate
    reference: float

    @property
    def deviation(self) -> float:
        """Relative deviation of the estimated cube root from the reference."""
        return self.estimate.cube_root / self.reference - 1.0


def fingerprint_report(orders, curves=NAMED_CURVES) -> list[FingerprintRow]:
    """Estimates for every curve, norm and order next to the reference values."""
    from amrpart.sfc.catalogue import curve_table

    orders = list(orders)
    for k in orders:
        if not 1 <= k <= MAX_DILATION_ORDER:
            raise InvalidArgumentError(f"order must be in 1..{MAX_DILATION_ORDER}, got {k}")
    rows = []
    for name in curves:
        table = curve_table(name)
        for k in orders:
            values = dilation_all_norms(table, k)
            for idx, p in enumerate(P_VALUES):
                rows.append(FingerprintRow(DilationEstimate(name, p, k, values[p]), TABLE1[name][idx]))
    return rows
