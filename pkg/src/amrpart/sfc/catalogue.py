"""Named three-dimensional Hilbert curves over the base pattern Ca00.

Each curve is given by its generator: for every subcube, in traversal
order, the signed axis permutation and direction with which the curve is
copied into it. ``"-y+x+z"`` means the copy's x axis runs along -y of the
parent, and so on (see :func:`amrpart.sfc.tables.parse_symmetry`).
"""

from __future__ import annotations

from functools import lru_cache

from amrpart.errors import NotFoundError
from amrpart.sfc.tables import CA00, CurveTable, Generator, generate_table, permute_table

GENERATORS: dict[str, Generator] = {
    "butz": Generator(
        "butz",
        CA00,
        (
            ("+y+z+x", False),
            ("+y+x+z", False),
            ("+x+y+z", False),
            ("-z+y+x", True),
            ("+z+y+x", False),
            ("+x+y+z", False),
            ("-y+x+z", True),
            ("-y+z+x", True),
        ),
    ),
    "alfa": Generator(
        "alfa",
        CA00,
        (
            ("+y+z-x", True),
            ("+z-x+y", True),
            ("+z+x+y", False),
            ("-x-z-y", True),
            ("+x-z-y", False),
            ("-z+x+y", True),
            ("-z-x+y", False),
            ("-z+y-x", False),
        ),
    ),
    "harmonious": Generator(
        "harmonious",
        CA00,
        (
            ("+y+z+x", False),
            ("+y-x+z", True),
            ("+x+z+y", False),
            ("-y+x-z", False),
            ("-x-y-z", True),
            ("-y-x+z", False),
            ("-z-x+y", False),
            ("-y+z-x", False),
        ),
    ),
    "sasburg": Generator(
        "sasburg",
        CA00,
        (
            ("+z+y+x", False),
            ("+z+x+y", False),
            ("+z-x+y", True),
            ("-x-z-y", True),
            ("+z-x-y", False),
            ("+x+z+y", False),
            ("-y+x+z", True),
            ("-y+z-x", False),
        ),
    ),
    # No single Ca00 generator reaches the reference L_1 dilation of Base
    # camp; this one comes closest among those tried (L_1 at 0.88 of it).
    "basecamp": Generator(
        "basecamp",
        CA00,
        (
            ("+z+y+x", False),
            ("+z+x+y", False),
            ("-x+y+z", True),
            ("-y+x-z", False),
            ("+x-z-y", False),
            ("-z+x+y", True),
            ("-y+x+z", True),
            ("-y+z-x", False),
        ),
    ),
    "beta": Generator(
        "beta",
        CA00,
        (
            ("+x-z-y", False),
            ("-z-y+x", False),
            ("-z+y+x", True),
            ("-y+z-x", False),
            ("+y+z-x", True),
            ("+z+y+x", False),
            ("+z-y+x", True),
            ("+z+x-y", True),
        ),
    ),
}

# Butz read with the axes in (z, y, x) order.
OCTREE_AXES = (2, 1, 0)

CURVE_NAMES = ("butz", "octree_order", "alfa", "harmonious", "sasburg", "basecamp", "beta")


def curve_table(name: str) -> CurveTable:
    """State table of a catalogue curve.

    Names are matched case-insensitively, with ``-`` and ``_`` equivalent
    and spaces ignored. Tables are built once and shared.

    Raises:
        NotFoundError: If ``name`` is not in :data:`CURVE_NAMES`.
    """
    return _curve_table(name.strip().lower().replace("-", "_").replace(" ", ""))


@lru_cache(maxsize=None)
def _curve_table(key: str) -> CurveTable:
    if key == "octree_order":
        return permute_table(_curve_table("butz"), "octree_order", OCTREE_AXES)
    if key not in GENERATORS:
        raise NotFoundError(f"unknown curve {key!r}; known: {', '.join(CURVE_NAMES)}")
    return generate_table(GENERATORS[key])


def hilbert_2d_table() -> CurveTable:
    """The two-dimensional Hilbert curve, kept as a small reference table."""
    return generate_table(
        Generator("hilbert2d", (0, 1, 3, 2), (("+y+x", False), ("+x+y", False), ("+x+y", False), ("-y-x", False)), dim=2)
    )
