"""Space-filling curves: state tables, the named-curve catalogue and the codec."""

from amrpart.sfc.catalogue import CURVE_NAMES, GENERATORS, curve_table, hilbert_2d_table
from amrpart.sfc.codec import (
    IDENTITY,
    MAX_ORDER,
    AxisPermutation,
    CurveKey,
    decode_many,
    encode_many,
    morton_coords,
    morton_decode_many,
    morton_encode_many,
    morton_key,
    sfc_decode,
    sfc_encode,
    traversal,
)
from amrpart.sfc.tables import CA00, CurveTable, Generator, generate_table, morton_table
from amrpart.sfc.validate import ValidationReport, validate_curve_table

__all__ = [
    "CA00",
    "CURVE_NAMES",
    "GENERATORS",
    "IDENTITY",
    "MAX_ORDER",
    "AxisPermutation",
    "CurveKey",
    "CurveTable",
    "Generator",
    "ValidationReport",
    "curve_table",
    "decode_many",
    "encode_many",
    "generate_table",
    "hilbert_2d_table",
    "morton_coords",
    "morton_decode_many",
    "morton_encode_many",
    "morton_key",
    "morton_table",
    "sfc_decode",
    "sfc_encode",
    "traversal",
    "validate_curve_table",
]
