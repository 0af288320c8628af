"""Curve tables, catalogue, validation and the key codecs."""

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from amrpart.errors import InvalidArgumentError, NotFoundError
from amrpart.sfc import (
    CA00,
    CURVE_NAMES,
    AxisPermutation,
    CurveKey,
    CurveTable,
    decode_many,
    encode_many,
    hilbert_2d_table,
    morton_coords,
    morton_decode_many,
    morton_encode_many,
    morton_key,
    morton_table,
    sfc_decode,
    sfc_encode,
    traversal,
    validate_curve_table,
)
from amrpart.sfc.catalogue import curve_table
from amrpart.sfc.tables import format_symmetry, gate_points, parse_symmetry

ALL = list(CURVE_NAMES)


def test_catalogue_has_seven_curves():
    assert len(CURVE_NAMES) == 7
    for name in CURVE_NAMES:
        table = curve_table(name)
        assert table.n_states <= 48


def test_butz_starts_with_base_pattern():
    table = curve_table("butz")
    assert tuple(int(c) for c in table.subcube[0]) == CA00


def test_every_table_uses_the_base_pattern_up_to_symmetry():
    # Ca00 has one step along a single axis between two "plates"; every state is a rotation of it
    for name in CURVE_NAMES:
        table = curve_table(name)
        for row in table.subcube:
            axes = [int(a ^ b).bit_length() - 1 for a, b in zip(row[:-1], row[1:])]
            assert sorted(axes) == sorted([axes[0], axes[1], axes[0], axes[3], axes[0], axes[1], axes[0]])
            assert axes[0] == axes[2] == axes[4] == axes[6]


def test_unknown_curve():
    with pytest.raises(NotFoundError):
        curve_table("foo")


def test_curve_names_are_normalized():
    assert curve_table("Octree-Order") is curve_table("octree_order")


@pytest.mark.parametrize("name", ALL)
def test_tables_validate(name):
    report = validate_curve_table(curve_table(name), orders=(1, 2, 3))
    assert report.ok, report.violations[:3]


def test_morton_table_is_discontinuous():
    report = validate_curve_table(morton_table(), orders=(1, 2))
    assert report.count("continuity") > 0
    assert report.count("adjacency") > 0
    assert report.count("permutation") == 0


def test_duplicate_subcube_is_a_permutation_violation():
    good = curve_table("butz")
    rows = [list(r) for r in good.entries]
    rows[0][1] = rows[0][0]
    report = validate_curve_table(CurveTable("broken", tuple(tuple(r) for r in rows)))
    assert report.count("permutation") == 1


def test_bad_next_state_is_reported():
    rows = [list(r) for r in curve_table("butz").entries]
    rows[3][2] = (rows[3][2][0], 999)
    report = validate_curve_table(CurveTable("broken", tuple(tuple(r) for r in rows)))
    assert report.count("next_state") == 1


def test_table_text_round_trip():
    table = curve_table("beta")
    again = CurveTable.parse("beta", table.dump())
    assert again.entries == table.entries


def test_symmetry_text_round_trip():
    for text in ("+x+y+z", "-z+y+x", "+y-x-z"):
        assert format_symmetry(parse_symmetry(text)) == text


def test_hilbert_2d_reference():
    table = hilbert_2d_table()
    assert validate_curve_table(table, orders=(1, 2, 3)).ok
    pts = traversal(table, 2)
    assert len({tuple(p) for p in pts}) == 16


@pytest.mark.parametrize("name", ALL)
@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_bijection(name, order):
    table = curve_table(name)
    keys = np.arange(8**order, dtype=np.uint64)
    coords = decode_many(table, keys, order)
    assert np.array_equal(encode_many(table, coords, order), keys)
    grid = np.indices((1 << order,) * 3).reshape(3, -1).T
    assert np.array_equal(decode_many(table, encode_many(table, grid, order), order), grid)


@pytest.mark.parametrize("name", ALL)
def test_order2_traversal_is_a_continuous_tour(name):
    pts = traversal(curve_table(name), 2)
    assert len({tuple(p) for p in pts}) == 64
    assert np.all(np.abs(np.diff(pts, axis=0)).sum(axis=1) == 1)


def test_butz_order1_octants_share_faces():
    pts = [sfc_decode(curve_table("butz"), CurveKey(k, 1)) for k in range(8)]
    for a, b in zip(pts, pts[1:]):
        assert sum(abs(x - y) for x, y in zip(a, b)) == 1


@pytest.mark.parametrize("name", ALL)
def test_endpoints_at_order1_are_corners(name):
    table = curve_table(name)
    for k in (0, 7):
        assert set(sfc_decode(table, CurveKey(k, 1))) <= {0, 1}


@pytest.mark.parametrize("name", ["butz", "octree_order"])
@pytest.mark.parametrize("order", [2, 3, 5])
def test_vertex_gated_endpoints(name, order):
    table = curve_table(name)
    top = (1 << order) - 1
    first = sfc_decode(table, CurveKey(0, order))
    last = sfc_decode(table, CurveKey(8**order - 1, order))
    assert set(first) <= {0, top} and set(last) <= {0, top}
    assert first == sfc_decode(table, CurveKey(0, 1)) and first == (0, 0, 0)


def test_beta_gates_are_not_vertices():
    entry, exit_ = gate_points(__import__("amrpart.sfc.catalogue", fromlist=["GENERATORS"]).GENERATORS["beta"])
    assert not all(v in (0, 1) for v in entry)
    assert not all(v in (0, 1) for v in exit_)


def test_octree_order_is_butz_with_reversed_axes():
    butz = traversal(curve_table("butz"), 3)
    octree = traversal(curve_table("octree_order"), 3)
    assert np.array_equal(octree, butz[:, ::-1])


@given(order=st.integers(1, 21), data=st.data())
def test_deep_round_trip(order, data):
    table = curve_table(data.draw(st.sampled_from(ALL)))
    coords = tuple(data.draw(st.integers(0, (1 << order) - 1)) for _ in range(3))
    key = sfc_encode(table, coords, order)
    assert sfc_decode(table, key) == coords


@given(order=st.integers(1, 21), data=st.data())
def test_deep_continuity(order, data):
    table = curve_table(data.draw(st.sampled_from(ALL)))
    k = data.draw(st.integers(0, 8**order - 2))
    a = np.asarray(sfc_decode(table, CurveKey(k, order)))
    b = np.asarray(sfc_decode(table, CurveKey(k + 1, order)))
    assert np.abs(a - b).sum() == 1


def test_axis_permutation_round_trip():
    table = curve_table("beta")
    axes = AxisPermutation.parse("-z+x-y")
    grid = np.indices((8, 8, 8)).reshape(3, -1).T
    keys = encode_many(table, grid, 3, axes)
    assert np.array_equal(decode_many(table, keys, 3, axes), grid)
    assert not np.array_equal(keys, encode_many(table, grid, 3))


@pytest.mark.parametrize("text", ["abc", "+x+q+z", "xx"])
def test_axis_permutation_rejects_garbage(text):
    with pytest.raises(InvalidArgumentError):
        AxisPermutation.parse(text)


def test_codec_argument_checks():
    table = curve_table("butz")
    with pytest.raises(InvalidArgumentError):
        CurveKey(8, 1)
    with pytest.raises(InvalidArgumentError):
        sfc_encode(table, (2, 0, 0), 1)
    with pytest.raises(InvalidArgumentError):
        encode_many(table, np.zeros((1, 3), dtype=np.int64), 22)


# -- Morton ----------------------------------------------------------------


def test_morton_is_x_major():
    assert morton_key((1, 0, 0), 1).value == 4
    assert morton_coords(CurveKey(3, 1)) == (0, 1, 1)


def test_morton_step_discontinuity():
    a, b = morton_coords(CurveKey(3, 1)), morton_coords(CurveKey(4, 1))
    assert a == (0, 1, 1) and b == (1, 0, 0)
    assert sum(abs(x - y) for x, y in zip(a, b)) == 3


def test_morton_round_trip_order3():
    grid = np.indices((8, 8, 8)).reshape(3, -1).T
    keys = morton_encode_many(grid, 3)
    assert sorted(keys.tolist()) == list(range(512))
    assert np.array_equal(morton_decode_many(keys, 3), grid)


def test_morton_matches_bit_interleaving():
    for x, y, z in itertools.product(range(4), repeat=3):
        expected = 0
        for bit in range(2):
            for axis, c in enumerate((x, y, z)):
                expected |= ((c >> bit) & 1) << (3 * bit + 2 - axis)
        assert morton_key((x, y, z), 2).value == expected
