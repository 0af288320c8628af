"""Mesh construction, neighborhoods, weights, (hyper)graphs, synthetic workloads and I/O."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amrpart.errors import InvalidArgumentError, MeshParseError, NotFoundError, ValidationError
from amrpart.grid import (
    AmrMesh,
    Bump,
    WeightFieldSpec,
    assign_weights,
    build_graph,
    build_hypergraph,
    build_uniform,
    domain_faces,
    dumps_mesh,
    generate_synthetic,
    level_shares,
    load_mesh,
    loads_mesh,
    neighbors,
    preset_config,
    refine,
    save_mesh,
    trivial_config,
)
from amrpart.grid.synthetic import S_REFERENCE_CELLS
from oracles import brute_neighbors, enumerate_leaves


def sphere(center, radius):
    return lambda p: np.sum((p - np.asarray(center)) ** 2, axis=1) <= radius**2


# -- construction ----------------------------------------------------------


@pytest.mark.parametrize(
    "dims, level, count",
    [((2, 2, 2), 3, 8), ((1, 1, 1), 0, 1), ((51, 40, 40), 3, 81600)],
)
def test_uniform_leaf_count(dims, level, count):
    mesh = build_uniform(*dims, level)
    assert len(mesh) == count
    assert np.all(mesh.level == 0)
    mesh.validate()


@pytest.mark.parametrize("args", [(0, 2, 2, 1), (2, 2, 2, -1), (2, 2, 2, 17), (2.5, 2, 2, 1)])
def test_uniform_rejects_bad_arguments(args):
    with pytest.raises(InvalidArgumentError):
        build_uniform(*args)


def test_refine_one_cell():
    mesh = refine(build_uniform(2, 2, 2, 1), lambda p: np.all(p < 1, axis=1), 1)
    assert len(mesh) == 15
    assert np.bincount(mesh.level).tolist() == [7, 8]


def test_refine_everything():
    mesh = refine(build_uniform(2, 2, 2, 1), lambda p: np.ones(len(p), bool), 1)
    assert len(mesh) == 64


def test_refine_sphere_level_histogram():
    region = sphere((8, 8, 8), 5)
    mesh = refine(build_uniform(16, 16, 16, 2), region, 2)
    expected = enumerate_leaves((16, 16, 16), region, 2)
    assert np.bincount(mesh.level, minlength=3).tolist() == expected == [3544, 384, 32256]
    mesh.validate()


def test_refine_beyond_max_level():
    with pytest.raises(InvalidArgumentError):
        refine(build_uniform(2, 2, 2, 1), lambda p: np.ones(len(p), bool), 2)


def test_refine_keeps_weight_and_boundary():
    base = build_uniform(2, 2, 2, 1).with_weights(np.arange(8.0), np.arange(8) % 2 == 0)
    mesh = refine(base, lambda p: np.ones(len(p), bool), 1)
    assert mesh.total_weight() == pytest.approx(8 * base.total_weight())
    assert mesh.boundary.sum() == 8 * base.boundary.sum()


def test_arrays_are_read_only():
    mesh = build_uniform(2, 2, 2, 0)
    with pytest.raises(ValueError):
        mesh.weight[0] = 5.0


def test_cell_lookup():
    mesh = build_uniform(2, 2, 2, 0)
    cell = mesh.cell(3)
    assert mesh.locate(cell) == 3
    assert cell.center() == (0.5, 1.5, 1.5)
    with pytest.raises(NotFoundError):
        mesh.index_of(99)


def test_validate_detects_overlap():
    with pytest.raises(ValidationError, match="overlap"):
        AmrMesh.from_arrays((1, 1, 1), 1, [0] + [1] * 8,
                            [(0, 0, 0)] + [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)])


def test_validate_detects_gap():
    with pytest.raises(ValidationError, match="cover"):
        AmrMesh.from_arrays((2, 1, 1), 0, [0], [(0, 0, 0)])


def test_validate_detects_duplicate_ids():
    with pytest.raises(ValidationError, match="unique"):
        AmrMesh.from_arrays((2, 1, 1), 0, [0, 0], [(0, 0, 0), (1, 0, 0)], ids=[4, 4])


def test_validate_detects_negative_weight():
    with pytest.raises(ValidationError):
        AmrMesh.from_arrays((2, 1, 1), 0, [0, 0], [(0, 0, 0), (1, 0, 0)], weight=[1.0, -1.0])


# -- neighborhoods ---------------------------------------------------------


def test_interior_cell_has_full_stencil():
    mesh = build_uniform(5, 5, 5, 0)
    center = next(c for c in mesh.cells() if c.ijk == (2, 2, 2))
    assert len(neighbors(mesh, center)) == 124


def test_corner_cell_is_clipped():
    mesh = build_uniform(4, 4, 4, 0)
    assert len(mesh.neighbor_indices(0)) == 26


def test_mixed_level_neighbor_count():
    mesh = refine(build_uniform(8, 4, 4, 1), lambda p: p[:, 0] >= 6, 1)
    cell = next(c for c in mesh.cells() if c.level == 0 and c.ijk == (4, 1, 1))
    index = mesh.locate(cell)
    oracle = brute_neighbors(mesh)
    assert len(oracle[index]) == 191
    assert set(mesh.neighbor_indices(index).tolist()) == oracle[index]
    # with the finer-cell rule the level-1 block is out of reach
    assert len(mesh.neighbor_indices(index, "fine")) == 63


@pytest.mark.parametrize("rule", ["coarse", "fine"])
def test_neighbors_match_box_oracle(rule):
    mesh = refine(build_uniform(4, 3, 3, 2), sphere((1.5, 1.5, 1.5), 1.2), 2)
    oracle = brute_neighbors(mesh, rule)
    for u in range(len(mesh)):
        assert set(mesh.neighbor_indices(u, rule).tolist()) == oracle[u]


@settings(max_examples=15, deadline=None)
@given(
    dims=st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3)),
    center=st.tuples(*[st.floats(0, 3)] * 3),
    radius=st.floats(0.3, 2.0),
    level=st.integers(0, 2),
)
def test_neighbors_property(dims, center, radius, level):
    mesh = refine(build_uniform(*dims, 2), sphere(center, radius), level)
    indptr, indices = mesh.adjacency()
    oracle = brute_neighbors(mesh)
    for u in range(len(mesh)):
        row = indices[indptr[u]:indptr[u + 1]]
        assert np.all(np.diff(row) > 0)
        assert set(row.tolist()) == oracle[u]


def test_unknown_rule():
    with pytest.raises(InvalidArgumentError):
        build_uniform(2, 2, 2, 0).adjacency("diagonal")


# -- weights ---------------------------------------------------------------


def test_constant_background():
    mesh = assign_weights(build_uniform(3, 3, 3, 0), WeightFieldSpec(background=1.0))
    assert np.all(mesh.weight == 1.0)


def test_boundary_cell_weight():
    mesh = build_uniform(3, 3, 3, 0)
    mesh = assign_weights(mesh, WeightFieldSpec(), domain_faces)
    assert mesh.weight[mesh.boundary] == pytest.approx(1 / 6)
    assert mesh.weight[~mesh.boundary].tolist() == [1.0]


def test_bump_dynamic_range():
    # the bump's value at the far corner is negligible, so max/min is about 1 + 99
    spec = WeightFieldSpec(background=1.0, bumps=(Bump((10.5, 10.5, 10.5), 1.5, 99.0),))
    mesh = assign_weights(build_uniform(21, 21, 21, 0), spec)
    ratio = mesh.weight.max() / mesh.weight.min()
    at_center = spec.evaluate(np.array([[10.5, 10.5, 10.5]]))[0]
    at_corner = spec.evaluate(np.array([[0.5, 0.5, 0.5]]))[0]
    assert ratio == pytest.approx(at_center / at_corner)
    assert ratio == pytest.approx(100.0, rel=1e-6)


@pytest.mark.parametrize(
    "kwargs",
    [{"background": 0.0}, {"bumps": ((0, 0, 0), -1.0, 1.0)}, {"boundary_factor": 2.0}],
)
def test_weight_spec_validation(kwargs):
    if "bumps" in kwargs:
        kwargs = {"bumps": (kwargs["bumps"],)}
    with pytest.raises(InvalidArgumentError):
        WeightFieldSpec(**kwargs)


# -- graphs ----------------------------------------------------------------


def test_isolated_cells_have_no_edges():
    mesh = build_uniform(6, 1, 1, 0)
    sub = AmrMesh.from_arrays((1, 1, 1), 0, [0], [(0, 0, 0)])
    assert build_graph(sub).n_edges == 0
    # cells 0 and 5 are three cells apart: no shared stencil
    assert 5 not in mesh.neighbor_indices(0)


def test_edge_weight_is_sum_of_endpoints():
    mesh = build_uniform(2, 1, 1, 0).with_weights([3.0, 5.0])
    graph = build_graph(mesh)
    assert graph.pairs.tolist() == [[0, 1]]
    assert graph.pair_weights.tolist() == [8.0]


def test_handshake_identity():
    mesh = build_uniform(4, 4, 4, 0)
    indptr, _ = mesh.adjacency()
    graph = build_graph(mesh)
    assert graph.n_edges == indptr[-1] // 2
    graph.validate()


def test_hypergraph_degrees_and_weights():
    single = build_hypergraph(AmrMesh.from_arrays((1, 1, 1), 0, [0], [(0, 0, 0)]))
    assert single.n_edges == 1 and single.degrees().tolist() == [1]
    mesh = build_uniform(5, 5, 5, 0).with_weights(np.full(125, 42.0))
    hg = build_hypergraph(mesh)
    hg.validate()
    center = mesh.locate(next(c for c in mesh.cells() if c.ijk == (2, 2, 2)))
    assert hg.degrees()[center] == 125
    assert hg.edge_pins(center)[0] == center
    assert hg.edge_weights[center] == 42.0


def test_hypergraph_validation():
    from amrpart.grid import Hypergraph

    with pytest.raises(ValidationError):
        Hypergraph.from_hyperedges([1, 1], [([0, 2], 1.0)])
    with pytest.raises(ValidationError):
        Hypergraph.from_edges([1, 1], [(0, 1), (1, 0)])
    with pytest.raises(ValidationError):
        Hypergraph.from_edges([1, 1], [(1, 1)])


# -- synthetic workloads and files ---------------------------------------


def test_generation_is_deterministic():
    config = preset_config("trivial")
    a = dumps_mesh(generate_synthetic(config, 3))
    assert a == dumps_mesh(generate_synthetic(config, 3))


def test_trivial_preset():
    mesh = generate_synthetic(trivial_config(4, 4, 4), 0)
    assert len(mesh) == 64 and np.all(mesh.weight == 1.0)


def test_unknown_preset():
    with pytest.raises(InvalidArgumentError):
        preset_config("galaxy")


def test_s_like_preset(s_like_mesh):
    assert 0.5 * S_REFERENCE_CELLS <= len(s_like_mesh) <= 2 * S_REFERENCE_CELLS
    shares = level_shares(s_like_mesh)
    assert np.all(shares > 5.0)
    interior = s_like_mesh.weight[~s_like_mesh.boundary]
    assert interior.max() / interior.min() == pytest.approx(100.0, rel=1e-9)
    assert s_like_mesh.boundary.any()


def test_round_trip(tmp_path):
    mesh = assign_weights(refine(build_uniform(3, 3, 3, 2), sphere((1, 1, 1), 1.0), 2),
                          WeightFieldSpec(bumps=(Bump((1, 1, 1), 1.0, 3.0),)), domain_faces)
    path = tmp_path / "mesh.jsonl"
    save_mesh(mesh, path)
    assert load_mesh(path) == mesh


def test_load_rejects_overlap():
    text = (
        '{"nx": 1, "ny": 1, "nz": 1, "max_level": 1}\n'
        '{"id": 0, "level": 0, "i": 0, "j": 0, "k": 0, "weight": 1.0, "boundary": false}\n'
        + "".join(
            f'{{"id": {n + 1}, "level": 1, "i": {n >> 2}, "j": {(n >> 1) & 1}, "k": {n & 1}, '
            '"weight": 1.0, "boundary": false}\n'
            for n in range(8)
        )
    )
    with pytest.raises(ValidationError):
        loads_mesh(text)


def test_load_rejects_negative_weight():
    text = (
        '{"nx": 1, "ny": 1, "nz": 1, "max_level": 0}\n'
        '{"id": 0, "level": 0, "i": 0, "j": 0, "k": 0, "weight": -2, "boundary": false}\n'
    )
    with pytest.raises(MeshParseError) as info:
        loads_mesh(text)
    assert info.value.lineno == 2


@pytest.mark.parametrize("bad", ["not json", '{"nx": 1}', "[1, 2]"])
def test_load_rejects_bad_header(bad):
    with pytest.raises(MeshParseError):
        loads_mesh(bad + "\n")
