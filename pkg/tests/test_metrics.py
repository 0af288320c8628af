"""Imbalance, cuts, ghost statistics, reports and slice rendering."""

import csv
import io
import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amrpart.errors import InvalidArgumentError, UndefinedMetricError
from amrpart.grid import Hypergraph, build_graph, build_hypergraph, build_uniform, refine
from amrpart.metrics import (
    connectivity_cut,
    cut_net,
    edge_cut,
    epsilon,
    full_report,
    ghost_stats,
    hyperedge_lambdas,
    part_weights,
)
from amrpart.partition import PartitionAssignment, rcb
from amrpart.render import PALETTE, encode_ppm, render_slice, slice_image
from oracles import brute_neighbors, connectivity_recount, graph_cut


def assign(parts, n=None):
    parts = list(parts)
    return PartitionAssignment(n or max(parts) + 1, parts)


# -- imbalance -------------------------------------------------------------


@pytest.mark.parametrize(
    "loads, expected", [([4, 4, 4, 4], 0.0), ([5, 3, 4, 4], 0.25)]
)
def test_epsilon_examples(loads, expected):
    a = assign(range(4))
    assert epsilon(a, loads) == pytest.approx(expected)


def test_epsilon_everything_in_one_part():
    a = PartitionAssignment(4, [0, 0, 0])
    assert epsilon(a, [1.0, 2.0, 3.0]) == pytest.approx(3.0)


def test_epsilon_zero_weight():
    with pytest.raises(UndefinedMetricError):
        epsilon(assign([0, 1]), [0.0, 0.0])


def test_part_weights_conserve_total():
    w = np.random.default_rng(0).random(50)
    a = PartitionAssignment(7, np.arange(50) % 7)
    assert part_weights(a, w).sum() == pytest.approx(w.sum())


# -- cuts ------------------------------------------------------------------


def test_edge_cut_examples():
    g = Hypergraph.from_edges([1, 1], [(0, 1)], [8.0])
    assert edge_cut(g, assign([0, 0])) == 0
    assert edge_cut(g, assign([0, 1])) == 8.0


def test_edge_cut_needs_graph():
    hg = Hypergraph.from_hyperedges([1, 1, 1], [([0, 1, 2], 1.0)])
    with pytest.raises(InvalidArgumentError):
        edge_cut(hg, assign([0, 1, 1]))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(1, 4), st.randoms(use_true_random=False))
def test_edge_cut_matches_recount(n, parts, rnd):
    edges = [e for e in itertools.combinations(range(n), 2) if rnd.random() < 0.5] or [(0, 1)]
    weights = [rnd.randint(1, 9) for _ in edges]
    g = Hypergraph.from_edges(np.ones(n), edges, weights)
    part = [rnd.randrange(parts) for _ in range(n)]
    a = PartitionAssignment(parts, part)
    assert edge_cut(g, a) == graph_cut(edges, weights, part)
    # degree-2 hyperedges: connectivity-1 equals the edge cut
    assert connectivity_cut(g, a) == edge_cut(g, a)


def test_connectivity_examples():
    hg = Hypergraph.from_hyperedges([1, 1, 1], [([0, 1, 2], 5.0)])
    assert connectivity_cut(hg, assign([0, 0, 1])) == 5.0
    assert connectivity_cut(hg, assign([1, 1, 1])) == 0.0
    assert connectivity_cut(hg, assign([0, 1, 2])) == 10.0
    assert cut_net(hg, assign([0, 1, 2])) == 5.0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(1, 5), st.randoms(use_true_random=False))
def test_connectivity_matches_recount(n, parts, rnd):
    hyperedges = []
    for _ in range(rnd.randint(1, 8)):
        pins = rnd.sample(range(n), rnd.randint(1, n))
        hyperedges.append((pins, float(rnd.randint(0, 5))))
    hg = Hypergraph.from_hyperedges(np.ones(n), hyperedges)
    part = [rnd.randrange(parts) for _ in range(n)]
    a = PartitionAssignment(parts, part)
    assert connectivity_cut(hg, a) == connectivity_recount(hyperedges, part)
    lam = hyperedge_lambdas(hg, a)
    assert lam.tolist() == [len({part[v] for v in pins}) for pins, _ in hyperedges]


# -- ghosts ----------------------------------------------------------------


def test_no_ghosts_for_a_single_part():
    mesh = build_uniform(4, 4, 4, 0)
    counts, weights = ghost_stats(mesh, PartitionAssignment(1, np.zeros(64, int)))
    assert counts.tolist() == [0] and weights.tolist() == [0.0]


def test_halved_cube_ghost_slabs():
    mesh = build_uniform(4, 4, 4, 0).with_weights(np.arange(64, dtype=float))
    half = (mesh.ijk[:, 0] >= 2).astype(int)
    counts, weights = ghost_stats(mesh, PartitionAssignment(2, half))
    assert counts.tolist() == [32, 32]
    # the ghosts of each half are exactly the other half (two slabs deep)
    assert weights[0] == pytest.approx(mesh.weight[half == 1].sum())
    assert weights[1] == pytest.approx(mesh.weight[half == 0].sum())


def test_ghosts_match_recount_on_refined_mesh():
    mesh = refine(build_uniform(4, 3, 3, 1), lambda p: p[:, 0] < 1.5, 1)
    mesh = mesh.with_weights(np.random.default_rng(1).random(len(mesh)))
    a = PartitionAssignment(3, np.random.default_rng(2).integers(0, 3, len(mesh)))
    counts, weights = ghost_stats(mesh, a)
    nb = brute_neighbors(mesh)
    for p in range(3):
        ghosts = {v for u in np.flatnonzero(a.part_of == p) for v in nb[u] if a.part_of[v] != p}
        assert counts[p] == len(ghosts)
        assert weights[p] == pytest.approx(sum(mesh.weight[v] for v in ghosts))


# -- report ----------------------------------------------------------------


def test_octant_report_is_symmetric():
    mesh = build_uniform(4, 4, 4, 0)
    hg = build_hypergraph(mesh)
    report = full_report(mesh, hg, rcb(mesh, 8))
    assert report.epsilon == 0
    assert len(set(report.ghost_cells.tolist())) == 1
    assert len(set(report.ghost_weight.tolist())) == 1
    assert report.part_weight.sum() == mesh.total_weight()


def test_report_matches_components():
    mesh = refine(build_uniform(4, 4, 2, 1), lambda p: p[:, 1] > 2, 1)
    mesh = mesh.with_weights(np.random.default_rng(3).random(len(mesh)) + 0.1)
    hg, g = build_hypergraph(mesh), build_graph(mesh)
    a = rcb(mesh, 5)
    report = full_report(mesh, hg, a)
    assert report.edge_cut == pytest.approx(edge_cut(g, a))
    assert full_report(mesh, hg, a, graph=g).edge_cut == pytest.approx(report.edge_cut)
    assert report.connectivity_cut == connectivity_cut(hg, a)
    assert report.cut_net == cut_net(hg, a)
    assert report.epsilon == epsilon(a, mesh.weight)
    counts, weights = ghost_stats(mesh, a)
    assert np.array_equal(report.ghost_cells, counts)
    assert report.max_ghost_weight == weights.max()
    assert report.part_cells.sum() == len(mesh)
    d = json.loads(report.to_json())
    assert d["epsilon"] == report.epsilon
    assert sum(row["weight"] for row in d["per_part"]) == pytest.approx(mesh.total_weight())
    rows = list(csv.DictReader(io.StringIO(report.to_long_csv())))
    assert {r["metric"] for r in rows} >= {"epsilon", "ghost_weight", "cells"}
    loads = [float(r["value"]) for r in rows if r["metric"] == "weight"]
    assert max(loads) / (sum(loads) / 5) - 1 == pytest.approx(report.epsilon)


# -- rendering -------------------------------------------------------------


def test_palette():
    assert PALETTE.shape == (64, 3)
    assert len({tuple(c) for c in PALETTE.tolist()}) == 64


def test_single_part_is_monochrome():
    mesh = build_uniform(4, 4, 4, 1)
    img = slice_image(mesh, PartitionAssignment(1, np.zeros(64, int)), 2, 3)
    assert img.shape == (8, 8, 3)
    assert len(np.unique(img.reshape(-1, 3), axis=0)) == 1


def test_octant_slice_has_four_quadrants():
    mesh = build_uniform(4, 4, 4, 0)
    img = slice_image(mesh, rcb(mesh, 8), 2, 1)
    quadrants = [img[v:v + 2, u:u + 2].reshape(-1, 3) for v in (0, 2) for u in (0, 2)]
    colors = [tuple(q[0]) for q in quadrants]
    assert all(len(np.unique(q, axis=0)) == 1 for q in quadrants)
    assert len(set(colors)) == 4


def test_palette_wraps_at_64():
    mesh = build_uniform(2, 1, 1, 0)
    img = slice_image(mesh, PartitionAssignment(65, [0, 64]), 2, 0)
    assert np.array_equal(img[0, 0], img[0, 1])


def test_refined_cells_fill_their_pixels():
    mesh = refine(build_uniform(2, 2, 1, 1), lambda p: (p[:, 0] < 1) & (p[:, 1] < 1), 1)
    a = PartitionAssignment(len(mesh), np.arange(len(mesh)))
    img = slice_image(mesh, a, 2, 0)
    assert img.shape == (4, 4, 3)
    coarse = [i for i in range(len(mesh)) if mesh.level[i] == 0]
    for i in coarse:
        u, v = mesh.ijk[i, 0] * 2, mesh.ijk[i, 1] * 2
        assert np.all(img[v:v + 2, u:u + 2] == PALETTE[i])


def test_slice_out_of_range():
    mesh = build_uniform(2, 2, 2, 1)
    a = PartitionAssignment(1, np.zeros(8, int))
    with pytest.raises(InvalidArgumentError):
        slice_image(mesh, a, 2, 4)
    with pytest.raises(InvalidArgumentError):
        slice_image(mesh, a, 3, 0)


def test_ppm_is_deterministic(tmp_path):
    mesh = build_uniform(4, 4, 4, 0)
    a = rcb(mesh, 8)
    p1 = render_slice(mesh, a, 0, 2, tmp_path / "a.ppm")
    p2 = render_slice(mesh, a, 0, 2, tmp_path / "b.ppm")
    data = p1.read_bytes()
    assert data == p2.read_bytes()
    assert data.startswith(b"P6\n4 4\n255\n")
    assert len(data) == len(b"P6\n4 4\n255\n") + 48
    assert encode_ppm(slice_image(mesh, a, 0, 2)) == data
