"""Unit and property tests for distance matrices and Rips construction."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdabc.complexes import facets
from tdabc.errors import CapacityExceeded, DimensionMismatch
from tdabc.rips import RipsConfig, auto_max_edge, build_rips, pairwise_distances

from conftest import UNIT_SQUARE, random_cloud, unit_square_complex


# ---------------------------------------------------------------------------
# pairwise_distances
# ---------------------------------------------------------------------------


def test_euclidean_distances_unit_square():
    dist = pairwise_distances(UNIT_SQUARE)
    assert dist.shape == (4, 4)
    assert np.allclose(np.diag(dist), 0.0)
    assert np.allclose(dist, dist.T)
    assert dist[0, 1] == pytest.approx(1.0)
    assert dist[0, 2] == pytest.approx(math.sqrt(2))


def test_manhattan_distances():
    dist = pairwise_distances(UNIT_SQUARE, metric="manhattan")
    assert dist[0, 2] == pytest.approx(2.0)


def test_cosine_distances():
    pts = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 0.0]])
    dist = pairwise_distances(pts, metric="cosine")
    assert dist[0, 1] == pytest.approx(1.0)  # orthogonal
    assert dist[0, 2] == pytest.approx(0.0, abs=1e-12)  # parallel


def test_unknown_metric_rejected():
    with pytest.raises(ValueError):
        pairwise_distances(UNIT_SQUARE, metric="nope")


def test_ragged_input_rejected():
    with pytest.raises(DimensionMismatch):
        pairwise_distances([[0.0, 1.0], [1.0]])


def test_non_finite_input_rejected():
    with pytest.raises(ValueError):
        pairwise_distances(np.array([[0.0, np.nan], [1.0, 2.0]]))


# ---------------------------------------------------------------------------
# build_rips on known geometry
# ---------------------------------------------------------------------------


def test_unit_square_complex_contents():
    cx = unit_square_complex()
    sides = {(0, 1), (1, 2), (2, 3), (0, 3)}
    diagonals = {(0, 2), (1, 3)}
    for e in sides:
        assert cx.value(e) == pytest.approx(1.0)
    for e in diagonals:
        assert cx.value(e) == pytest.approx(math.sqrt(2))
    triangles = [s for s in cx.simplices() if len(s) == 3]
    assert len(triangles) == 4
    for t in triangles:
        assert cx.value(t) == pytest.approx(math.sqrt(2))


def test_vertices_enter_at_zero():
    cx = unit_square_complex()
    for v in range(4):
        assert cx.value((v,)) == 0.0


def test_max_edge_filters_long_pairs():
    pts = np.array([[0.0, 0.0], [5.0, 0.0]])
    dist = pairwise_distances(pts)
    cx = build_rips(dist, RipsConfig(max_dim=2, max_edge=1.0))
    assert set(cx.simplices()) == {(0,), (1,)}


def test_single_point():
    cx = build_rips(np.zeros((1, 1)), RipsConfig(max_dim=2, max_edge=float("inf")))
    assert set(cx.simplices()) == {(0,)}
    assert cx.value((0,)) == 0.0


def test_max_dim_caps_simplex_dimension():
    dist = pairwise_distances(UNIT_SQUARE)
    cx = build_rips(dist, RipsConfig(max_dim=3, max_edge=float("inf")))
    assert cx.dimension == 3
    assert (0, 1, 2, 3) in cx
    cx2 = build_rips(dist, RipsConfig(max_dim=2, max_edge=float("inf")))
    assert cx2.dimension == 2


def test_config_requires_max_dim_at_least_two():
    with pytest.raises(ValueError):
        RipsConfig(max_dim=1)


def test_budget_guard_raises():
    rng = np.random.default_rng(0)
    dist = pairwise_distances(rng.normal(size=(30, 2)))
    with pytest.raises(CapacityExceeded):
        build_rips(dist, RipsConfig(max_dim=3, max_edge=float("inf"), budget=50))


# ---------------------------------------------------------------------------
# Diameter rule, monotonicity, restriction consistency (properties)
# ---------------------------------------------------------------------------


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_diameter_rule(seed):
    rng = np.random.default_rng(seed)
    points = random_cloud(rng)
    dist = pairwise_distances(points)
    cx = build_rips(dist, RipsConfig(max_dim=3, max_edge=float("inf")))
    for s in cx.simplices():
        if len(s) == 1:
            assert cx.value(s) == 0.0
        else:
            diameter = max(dist[a, b] for a, b in itertools.combinations(s, 2))
            assert cx.value(s) == pytest.approx(diameter, abs=1e-12)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_filtration_monotone_on_built_complexes(seed):
    rng = np.random.default_rng(seed)
    dist = pairwise_distances(random_cloud(rng))
    cx = build_rips(dist, RipsConfig(max_dim=3, max_edge=float("inf")))
    for s in cx.simplices():
        for f in facets(s):
            assert cx.value(f) <= cx.value(s)


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_restriction_consistency(seed):
    """Building with a cap equals capping the full complex afterwards."""
    rng = np.random.default_rng(seed)
    dist = pairwise_distances(random_cloud(rng))
    full = build_rips(dist, RipsConfig(max_dim=3, max_edge=float("inf")))
    cap = float(rng.uniform(0.1, dist.max() + 0.1))
    capped = build_rips(dist, RipsConfig(max_dim=3, max_edge=cap))
    assert set(capped.simplices()) == set(full.subcomplex_at(cap).simplices())


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_edge_count_matches_pairs_within_cap(seed):
    rng = np.random.default_rng(seed)
    dist = pairwise_distances(random_cloud(rng))
    cap = float(rng.uniform(0.1, dist.max() + 0.1))
    cx = build_rips(dist, RipsConfig(max_dim=2, max_edge=cap))
    n = dist.shape[0]
    expected = sum(
        1 for a, b in itertools.combinations(range(n), 2) if dist[a, b] <= cap
    )
    assert sum(1 for s in cx.simplices() if len(s) == 2) == expected


# ---------------------------------------------------------------------------
# auto_max_edge
# ---------------------------------------------------------------------------


def test_auto_max_edge_within_diameter_and_budget():
    rng = np.random.default_rng(3)
    dist = pairwise_distances(rng.normal(size=(40, 3)))
    budget = 20_000
    cap = auto_max_edge(dist, max_dim=3, budget=budget)
    assert 0.0 < cap <= dist.max()
    cx = build_rips(dist, RipsConfig(max_dim=3, max_edge=cap, budget=budget))
    assert len(cx.order) <= budget


def test_auto_cap_keeps_small_clouds_connected():
    """With loose budgets the automatic cap spans every spanning-tree edge."""
    rng = np.random.default_rng(5)
    points = rng.normal(size=(12, 2))
    dist = pairwise_distances(points)
    cap = auto_max_edge(dist, max_dim=2, budget=500_000)
    cx = build_rips(dist, RipsConfig(max_dim=2, max_edge=cap))
    # union-find over edges: a single component proves the cap suffices
    parent = list(range(12))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for s in cx.simplices():
        if len(s) == 2:
            parent[find(s[0])] = find(s[1])
    assert len({find(v) for v in range(12)}) == 1


def test_default_config_builds_without_cap_argument():
    rng = np.random.default_rng(11)
    dist = pairwise_distances(rng.normal(size=(25, 2)))
    cx = build_rips(dist, RipsConfig(max_dim=2, budget=100_000))
    assert cx.vertex_count == 25
    assert len(cx.order) <= 100_000
