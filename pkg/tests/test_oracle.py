import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cologne.errors import ResourceError
from cologne.graph import Graph, erdos_renyi
from cologne.oracle import (
    collision_matrix, cosine_similarity, empirical_collision_matrix, empirical_distribution,
    exact_frequency_vectors, jaccard_khop, matrix_power_frequencies, minratio_similarity,
    similarity_matrix, sqrt_cosine, walk_enumeration,
)
from cologne.samplers import SamplerConfig

from conftest import path3, small_graphs, star, triangle


def test_triangle_vectors():
    # I + A + A^2 for the triangle: row (3, 2, 2)
    a = np.ones((3, 3)) - np.eye(3)
    assert (np.eye(3) + a + a @ a)[0].tolist() == [3, 2, 2]
    assert exact_frequency_vectors(triangle(), 2)[0].entries == {0: 3, 1: 2, 2: 2}
    assert walk_enumeration(triangle(), 0, 2).entries == {0: 3, 1: 2, 2: 2}


def test_path_vectors():
    assert exact_frequency_vectors(path3(), 2)[1].entries == {0: 1, 1: 3, 2: 1}
    assert walk_enumeration(path3(), 0, 3).entries == {0: 2, 1: 3, 2: 1}
    assert matrix_power_frequencies(path3(), 3)[0].tolist() == [2, 3, 1]


def test_k0_and_k1():
    g = Graph.from_edges(3, [0, 0, 1], [1, 1, 2])
    for fv in exact_frequency_vectors(g, 0):
        assert fv.entries == {fv.owner: 1}
    # self once plus each neighbor with its multiplicity
    assert walk_enumeration(g, 0, 1).entries == {0: 1, 1: 2}


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=8, weighted=True), st.integers(0, 4), st.sampled_from([1.0, 0.5]))
def test_three_routes_agree(g, k, decay):
    dp = exact_frequency_vectors(g, k, decay)
    mp = matrix_power_frequencies(g, k, decay)
    for u in range(g.n):
        en = walk_enumeration(g, u, k, decay)
        assert dp[u].entries == en.entries
        assert dp[u].dense(g.n).tolist() == mp[u].tolist()
        assert set(dp[u].entries) == g.khop_set(u, k)


def test_node_weights_scale_columns():
    g = path3().with_node_weights([2.0, 1.0, 0.5])
    assert exact_frequency_vectors(g, 1)[1].entries == {0: 2.0, 1: 1.0, 2: 0.5}
    assert walk_enumeration(g, 1, 1).entries == {0: 2.0, 1: 1.0, 2: 0.5}


def test_guards():
    g = erdos_renyi(40, 0.5, seed=1)
    with pytest.raises(ResourceError):
        exact_frequency_vectors(g, 2, max_nodes=10)
    with pytest.raises(ResourceError):
        exact_frequency_vectors(g, 3, max_entries=100)
    with pytest.raises(ResourceError):
        walk_enumeration(g, 0, 6, max_walks=1000)
    with pytest.raises(ResourceError):
        matrix_power_frequencies(g, 2, max_nodes=10)


def test_jaccard_examples():
    g = star(3)
    assert jaccard_khop(g, 2, 2, 1) == 1
    assert jaccard_khop(g, 1, 2, 1) == pytest.approx(1 / 3)
    two = Graph.from_edges(4, [0, 2], [1, 3])
    assert jaccard_khop(two, 0, 2, 3) == 0


def test_minratio_examples():
    g = path3()
    assert minratio_similarity(g, 0, 2, 1, p=1) == 0.5
    assert minratio_similarity(g, 1, 1, 2, p=2) == pytest.approx(1.0)
    two = Graph.from_edges(4, [0, 2], [1, 3])
    assert minratio_similarity(two, 0, 2, 2, p=1) == 0


def test_cosine_examples():
    g = path3()
    assert cosine_similarity(g, 0, 0, 2) == pytest.approx(1.0)
    two = Graph.from_edges(4, [0, 2], [1, 3])
    assert cosine_similarity(two, 0, 3, 2) == 0
    assert sqrt_cosine(g, 1, 1, 2) == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(small_graphs(max_n=9), st.integers(0, 3))
def test_similarity_orderings(g, k):
    m1 = similarity_matrix(g, k, "minratio1")
    m2 = similarity_matrix(g, k, "minratio2")
    cos = similarity_matrix(g, k, "cosine")
    sq = similarity_matrix(g, k, "sqrt_cosine")
    tol = 1e-12
    assert np.all(m1 >= 0) and np.all(m1 <= 1 + tol)
    assert np.all(m2 <= cos + tol)
    assert np.all(m1 <= sq + tol)


def test_random_12_node_graph_minratio_below_cosine():
    g = erdos_renyi(12, 0.3, seed=5)
    assert np.all(similarity_matrix(g, 2, "minratio2") <= similarity_matrix(g, 2, "cosine") + 1e-12)


def test_empirical_distribution():
    dist = empirical_distribution(star(3), 0, SamplerConfig("l0", k=1), 20_000)
    assert all(abs(dist[x] - 0.25) <= 0.02 for x in range(4))
    assert empirical_distribution(star(3), 2, SamplerConfig("l1", k=0), 50) == {2: 1.0}


def test_empirical_distribution_reference_agrees():
    cfg = SamplerConfig("l1", k=2)
    a = empirical_distribution(path3(), 1, cfg, 2000)
    b = empirical_distribution(path3(), 1, cfg, 2000, reference=True)
    assert a == b


def test_collision_matrix_basics():
    two = Graph.from_edges(4, [0, 2], [1, 3])
    c = empirical_collision_matrix(two, SamplerConfig("l0", k=2), 200)
    assert np.all(np.diag(c) == 1)
    assert c[0, 2] == 0 and c[1, 3] == 0
    cols = np.array([[0, -1], [0, -1]])
    assert collision_matrix(cols).tolist() == [[0.5, 0.5], [0.5, 0.5]]


def test_l0_collision_tracks_jaccard_on_random_graph():
    g = erdos_renyi(30, 0.15, seed=0)
    c = empirical_collision_matrix(g, SamplerConfig("l0", k=2), 2000)
    assert np.max(np.abs(c - similarity_matrix(g, 2, "jaccard"))) <= 0.05
