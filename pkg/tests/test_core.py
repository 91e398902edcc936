"""Graph containers, the double-counted objective, and labeling helpers."""

import numpy as np
import pytest

from crfqp import (
    CrfGraph,
    Potentials,
    check_labeling,
    check_marginals,
    extract_labeling,
    objective,
    objective_of_labeling,
    one_hot,
)
from helpers import naive_objective, quad_objective, random_instance, random_marginals


def test_single_node_unary_objective():
    graph = CrfGraph(1, 2)
    pot = Potentials([[3.0, 1.0]])
    assert objective(graph, pot, [[1.0, 0.0]]) == pytest.approx(3.0, abs=1e-12)
    assert objective(graph, pot, [[0.0, 1.0]]) == pytest.approx(1.0, abs=1e-12)
    assert objective_of_labeling(graph, pot, [1]) == pytest.approx(1.0, abs=1e-12)


def test_two_node_identity_edge_counts_both_directions():
    graph = CrfGraph(2, 2, [(0, 1)])
    pot = Potentials(np.zeros((2, 2)), [np.eye(2)])
    mu = np.array([[1.0, 0.0], [1.0, 0.0]])
    assert objective(graph, pot, mu) == pytest.approx(2.0, abs=1e-12)


def test_three_node_chain_constant_labeling():
    graph = CrfGraph(3, 2, [(0, 1), (1, 2)])
    potts = np.eye(2)
    pot = Potentials(np.zeros((3, 2)), [potts, potts])
    assert objective_of_labeling(graph, pot, [0, 0, 0]) == pytest.approx(4.0, abs=1e-12)
    assert objective_of_labeling(graph, pot, [1, 1, 1]) == pytest.approx(4.0, abs=1e-12)
    # disagreeing neighbors earn nothing under a diagonal matrix
    assert objective_of_labeling(graph, pot, [0, 1, 0]) == pytest.approx(0.0, abs=1e-12)


def test_objective_matches_loop_oracles():
    rng = np.random.default_rng(7)
    for _ in range(15):
        graph, pot = random_instance(rng, 5, 3, edge_prob=0.6)
        mu = random_marginals(rng, 5, 3)
        expected = naive_objective(graph, pot, mu)
        assert objective(graph, pot, mu) == pytest.approx(expected, abs=1e-12)
        assert quad_objective(graph, pot, mu) == pytest.approx(expected, abs=1e-12)


def test_labeling_objective_equals_one_hot_relaxation():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(2, 4))
        graph, pot = random_instance(rng, n, k, edge_prob=0.5)
        labeling = rng.integers(0, k, size=n)
        direct = objective_of_labeling(graph, pot, labeling)
        relaxed = objective(graph, pot, one_hot(labeling, k))
        assert direct == pytest.approx(relaxed, abs=1e-12)


def test_transposing_edge_matrices_preserves_objective():
    # both directions of every edge are summed, so orientation washes out
    rng = np.random.default_rng(3)
    graph, pot = random_instance(rng, 6, 3, edge_prob=0.7)
    flipped = Potentials(pot.unary, pot.pairwise.transpose(0, 2, 1))
    mu = random_marginals(rng, 6, 3)
    assert objective(graph, pot, mu) == pytest.approx(
        objective(graph, flipped, mu), abs=1e-12
    )


def test_extract_labeling_argmax_and_ties():
    assert extract_labeling([[0.0, 1.0]]).tolist() == [1]
    assert extract_labeling([[0.5, 0.5]]).tolist() == [0]
    assert extract_labeling([[0.2, 0.3, 0.5]]).tolist() == [2]
    assert extract_labeling([[0.1, 0.8, 0.1], [0.7, 0.2, 0.1]]).tolist() == [1, 0]


def test_one_hot_rows():
    out = one_hot([2, 0], 3)
    assert out.tolist() == [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError, match="self-loop"):
        CrfGraph(3, 2, [(1, 1)])
    with pytest.raises(ValueError, match="duplicate"):
        CrfGraph(3, 2, [(0, 1), (0, 1)])
    with pytest.raises(ValueError, match="0 <= i < j"):
        CrfGraph(3, 2, [(2, 1)])
    with pytest.raises(ValueError, match="0 <= i < j"):
        CrfGraph(3, 2, [(0, 3)])
    with pytest.raises(ValueError, match="num_labels"):
        CrfGraph(3, 1)
    with pytest.raises(ValueError, match="num_nodes"):
        CrfGraph(0, 2)


def test_graph_neighbor_lists():
    graph = CrfGraph(4, 2, [(0, 2), (0, 1), (2, 3)])
    assert graph.neighbors == ((1, 2), (0,), (0, 3), (2,))
    assert graph.num_edges == 3


def test_potentials_validation():
    with pytest.raises(ValueError, match="finite"):
        Potentials([[np.inf, 0.0]])
    with pytest.raises(ValueError, match="2-D"):
        Potentials([1.0, 2.0])
    with pytest.raises(ValueError, match="pairwise"):
        Potentials(np.zeros((2, 2)), np.zeros((1, 3, 3)))


def test_dimension_mismatch_is_rejected():
    graph = CrfGraph(2, 2, [(0, 1)])
    with pytest.raises(ValueError, match="unary shape"):
        objective(graph, Potentials(np.zeros((3, 2))), np.full((3, 2), 0.5))
    with pytest.raises(ValueError, match="pairwise matrices"):
        objective(graph, Potentials(np.zeros((2, 2))), np.full((2, 2), 0.5))


def test_check_marginals_enforces_simplex():
    ok = check_marginals([[0.25, 0.75]], 1, 2)
    assert ok.dtype == np.float64
    with pytest.raises(ValueError, match="sums to"):
        check_marginals([[0.5, 0.6]])
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        check_marginals([[-0.2, 1.2]])
    with pytest.raises(ValueError, match="rows"):
        check_marginals([[1.0, 0.0]], num_nodes=2)


def test_check_labeling_bounds():
    out = check_labeling([0, 1, 1], 3, 2)
    assert out.dtype == np.int64
    with pytest.raises(ValueError, match="labels must lie"):
        check_labeling([0, 2], 2, 2)
    with pytest.raises(ValueError, match="shape"):
        check_labeling([0, 1], 3, 2)
