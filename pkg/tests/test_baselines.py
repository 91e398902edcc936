"""Exhaustive MAP search and loopy max-sum against enumeration oracles."""

import numpy as np
import pytest

from crfqp import CrfGraph, Potentials, brute_force_map, lbp_map
from crfqp.baselines import BRUTE_FORCE_LIMIT
from helpers import enumerate_map, random_instance, random_tree


def test_brute_force_single_node():
    graph = CrfGraph(1, 2)
    labeling, value = brute_force_map(graph, Potentials([[3.0, 1.0]]))
    assert labeling.tolist() == [0]
    assert value == pytest.approx(3.0, abs=1e-12)


def test_brute_force_two_node_agreement_cases():
    graph = CrfGraph(2, 2, [(0, 1)])
    psi = np.eye(2)
    # unary pull vs agreement bonus, all four regimes enumerated by hand
    cases = [
        ([[5.0, 0.0], [5.0, 0.0]], [0, 0], 12.0),
        ([[0.0, 5.0], [0.0, 5.0]], [1, 1], 12.0),
        ([[5.0, 0.0], [0.0, 5.0]], [0, 1], 10.0),  # unaries beat the bonus
        ([[0.0, 0.1], [5.0, 0.0]], [0, 0], 7.0),  # bonus beats the 0.1 pull
    ]
    for unary, want_lab, want_val in cases:
        labeling, value = brute_force_map(graph, Potentials(unary, [psi]))
        assert labeling.tolist() == want_lab
        assert value == pytest.approx(want_val, abs=1e-12)


def test_brute_force_ties_break_lexicographically():
    graph = CrfGraph(3, 3, [(0, 1), (1, 2)])
    pot = Potentials(np.zeros((3, 3)), np.zeros((2, 3, 3)))
    labeling, value = brute_force_map(graph, pot)
    assert labeling.tolist() == [0, 0, 0]
    assert value == 0.0


def test_brute_force_matches_enumeration_oracle():
    rng = np.random.default_rng(61)
    for _ in range(40):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(2, 4))
        graph, pot = random_instance(rng, n, k, edge_prob=0.5)
        labeling, value = brute_force_map(graph, pot)
        want_lab, want_val = enumerate_map(graph, pot)
        assert value == pytest.approx(want_val, abs=1e-12)
        assert labeling.tolist() == want_lab.tolist()


def test_brute_force_refuses_huge_instances():
    graph = CrfGraph(25, 2)
    pot = Potentials(np.zeros((25, 2)))
    assert 2**25 > BRUTE_FORCE_LIMIT
    with pytest.raises(ValueError, match="too large"):
        brute_force_map(graph, pot)


def test_lbp_on_trees_matches_brute_force():
    rng = np.random.default_rng(67)
    for _ in range(30):
        n = int(rng.integers(2, 8))
        k = int(rng.integers(2, 4))
        graph, pot = random_tree(rng, n, k)
        labeling, report = lbp_map(graph, pot, damping=0.0)
        brute_lab, brute_val = brute_force_map(graph, pot)
        assert report.converged
        assert report.final_objective == pytest.approx(brute_val, abs=1e-9)
        assert labeling.tolist() == brute_lab.tolist()


def test_lbp_without_pairwise_reduces_to_unary_argmax():
    rng = np.random.default_rng(71)
    graph = CrfGraph(6, 3, [(0, 1), (2, 3), (4, 5)])
    unary = rng.uniform(-1, 1, size=(6, 3))
    pot = Potentials(unary, np.zeros((3, 3, 3)))
    labeling, _ = lbp_map(graph, pot)
    assert labeling.tolist() == np.argmax(unary, axis=1).tolist()


def test_lbp_edgeless_graph_short_circuits():
    graph = CrfGraph(3, 2)
    pot = Potentials([[1.0, 2.0], [4.0, 3.0], [0.0, 1.0]])
    labeling, report = lbp_map(graph, pot)
    assert labeling.tolist() == [1, 0, 1]
    assert report.iterations == 0 and report.converged


def test_lbp_near_optimal_on_small_grids():
    # 3x3 grid, nonnegative potentials: decoded value within 5% of the
    # optimum on at least 90 of 100 seeds
    edges = []
    for r in range(3):
        for c in range(3):
            i = 3 * r + c
            if c + 1 < 3:
                edges.append((i, i + 1))
            if r + 1 < 3:
                edges.append((i, i + 3))
    graph = CrfGraph(9, 3, sorted(edges))
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        pot = Potentials(
            rng.uniform(0, 1, size=(9, 3)), rng.uniform(0, 1, size=(12, 3, 3))
        )
        labeling, report = lbp_map(graph, pot)
        _, best = brute_force_map(graph, pot)
        assert report.final_objective <= best + 1e-9
        if report.final_objective >= 0.95 * best:
            hits += 1
    assert hits >= 90


def test_lbp_damping_validation_and_iteration_cap():
    graph = CrfGraph(2, 2, [(0, 1)])
    pot = Potentials([[1.0, 0.0], [0.0, 1.0]], [np.eye(2)])
    with pytest.raises(ValueError, match="damping"):
        lbp_map(graph, pot, damping=1.0)
    _, report = lbp_map(graph, pot, max_iters=3)
    assert report.iterations <= 3
