"""Shared test utilities: independent oracles and instance factories.

Everything here restates library behavior in a deliberately different
form (explicit loops, union-find, itertools enumeration) so tests never
compare the implementation against itself.
"""

import itertools

import numpy as np
from scipy.spatial.distance import cdist

from crfqp import CrfGraph, Potentials


def random_graph(rng, num_nodes, num_labels, edge_prob=0.4):
    edges = [
        (i, j)
        for i in range(num_nodes)
        for j in range(i + 1, num_nodes)
        if rng.uniform() < edge_prob
    ]
    return CrfGraph(num_nodes, num_labels, edges)


def random_instance(rng, num_nodes, num_labels, edge_prob=0.4, low=-1.0, high=1.0):
    graph = random_graph(rng, num_nodes, num_labels, edge_prob)
    unary = rng.uniform(low, high, size=(num_nodes, num_labels))
    pairwise = rng.uniform(low, high, size=(graph.num_edges, num_labels, num_labels))
    return graph, Potentials(unary, pairwise)


def random_marginals(rng, num_nodes, num_labels):
    mu = rng.uniform(0.05, 1.0, size=(num_nodes, num_labels))
    return mu / mu.sum(axis=1, keepdims=True)


def random_disjoint_sets(rng, num_nodes, max_sets=3):
    """Disjoint node groups of size >= 2 drawn from a shuffled node list."""
    order = list(rng.permutation(num_nodes))
    sets = []
    while len(sets) < max_sets and len(order) >= 2:
        size = int(rng.integers(2, min(4, len(order)) + 1))
        sets.append(tuple(order[:size]))
        order = order[size:]
        if rng.uniform() < 0.3:
            break
    return sets


def naive_objective(graph, potentials, mu):
    """Triple-loop restatement of the double-counted objective."""
    mu = np.asarray(mu, dtype=np.float64)
    value = 0.0
    for i in range(graph.num_nodes):
        for p in range(graph.num_labels):
            value += potentials.unary[i, p] * mu[i, p]
    for e, (i, j) in enumerate(graph.edges):
        for p in range(graph.num_labels):
            for q in range(graph.num_labels):
                value += potentials.pairwise[e, p, q] * (
                    mu[i, p] * mu[j, q] + mu[j, p] * mu[i, q]
                )
    return value


def quad_objective(graph, potentials, mu):
    """Same polynomial via per-edge matrix products; fast enough to
    finite-difference."""
    mu = np.asarray(mu, dtype=np.float64)
    value = float(np.sum(potentials.unary * mu))
    for e, (i, j) in enumerate(graph.edges):
        psi = potentials.pairwise[e]
        value += float(mu[i] @ psi @ mu[j] + mu[j] @ psi @ mu[i])
    return value


def fd_gradient(graph, potentials, mu, h=1e-5):
    """Central finite differences of the raw polynomial."""
    grad = np.zeros_like(mu, dtype=np.float64)
    for i in range(mu.shape[0]):
        for p in range(mu.shape[1]):
            up = mu.copy()
            dn = mu.copy()
            up[i, p] += h
            dn[i, p] -= h
            grad[i, p] = (
                quad_objective(graph, potentials, up)
                - quad_objective(graph, potentials, dn)
            ) / (2.0 * h)
    return grad


def score_labeling(graph, potentials, labeling):
    """Loop-based integer objective."""
    value = 0.0
    for i in range(graph.num_nodes):
        value += potentials.unary[i, labeling[i]]
    for e, (i, j) in enumerate(graph.edges):
        value += potentials.pairwise[e, labeling[i], labeling[j]]
        value += potentials.pairwise[e, labeling[j], labeling[i]]
    return float(value)


def enumerate_map(graph, potentials):
    """Exhaustive MAP by itertools enumeration.  Strict improvement keeps
    the lexicographically smallest optimum (node 0 most significant)."""
    best, best_val = None, -np.inf
    for assign in itertools.product(range(graph.num_labels), repeat=graph.num_nodes):
        value = score_labeling(graph, potentials, assign)
        if value > best_val:
            best_val = value
            best = np.array(assign, dtype=np.int64)
    return best, best_val


def random_tree(rng, num_nodes, num_labels, low=-1.0, high=1.0):
    """Random spanning tree instance: each node attaches to an earlier one."""
    edges = []
    for i in range(1, num_nodes):
        parent = int(rng.integers(0, i))
        edges.append((parent, i))
    graph = CrfGraph(num_nodes, num_labels, edges)
    unary = rng.uniform(low, high, size=(num_nodes, num_labels))
    pairwise = rng.uniform(low, high, size=(graph.num_edges, num_labels, num_labels))
    return graph, Potentials(unary, pairwise)


def single_link_partition(points, radius):
    """Union-find single-link clustering over the dense distance matrix.
    Returns sorted clusters ordered by smallest member, mirroring the
    library's output convention."""
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    dist = cdist(points, points)
    for i, j in zip(*np.nonzero(dist <= radius)):
        if i < j:
            ri, rj = find(int(i)), find(int(j))
            if ri != rj:
                parent[ri] = rj
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])
