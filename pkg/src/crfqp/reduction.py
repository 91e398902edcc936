"""Label-consistency constraints and their null-space elimination.

A constraint set forces a group of nodes to share one label.  The
equality system E a = 0 (one +1/-1 row per consecutive node pair per
label) has a purely structural null space: replicate one supernode row
onto every member node.  Eliminating the constraints therefore amounts
to merging each set into a supernode, summing unary rows, summing
pairwise matrices over merged edge bundles, and folding edges internal
to a supernode into its unary term.  The reduced problem is again an
ordinary CRF over the supernodes.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .core import CrfGraph, Potentials, check_marginals

__all__ = [
    "ConstraintSets",
    "ReducedProblem",
    "build_constraint_matrix",
    "build_null_space_operator",
    "expansion_operator",
    "reduce_problem",
    "expand_solution",
]


@dataclass(frozen=True)
class ConstraintSets:
    """Pairwise-disjoint collections of node indices, each of size >= 2,
    stored as sorted tuples."""

    sets: tuple

    def __init__(self, sets=()):
        normalized = []
        seen = set()
        for s in sets:
            members = tuple(sorted(int(i) for i in s))
            if len(members) < 2:
                raise ValueError(f"constraint set {members} has fewer than 2 nodes")
            if len(set(members)) != len(members):
                raise ValueError(f"constraint set {members} has duplicate nodes")
            overlap = seen.intersection(members)
            if overlap:
                raise ValueError(f"constraint sets overlap on nodes {sorted(overlap)}")
            seen.update(members)
            normalized.append(members)
        object.__setattr__(self, "sets", tuple(normalized))

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def check_bounds(self, num_nodes):
        for s in self.sets:
            if s[-1] >= num_nodes:
                raise ValueError(f"constraint set {s} exceeds node count {num_nodes}")


@dataclass(frozen=True)
class ReducedProblem:
    """CRF over supernodes plus the map expanding its solutions back.

    node_to_super[i] is the supernode owning original node i; all nodes
    of one constraint set share a supernode, every other node gets a
    singleton.
    """

    super_graph: CrfGraph
    reduced: Potentials
    node_to_super: np.ndarray

    @property
    def num_supernodes(self):
        return self.super_graph.num_nodes


def build_constraint_matrix(graph, constraint_sets):
    """Sparse equality system (E, d) with d = 0 over the flattened
    marginal vector (node-major, label-minor).

    One row per consecutive pair of nodes within a set and per label:
    +1 on the first node's entry, -1 on the second's.  Row count is
    sum_k (|C_k| - 1) * num_labels.
    """
    constraint_sets.check_bounds(graph.num_nodes)
    k = graph.num_labels
    dim = graph.num_nodes * k
    rows, cols, data = [], [], []
    r = 0
    for members in constraint_sets:
        for a, b in zip(members[:-1], members[1:]):
            for p in range(k):
                rows.extend((r, r))
                cols.extend((a * k + p, b * k + p))
                data.extend((1.0, -1.0))
                r += 1
    e_mat = sp.csr_matrix((data, (rows, cols)), shape=(r, dim))
    return e_mat, np.zeros(r)


def build_null_space_operator(graph, constraint_sets):
    """Node -> supernode surjection realizing the null space of the
    constraint matrix.  Supernodes are numbered by first appearance in
    node order; the induced replication operator Z satisfies E @ Z = 0
    with exact structural zeros."""
    constraint_sets.check_bounds(graph.num_nodes)
    set_of_node = {}
    for idx, members in enumerate(constraint_sets):
        for i in members:
            set_of_node[i] = idx
    node_to_super = np.full(graph.num_nodes, -1, dtype=np.int64)
    set_super = {}
    next_id = 0
    for i in range(graph.num_nodes):
        s = set_of_node.get(i)
        if s is None:
            node_to_super[i] = next_id
            next_id += 1
        elif s in set_super:
            node_to_super[i] = set_super[s]
        else:
            set_super[s] = next_id
            node_to_super[i] = next_id
            next_id += 1
    return node_to_super


def expansion_operator(node_to_super, num_labels):
    """Sparse Z of shape (N*K, M*K): copies supernode-label variables
    onto their member nodes."""
    node_to_super = np.asarray(node_to_super, dtype=np.int64)
    n = node_to_super.shape[0]
    m = int(node_to_super.max()) + 1 if n else 0
    k = num_labels
    rows = np.arange(n * k)
    cols = (node_to_super[:, None] * k + np.arange(k)[None, :]).ravel()
    data = np.ones(n * k)
    return sp.csr_matrix((data, (rows, cols)), shape=(n * k, m * k))


def reduce_problem(graph, potentials, constraint_sets):
    """Eliminate the constraints, producing an unconstrained CRF over
    supernodes.

    Unary rows of merged nodes are summed.  Original edges crossing two
    supernodes are summed entrywise into one superedge (transposed when
    the merge reverses the canonical orientation).  Edges internal to a
    supernode contribute only through their matrix diagonal once labels
    agree, so each adds 2 * psi[p, p] to the supernode's unary score for
    label p (both directions of the undirected edge); this reproduces
    the original objective exactly at integral assignments.
    """
    from .core import _check_dims

    _check_dims(graph, potentials)
    node_to_super = build_null_space_operator(graph, constraint_sets)
    m = int(node_to_super.max()) + 1
    k = graph.num_labels

    rho = np.zeros((m, k))
    np.add.at(rho, node_to_super, potentials.unary)

    super_edges = []
    tau = {}
    for e, (i, j) in enumerate(graph.edges):
        a, b = int(node_to_super[i]), int(node_to_super[j])
        psi = potentials.pairwise[e]
        if a == b:
            rho[a] += 2.0 * np.diag(psi)
            continue
        key = (a, b) if a < b else (b, a)
        block = psi if a < b else psi.T
        if key in tau:
            tau[key] = tau[key] + block
        else:
            tau[key] = block.copy()
            super_edges.append(key)

    super_graph = CrfGraph(m, k, super_edges)
    pairwise = (
        np.stack([tau[key] for key in super_edges])
        if super_edges
        else np.zeros((0, k, k))
    )
    return ReducedProblem(super_graph, Potentials(rho, pairwise), node_to_super)


def expand_solution(reduced, reduced_marginals):
    """Copy each supernode's marginal row onto its member nodes.  The
    result satisfies every constraint set exactly (identical rows)."""
    mu = check_marginals(
        reduced_marginals, reduced.num_supernodes, reduced.super_graph.num_labels
    )
    return mu[reduced.node_to_super]
