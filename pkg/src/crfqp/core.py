"""Pairwise CRF graphs, potentials, labelings, and the MAP objective.

The objective maximized by every solver in this package is

    F(mu) = sum_i sum_p unary[i, p] * mu[i, p]
          + sum_{(i,j) in edges} sum_{p,q} psi[e, p, q]
                * (mu[i, p] * mu[j, q] + mu[j, p] * mu[i, q])

i.e. each undirected edge contributes in both directions.  Integer
labelings are scored by the same expression with one-hot rows.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "CrfGraph",
    "Potentials",
    "objective",
    "objective_of_labeling",
    "extract_labeling",
    "one_hot",
    "check_marginals",
    "check_labeling",
]


@dataclass(frozen=True)
class CrfGraph:
    """Undirected graph over `num_nodes` nodes with `num_labels` labels.

    Edges are canonical (i, j) pairs with i < j; duplicates and
    self-loops are rejected.  Pairwise potential matrices are oriented
    along the stored pair: entry (p, q) scores label p on i and q on j.
    """

    num_nodes: int
    num_labels: int
    edges: tuple

    def __init__(self, num_nodes, num_labels, edges=()):
        if num_nodes < 1:
            raise ValueError(f"num_nodes must be positive, got {num_nodes}")
        if num_labels < 2:
            raise ValueError(f"num_labels must be >= 2, got {num_labels}")
        normalized = []
        seen = set()
        for pair in edges:
            i, j = int(pair[0]), int(pair[1])
            if i == j:
                raise ValueError(f"self-loop ({i}, {j}) is not allowed")
            if not (0 <= i < j < num_nodes):
                raise ValueError(
                    f"edge ({i}, {j}) must satisfy 0 <= i < j < {num_nodes}"
                )
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
            normalized.append((i, j))
        object.__setattr__(self, "num_nodes", int(num_nodes))
        object.__setattr__(self, "num_labels", int(num_labels))
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def num_edges(self):
        return len(self.edges)

    @cached_property
    def edge_array(self):
        """Edges as an int array of shape (num_edges, 2)."""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.asarray(self.edges, dtype=np.int64)

    @cached_property
    def neighbors(self):
        """Adjacency lists, one sorted tuple of neighbor indices per node."""
        adj = [[] for _ in range(self.num_nodes)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)


@dataclass(frozen=True)
class Potentials:
    """Unary scores (num_nodes, num_labels) and per-edge pairwise
    matrices (num_edges, num_labels, num_labels), aligned with
    ``graph.edges``.  All entries must be finite."""

    unary: np.ndarray
    pairwise: np.ndarray

    def __init__(self, unary, pairwise=None):
        unary = np.asarray(unary, dtype=np.float64)
        if unary.ndim != 2:
            raise ValueError(f"unary must be 2-D, got shape {unary.shape}")
        k = unary.shape[1]
        if pairwise is None:
            pairwise = np.zeros((0, k, k))
        pairwise = np.asarray(pairwise, dtype=np.float64)
        if pairwise.ndim != 3 or pairwise.shape[1:] != (k, k):
            raise ValueError(
                f"pairwise must have shape (E, {k}, {k}), got {pairwise.shape}"
            )
        if not np.all(np.isfinite(unary)) or not np.all(np.isfinite(pairwise)):
            raise ValueError("potentials must be finite")
        object.__setattr__(self, "unary", unary)
        object.__setattr__(self, "pairwise", pairwise)


def _check_dims(graph, potentials):
    n, k = graph.num_nodes, graph.num_labels
    if potentials.unary.shape != (n, k):
        raise ValueError(
            f"unary shape {potentials.unary.shape} does not match graph ({n}, {k})"
        )
    if potentials.pairwise.shape[0] != graph.num_edges:
        raise ValueError(
            f"{potentials.pairwise.shape[0]} pairwise matrices for "
            f"{graph.num_edges} edges"
        )


def check_marginals(marginals, num_nodes=None, num_labels=None, tol=1e-9):
    """Validate a marginals array: shape, entries in [0, 1], rows on the
    probability simplex within `tol`.  Returns the array as float64."""
    mu = np.asarray(marginals, dtype=np.float64)
    if mu.ndim != 2:
        raise ValueError(f"marginals must be 2-D, got shape {mu.shape}")
    if num_nodes is not None and mu.shape[0] != num_nodes:
        raise ValueError(f"expected {num_nodes} rows, got {mu.shape[0]}")
    if num_labels is not None and mu.shape[1] != num_labels:
        raise ValueError(f"expected {num_labels} columns, got {mu.shape[1]}")
    if mu.min(initial=0.0) < -1e-12 or mu.max(initial=0.0) > 1.0 + 1e-12:
        raise ValueError("marginal entries must lie in [0, 1]")
    sums = mu.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > tol):
        worst = int(np.argmax(np.abs(sums - 1.0)))
        raise ValueError(
            f"marginal row {worst} sums to {sums[worst]!r}, expected 1 +/- {tol}"
        )
    return mu


def check_labeling(labeling, num_nodes, num_labels):
    """Validate a labeling vector and return it as an int64 array."""
    x = np.asarray(labeling)
    if x.ndim != 1 or x.shape[0] != num_nodes:
        raise ValueError(f"labeling must have shape ({num_nodes},), got {x.shape}")
    x = x.astype(np.int64)
    if x.size and (x.min() < 0 or x.max() >= num_labels):
        raise ValueError(f"labels must lie in [0, {num_labels})")
    return x


def one_hot(labeling, num_labels):
    """One-hot marginal rows for an integer labeling."""
    x = np.asarray(labeling, dtype=np.int64)
    out = np.zeros((x.shape[0], num_labels))
    out[np.arange(x.shape[0]), x] = 1.0
    return out


def objective(graph, potentials, marginals):
    """Relaxed objective value at `marginals`.

    Parameters
    ----------
    graph : CrfGraph
    potentials : Potentials
    marginals : ndarray, shape (num_nodes, num_labels)
        Rows on the probability simplex.

    Returns
    -------
    float
        Unary term plus the pairwise term counted in both directions of
        every undirected edge.
    """
    _check_dims(graph, potentials)
    mu = check_marginals(marginals, graph.num_nodes, graph.num_labels)
    value = float(np.sum(potentials.unary * mu))
    if graph.num_edges:
        ea = graph.edge_array
        mi = mu[ea[:, 0]]
        mj = mu[ea[:, 1]]
        psi = potentials.pairwise
        value += float(np.einsum("epq,ep,eq->", psi, mi, mj))
        value += float(np.einsum("epq,ep,eq->", psi, mj, mi))
    return value


def objective_of_labeling(graph, potentials, labeling):
    """Integer objective: `objective` evaluated at one-hot marginals."""
    _check_dims(graph, potentials)
    x = check_labeling(labeling, graph.num_nodes, graph.num_labels)
    value = float(potentials.unary[np.arange(graph.num_nodes), x].sum())
    if graph.num_edges:
        ea = graph.edge_array
        xi = x[ea[:, 0]]
        xj = x[ea[:, 1]]
        eidx = np.arange(graph.num_edges)
        psi = potentials.pairwise
        value += float(psi[eidx, xi, xj].sum() + psi[eidx, xj, xi].sum())
    return value


def extract_labeling(marginals):
    """Per-node argmax labeling; ties break toward the lowest label index."""
    mu = np.asarray(marginals, dtype=np.float64)
    if mu.ndim != 2:
        raise ValueError(f"marginals must be 2-D, got shape {mu.shape}")
    return np.argmax(mu, axis=1).astype(np.int64)
