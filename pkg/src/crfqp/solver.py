"""Relaxed-QP MAP solver: closed-form gradient plus a normalized
multiplicative update.

The iterate lives on a product of per-node probability simplices.  With
nonnegative potentials the update

    mu[i, p] <- mu[i, p] * q[i, p] / sum_q mu[i, q] * q[i, q]

is a growth transform of the polynomial objective and never decreases
it, so potentials are first translated entrywise onto a small positive
floor.  Translating to the floor (rather than lifting only negative
entries) keeps the iterate sequence independent of any uniform offset
in the input; the offset is recorded and objectives are reported in the
original units.  All nodes update synchronously from the previous
iterate.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .core import (
    CrfGraph,
    Potentials,
    _check_dims,
    check_marginals,
    extract_labeling,
)
from .reduction import expand_solution, reduce_problem

__all__ = [
    "SolverConfig",
    "SolveReport",
    "ShiftOffsets",
    "SolverFailure",
    "shift_nonnegative",
    "shift_to_floor",
    "compute_gradient",
    "iterate",
    "solve",
    "solve_constrained",
]


class SolverFailure(RuntimeError):
    """Raised when the iteration produces non-finite values."""


@dataclass(frozen=True)
class SolverConfig:
    """max_iterations: iteration cap; tol: convergence threshold on the
    max absolute marginal change; epsilon_shift: floor added on top of
    the nonnegativity shift; init: 'uniform' or 'unary_softmax'."""

    max_iterations: int = 1000
    tol: float = 1e-6
    epsilon_shift: float = 1e-9
    init: str = "uniform"

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.init not in ("uniform", "unary_softmax"):
            raise ValueError(f"unknown init strategy {self.init!r}")


@dataclass
class SolveReport:
    iterations: int
    final_objective: float
    objective_trace: list = field(repr=False)
    converged: bool
    wall_time: float


@dataclass(frozen=True)
class ShiftOffsets:
    """Constants added to every unary / pairwise entry by
    `shift_nonnegative`."""

    unary: float
    pairwise: float

    def objective_offset(self, graph):
        """Amount by which the shift raises the objective at any point
        with simplex rows: unary * N + pairwise * 2 * |edges|."""
        return self.unary * graph.num_nodes + self.pairwise * 2 * graph.num_edges


def shift_nonnegative(potentials, epsilon=1e-9):
    """Shift unary and pairwise entries by per-block constants so every
    entry is >= `epsilon`.  Returns (shifted, offsets); offsets are 0
    for blocks already above the floor."""
    u_min = potentials.unary.min()
    u_off = 0.0 if u_min >= epsilon else epsilon - u_min
    if potentials.pairwise.size:
        p_min = potentials.pairwise.min()
        p_off = 0.0 if p_min >= epsilon else epsilon - p_min
    else:
        p_off = 0.0
    if u_off == 0.0 and p_off == 0.0:
        return potentials, ShiftOffsets(0.0, 0.0)
    shifted = Potentials(potentials.unary + u_off, potentials.pairwise + p_off)
    return shifted, ShiftOffsets(u_off, p_off)


def shift_to_floor(potentials, epsilon=1e-9):
    """Translate each block so its minimum entry equals `epsilon` exactly,
    whether that means shifting up or down.

    The multiplicative update is not invariant to constants added to its
    gradient, so merely lifting negative entries would make the iterate
    sequence depend on the input's offset.  Pinning the minimum to the
    floor makes uniformly shifted inputs produce identical effective
    problems, hence identical trajectories and labelings."""
    u_off = epsilon - potentials.unary.min()
    p_off = epsilon - potentials.pairwise.min() if potentials.pairwise.size else 0.0
    if u_off == 0.0 and p_off == 0.0:
        return potentials, ShiftOffsets(0.0, 0.0)
    shifted = Potentials(potentials.unary + u_off, potentials.pairwise + p_off)
    return shifted, ShiftOffsets(u_off, p_off)


def compute_gradient(graph, potentials, marginals):
    """Closed-form objective gradient at `marginals`.

    q[i, p] = unary[i, p] + 2 * sum_{j in N(i)} sum_q psi_ij[p, q] * mu[j, q]

    Each edge contributes through the symmetric part of its matrix,
    which leaves the objective unchanged and makes this the exact
    gradient for non-symmetric matrices as well; the dissimilarity
    construction always produces symmetric ones.
    """
    _check_dims(graph, potentials)
    mu = check_marginals(marginals, graph.num_nodes, graph.num_labels)
    q = potentials.unary.copy()
    if graph.num_edges:
        ea = graph.edge_array
        sym = 0.5 * (potentials.pairwise + potentials.pairwise.transpose(0, 2, 1))
        np.add.at(q, ea[:, 0], 2.0 * np.einsum("epq,eq->ep", sym, mu[ea[:, 1]]))
        np.add.at(q, ea[:, 1], 2.0 * np.einsum("epq,eq->ep", sym, mu[ea[:, 0]]))
    return q


def iterate(marginals, q):
    """One synchronous multiplicative step: reweight each row by its
    gradient entries, then renormalize.  Requires q >= 0 (negative
    entries signal a missing nonnegativity shift).  Rows whose
    normalizer is zero are left unchanged."""
    mu = np.asarray(marginals, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if q.shape != mu.shape:
        raise ValueError(f"gradient shape {q.shape} does not match {mu.shape}")
    if q.min(initial=0.0) < 0.0:
        raise ValueError("gradient has negative entries; shift potentials first")
    weighted = mu * q
    norms = weighted.sum(axis=1, keepdims=True)
    degenerate = norms[:, 0] == 0.0
    safe = np.where(norms == 0.0, 1.0, norms)
    out = weighted / safe
    if degenerate.any():
        out[degenerate] = mu[degenerate]
    return out


def _initial_marginals(graph, potentials, strategy):
    n, k = graph.num_nodes, graph.num_labels
    if strategy == "uniform":
        # Tiny deterministic perturbation: exact uniform rows are a fixed
        # point on symmetric instances.
        flat = np.arange(n * k, dtype=np.float64)
        mu = 1.0 / k + 1e-6 * (np.remainder(flat, 7.0) / 7.0).reshape(n, k)
    else:
        z = potentials.unary - potentials.unary.max(axis=1, keepdims=True)
        mu = np.exp(z)
    return mu / mu.sum(axis=1, keepdims=True)


def _quadratic_operator(graph, pairwise):
    """Sparse symmetric (N*K, N*K) operator Q with a^T Q a equal to the
    pairwise objective term and gradient contribution 2 * Q a."""
    n, k = graph.num_nodes, graph.num_labels
    dim = n * k
    if not graph.num_edges:
        return sp.csr_matrix((dim, dim))
    ea = graph.edge_array
    sym = 0.5 * (pairwise + pairwise.transpose(0, 2, 1))
    p_idx, q_idx = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    rows_ij = (ea[:, 0, None, None] * k + p_idx).ravel()
    cols_ij = (ea[:, 1, None, None] * k + q_idx).ravel()
    rows = np.concatenate([rows_ij, cols_ij])
    cols = np.concatenate([cols_ij, rows_ij])
    data = np.concatenate([sym.ravel(), sym.ravel()])
    return sp.csr_matrix((data, (rows, cols)), shape=(dim, dim))


def solve(graph, potentials, config=None, callback=None):
    """Maximize the relaxed objective by multiplicative gradient ascent.

    Parameters
    ----------
    graph : CrfGraph
    potentials : Potentials
        Arbitrary finite scores; translated internally onto the
        `epsilon_shift` floor, so uniformly shifted inputs solve
        identically.
    config : SolverConfig, optional
    callback : callable, optional
        Called as callback(iteration, marginals) after every update.

    Returns
    -------
    (marginals, report) : (ndarray, SolveReport)
        `report.objective_trace` holds the objective in original
        (unshifted) units at the initial point and after each iteration;
        it is non-decreasing up to roundoff.  `report.final_objective`
        equals the last trace entry.

    Raises
    ------
    SolverFailure
        If the iterate or gradient turns non-finite.
    """
    if config is None:
        config = SolverConfig()
    _check_dims(graph, potentials)
    t0 = time.perf_counter()
    shifted, offsets = shift_to_floor(potentials, config.epsilon_shift)
    offset = offsets.objective_offset(graph)
    quad = _quadratic_operator(graph, shifted.pairwise)
    b = shifted.unary.ravel()

    mu = _initial_marginals(graph, shifted, config.init)
    a = mu.ravel()
    qa = quad @ a
    trace = [float(b @ a + a @ qa) - offset]
    converged = False
    iterations = 0
    for it in range(1, config.max_iterations + 1):
        grad = (b + 2.0 * qa).reshape(mu.shape)
        if not np.all(np.isfinite(grad)):
            raise SolverFailure(f"non-finite gradient at iteration {it}")
        new_mu = iterate(mu, grad)
        if not np.all(np.isfinite(new_mu)):
            raise SolverFailure(f"non-finite marginals at iteration {it}")
        delta = float(np.max(np.abs(new_mu - mu)))
        mu = new_mu
        a = mu.ravel()
        qa = quad @ a
        trace.append(float(b @ a + a @ qa) - offset)
        iterations = it
        if callback is not None:
            callback(it, mu)
        if delta < config.tol:
            converged = True
            break
    report = SolveReport(
        iterations=iterations,
        final_objective=trace[-1],
        objective_trace=trace,
        converged=converged,
        wall_time=time.perf_counter() - t0,
    )
    return mu, report


def solve_constrained(graph, potentials, constraint_sets, config=None, callback=None):
    """Solve with hard label-consistency constraints: merge each
    constraint set into a supernode, solve the reduced problem, then
    replicate supernode rows back onto their members.

    Returns
    -------
    (marginals, labeling, report)
        The labeling assigns one label per constraint set by
        construction.  `report` describes the reduced solve; its
        objective equals the original one at integral points.
    """
    reduced = reduce_problem(graph, potentials, constraint_sets)
    reduced_mu, report = solve(reduced.super_graph, reduced.reduced, config, callback)
    mu = expand_solution(reduced, reduced_mu)
    return mu, extract_labeling(mu), report
