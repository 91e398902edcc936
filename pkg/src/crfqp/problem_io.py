"""Self-contained JSON problem files.

One document carries the label count, unary scores, edge list with
pairwise matrices (or a dissimilarity scalar from which the standard
matrix is derived), optional constraint sets, and optional node
features.  Serialization is canonical: edges are written with explicit
matrices, so parse -> serialize -> parse is the identity on structures.
"""

import json
from dataclasses import dataclass

import numpy as np

from .core import CrfGraph, Potentials
from .potentials import NodeFeatures, pairwise_potential
from .reduction import ConstraintSets

__all__ = [
    "SCHEMA_VERSION",
    "ProblemFile",
    "problem_from_dict",
    "problem_to_dict",
    "load_problem",
    "save_problem",
]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ProblemFile:
    graph: CrfGraph
    potentials: Potentials
    constraint_sets: ConstraintSets
    features: tuple

    def equivalent(self, other):
        """Structural equality, used by round-trip checks."""
        if (
            self.graph.num_nodes != other.graph.num_nodes
            or self.graph.num_labels != other.graph.num_labels
            or self.graph.edges != other.graph.edges
        ):
            return False
        if not np.array_equal(self.potentials.unary, other.potentials.unary):
            return False
        if not np.array_equal(self.potentials.pairwise, other.potentials.pairwise):
            return False
        if self.constraint_sets.sets != other.constraint_sets.sets:
            return False
        if (self.features is None) != (other.features is None):
            return False
        if self.features is not None:
            if len(self.features) != len(other.features):
                return False
            for a, b in zip(self.features, other.features):
                if not (
                    np.array_equal(a.centroid, b.centroid)
                    and np.array_equal(a.mean_color, b.mean_color)
                    and np.array_equal(a.color_histogram, b.color_histogram)
                ):
                    return False
        return True


def _fail(field, message):
    raise ValueError(f"problem file field {field!r}: {message}")


def _require(doc, field, kind):
    if field not in doc:
        _fail(field, "missing")
    value = doc[field]
    if kind is not None and not isinstance(value, kind):
        _fail(field, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _as_float_array(value, field, shape):
    try:
        arr = np.asarray(value, dtype=np.float64)
    except (TypeError, ValueError):
        _fail(field, "not a numeric array")
    if arr.shape != shape:
        _fail(field, f"expected shape {shape}, got {arr.shape}")
    return arr


def problem_from_dict(doc):
    if not isinstance(doc, dict):
        raise ValueError("problem file must be a JSON object")
    version = _require(doc, "version", int)
    if version != SCHEMA_VERSION:
        _fail("version", f"unsupported version {version}, expected {SCHEMA_VERSION}")
    num_labels = _require(doc, "num_labels", int)
    num_nodes = _require(doc, "num_nodes", int)
    if num_labels < 2:
        _fail("num_labels", "must be at least 2")
    if num_nodes < 1:
        _fail("num_nodes", "must be at least 1")

    unary = _as_float_array(
        _require(doc, "unary", list), "unary", (num_nodes, num_labels)
    )

    edge_docs = _require(doc, "edges", list)
    edges = []
    pairwise = np.zeros((len(edge_docs), num_labels, num_labels))
    for idx, entry in enumerate(edge_docs):
        where = f"edges[{idx}]"
        if not isinstance(entry, dict):
            _fail(where, "must be an object")
        i = entry.get("i")
        j = entry.get("j")
        if not isinstance(i, int) or not isinstance(j, int):
            _fail(where, "i and j must be integers")
        if not 0 <= i < j < num_nodes:
            _fail(where, f"requires 0 <= i < j < num_nodes, got i={i}, j={j}")
        has_psi = "psi" in entry
        has_dis = "dis" in entry
        if has_psi == has_dis:
            _fail(where, "exactly one of psi or dis is required")
        if has_psi:
            pairwise[idx] = _as_float_array(
                entry["psi"], f"{where}.psi", (num_labels, num_labels)
            )
        else:
            dis = entry["dis"]
            if not isinstance(dis, (int, float)) or isinstance(dis, bool):
                _fail(f"{where}.dis", "must be a number")
            pairwise[idx] = pairwise_potential(float(dis), num_labels)
        edges.append((i, j))

    constraints = doc.get("constraints", [])
    if not isinstance(constraints, list):
        _fail("constraints", "must be a list of node lists")
    for idx, group in enumerate(constraints):
        if not isinstance(group, list) or not all(
            isinstance(node, int) for node in group
        ):
            _fail(f"constraints[{idx}]", "must be a list of integers")
    try:
        constraint_sets = ConstraintSets(constraints)
        constraint_sets.check_bounds(num_nodes)
    except ValueError as exc:
        _fail("constraints", str(exc))

    features = None
    if doc.get("features") is not None:
        feature_docs = _require(doc, "features", list)
        if len(feature_docs) != num_nodes:
            _fail("features", f"expected {num_nodes} entries, got {len(feature_docs)}")
        features = []
        for idx, entry in enumerate(feature_docs):
            where = f"features[{idx}]"
            if not isinstance(entry, dict):
                _fail(where, "must be an object")
            try:
                centroid = np.asarray(entry["centroid"], dtype=np.float64)
                mean_color = np.asarray(entry["mean_color"], dtype=np.float64)
                histogram = np.asarray(entry["color_histogram"], dtype=np.float64)
                features.append(NodeFeatures(centroid, mean_color, histogram))
            except KeyError as exc:
                _fail(where, f"missing {exc.args[0]}")
            except (TypeError, ValueError) as exc:
                _fail(where, str(exc))
        features = tuple(features)

    try:
        graph = CrfGraph(num_nodes=num_nodes, num_labels=num_labels, edges=edges)
        potentials = Potentials(unary=unary, pairwise=pairwise)
    except ValueError as exc:
        raise ValueError(f"problem file invalid: {exc}") from exc
    return ProblemFile(graph, potentials, constraint_sets, features)


def problem_to_dict(problem):
    doc = {
        "version": SCHEMA_VERSION,
        "num_labels": problem.graph.num_labels,
        "num_nodes": problem.graph.num_nodes,
        "unary": problem.potentials.unary.tolist(),
        "edges": [
            {"i": i, "j": j, "psi": problem.potentials.pairwise[e].tolist()}
            for e, (i, j) in enumerate(problem.graph.edges)
        ],
        "constraints": [list(group) for group in problem.constraint_sets.sets],
    }
    if problem.features is not None:
        doc["features"] = [
            {
                "centroid": f.centroid.tolist(),
                "mean_color": f.mean_color.tolist(),
                "color_histogram": f.color_histogram.tolist(),
            }
            for f in problem.features
        ]
    return doc


def load_problem(path):
    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(
                f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
    return problem_from_dict(doc)


def save_problem(problem, path):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(problem_to_dict(problem), handle, indent=1)
        handle.write("\n")
