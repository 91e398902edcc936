"""Runtime benchmark: unconstrained vs constrained solves across scene
sizes and constraint coverage levels, emitted as CSV."""

import csv
import io
import math
import time
from dataclasses import dataclass, fields

import numpy as np

from .reduction import ConstraintSets, reduce_problem
from .solver import SolverConfig, solve, solve_constrained
from .synthetic import generate_scene, tile_constraint_candidates

__all__ = [
    "BenchmarkRow",
    "grid_for_size",
    "constraint_prefix",
    "benchmark_constraint_sets",
    "run_benchmark",
    "rows_to_csv",
    "parse_csv",
    "speedup_summary",
]

CSV_COLUMNS = (
    "nodes",
    "labels",
    "constraint_fraction",
    "reduced_vars",
    "iterations",
    "wall_ms",
    "objective",
    "solver",
)


@dataclass(frozen=True)
class BenchmarkRow:
    nodes: int
    labels: int
    constraint_fraction: float
    reduced_vars: int
    iterations: int
    wall_ms: float
    objective: float
    solver: str


def grid_for_size(target_nodes):
    """Nearest W x H grid to a requested node count.

    Non-rectangular targets (e.g. primes) land on the closest feasible
    grid; callers should report the actual node count.
    """
    if target_nodes < 1:
        raise ValueError("node count must be positive")
    width = max(1, round(math.sqrt(target_nodes)))
    height = max(1, round(target_nodes / width))
    return width, height


def constraint_prefix(candidates, fraction, seed):
    """Seeded shuffle + prefix.  The shuffle depends only on the seed, so
    calls with the same seed and growing fractions select nested subsets
    and coverage grows monotonically."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("constraint fraction must lie in [0, 1]")
    order = np.random.default_rng(seed).permutation(len(candidates))
    count = int(round(fraction * len(candidates)))
    return ConstraintSets([candidates[i] for i in order[:count]])


def benchmark_constraint_sets(scene, fraction, seed):
    """Constraint selection for benchmark scenes.

    Object-label groups are always included: they model cloud-derived
    constraints, which exist wherever an object produced a blob.  The
    fraction scales background coverage (how much of the remaining
    scene has consistent 3D support), via a seeded shuffle shared
    across fractions so selections are nested.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("constraint fraction must lie in [0, 1]")
    candidates = tile_constraint_candidates(
        scene.true_labels, scene.width, scene.height
    )
    objects = [c for c in candidates if scene.true_labels[c[0]] != 0]
    background = [c for c in candidates if scene.true_labels[c[0]] == 0]
    order = np.random.default_rng(seed).permutation(len(background))
    count = int(round(fraction * len(background)))
    chosen = objects + [background[i] for i in order[:count]]
    return ConstraintSets(chosen)


BENCH_NOISE = 0.57
BENCH_PAIRWISE_WEIGHT = 0.15


def _scene_for_size(size, seed, num_labels, noise):
    width, height = grid_for_size(size)
    num_objects = max(2, min(6, (width * height) // 64))
    return generate_scene(
        width=width,
        height=height,
        num_objects=num_objects,
        num_labels=num_labels,
        noise=noise,
        seed=seed,
        pairwise_weight=BENCH_PAIRWISE_WEIGHT,
    )


def run_benchmark(
    sizes, fractions, seed=0, num_labels=7, noise=BENCH_NOISE, config=None
):
    """One (qp, cqp) row pair per (size, fraction) cell.

    Constraint sets come from truth-aligned tile groups with object
    groups always included (see benchmark_constraint_sets); within a
    size the per-fraction background selections are nested prefixes of
    one seeded shuffle, so `reduced_vars` strictly decreases as the
    fraction grows.  Wall times cover the full call including
    constraint reduction.  The default noise level sits where the
    unconstrained solver converges under its iteration cap at every
    size while still leaving slow conflicted rows for constraints to
    absorb.
    """
    config = config or SolverConfig()
    rows = []
    for size_index, size in enumerate(sizes):
        scene = _scene_for_size(size, seed + size_index, num_labels, noise)
        n, k = scene.num_nodes, scene.num_labels
        for fraction in fractions:
            start = time.perf_counter()
            _, report = solve(scene.graph, scene.potentials, config)
            qp_ms = 1e3 * (time.perf_counter() - start)
            rows.append(
                BenchmarkRow(
                    nodes=n,
                    labels=k,
                    constraint_fraction=fraction,
                    reduced_vars=n * k,
                    iterations=report.iterations,
                    wall_ms=qp_ms,
                    objective=report.final_objective,
                    solver="qp",
                )
            )

            sets = benchmark_constraint_sets(scene, fraction, seed + size_index)
            reduced = reduce_problem(scene.graph, scene.potentials, sets)
            start = time.perf_counter()
            _, _, report = solve_constrained(
                scene.graph, scene.potentials, sets, config
            )
            cqp_ms = 1e3 * (time.perf_counter() - start)
            rows.append(
                BenchmarkRow(
                    nodes=n,
                    labels=k,
                    constraint_fraction=fraction,
                    reduced_vars=reduced.super_graph.num_nodes * k,
                    iterations=report.iterations,
                    wall_ms=cqp_ms,
                    objective=report.final_objective,
                    solver="cqp",
                )
            )
    return rows


def rows_to_csv(rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.nodes,
                row.labels,
                row.constraint_fraction,
                row.reduced_vars,
                row.iterations,
                row.wall_ms,
                row.objective,
                row.solver,
            ]
        )
    return buffer.getvalue()


def parse_csv(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected benchmark CSV header: {header}")
    types = {f.name: f.type for f in fields(BenchmarkRow)}
    rows = []
    for record in reader:
        if not record:
            continue
        kwargs = {
            name: types[name](value) for name, value in zip(CSV_COLUMNS, record)
        }
        rows.append(BenchmarkRow(**kwargs))
    return rows


def speedup_summary(rows):
    """Per (size, fraction) wall-time ratio of qp over cqp."""
    cells = {}
    for row in rows:
        cells.setdefault((row.nodes, row.constraint_fraction), {})[row.solver] = row
    lines = []
    for (nodes, fraction), pair in sorted(cells.items()):
        if "qp" in pair and "cqp" in pair and pair["cqp"].wall_ms > 0:
            ratio = pair["qp"].wall_ms / pair["cqp"].wall_ms
            lines.append(
                f"nodes={nodes} fraction={fraction:g}: "
                f"qp {pair['qp'].wall_ms:.1f} ms / cqp {pair['cqp'].wall_ms:.1f} ms "
                f"= {ratio:.2f}x"
            )
    return "\n".join(lines)
