"""Planted-scene comparison of the four decoders.

Generates a handful of 40x40 scenes with planted box objects, noisy
node features, and a matching synthetic point cloud, then scores unary
argmax, loopy max-sum, the relaxed QP, and the constrained QP against
the planted truth. Run it to see where the cloud constraints pay off.
"""

import numpy as np

from crfqp import evaluate_scene, generate_scene, summarize_reports

SEEDS = range(8)


def main():
    reports = {method: [] for method in ("unary", "lbp", "qp", "cqp")}
    for seed in SEEDS:
        scene = generate_scene(
            width=40, height=40, num_objects=6, num_labels=7, noise=0.6, seed=seed
        )
        results = evaluate_scene(scene)
        for method, result in results.items():
            reports[method].append(result.metrics)
        qp_f1 = results["qp"].metrics.macro_f1
        cqp_f1 = results["cqp"].metrics.macro_f1
        marker = "<-- constraints fixed something" if cqp_f1 > qp_f1 else ""
        print(
            f"seed {seed}: unary {results['unary'].metrics.macro_f1:.4f}"
            f"  lbp {results['lbp'].metrics.macro_f1:.4f}"
            f"  qp {qp_f1:.4f}  cqp {cqp_f1:.4f} {marker}"
        )

    print()
    print(summarize_reports(reports))

    means = {m: np.mean([r.macro_f1 for r in rs]) for m, rs in reports.items()}
    print()
    print(
        "macro-F1 ordering:"
        f" unary {means['unary']:.4f} < lbp {means['lbp']:.4f}"
        f" <= qp {means['qp']:.4f} < cqp {means['cqp']:.4f}"
    )


if __name__ == "__main__":
    main()
