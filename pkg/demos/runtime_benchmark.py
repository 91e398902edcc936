"""Does eliminating constrained variables actually buy time?

Each constraint set removes (set size - 1) nodes from the problem, so
the constrained solver iterates on fewer variables and, empirically,
needs fewer iterations. This script sweeps scene sizes and coverage
fractions, prints the CSV the bench CLI would write, and summarizes the
wall-time ratios.
"""

from crfqp import rows_to_csv, run_benchmark, speedup_summary

SIZES = (176, 787)
FRACTIONS = (0.25, 0.75)


def main():
    rows = run_benchmark(sizes=SIZES, fractions=FRACTIONS, seed=0)

    print(rows_to_csv(rows))
    print(speedup_summary(rows))
    print()

    for fraction in FRACTIONS:
        cells = [r for r in rows if r.constraint_fraction == fraction]
        qp = {r.nodes: r for r in cells if r.solver == "qp"}
        cqp = {r.nodes: r for r in cells if r.solver == "cqp"}
        for nodes in sorted(qp):
            shrink = 100.0 * (1.0 - cqp[nodes].reduced_vars / qp[nodes].reduced_vars)
            print(
                f"{nodes} nodes at {fraction:.0%} coverage:"
                f" {shrink:.0f}% fewer variables,"
                f" {qp[nodes].iterations} -> {cqp[nodes].iterations} iterations"
            )


if __name__ == "__main__":
    main()
