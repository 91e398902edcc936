"""From a raw point cloud to constraint sets.

Builds a synthetic scan: a dense ground plane, two box-shaped objects
floating above it, and a light sprinkle of stray points. The pipeline
fits the dominant plane with RANSAC, drops it, single-link clusters the
rest, discards small clusters, and projects the survivors onto graph
nodes.
"""

import numpy as np

from crfqp import CloudParams, NodeProjection, build_constraint_sets, remove_ground_plane


def make_scan(rng):
    xs, ys = np.meshgrid(np.arange(0, 10, 0.25), np.arange(0, 10, 0.25))
    ground = np.stack(
        [xs.ravel(), ys.ravel(), rng.normal(0.0, 0.02, xs.size)], axis=1
    )

    crate = (2.0, 2.5, 1.2) + rng.uniform(-0.45, 0.45, size=(260, 3))
    barrel = (7.0, 6.0, 0.9) + rng.uniform(-0.35, 0.35, size=(210, 3))
    strays = rng.uniform((0, 0, 0.5), (10, 10, 3.0), size=(25, 3))

    cloud = np.vstack([ground, crate, barrel, strays])
    # ground and strays are outside the labeled grid, objects project
    # onto a handful of node ids each
    mapping = np.concatenate(
        [
            np.full(ground.shape[0], -1),
            np.resize([12, 13, 22, 23], crate.shape[0]),
            np.resize([57, 58], barrel.shape[0]),
            np.full(strays.shape[0], -1),
        ]
    )
    return cloud, NodeProjection(mapping)


def main():
    rng = np.random.default_rng(3)
    cloud, projection = make_scan(rng)
    params = CloudParams()

    plane, kept = remove_ground_plane(cloud, params)
    print(f"scan: {cloud.shape[0]} points")
    print(
        f"plane normal {np.round(plane.normal, 3)}, offset {plane.offset:.3f},"
        f" {cloud.shape[0] - kept.size} points removed"
    )

    sets = build_constraint_sets(cloud, params, projection)
    print(f"{len(sets)} constraint sets extracted:")
    for members in sets:
        print(f"  nodes {list(members)} must share a label")

    # the 25 strays never cluster past min_cluster_size, so only the two
    # objects survive
    assert len(sets) == 2


if __name__ == "__main__":
    main()
