"""Halfspace depth and nested depth regions.

depth_2d computes the exact Tukey depth of a point by the rotating-line
scan; depth_region_bruteforce_2d intersects every pair-line halfspace
that keeps ceil(n tau) points on one side.  The sweep route from
02_contour_sweep produces the same region; here the brute force serves
as the narrative oracle.
"""

import numpy as np

from quantour import (
    PointCloud,
    depth_2d,
    depth_kd_approx,
    depth_region_bruteforce_2d,
    fixed_tau_region,
    hausdorff_distance,
    sweep,
)

rng = np.random.default_rng(23)
cloud = PointCloud(rng.standard_normal((45, 2)))


def main():
    center = cloud.points.mean(axis=0)
    print(f"n = {cloud.n}")
    for label, x in (("mean", center), ("far point", np.array([4.0, 4.0]))):
        d = depth_2d(cloud, x)
        approx = depth_kd_approx(cloud, x, K=201, seed=1)
        print(
            f"depth at {label}: {d.count}/{d.n} = {d.normalized:.4f} "
            f"(K=201 upper bound {approx.count})"
        )

    print("\nnested regions:")
    prev = None
    for tau in (0.101, 0.178, 0.305):
        region = depth_region_bruteforce_2d(cloud, tau)
        swept = fixed_tau_region(sweep(cloud, tau))
        gap = hausdorff_distance(region, swept)
        print(
            f"  tau = {tau}: area {region.area():.5f}, "
            f"sweep route within {gap:.2e}"
        )
        if prev is not None:
            shrunk = region.area() < prev
            print(f"    contained in the previous region: {shrunk}")
        prev = region.area()

    deep = depth_region_bruteforce_2d(cloud, 0.45)
    print(f"\ntau = 0.45 region: {deep.status} (deeper than any sample point)")


if __name__ == "__main__":
    main()
