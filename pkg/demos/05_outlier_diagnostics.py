"""The multiplier as an outlier alarm the depth region cannot sound.

A single point walks away from a uniform cloud along the y axis.  The
convex-hull-regime depth region always contains it (depth is blind to
how FAR outside the mass a sample point sits), while the Lagrange
multiplier of the downhill direction grows affinely with the distance:
slope (1 - tau) / 4 per step under the sum convention.
"""

import numpy as np

from quantour import (
    Direction,
    directional_quantile,
    fixed_tau_region,
    mass_center_gap,
    multiplier_scan,
    outlier_scenario,
    sweep,
)

TAU_Q = 2.5 / 99.0
TAU_HULL = 0.5 / 99.0
DOWN = Direction([0.0, -1.0])


def main():
    print(f"{'step':>4} {'outlier y':>10} {'lambda':>10} {'delta':>8}  hull holds it")
    prev = None
    for step in range(15):
        cloud = outlier_scenario(7, step)
        h = directional_quantile(cloud, TAU_Q, DOWN)
        hull = fixed_tau_region(sweep(cloud, TAU_HULL))
        inside = hull.contains(cloud.points[-1]) != "outside"
        delta = "" if prev is None else f"{h.multiplier - prev:8.5f}"
        print(
            f"{step:>4} {0.5 + step / 4.0:>10.2f} {h.multiplier:>10.5f} "
            f"{delta:>8}  {inside}"
        )
        prev = h.multiplier
    print(f"\nexpected delta per step: (1 - tau)/4 = {(1 - TAU_Q) / 4.0:.5f}")

    cloud = outlier_scenario(7, 14)
    h = directional_quantile(cloud, TAU_Q, DOWN)
    mu_plus, mu_minus, gap = mass_center_gap(h, cloud)
    print(
        f"\nmass centers at step 14: above {np.round(mu_plus, 3)}, "
        f"below {np.round(mu_minus, 3)}, u-gap {gap:.3f}"
    )

    dirs = [Direction.from_angle(2.0 * np.pi * j / 16.0) for j in range(16)]
    series = multiplier_scan(cloud, TAU_Q, dirs)
    print("\nscan over 16 directions, flagged angles (degrees):")
    for idx in series.flagged:
        label, value = series.entries[idx]
        print(f"  {np.degrees(label):>8.1f}: lambda = {value:.4f}")
    print(f"median {series.median:.4f}, MAD {series.mad:.4f}")


if __name__ == "__main__":
    main()
