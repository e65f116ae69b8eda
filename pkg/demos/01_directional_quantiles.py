"""Directional quantile hyperplanes on a seeded Gaussian cloud.

For a direction u and level tau, the fitted hyperplane b'z = a minimizes
the total check loss of b'z - a subject to b'u = 1.  In the plane it
passes through exactly two sample points, and the Lagrange multiplier of
the normalization equals the optimal objective.
"""

import numpy as np

from quantour import Direction, PointCloud, check_loss, directional_quantile

rng = np.random.default_rng(12)
cloud = PointCloud(rng.standard_normal((60, 2)))
tau = 0.178


def main():
    print(f"n = {cloud.n} points, tau = {tau}")
    print(f"{'angle':>8} {'a':>10} {'b1':>10} {'b2':>10} {'lambda':>10} fitted")
    for deg in range(0, 360, 45):
        u = Direction.from_angle(np.radians(deg))
        h = directional_quantile(cloud, tau, u)
        print(
            f"{deg:>7}d {h.a:>10.5f} {h.b[0]:>10.5f} {h.b[1]:>10.5f} "
            f"{h.multiplier:>10.5f} {h.fitted}"
        )

    # the multiplier is the objective: check it by hand for one direction
    u = Direction.from_angle(0.3)
    h = directional_quantile(cloud, tau, u)
    obj = float(np.sum(check_loss(tau, h.residual(cloud.points))))
    print(f"\nmultiplier {h.multiplier:.10f} vs summed check loss {obj:.10f}")

    # counts obey the coverage sandwich N- <= n tau <= N- + 2
    print(
        f"coverage: n_below = {h.n_below}, n tau = {cloud.n * tau:.1f}, "
        f"n_below + 2 = {h.n_below + 2}"
    )


if __name__ == "__main__":
    main()
