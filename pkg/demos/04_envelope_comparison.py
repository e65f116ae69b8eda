"""Fixed-direction envelopes versus the exact contour.

The cheap alternative to the full sweep pins b = u and takes the
ceil(n tau)-th order statistic of the projections over K equispaced
directions.  The envelope always contains the exact region; its excess
area decays like 1/K because the deficit concentrates at the region's
kinks.  The sweep gives the exact region at K = infinity for free.
"""

import numpy as np

from quantour import (
    EnvelopeConfig,
    PointCloud,
    compare_regions,
    fixed_tau_region,
    km_envelope,
    sweep,
)

rng = np.random.default_rng(34)
cloud = PointCloud(rng.standard_normal((80, 2)))
tau = 0.178


def main():
    exact = fixed_tau_region(sweep(cloud, tau))
    print(
        f"exact region: {len(exact.halfplanes)} facets, area {exact.area():.6f}"
    )
    print(f"\n{'K':>6} {'facets':>7} {'area gap':>12} {'hausdorff':>12} contains")
    prev = None
    for K in (7, 21, 64, 201, 2001):
        env = km_envelope(cloud, EnvelopeConfig(K=K, tau=tau))
        cmp = compare_regions(exact, env)
        ratio = "" if prev is None else f"  ({prev / cmp.area_gap:.2f}x smaller)"
        print(
            f"{K:>6} {cmp.facets_km:>7} {cmp.area_gap:>12.6f} "
            f"{cmp.hausdorff:>12.6f} {cmp.km_contains_exact}{ratio}"
        )
        prev = cmp.area_gap

    print(
        "\nthe envelope is a superset at every K; refining directions only"
        "\nremoves area, and the exact facet count never changes."
    )


if __name__ == "__main__":
    main()
