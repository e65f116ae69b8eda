"""Fixed-tau directional sweep and the resulting contour regions."""

import numpy as np
import pytest

from quantour import (
    BOUNDED,
    EMPTY,
    DegenerateData,
    DegenerateTau,
    DimensionMismatch,
    PointCloud,
    depth_region_bruteforce_2d,
    fixed_tau_region,
    hausdorff_distance,
    probability_contents,
    sweep,
)
from conftest import SQRT3, make_cloud

RNG = np.random.default_rng
TWO_PI = 2.0 * np.pi

# hexagon at tau = 1/4: six narrow arcs fit a polygon side, six wide arcs
# fit a vertex-skipping chord; the two widths tile the circle in pairs
HEX_SIDE_WIDTH = 0.380251206693
HEX_SKIP_WIDTH = 0.666946344504


def chord_objective(z, tau, pair, phi):
    """Check loss of the two-point hyperplane at direction angle phi.

    Independent of the sweep internals: build b from the pair's edge
    normal, normalize b'u = 1, accumulate the loss directly.
    """
    i, j = pair
    u = np.array([np.cos(phi), np.sin(phi)])
    w = z[j] - z[i]
    npr = np.array([-w[1], w[0]])
    dn = float(npr @ u)
    b = npr / dn
    r = z @ b - float(b @ z[i])
    return float(np.sum(r * (tau - (r < 0.0))))


def assert_tiling(result):
    arcs = result.arcs
    starts = np.array([a.start for a in arcs])
    ends = np.array([a.end for a in arcs])
    assert np.all(np.diff(starts) > 0)
    assert np.allclose(ends[:-1], starts[1:], atol=1e-9)
    assert abs((ends[-1] - TWO_PI) - starts[0]) <= 1e-9
    assert abs(sum(a.width for a in arcs) - TWO_PI) <= 1e-9


def test_hexagon_arc_structure(hexagon):
    result = sweep(hexagon, 0.25)
    assert len(result.arcs) == 12
    assert_tiling(result)
    widths = np.array([a.width for a in result.arcs])
    side = np.isclose(widths, HEX_SIDE_WIDTH, atol=1e-9)
    skip = np.isclose(widths, HEX_SKIP_WIDTH, atol=1e-9)
    assert side.sum() == 6 and skip.sum() == 6
    for arc, is_side in zip(result.arcs, side):
        i, j = arc.fitted
        gap = min((j - i) % 6, (i - j) % 6)
        if is_side:
            # polygon side: adjacent vertices, nothing strictly below
            assert gap == 1
            assert arc.hyperplane.n_below == 0
        else:
            # skip chord: one vertex strictly below
            assert gap == 2
            assert arc.hyperplane.n_below == 1


def test_hexagon_specific_arcs(hexagon):
    result = sweep(hexagon, 0.25)
    by_angle = {}
    for probe in (0.0, np.pi / 6.0):
        for a in result.arcs:
            if a.start - 1e-12 <= probe < a.end or (
                a.end > TWO_PI and probe + TWO_PI < a.end
            ):
                by_angle[probe] = a
    # direction (1, 0) fits the vertical chord x = -1/2
    assert set(by_angle[0.0].fitted) == {2, 4}
    # direction at 30 degrees fits the lower-left side
    assert set(by_angle[np.pi / 6.0].fitted) == {3, 4}


def test_hexagon_methods_agree(hexagon):
    par = sweep(hexagon, 0.25, method="parametric")
    enu = sweep(hexagon, 0.25, method="enumerate")
    assert len(par.arcs) == len(enu.arcs)
    for a, b in zip(par.arcs, enu.arcs):
        assert abs(a.start - b.start) <= 1e-9
        assert abs(a.end - b.end) <= 1e-9
        assert set(a.fitted) == set(b.fitted)
        assert a.orientation == b.orientation


def test_hexagon_region(hexagon):
    region = fixed_tau_region(sweep(hexagon, 0.25))
    assert region.status == BOUNDED
    assert len(region.halfplanes) == 6
    assert abs(region.area() - SQRT3 / 2.0) <= 1e-9
    target = np.array([0.5, SQRT3 / 6.0])
    assert np.linalg.norm(region.vertices - target, axis=1).min() <= 1e-9
    # region lies strictly inside the data hull: no sample point reaches it
    assert probability_contents(region, hexagon) == 0.0


def test_triangle_sweep(triangle):
    result = sweep(triangle, 0.3)
    # every arc fits a triangle side with nothing below
    assert len(result.arcs) == 3
    assert all(a.hyperplane.n_below == 0 for a in result.arcs)
    region = fixed_tau_region(result)
    assert region.status == BOUNDED
    assert abs(region.area() - 0.5) <= 1e-12
    assert probability_contents(region, triangle) == 1.0


def test_boundary_objective_ties(hexagon):
    # at an arc boundary the incoming and outgoing chords tie exactly
    z = hexagon.points
    result = sweep(hexagon, 0.25)
    arcs = list(result.arcs)
    for a, b in zip(arcs, arcs[1:] + [arcs[0]]):
        phi = a.end if a.end < TWO_PI else a.end - TWO_PI
        fa = chord_objective(z, 0.25, a.fitted, phi)
        fb = chord_objective(z, 0.25, b.fitted, phi)
        assert abs(fa - fb) <= 1e-9 * (1.0 + abs(fa))


def test_midpoint_global_optimality():
    # spot check against the all-pairs oracle at each arc midpoint
    rng = RNG(70)
    for _ in range(5):
        cloud = make_cloud(int(rng.integers(1, 1 << 30)), 10)
        tau = 0.305
        z = cloud.points
        n = cloud.n
        result = sweep(cloud, tau)
        for arc in result.arcs:
            mid = 0.5 * (arc.start + arc.end)
            u = np.array([np.cos(mid), np.sin(mid)])
            best = np.inf
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    w = z[j] - z[i]
                    dn = float(-w[1] * u[0] + w[0] * u[1])
                    if abs(dn) < 1e-12:
                        continue
                    best = min(best, chord_objective(z, tau, (i, j), mid))
            got = chord_objective(z, tau, arc.fitted, mid)
            assert abs(got - best) <= 1e-9 * (1.0 + abs(best))


def test_parametric_matches_enumeration():
    # the spec for this sweep: both routes produce identical arc systems
    rng = RNG(71)
    for _ in range(200):
        n = int(rng.integers(5, 31))
        cloud = make_cloud(int(rng.integers(1, 1 << 30)), n)
        tau = float(rng.choice([0.101, 0.178, 0.305, 0.404]))
        if abs(n * tau - round(n * tau)) < 1e-6:
            tau += 1.3e-3
        par = sweep(cloud, tau, method="parametric")
        enu = sweep(cloud, tau, method="enumerate")
        assert len(par.arcs) == len(enu.arcs)
        for a, b in zip(par.arcs, enu.arcs):
            assert abs(a.start - b.start) <= 1e-9
            assert abs(a.end - b.end) <= 1e-9
            assert set(a.fitted) == set(b.fitted)
        assert_tiling(par)


def test_region_matches_depth_oracle():
    rng = RNG(72)
    for _ in range(25):
        n = int(rng.integers(8, 40))
        cloud = make_cloud(int(rng.integers(1, 1 << 30)), n)
        tau = float(rng.choice([0.101, 0.178, 0.305]))
        region = fixed_tau_region(sweep(cloud, tau))
        oracle = depth_region_bruteforce_2d(cloud, tau)
        assert region.status == oracle.status
        if region.status == BOUNDED:
            assert hausdorff_distance(region, oracle) <= 1e-7
            assert abs(region.area() - oracle.area()) <= 1e-9 * (1 + oracle.area())


def test_region_facets_come_from_swept_lines():
    cloud = make_cloud(73, 30)
    result = sweep(cloud, 0.178)
    region = fixed_tau_region(result)
    assert region.status == BOUNDED
    lines = [(h.b, h.a) for h in result.hyperplanes]
    for facet in region.halfplanes:
        hit = False
        for b, a in lines:
            nb = np.linalg.norm(b)
            if (
                np.allclose(facet.normal, np.asarray(b) / nb, atol=1e-7)
                and abs(facet.offset - a / nb) <= 1e-7
            ):
                hit = True
                break
        assert hit


def test_region_nesting():
    cloud = make_cloud(74, 35)
    inner = fixed_tau_region(sweep(cloud, 0.305))
    outer = fixed_tau_region(sweep(cloud, 0.101))
    assert inner.status == BOUNDED and outer.status == BOUNDED
    from quantour import OUTSIDE

    for v in inner.vertices:
        assert outer.contains(v, tol=1e-9) != OUTSIDE


def test_region_affine_equivariance():
    cloud = make_cloud(75, 24)
    A = np.array([[1.3, 0.4], [-0.1, 0.8]])
    t = np.array([0.7, -2.0])
    mapped = PointCloud(cloud.points @ A.T + t)
    tau = 0.178
    r0 = fixed_tau_region(sweep(cloud, tau))
    r1 = fixed_tau_region(sweep(mapped, tau))
    assert r0.status == r1.status == BOUNDED
    from quantour import ConvexRegion2D

    pushed = ConvexRegion2D.from_vertices(r0.vertices @ A.T + t)
    assert hausdorff_distance(pushed, r1) <= 1e-7


def test_empty_region_at_high_level(square):
    result = sweep(square, 0.7)
    region = fixed_tau_region(result)
    assert region.status == EMPTY
    assert probability_contents(region, square) == 0.0


def test_arc_and_pivot_economy():
    for seed, n in ((76, 50), (77, 120)):
        cloud = make_cloud(seed, n)
        result = sweep(cloud, 0.178)
        assert len(result.arcs) <= n * (n - 1)  # 2 * C(n, 2)
        assert result.n_pivots <= 2 * len(result.arcs) + 16


def test_sweep_input_validation(collinear5):
    with pytest.raises(DegenerateData):
        sweep(PointCloud(collinear5), 0.305)
    cloud = make_cloud(78, 10)
    with pytest.raises(DegenerateTau):
        sweep(cloud, 0.3)
    with pytest.raises(ValueError):
        sweep(cloud, 0.305, method="bogus")
    with pytest.raises(DimensionMismatch):
        sweep(PointCloud(np.eye(3)), 0.305)


def test_sweep_determinism():
    cloud = make_cloud(79, 40)
    a = sweep(cloud, 0.101)
    b = sweep(cloud, 0.101)
    assert len(a.arcs) == len(b.arcs)
    for x, y in zip(a.arcs, b.arcs):
        assert x.start == y.start and x.end == y.end and x.fitted == y.fitted
