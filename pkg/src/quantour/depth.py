"""Halfspace (Tukey) depth oracles.

These are deliberately simple, brute-force computations used as ground
truth for the contour machinery: an O(n log n) angular-sweep point depth
in the plane, an O(n^3) depth-region construction from point-pair lines,
and a sampled-direction upper bound for higher dimensions.  None of them
share code with the quantile solver, which is the point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cloud import PointCloud
from .errors import DimensionMismatch
from .geometry import ConvexRegion2D, Direction, Hyperplane, intersect_halfplanes_2d
from .qr import validate_tau

# residual tolerance: boundary ties count as inside the closed halfplane
BOUNDARY_TOL = 1e-9
# angular slack implementing the same tie rule in the sweep
ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class DepthValue:
    """Halfspace depth of a point: ``count`` of ``n`` observations."""

    count: int
    n: int

    def __post_init__(self):
        if not (0 <= self.count <= self.n):
            raise ValueError(f"count {self.count} outside 0..{self.n}")

    @property
    def normalized(self) -> float:
        return self.count / self.n


def depth_2d(cloud: PointCloud, x) -> DepthValue:
    """Exact halfspace depth of x by angular sweep, O(n log n).

    The minimizing closed halfplane has x on its boundary, so only
    directions orthogonal to x-to-point rays matter.  Equivalently the
    depth is n minus the largest number of points inside an open
    half-circle of the point angles around x; the half-open windows
    ending at each data angle realize that maximum.
    """
    if cloud.k != 2:
        raise DimensionMismatch("depth_2d expects a planar cloud")
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != 2:
        raise DimensionMismatch("depth_2d expects a planar point")
    d = cloud.points - x
    scale = 1.0 + float(np.abs(cloud.points).max())
    r = np.hypot(d[:, 0], d[:, 1])
    coincident = int(np.sum(r <= BOUNDARY_TOL * scale))
    far = d[r > BOUNDARY_TOL * scale]
    m = far.shape[0]
    if m == 0:
        return DepthValue(coincident, cloud.n)
    A = np.sort(np.arctan2(far[:, 1], far[:, 0]))
    B = np.concatenate([A, A + 2.0 * np.pi])
    hi = np.searchsorted(B, A + 2.0 * np.pi + ANGLE_SLACK, side="right")
    lo = np.searchsorted(B, A + np.pi + ANGLE_SLACK, side="right")
    deepest_open = int((hi - lo).max())
    return DepthValue(coincident + m - deepest_open, cloud.n)


def depth_region_bruteforce_2d(cloud: PointCloud, tau: float) -> ConvexRegion2D:
    """Depth region {x : depth >= ceil(n tau)} from point-pair lines.

    Every facet of a depth region lies on a line through two sample
    points, so intersecting, over all directed pair normals u, the
    halfplanes {x : u'x >= (ceil(n tau))-th smallest of u'z} is exact.
    O(n^3) work; this is an oracle, not a production path.
    """
    if cloud.k != 2:
        raise DimensionMismatch("depth_region_bruteforce_2d expects a planar cloud")
    if cloud.n < 3:
        raise DimensionMismatch("need at least 3 points for a planar depth region")
    tau = validate_tau(tau, cloud.n)
    z = cloud.points
    n = z.shape[0]
    m0 = int(np.ceil(n * tau))

    ii, jj = np.triu_indices(n, k=1)
    w = z[jj] - z[ii]
    normals = np.column_stack([-w[:, 1], w[:, 0]])
    lengths = np.linalg.norm(normals, axis=1)
    good = lengths > 1e-12
    normals = normals[good] / lengths[good, None]
    normals = np.vstack([normals, -normals])

    proj = z @ normals.T
    offsets = np.partition(proj, m0 - 1, axis=0)[m0 - 1]
    halfplanes = [Hyperplane(nrm, off) for nrm, off in zip(normals, offsets)]
    return intersect_halfplanes_2d(halfplanes, method="lazy")


def depth_kd_approx(cloud: PointCloud, x, K: int, seed: int = 0, directions=None) -> DepthValue:
    """Upper bound on halfspace depth from K sampled directions.

    For each direction the one-sided count #{i : u'(z_i - x) >= -tol} is
    an upper bound on the depth; the minimum over directions tightens it.
    Deterministic given ``seed``; pass ``directions`` explicitly to
    evaluate fixed directions instead (K is then ignored).
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != cloud.k:
        raise DimensionMismatch(f"point has k={x.shape[0]}, cloud has k={cloud.k}")
    if directions is None:
        if K < 1:
            raise ValueError("K must be >= 1")
        rng = np.random.default_rng(seed)
        U = rng.normal(size=(int(K), cloud.k))
        U /= np.linalg.norm(U, axis=1)[:, None]
    else:
        U = np.array([d.vector if isinstance(d, Direction) else Direction(d).vector
                      for d in directions])
    scale = 1.0 + float(np.abs(cloud.points).max())
    side = (cloud.points - x) @ U.T >= -BOUNDARY_TOL * scale
    best = int(side.sum(axis=0).min())
    return DepthValue(best, cloud.n)
