"""Point clouds and general-position checks.

The solvers in this package assume data in general position: no duplicate
points and, in the plane, no three points on a common line.  Degeneracies
are detected here and reported with offending row indices so they can be
repaired (for instance by :func:`jitter`).
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateData, DimensionMismatch, StillDegenerate

# Two points closer than this (in every coordinate) count as duplicates,
# and a triple with |cross product| below this counts as collinear.
GENERAL_POSITION_TOL = 1e-12

# Collinearity scans are O(n^3); above this row count only a deterministic
# subsample of triples is checked.
COLLINEAR_SCAN_LIMIT = 5000


class PointCloud:
    """Immutable n x k array of observation points.

    Parameters
    ----------
    points : array_like, shape (n, k)
        One row per observation.  The array is copied and frozen.
    """

    __slots__ = ("points",)

    def __init__(self, points):
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise DimensionMismatch(
                f"point cloud must be a nonempty 2-D array, got shape {pts.shape}"
            )
        if not np.all(np.isfinite(pts)):
            bad = np.nonzero(~np.isfinite(pts).all(axis=1))[0]
            raise DegenerateData("non-finite coordinates", indices=bad[:10])
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __setattr__(self, name, value):
        raise AttributeError("PointCloud is immutable")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def k(self) -> int:
        return self.points.shape[1]

    def __repr__(self):
        return f"PointCloud(n={self.n}, k={self.k})"

    def duplicate_rows(self, tol: float = GENERAL_POSITION_TOL):
        """Indices (i, j), i < j, of coincident rows."""
        z = self.points
        order = np.lexsort(z.T[::-1])
        pairs = []
        # coincident rows are adjacent after a lexicographic sort
        for a, b in zip(order[:-1], order[1:]):
            if np.all(np.abs(z[a] - z[b]) <= tol):
                pairs.append((min(a, b), max(a, b)))
        return pairs

    def collinear_triples(self, tol: float = GENERAL_POSITION_TOL, limit: int = 32):
        """Triples (i, j, l) of collinear rows; planar clouds only.

        Exhaustive for n <= COLLINEAR_SCAN_LIMIT, otherwise a deterministic
        subsample of triples is scanned.  Returns at most ``limit`` triples.
        """
        if self.k != 2:
            return []
        z = self.points
        n = self.n
        found = []
        if n <= COLLINEAR_SCAN_LIMIT:
            index_pool = np.arange(n)
        else:
            rng = np.random.default_rng(0)
            index_pool = np.sort(rng.choice(n, size=COLLINEAR_SCAN_LIMIT, replace=False))
        m = len(index_pool)
        pts = z[index_pool]
        # scale-aware tolerance on twice the triangle area
        scale = max(1.0, float(np.abs(pts).max()))
        area_tol = tol * scale * scale
        for ai in range(m - 2):
            a = pts[ai]
            d = pts[ai + 1 :] - a
            # cross(d_j, d_l) == 0 <=> triple (a, j, l) collinear
            cross = np.abs(d[:, 0][:, None] * d[:, 1][None, :] - d[:, 1][:, None] * d[:, 0][None, :])
            ji, li = np.nonzero(np.triu(cross <= area_tol, k=1))
            for j, l in zip(ji, li):
                found.append(
                    (int(index_pool[ai]), int(index_pool[ai + 1 + j]), int(index_pool[ai + 1 + l]))
                )
                if len(found) >= limit:
                    return found
        return found

    def require_general_position(self, check_collinear: bool | None = None):
        """Raise DegenerateData on duplicates or (planar) collinear triples.

        Collinearity is checked by default only for k == 2 clouds.
        """
        dup = self.duplicate_rows()
        if dup:
            flat = sorted({i for pair in dup for i in pair})
            raise DegenerateData("duplicate points", indices=flat)
        if check_collinear is None:
            check_collinear = self.k == 2
        if check_collinear and self.k == 2 and self.n >= 3:
            triples = self.collinear_triples(limit=4)
            if triples:
                flat = sorted({i for t in triples for i in t})
                raise DegenerateData("collinear triples", indices=flat)


def jitter(cloud: PointCloud, amplitude: float = 1e-5, seed: int = 0) -> PointCloud:
    """Perturb each coordinate by U(-amplitude, amplitude) noise.

    The perturbation is deterministic given ``seed``.  Raises
    StillDegenerate when the perturbed cloud fails the general-position
    check that jitter was meant to repair.
    """
    if amplitude <= 0:
        raise ValueError("jitter amplitude must be positive")
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-amplitude, amplitude, size=cloud.points.shape)
    out = PointCloud(cloud.points + noise)
    try:
        out.require_general_position()
    except DegenerateData as exc:
        raise StillDegenerate(
            f"cloud remains degenerate after jitter of amplitude {amplitude:g}: {exc}"
        ) from exc
    return out
