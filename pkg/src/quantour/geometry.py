"""Directions, hyperplanes, and exact planar halfplane intersection.

Conventions
-----------
A ``Hyperplane`` stores the equation ``normal' x = offset``.  Wherever a
halfplane is meant, it is the closed upper side ``normal' x >= offset``.
Region vertices are counterclockwise.  All residual tests use the module
tolerance GEOM_TOL unless a caller passes something else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    NotBounded,
    SingularSystem,
)

# absolute tolerance on halfplane residuals b'x - a
GEOM_TOL = 1e-9
# tolerance on unit norms and angle comparisons
UNIT_TOL = 1e-12
# initial bounding-box half-width factor for clipping
BOX_FACTOR = 1e6

BOUNDED = "bounded"
UNBOUNDED = "unbounded"
EMPTY = "empty"

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"


class Direction:
    """Unit vector in R^k.

    Any nonzero vector is accepted and normalized, so ``Direction([3, 4])``
    has vector (0.6, 0.8).
    """

    __slots__ = ("vector",)

    def __init__(self, vector):
        v = np.array(vector, dtype=float).ravel()
        if v.size == 0 or not np.all(np.isfinite(v)):
            raise DimensionMismatch("direction must be a finite vector")
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise ValueError("direction must be nonzero")
        v /= norm
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)

    def __setattr__(self, name, value):
        raise AttributeError("Direction is immutable")

    @classmethod
    def from_angle(cls, phi: float) -> "Direction":
        """Planar direction (cos phi, sin phi)."""
        return cls([np.cos(phi), np.sin(phi)])

    @property
    def k(self) -> int:
        return self.vector.shape[0]

    @property
    def angle(self) -> float:
        """Polar angle in (-pi, pi]; planar directions only."""
        if self.k != 2:
            raise DimensionMismatch("angle is defined for planar directions only")
        return float(np.arctan2(self.vector[1], self.vector[0]))

    def __repr__(self):
        return f"Direction({np.array2string(self.vector, precision=6)})"


@dataclass(frozen=True)
class Hyperplane:
    """Affine hyperplane {x : normal' x = offset}."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.array(self.normal, dtype=float).ravel()
        if n.size == 0 or not np.all(np.isfinite(n)) or np.linalg.norm(n) == 0.0:
            raise DimensionMismatch("hyperplane normal must be finite and nonzero")
        n.setflags(write=False)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def k(self) -> int:
        return self.normal.shape[0]

    def residual(self, points) -> np.ndarray:
        """Signed residuals normal' x - offset, vectorized over rows."""
        pts = np.asarray(points, dtype=float)
        return pts @ self.normal - self.offset

    def unit(self) -> "Hyperplane":
        """Same hyperplane with unit normal (offset rescaled to match)."""
        norm = float(np.linalg.norm(self.normal))
        return Hyperplane(self.normal / norm, self.offset / norm)


@dataclass(frozen=True)
class OrthoBasis:
    """Orthonormal basis of the orthogonal complement of a direction.

    ``matrix`` is k x (k-1) with orthonormal columns, each orthogonal to
    ``direction.vector`` within UNIT_TOL.
    """

    direction: Direction
    matrix: np.ndarray


def orthocomplement_basis(u: Direction) -> OrthoBasis:
    """Canonical orthonormal basis of the complement of ``u``.

    Gram-Schmidt applied to the standard basis vectors e_j in index order,
    skipping the coordinate where |u_j| is largest (first such index on
    ties).  Deterministic, so repeated calls agree exactly.
    """
    k = u.k
    if k < 2:
        raise DimensionTooSmall("orthogonal complement needs ambient dimension >= 2")
    skip = int(np.argmax(np.abs(u.vector)))
    basis = [u.vector]
    cols = []
    for j in range(k):
        if j == skip:
            continue
        v = np.zeros(k)
        v[j] = 1.0
        for w in basis:
            v = v - (v @ w) * w
        norm = float(np.linalg.norm(v))
        if norm <= UNIT_TOL:
            raise SingularSystem("orthogonalization breakdown")
        v /= norm
        basis.append(v)
        cols.append(v)
    m = np.column_stack(cols)
    m.setflags(write=False)
    return OrthoBasis(u, m)


def polygon_area(vertices) -> float:
    """Shoelace area of a simple polygon; 0.0 for fewer than 3 vertices."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[0] < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    s = x @ np.roll(y, -1) - y @ np.roll(x, -1)
    return float(abs(s)) / 2.0


@dataclass(frozen=True)
class ConvexRegion2D:
    """Closed convex planar region.

    vertices : (m, 2) counterclockwise array; empty for empty or unbounded
        regions.
    halfplanes : generating constraints ``normal' x >= offset``.  For a
        bounded intersection these are exactly the facets (redundant
        members removed); for other statuses the deduplicated inputs.
    status : one of BOUNDED, UNBOUNDED, EMPTY.
    """

    vertices: np.ndarray
    halfplanes: tuple
    status: str

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, 2)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "halfplanes", tuple(self.halfplanes))

    @classmethod
    def empty(cls, halfplanes=()) -> "ConvexRegion2D":
        return cls(np.empty((0, 2)), tuple(halfplanes), EMPTY)

    @classmethod
    def from_vertices(cls, vertices) -> "ConvexRegion2D":
        """Bounded region from its vertex list (either orientation).

        Requires at least 3 distinct vertices of a convex polygon; the
        stored copy is counterclockwise.
        """
        v = np.array(vertices, dtype=float).reshape(-1, 2)
        if v.shape[0] < 3:
            raise DimensionMismatch("a bounded region needs at least 3 vertices")
        x, y = v[:, 0], v[:, 1]
        signed = (x @ np.roll(y, -1) - y @ np.roll(x, -1)) / 2.0
        if signed < 0:
            v = v[::-1].copy()
        edges = np.roll(v, -1, axis=0) - v
        cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(
            edges, -1, axis=0
        )[:, 0]
        scale = float(np.abs(v).max()) + 1.0
        if np.any(cross < -GEOM_TOL * scale * scale):
            raise DimensionMismatch("vertices do not describe a convex polygon")
        planes = []
        for p, d in zip(v, edges):
            n = np.array([-d[1], d[0]])
            norm = float(np.linalg.norm(n))
            if norm <= UNIT_TOL * scale:
                continue
            planes.append(Hyperplane(n / norm, float(n @ p) / norm))
        return cls(v, tuple(planes), BOUNDED)

    def area(self) -> float:
        if self.status == EMPTY:
            return 0.0
        if self.status == UNBOUNDED:
            raise NotBounded("area of an unbounded region")
        return polygon_area(self.vertices)

    def contains(self, point, tol: float = GEOM_TOL) -> str:
        """Classify a point as INSIDE, BOUNDARY, or OUTSIDE."""
        return self.classify_many(np.asarray(point, dtype=float).reshape(1, 2), tol=tol)[0]

    def classify_many(self, points, tol: float = GEOM_TOL):
        """Vectorized contains(): list of INSIDE/BOUNDARY/OUTSIDE labels."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise DimensionMismatch("expected an array of planar points")
        if self.status == EMPTY:
            return [OUTSIDE] * pts.shape[0]
        if not self.halfplanes:
            # whole plane
            return [INSIDE] * pts.shape[0]
        B = np.array([h.normal for h in self.halfplanes])
        A = np.array([h.offset for h in self.halfplanes])
        res = pts @ B.T - A
        worst = res.min(axis=1)
        return [
            OUTSIDE if w < -tol else (BOUNDARY if w <= tol else INSIDE) for w in worst
        ]


def point_in_region(region: ConvexRegion2D, point, tol: float = GEOM_TOL) -> str:
    """Classify ``point`` against ``region`` (INSIDE / BOUNDARY / OUTSIDE)."""
    return region.contains(point, tol=tol)


def hausdorff_distance(a: ConvexRegion2D, b: ConvexRegion2D) -> float:
    """Hausdorff distance between two bounded nonempty convex regions.

    For convex polygons the directed distance is attained at a vertex of
    the source polygon, so scanning vertices against the other boundary
    is exact.
    """
    for r in (a, b):
        if r.status != BOUNDED:
            raise NotBounded("Hausdorff distance needs bounded nonempty regions")

    def directed(src: ConvexRegion2D, dst: ConvexRegion2D) -> float:
        labels = dst.classify_many(src.vertices)
        P = src.vertices[[lab == OUTSIDE for lab in labels]]
        if P.shape[0] == 0:
            return 0.0
        dv = dst.vertices
        m = dv.shape[0]
        best = np.full(P.shape[0], np.inf)
        for i in range(m):
            s, e = dv[i], dv[(i + 1) % m]
            d = e - s
            denom = float(d @ d)
            if denom == 0.0:
                t = np.zeros(P.shape[0])
            else:
                t = np.clip((P - s) @ d / denom, 0.0, 1.0)
            best = np.minimum(best, np.linalg.norm(P - (s + t[:, None] * d), axis=1))
        return float(best.max())

    return max(directed(a, b), directed(b, a))


def _dedupe_directions(B: np.ndarray, A: np.ndarray):
    """Merge halfplanes with the same unit normal, keeping the largest offset.

    Returns (B, A, angles) sorted by polar angle of the normal.
    """
    angles = np.arctan2(B[:, 1], B[:, 0])
    order = np.lexsort((-A, angles))
    B, A, angles = B[order], A[order], angles[order]
    keep_B, keep_A, keep_ang = [], [], []
    for i in range(len(A)):
        if keep_ang and abs(angles[i] - keep_ang[-1]) <= UNIT_TOL:
            # same direction: the earlier (larger A) entry dominates
            continue
        keep_B.append(B[i])
        keep_A.append(A[i])
        keep_ang.append(angles[i])
    # wraparound: angles near -pi and near pi are the same direction
    if len(keep_ang) >= 2 and (keep_ang[0] + 2 * np.pi) - keep_ang[-1] <= UNIT_TOL:
        if keep_A[-1] > keep_A[0]:
            keep_B[0], keep_A[0], keep_ang[0] = keep_B[-1], keep_A[-1], keep_ang[-1] - 2 * np.pi
        del keep_B[-1], keep_A[-1], keep_ang[-1]
    return np.array(keep_B), np.array(keep_A), np.array(keep_ang)


def _clip(V: np.ndarray, b: np.ndarray, a: float, eps: float) -> np.ndarray:
    """Clip CCW polygon V by the halfplane b'x >= a (vectorized)."""
    m = V.shape[0]
    if m == 0:
        return V
    r = V @ b - a
    keep = r >= -eps
    if np.all(keep):
        return V
    if not np.any(keep):
        return V[:0]
    rn = np.roll(r, -1)
    keep_next = np.roll(keep, -1)
    crossing = keep != keep_next
    Vn = np.roll(V, -1, axis=0)
    t = r[crossing] / (r[crossing] - rn[crossing])
    P = V[crossing] + t[:, None] * (Vn[crossing] - V[crossing])
    # each index i emits V[i] when kept, then the edge crossing if any
    counts = keep.astype(np.int64) + crossing.astype(np.int64)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    out = np.empty((int(counts.sum()), 2))
    out[starts[keep]] = V[keep]
    out[starts[crossing] + keep[crossing]] = P
    return out


def _dedupe_ring(V: np.ndarray, tol: float) -> np.ndarray:
    """Drop consecutive (cyclically) duplicate vertices."""
    if V.shape[0] < 2:
        return V
    d = np.abs(V - np.roll(V, -1, axis=0)).max(axis=1)
    return V[d > tol]


def intersect_halfplanes_2d(halfplanes: Sequence[Hyperplane], method: str = "auto") -> ConvexRegion2D:
    """Intersection of closed halfplanes {x : normal' x >= offset}.

    Parameters
    ----------
    halfplanes : sequence of Hyperplane
        Planar constraints; normals need not be unit.
    method : {"auto", "lazy", "eager"}
        "lazy" repeatedly clips a bounding box by the currently most
        violated constraint and permanently drops satisfied ones; it is
        output sensitive and the right choice when few inputs are facets.
        "eager" clips by every constraint in normal-angle order and wins
        when most inputs are facets (dense direction grids).  "auto"
        currently selects "lazy".

    Returns
    -------
    ConvexRegion2D
        For a bounded result, ``halfplanes`` holds exactly the facets and
        every vertex lies on two of them (within GEOM_TOL) while
        satisfying all inputs.  Lower-dimensional intersections (points,
        segments) are reported as EMPTY.

    Raises
    ------
    SingularSystem
        If the numerical clipping cannot certify its result.
    """
    planes = [h.unit() for h in halfplanes]
    for h in planes:
        if h.k != 2:
            raise DimensionMismatch("intersect_halfplanes_2d expects planar halfplanes")
    if not planes:
        return ConvexRegion2D(np.empty((0, 2)), (), UNBOUNDED)
    if method not in ("auto", "lazy", "eager"):
        raise ValueError(f"unknown method {method!r}")

    B = np.array([h.normal for h in planes])
    A = np.array([h.offset for h in planes])
    B, A, angles = _dedupe_directions(B, A)
    dedup = tuple(Hyperplane(b, a) for b, a in zip(B, A))

    # recession analysis via cyclic gaps between normal angles
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))
    widest = int(np.argmax(gaps))
    max_gap = float(gaps[widest])
    if max_gap > np.pi + 1e-12:
        return ConvexRegion2D(np.empty((0, 2)), dedup, UNBOUNDED)
    if max_gap > np.pi - 1e-12:
        # normals span a closed half-circle; the two gap endpoints are
        # antipodal and decide feasibility of the resulting strip
        i = widest
        j = (widest + 1) % len(A)
        if A[i] + A[j] > GEOM_TOL:
            return ConvexRegion2D.empty(dedup)
        return ConvexRegion2D(np.empty((0, 2)), dedup, UNBOUNDED)

    scale = 1.0 + float(np.abs(A).max())
    box_half = BOX_FACTOR * scale
    for _attempt in range(3):
        V = _bounded_clip(B, A, box_half, method)
        if V is None:
            return ConvexRegion2D.empty(dedup)
        if np.abs(V).max() < 0.99 * box_half:
            break
        box_half *= 100.0
    else:
        raise SingularSystem("bounded region exceeds the largest clipping box")

    V = _dedupe_ring(V, 1e-9 * (1.0 + float(np.abs(V).max())))
    if V.shape[0] < 3:
        return ConvexRegion2D.empty(dedup)

    return _polish(V, B, A, dedup)


def _bounded_clip(B, A, box_half, method):
    """Clip a centered box of half-width box_half; None when empty."""
    V = np.array(
        [[-box_half, -box_half], [box_half, -box_half], [box_half, box_half], [-box_half, box_half]]
    )
    eps = 1e-11 * (1.0 + float(np.abs(A).max()))
    m = len(A)
    if method == "eager":
        for i in range(m):
            V = _clip(V, B[i], A[i], eps)
            if V.shape[0] == 0:
                return None
        return V
    # lazy: most-violated first, drop satisfied constraints for good
    active = np.ones(m, dtype=bool)
    for _ in range(m + 4):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            return V
        res = V @ B[idx].T - A[idx]
        min_res = res.min(axis=0)
        sat = min_res >= -eps
        active[idx[sat]] = False
        if np.all(sat):
            return V
        worst = idx[~sat][int(np.argmin(min_res[~sat]))]
        V = _clip(V, B[worst], A[worst], eps)
        active[worst] = False
        if V.shape[0] == 0:
            return None
    raise SingularSystem("halfplane clipping failed to terminate")


def _polish(V, B, A, dedup):
    """Identify facets, recompute vertices as exact line intersections."""
    vert_scale = 1.0 + float(np.abs(V).max())
    facet_tol = 1e-8 * vert_scale
    res = V @ B.T - A
    tight_counts = (np.abs(res) <= facet_tol).sum(axis=0)
    facet_idx = np.nonzero(tight_counts >= 2)[0]
    if facet_idx.size < 3:
        # should not happen for a genuine 2-D region
        raise SingularSystem("fewer than 3 facets found for a bounded region")

    # facets are already in normal-angle order; consecutive ones share a vertex
    fb, fa = B[facet_idx], A[facet_idx]
    nf = facet_idx.size
    new_vertices = np.empty((nf, 2))
    for i in range(nf):
        j = (i + 1) % nf
        M = np.array([fb[i], fb[j]])
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        if abs(det) < 1e-9:
            # nearly parallel adjacent facets: keep the clipped estimate
            d1 = np.abs(V @ fb[i] - fa[i])
            d2 = np.abs(V @ fb[j] - fa[j])
            new_vertices[i] = V[int(np.argmin(d1 + d2))]
        else:
            new_vertices[i] = np.linalg.solve(M, np.array([fa[i], fa[j]]))

    check = new_vertices @ B.T - A
    tol = GEOM_TOL * (1.0 + float(np.abs(A).max()))
    if check.min() >= -tol:
        facets = tuple(Hyperplane(b, a) for b, a in zip(fb, fa))
        return ConvexRegion2D(new_vertices, facets, BOUNDED)
    # fall back to the raw clipped polygon if the rebuild is worse
    raw_check = V @ B.T - A
    if raw_check.min() >= -tol:
        facets = tuple(Hyperplane(b, a) for b, a in zip(fb, fa))
        return ConvexRegion2D(V, facets, BOUNDED)
    raise SingularSystem("halfplane intersection failed verification")
