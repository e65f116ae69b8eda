"""Directional quantile hyperplanes with multiplier diagnostics.

For a direction u and level tau, the hyperplane {x : b'x = a} with
b'u = 1 minimizes the total check loss of b'z_i - a.  The constraint's
Lagrange multiplier equals that optimal objective (sum convention) and
measures how far apart the mass centers on the two sides of the
hyperplane are, which is what makes it an outlier diagnostic: depth
contours ignore interior points, the multiplier does not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cloud import PointCloud
from .errors import (
    DegenerateData,
    DegenerateDesign,
    DimensionMismatch,
    EllOutOfRange,
    EmptyHalfspace,
    NoConvergence,
    QuantourError,
    SingularSystem,
)
from .geometry import Direction, orthocomplement_basis
from .qr import QrProblem, QrSolution, solve_qr, validate_tau

# in-solve verification tolerances for the multiplier identity and the
# stationarity reconstruction
MULT_TOL = 1e-7
KKT_TOL = 1e-7


@dataclass(frozen=True)
class QuantileHyperplane:
    """Directional quantile hyperplane {x : b'x = a}.

    tau : level in (0, 1).
    u : defining direction (unit).
    a : intercept.
    b : normal with b'u = 1; equals u + Gamma c for the canonical
        orthocomplement basis Gamma of u.
    c : coefficients of b - u in that basis, shape (k-1,).
    multiplier : Lagrange multiplier of the constraint b'u = 1; equals the
        optimal check-loss sum.
    fitted : sorted indices of the k observations on the hyperplane.
    duals : their dual weights, inside [tau-1, tau].
    n_below : observations strictly in the lower halfspace {b'z < a}.
    n_above : observations strictly above.
    """

    tau: float
    u: Direction
    a: float
    b: np.ndarray
    c: np.ndarray
    multiplier: float
    fitted: tuple
    duals: np.ndarray
    n_below: int
    n_above: int

    def __post_init__(self):
        for name in ("b", "c", "duals"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "fitted", tuple(int(i) for i in self.fitted))

    def residual(self, points) -> np.ndarray:
        """Signed evaluations b'x - a; negative means lower halfspace."""
        return np.asarray(points, dtype=float) @ self.b - self.a

    @property
    def n_on(self) -> int:
        return len(self.fitted)

    @property
    def counts(self) -> tuple:
        """(N_below, N_on, N_above)."""
        return (self.n_below, self.n_on, self.n_above)


def _reduce(cloud: PointCloud, u: Direction):
    """Responses and design of the equivalent unconstrained regression."""
    z = cloud.points
    n, k = z.shape
    if u.k != k:
        raise DimensionMismatch(f"direction has k={u.k}, cloud has k={k}")
    if n <= k:
        raise DimensionMismatch(f"need n > k observations, got n={n}, k={k}")
    y = z @ u.vector
    if k == 1:
        return y, np.ones((n, 1)), None
    gamma = orthocomplement_basis(u).matrix
    X = np.column_stack([np.ones(n), z @ gamma])
    return y, X, gamma


def directional_quantile(cloud: PointCloud, tau: float, u) -> QuantileHyperplane:
    """Exact tau-quantile hyperplane in direction u.

    Solves the reduced quantile regression of u'z on the orthocomplement
    coordinates, rebuilds (a, b), and verifies in-solve that the
    Lagrange multiplier from the stationarity system matches the optimal
    objective (within 1e-7) and that multiplier * u = sum(psi_i z_i)
    holds per coordinate.

    Raises
    ------
    DegenerateTau, TauOutOfRange : bad level.
    DegenerateData : cloud not in general position for this direction.
    NoConvergence : an internal certificate failed (bug signal).
    """
    if not isinstance(u, Direction):
        u = Direction(u)
    y, X, gamma = _reduce(cloud, u)
    validate_tau(tau, cloud.n)
    try:
        sol = solve_qr(QrProblem(y, X, tau))
    except DegenerateDesign as exc:
        raise DegenerateData(f"cloud is degenerate along direction {u!r}: {exc}")
    return _assemble(cloud, tau, u, gamma, sol)


def _assemble(cloud: PointCloud, tau: float, u: Direction, gamma, sol: QrSolution) -> QuantileHyperplane:
    """Lift a reduced-problem solution back to hyperplane form and verify it."""
    a = float(sol.beta[0])
    c = -sol.beta[1:]
    b = u.vector if gamma is None else u.vector + gamma @ c
    if abs(b @ u.vector - 1.0) > 1e-9:
        raise NoConvergence("normalization b'u = 1 failed")

    mult, duals = _stationarity_solve(cloud.points, u.vector, tau, sol.fitted, sol.psi)
    if abs(mult - sol.objective) > MULT_TOL * (1.0 + abs(sol.objective)):
        raise NoConvergence(
            f"multiplier {mult:.12g} does not match objective {sol.objective:.12g}"
        )
    if mult < -1e-9:
        raise NoConvergence(f"negative multiplier {mult:.12g}")
    if float(np.abs(duals - sol.duals).max()) > MULT_TOL:
        raise NoConvergence("stationarity duals disagree with exchange duals")
    psi_full = sol.psi.copy()
    psi_full[list(sol.fitted)] = duals
    kkt_gap = mult * u.vector - cloud.points.T @ psi_full
    if float(np.abs(kkt_gap).max()) > KKT_TOL * (1.0 + abs(mult)):
        raise NoConvergence("stationarity reconstruction failed")

    return QuantileHyperplane(
        tau=tau,
        u=u,
        a=a,
        b=b,
        c=c,
        multiplier=mult,
        fitted=sol.fitted,
        duals=duals,
        n_below=sol.n_below,
        n_above=sol.n_above,
    )


def _stationarity_solve(z, u_vec, tau, fitted, psi):
    """Multiplier and fitted duals from the stationarity conditions.

    Unknowns (lam, v_1..v_m) solve
        sum_i psi_i = 0
        lam * u = sum_i psi_i z_i
    with the non-fitted psi fixed at tau / tau-1.  The system is square of
    size k+1 because a nondegenerate fit has m = k points.
    """
    n, k = z.shape
    fitted = list(fitted)
    m = len(fitted)
    mask = np.zeros(n, dtype=bool)
    mask[fitted] = True
    s0 = float(np.sum(psi[~mask]))
    s1 = z[~mask].T @ psi[~mask]
    M = np.zeros((k + 1, m + 1))
    M[0, 1:] = 1.0
    M[1:, 0] = -u_vec
    M[1:, 1:] = z[fitted].T
    rhs = np.concatenate([[-s0], -s1])
    if M.shape[0] != M.shape[1]:
        raise SingularSystem(
            f"stationarity system is not square: {m} fitted points, k={k}"
        )
    try:
        w = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError:
        raise SingularSystem("stationarity system is singular")
    return float(w[0]), w[1:]


def lagrange_multiplier(h: QuantileHyperplane, cloud: PointCloud) -> float:
    """Recompute the multiplier from a hyperplane and its cloud.

    Independent of the solver's duals: the psi signs are reread from the
    hyperplane residuals before solving the stationarity system.  The
    result is nonnegative (within 1e-9) for an optimal hyperplane.
    """
    r = h.residual(cloud.points)
    ztol = 1e-9 * (1.0 + float(np.abs(cloud.points).max()))
    psi = np.where(r <= -ztol, h.tau - 1.0, h.tau)
    mult, _ = _stationarity_solve(cloud.points, h.u.vector, h.tau, h.fitted, psi)
    if mult < -1e-9:
        raise SingularSystem(f"negative multiplier {mult:.12g} for a claimed optimum")
    return mult


def mass_center_gap(h: QuantileHyperplane, cloud: PointCloud):
    """Mass centers of the two open halfspaces and their u-gap.

    Returns (mu_plus, mu_minus, gap): the sample means of the points
    strictly above (b'z > a) and strictly below, and
    gap = u'(mu_plus - mu_minus).  With the lower halfspace holding the
    outlying mass, a large positive gap accompanies a large multiplier.

    Raises EmptyHalfspace when either open side has no observations.
    """
    r = h.residual(cloud.points)
    above = cloud.points[r > 0]
    below = cloud.points[r < 0]
    if above.shape[0] == 0 or below.shape[0] == 0:
        raise EmptyHalfspace(
            f"strict sides hold {above.shape[0]} / {below.shape[0]} points; both must be nonempty"
        )
    mu_plus = above.mean(axis=0)
    mu_minus = below.mean(axis=0)
    gap = float(h.u.vector @ (mu_plus - mu_minus))
    return mu_plus, mu_minus, gap


@dataclass(frozen=True)
class MultiplierSeries:
    """Multiplier process sampled over a list of directions.

    entries : tuple of (label, multiplier), ordered as the input
        directions; labels are polar angles for planar clouds and list
        indices otherwise.
    median, mad : robust location/scatter of the multipliers.
    flagged : indices into ``entries`` whose multiplier exceeds
        median + flag_c * MAD; empty when fewer than 2 entries (MAD
        undefined).
    flag_c : the threshold multiplier used.
    """

    entries: tuple
    median: float
    mad: float
    flagged: tuple
    flag_c: float


def multiplier_scan(cloud: PointCloud, tau: float, directions, flag_c: float = 3.0) -> MultiplierSeries:
    """Multiplier per direction, flagging unusually large values.

    Directions pointing away from an outlying mass produce large
    multipliers, so the flagged entries localize outliers by angle.  Any
    per-direction error propagates with the direction recorded in its
    notes.
    """
    entries = []
    for idx, d in enumerate(directions):
        u = d if isinstance(d, Direction) else Direction(d)
        label = u.angle if u.k == 2 else float(idx)
        try:
            h = directional_quantile(cloud, tau, u)
        except QuantourError as exc:
            note = f"while scanning direction {idx} (label {label:.6g})"
            if hasattr(exc, "add_note"):
                exc.add_note(note)
            raise
        entries.append((float(label), h.multiplier))
    values = np.array([v for _, v in entries])
    med = float(np.median(values)) if values.size else 0.0
    mad = float(np.median(np.abs(values - med))) if values.size else 0.0
    if values.size >= 2:
        flagged = tuple(i for i, (_, v) in enumerate(entries) if v > med + flag_c * mad)
    else:
        flagged = ()
    return MultiplierSeries(tuple(entries), med, mad, flagged, float(flag_c))


def outlier_scenario(seed: int, step: int) -> PointCloud:
    """Benchmark cloud: 98 uniform points plus one receding outlier.

    98 points are drawn iid from U([-0.5, 0.5]^2) with the given seed;
    the last row is the outlier (0, 0.5 + step/4) for integer step in
    0..14.  The draw depends only on ``seed``, so different steps share
    the same base points.
    """
    step = int(step)
    if not (0 <= step <= 14):
        raise EllOutOfRange(f"step must be in 0..14, got {step}")
    rng = np.random.default_rng(seed)
    base = rng.uniform(-0.5, 0.5, size=(98, 2))
    outlier = np.array([[0.0, 0.5 + step / 4.0]])
    return PointCloud(np.vstack([base, outlier]))
