"""Exact linear quantile regression by basis exchange.

The minimizer of the asymmetric absolute loss is attained at a vertex
fitting exactly p observations.  The solver walks vertex to vertex along
descent edges, choosing the step length by weighted median, and certifies
optimality through the dual weights of the fitted rows.  Everything is
deterministic: ties in entering rows break toward the smallest row index,
and optima with non-unique bases are canonicalized toward the
lexicographically smallest fitted set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDesign,
    DegenerateTau,
    DimensionMismatch,
    NoConvergence,
    SingularSystem,
    TauOutOfRange,
)

# dual weights may overshoot their box by this much before a pivot fires
DUAL_TOL = 1e-10
# duals within this of a box edge mark alternative optima (tie handling)
TIE_TOL = 1e-12
# certificate tolerances
CERT_DUAL_TOL = 1e-9
CERT_GRAD_TOL = 1e-7


def validate_tau(tau: float, n: int | None = None) -> float:
    """Check 0 < tau < 1 and, when n is given, that n*tau is not an integer."""
    tau = float(tau)
    if not (0.0 < tau < 1.0):
        raise TauOutOfRange(tau)
    if n is not None and abs(n * tau - round(n * tau)) < 1e-9:
        raise DegenerateTau(tau, n)
    return tau


def check_loss(tau: float, r) -> np.ndarray:
    """Asymmetric absolute loss r * (tau - 1[r < 0]), vectorized."""
    if not (0.0 < float(tau) < 1.0):
        raise TauOutOfRange(tau)
    r = np.asarray(r, dtype=float)
    return r * (tau - (r < 0.0))


@dataclass(frozen=True)
class QrProblem:
    """Quantile regression instance.

    y : (n,) responses.
    X : (n, p) design, first column identically 1 (the intercept).
    tau : level in (0, 1) with n * tau not an integer.
    """

    y: np.ndarray
    X: np.ndarray
    tau: float

    def __post_init__(self):
        y = np.array(self.y, dtype=float).ravel()
        X = np.array(self.X, dtype=float)
        if X.ndim != 2:
            raise DimensionMismatch("design matrix must be 2-D")
        n, p = X.shape
        if y.shape[0] != n:
            raise DimensionMismatch(f"y has {y.shape[0]} rows, X has {n}")
        if not (n > p >= 1):
            raise DimensionMismatch(f"need n > p >= 1, got n={n}, p={p}")
        if not np.all(np.isfinite(y)) or not np.all(np.isfinite(X)):
            raise DimensionMismatch("inputs must be finite")
        if not np.allclose(X[:, 0], 1.0, rtol=0.0, atol=1e-12):
            raise DimensionMismatch("first design column must be the intercept (all ones)")
        tau = validate_tau(self.tau, n)
        y.setflags(write=False)
        X.setflags(write=False)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "tau", tau)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class QrSolution:
    """Vertex solution with optimality certificate.

    beta : (p,) coefficients.
    fitted : sorted row indices with zero residual (the basis), length p.
    residuals : (n,) with residuals of fitted rows set to exact zero.
    objective : sum of check losses at beta.
    duals : (p,) dual weights of the fitted rows, inside [tau-1, tau].
    psi : (n,) full subgradient weights; tau / tau-1 off the basis, duals on it.
    n_below, n_above : strict residual sign counts.
    pivots : basis exchanges performed.
    """

    beta: np.ndarray
    fitted: tuple
    residuals: np.ndarray
    objective: float
    duals: np.ndarray
    psi: np.ndarray
    n_below: int
    n_above: int
    pivots: int

    def __post_init__(self):
        for name in ("beta", "residuals", "duals", "psi"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "fitted", tuple(int(i) for i in self.fitted))


def _initial_basis(y: np.ndarray, X: np.ndarray, requested) -> np.ndarray:
    """Starting basis: caller's rows when usable, else an OLS-guided pick."""
    n, p = X.shape
    if requested is not None:
        B = np.asarray(list(requested), dtype=int)
        if B.shape[0] == p and len(set(B.tolist())) == p and np.all((0 <= B) & (B < n)):
            # reject singular warm starts, fall through to the cold start
            if np.linalg.matrix_rank(X[B]) == p:
                return B.copy()
    beta0, *_ = np.linalg.lstsq(X, y, rcond=None)
    r0 = np.abs(y - X @ beta0)
    order = np.argsort(r0, kind="stable")
    chosen: list[int] = []
    ortho: list[np.ndarray] = []
    for idx in order:
        v = X[idx].astype(float)
        for w in ortho:
            v = v - (v @ w) * w
        norm = float(np.linalg.norm(v))
        if norm > 1e-9 * (1.0 + float(np.linalg.norm(X[idx]))):
            ortho.append(v / norm)
            chosen.append(int(idx))
            if len(chosen) == p:
                return np.array(chosen, dtype=int)
    raise DegenerateDesign(f"design matrix is rank deficient (rank < {p})")


def _line_search(r, s, in_basis, ztol, slope0):
    """Weighted-median step along an edge.

    Returns (t_star, entering_row) or (None, None) when the objective is
    unbounded below along the edge (a rank defect).  Breakpoints are the
    positive residual-crossing times r_i / s_i; crossing row i raises the
    slope by |s_i|.  Zero-residual rows moving toward the negative side
    cross at t = 0, which makes degenerate pivots come out naturally.
    """
    positive = r >= ztol
    zeroish = np.abs(r) < ztol
    eligible = (~in_basis) & (
        ((positive | zeroish) & (s > 0.0)) | ((r <= -ztol) & (s < 0.0))
    )
    rows = np.nonzero(eligible)[0]
    if rows.size == 0:
        return None, None
    t = r[rows] / s[rows]
    t = np.maximum(t, 0.0)  # zero-residual rows cross immediately
    order = np.lexsort((rows, t))
    slope = slope0
    for oi in order:
        slope += abs(s[rows[oi]])
        if slope >= -1e-15:
            return float(t[oi]), int(rows[oi])
    return None, None


def solve_qr(problem: QrProblem, initial_basis=None, max_pivots: int | None = None) -> QrSolution:
    """Minimize the check loss exactly; see module docstring.

    Parameters
    ----------
    problem : QrProblem
    initial_basis : optional sequence of p row indices to warm start from.
    max_pivots : exchange cap, default max(500, 50 n).

    Raises
    ------
    DegenerateDesign
        Rank-deficient design, or a non-fitted observation with zero
        residual at the optimum (no unique p-point vertex).
    NoConvergence
        Pivot cap exceeded or an optimality certificate failed.
    """
    y, X, tau = problem.y, problem.X, problem.tau
    n, p = X.shape
    if max_pivots is None:
        max_pivots = max(500, 50 * n)
    ztol = 1e-10 * (1.0 + float(np.abs(y).max()))

    B = _initial_basis(y, X, initial_basis)
    in_basis = np.zeros(n, dtype=bool)
    in_basis[B] = True

    pivots = 0
    use_bland = False
    while True:
        XB = X[B]
        try:
            beta = np.linalg.solve(XB, y[B])
        except np.linalg.LinAlgError:
            raise DegenerateDesign("fitted rows became singular during exchange")
        r = y - X @ beta
        r[B] = 0.0
        psi = np.where(r <= -ztol, tau - 1.0, tau)
        g = X[~in_basis].T @ psi[~in_basis]
        try:
            v = np.linalg.solve(XB.T, -g)
        except np.linalg.LinAlgError:
            raise DegenerateDesign("fitted rows became singular during exchange")

        over = v - tau
        under = (tau - 1.0) - v
        amount = np.maximum(over, under)
        violated = amount > DUAL_TOL
        if not np.any(violated):
            break
        if pivots >= max_pivots:
            raise NoConvergence(f"no optimum after {pivots} pivots")

        if use_bland:
            slots = np.nonzero(violated)[0]
            pos = int(slots[np.argmin(B[slots])])
        else:
            pos = int(np.argmax(amount))
        sigma = -1.0 if over[pos] > under[pos] else 1.0
        e = np.zeros(p)
        e[pos] = sigma
        delta = np.linalg.solve(XB, e)
        s = X @ delta
        slope0 = (tau - v[pos]) if sigma < 0 else (v[pos] + 1.0 - tau)
        t_star, enter = _line_search(r, s, in_basis, ztol, slope0)
        if enter is None:
            raise DegenerateDesign("objective unbounded along an edge (rank defect)")
        in_basis[B[pos]] = False
        in_basis[enter] = True
        B[pos] = enter
        use_bland = t_star <= 1e-12
        pivots += 1

    B, beta, r, psi, v = _canonicalize(y, X, tau, B, ztol)

    # certificates: dual box, zero gradient, and vertex uniqueness
    if np.any(v > tau + CERT_DUAL_TOL) or np.any(v < tau - 1.0 - CERT_DUAL_TOL):
        raise NoConvergence("dual feasibility certificate failed")
    psi_full = psi.copy()
    psi_full[B] = v
    grad = X.T @ psi_full
    scale = 1.0 + float(np.abs(X).max())
    if float(np.abs(grad).max()) > CERT_GRAD_TOL * scale:
        raise NoConvergence("zero-gradient certificate failed")
    in_basis = np.zeros(n, dtype=bool)
    in_basis[B] = True
    stray = np.nonzero((np.abs(r) < ztol) & ~in_basis)[0]
    if stray.size:
        raise DegenerateDesign(
            f"rows {stray.tolist()} lie on the fitted hyperplane but are not in the "
            "basis; general position fails"
        )

    objective = float(np.sum(check_loss(tau, r)))
    order = np.argsort(B, kind="stable")
    return QrSolution(
        beta=beta,
        fitted=tuple(int(i) for i in B[order]),
        residuals=r,
        objective=objective,
        duals=v[order],
        psi=psi_full,
        n_below=int(np.sum(r <= -ztol)),
        n_above=int(np.sum(r >= ztol)),
        pivots=pivots,
    )


def _canonicalize(y, X, tau, B, ztol):
    """Among tied optimal bases, walk to the lexicographically smallest.

    A dual weight sitting exactly on the box edge marks a zero-slope edge
    whose other endpoint is an equally optimal vertex; move there whenever
    it has a smaller sorted fitted set.
    """
    n, p = X.shape

    def state(Bcur):
        XB = X[Bcur]
        beta = np.linalg.solve(XB, y[Bcur])
        r = y - X @ beta
        r[Bcur] = 0.0
        psi = np.where(r <= -ztol, tau - 1.0, tau)
        mask = np.zeros(n, dtype=bool)
        mask[Bcur] = True
        v = np.linalg.solve(XB.T, -(X[~mask].T @ psi[~mask]))
        return beta, r, psi, v, mask

    beta, r, psi, v, mask = state(B)
    for _ in range(16):
        best = None
        for pos in range(p):
            if abs(v[pos] - tau) <= TIE_TOL:
                sigma = -1.0
            elif abs(v[pos] - (tau - 1.0)) <= TIE_TOL:
                sigma = 1.0
            else:
                continue
            e = np.zeros(p)
            e[pos] = sigma
            delta = np.linalg.solve(X[B], e)
            s = X @ delta
            t_star, enter = _line_search(r, s, mask, ztol, 0.0)
            if enter is None or t_star <= 1e-12:
                continue
            cand = B.copy()
            cand[pos] = enter
            key = tuple(sorted(cand.tolist()))
            if key < tuple(sorted(B.tolist())) and (best is None or key < best[0]):
                best = (key, cand)
        if best is None:
            break
        B = best[1]
        beta, r, psi, v, mask = state(B)
    return B, beta, r, psi, v


def dual_weights(solution: QrSolution, problem: QrProblem) -> np.ndarray:
    """Recompute the fitted-row dual weights from scratch.

    Solves X_B' v = -X_N' psi_N with psi taken from the residual signs of
    ``solution``.  Useful as an independent certificate check.
    """
    B = np.asarray(solution.fitted, dtype=int)
    mask = np.zeros(problem.n, dtype=bool)
    mask[B] = True
    r = solution.residuals
    psi = np.where(r < 0.0, problem.tau - 1.0, problem.tau)
    g = problem.X[~mask].T @ psi[~mask]
    try:
        return np.linalg.solve(problem.X[B].T, -g)
    except np.linalg.LinAlgError:
        raise SingularSystem("fitted block is singular")
