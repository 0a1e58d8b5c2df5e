"""Dense primal-dual interior-point solver for moment-matrix SDPs.

The problem class is narrow by design: optimize a linear functional of the
moment variables subject to

* the PSD moment matrix of a :class:`~dirand.npa.MomentStructure`,
* the identity-moment pin (class 0 equals 1),
* sparse linear equalities,
* sparse linear inequalities (functional >= rhs), each carried as an extra
  1x1 diagonal slack block of the same PSD matrix.

Equalities (including the pin) are eliminated by sparse Gaussian
substitution, leaving the standard dual-form SDP

    max  b' u   s.t.   Z = C - sum_i u_i A_i  >= 0

with sparse constraint matrices A_i.  The algorithm is an infeasible-start
path-following method with Nesterov-Todd scaling and a Mehrotra-style
predictor-corrector step (the predictor picks the centering weight, both
directions reuse one factorization of the Schur complement).  Step length
is a fixed fraction (0.98) of the distance to the cone boundary.  The
Schur complement is assembled densely and factorized by Cholesky.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .npa import MomentFunctional, MomentStructure

__all__ = ["SdpProblem", "SdpSolution", "SolveOptions", "solve", "certify_bound"]


@dataclass
class SolveOptions:
    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iter: int = 200
    step_frac: float = 0.98

    def __post_init__(self):
        if self.gap_tol <= 0.0 or self.feas_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0.0 < self.step_frac < 1.0:
            raise ValueError("step_frac must lie in (0, 1)")


@dataclass
class SdpProblem:
    """Linear objective over moment variables with PSD moment matrix."""

    structure: MomentStructure
    objective: MomentFunctional
    sense: str = "max"
    equalities: list = field(default_factory=list)  # (MomentFunctional, rhs)
    inequalities: list = field(default_factory=list)  # functional >= rhs

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")


@dataclass
class SdpSolution:
    status: str  # Optimal | Infeasible | MaxIterations | NumericalTrouble
    objective_value: float
    y: np.ndarray  # full moment vector
    gap: float
    iterations: int
    # internals for certify_bound
    dual_bound_raw: float = 0.0  # <C, X> side, in internal (max) sign
    obj_const: float = 0.0
    sense_sign: float = 1.0
    rp_norm: float = 0.0
    u_norm: float = 0.0


def _eliminate(problem: SdpProblem):
    """Sparse Gaussian elimination of equality constraints.

    Returns (free_vars, subs, t) where every moment variable k satisfies
    y_k = t_k + sum_j subs[k][j] * u_j over free variables u (identity map
    for free variables themselves).  Raises on inconsistent rows.
    """
    n_vars = problem.structure.n_vars
    rows = [({0: 1.0}, 1.0)]  # identity pin
    for f, rhs in problem.equalities:
        rows.append((dict(f.coeffs), float(rhs) - f.constant))
    # pivot var -> (dict over non-pivot vars, const)
    pivots: dict = {}
    for coeffs, rhs in rows:
        coeffs = dict(coeffs)
        # substitute already-pivoted variables
        for var in list(coeffs):
            if var in pivots:
                c = coeffs.pop(var)
                sub, const = pivots[var]
                rhs -= c * const
                for v2, c2 in sub.items():
                    coeffs[v2] = coeffs.get(v2, 0.0) + c * c2
        coeffs = {v: c for v, c in coeffs.items() if abs(c) > 1e-12}
        if not coeffs:
            if abs(rhs) > 1e-9:
                raise ValueError("inconsistent equality constraints")
            continue  # redundant row
        pv = max(coeffs, key=lambda v: abs(coeffs[v]))
        pc = coeffs.pop(pv)
        sub = {v: -c / pc for v, c in coeffs.items()}
        const = rhs / pc
        # back-substitute into earlier pivots
        for var, (s2, c2) in pivots.items():
            if pv in s2:
                c = s2.pop(pv)
                pivots[var] = ({**{v: s2.get(v, 0.0) + c * sc for v, sc in sub.items()},
                                **{v: cv for v, cv in s2.items() if v not in sub}},
                               c2 + c * const)
        pivots[pv] = (sub, const)
    free = [k for k in range(n_vars) if k not in pivots]
    t = np.zeros(n_vars)
    col_of = {v: j for j, v in enumerate(free)}
    # subs as triplet lists: for each var k, list of (free_col, coef)
    subs = [None] * n_vars
    for j, v in enumerate(free):
        subs[v] = [(j, 1.0)]
    for v, (sub, const) in pivots.items():
        t[v] = const
        entries = []
        for v2, c in sub.items():
            if v2 not in col_of:
                raise AssertionError("pivot chain not fully substituted")
            entries.append((col_of[v2], c))
        subs[v] = entries
    return free, subs, t


def _compile(problem: SdpProblem):
    """Build dense C, sparse constraint map P (N^2 x m) and objective b."""
    st = problem.structure
    n = st.dim
    n_ineq = len(problem.inequalities)
    N = n + n_ineq
    free, subs, t = _eliminate(problem)
    m = len(free)
    pos = st.class_positions()

    # moment-block triplets
    rows_ = []
    cols_ = []
    vals_ = []
    C = np.zeros((N, N))
    for k in range(st.n_vars):
        pk = pos[k]
        if not pk:
            continue
        rr = [p[0] for p in pk]
        cc = [p[1] for p in pk]
        if t[k] != 0.0:
            C[rr, cc] = C[rr, cc] + t[k]
        for j, coef in subs[k]:
            flat = [r * N + c for r, c in pk]
            rows_.extend(flat)
            cols_.extend([j] * len(flat))
            vals_.extend([coef] * len(flat))
    # inequality slack diagonal entries: g' y - rhs with y = t + S u
    for q, (g, rhs) in enumerate(problem.inequalities):
        d = n + q
        const = g.constant - float(rhs) + sum(c * t[k] for k, c in g.coeffs.items())
        C[d, d] = const
        acc: dict = {}
        for k, c in g.coeffs.items():
            for j, coef in subs[k]:
                acc[j] = acc.get(j, 0.0) + c * coef
        for j, coef in acc.items():
            if coef != 0.0:
                rows_.append(d * N + d)
                cols_.append(j)
                vals_.append(coef)
    P = sp.csc_matrix((vals_, (rows_, cols_)), shape=(N * N, m))
    P = P.tocsr()
    Pt = P.T.tocsr()

    sign = 1.0 if problem.sense == "max" else -1.0
    obj = problem.objective
    obj_const = obj.constant + sum(c * t[k] for k, c in obj.coeffs.items())
    b = np.zeros(m)
    for k, c in obj.coeffs.items():
        for j, coef in subs[k]:
            b[j] += c * coef
    b *= sign
    return C, P, Pt, b, free, subs, t, obj_const, sign, N, m


def _nt_scaling(X, Z):
    Lx = np.linalg.cholesky(X)
    M = Lx.T @ Z @ Lx
    M = 0.5 * (M + M.T)
    lam, Q = np.linalg.eigh(M)
    if lam[0] <= 0:
        raise np.linalg.LinAlgError("loss of positive definiteness")
    R = Lx @ (Q * (lam ** -0.25))
    return R @ R.T  # W with W Z W = X


def _step_length(M, dM, tau):
    """tau times the distance to the boundary along dM, capped at 1."""
    L = np.linalg.cholesky(M)
    S = sla.solve_triangular(L, dM, lower=True)
    S = sla.solve_triangular(L, S.T, lower=True)
    lam_min = np.linalg.eigvalsh(0.5 * (S + S.T))[0]
    if lam_min >= -1e-14:
        return 1.0
    return min(1.0, -tau / lam_min)


def _schur(P, Pt, W, class_triplets, m, N):
    """H[i, j] = tr(A_i W A_j W) with sparse A_j, dense W."""
    H = np.empty((m, m))
    chunk = max(1, int(2.0e7 / (N * N)))  # bound scratch to ~160 MB
    buf = np.empty((N * N, min(chunk, m)))
    j0 = 0
    while j0 < m:
        j1 = min(m, j0 + chunk)
        for j in range(j0, j1):
            rr, cc, vv = class_triplets[j]
            Mj = (W[:, rr] * vv) @ W[cc, :]
            buf[:, j - j0] = Mj.ravel()
        H[:, j0:j1] = Pt @ buf[:, : j1 - j0]
        j0 = j1
    return 0.5 * (H + H.T)


def _solve_compiled(C, P, Pt, b, N, m, opts: SolveOptions):
    """Core path-following loop on max b'u s.t. C - sum u_i A_i >= 0.

    Here A_i = -G_i where G_i are the columns of P, i.e. the slack is
    Z = C - sum u_i A_i = C + sum u_i G_i... sign handled by storing A
    directly as -P columns.
    """
    # triplets of G_j (columns of P); tr(A_i W A_j W) = tr(G_i W G_j W)
    class_triplets = []
    Pc = P.tocsc()
    for j in range(m):
        sl = slice(Pc.indptr[j], Pc.indptr[j + 1])
        flat = Pc.indices[sl]
        vals = Pc.data[sl]
        class_triplets.append((flat // N, flat % N, vals))
    PAt = -Pt  # adjoint: A(X) = PAt @ vec(X)
    normC = np.linalg.norm(C) + 1.0
    normb = np.linalg.norm(b) + 1.0

    eta = max(1.0, math.sqrt(N), np.abs(C).max())
    mu0 = eta * eta
    X = eta * np.eye(N)
    Z = eta * np.eye(N)
    u = np.zeros(m)
    tau = opts.step_frac

    status = "MaxIterations"
    gap = np.inf
    it = 0
    best = None  # (merit, u, pobj, rp_norm, gap)
    stall = 0
    for it in range(1, opts.max_iter + 1):
        rp = b - PAt @ X.ravel()
        SumA = (-(P @ u)).reshape(N, N)
        Rd = C - SumA - Z
        Rd = 0.5 * (Rd + Rd.T)
        pobj = float(np.vdot(C, X))  # upper-bound side
        dobj = float(b @ u)
        gap = abs(pobj - dobj) / (1.0 + max(abs(pobj), abs(dobj)))
        pfeas = np.linalg.norm(rp) / normb
        dfeas = np.linalg.norm(Rd) / normC
        merit = max(gap, pfeas, dfeas)
        if best is None or merit < best[0]:
            best = (merit, u.copy(), pobj, float(np.linalg.norm(rp)), gap)
            stall = 0
        else:
            stall += 1
        if gap <= opts.gap_tol and pfeas <= opts.feas_tol and dfeas <= opts.feas_tol:
            status = "Optimal"
            break
        if stall >= 60:
            status = "NumericalTrouble"  # stagnation near the final accuracy
            break
        if dobj > 1e9 * normC and pfeas > 1e-4:
            status = "Infeasible"
            break
        try:
            W = _nt_scaling(X, Z)
            H = _schur(P, Pt, W, class_triplets, m, N)
            Hf = None
            scale = float(np.abs(np.diag(H)).max()) or 1.0
            for jitter in (0.0, 1e-14, 1e-11, 1e-8):
                try:
                    Hf = sla.cho_factor(H + (jitter * scale) * np.eye(m),
                                        lower=True)
                    break
                except np.linalg.LinAlgError:
                    continue
            if Hf is None:
                status = "NumericalTrouble"
                break
            WRdW = W @ Rd @ W
            AX = PAt @ X.ravel()
            base_rhs = rp + AX + PAt @ WRdW.ravel()
            mu = float(np.vdot(X, Z)) / N
            Zinv_L = np.linalg.cholesky(Z)
            Zinv = sla.cho_solve((Zinv_L, True), np.eye(N))
            Zinv = 0.5 * (Zinv + Zinv.T)

            # predictor (affine scaling)
            du_a = sla.cho_solve(Hf, base_rhs)
            dZ_a = Rd - (-(P @ du_a)).reshape(N, N)
            dZ_a = 0.5 * (dZ_a + dZ_a.T)
            dX_a = -X - W @ dZ_a @ W
            dX_a = 0.5 * (dX_a + dX_a.T)
            ap = _step_length(X, dX_a, tau)
            ad = _step_length(Z, dZ_a, tau)
            mu_aff = float(np.vdot(X + ap * dX_a, Z + ad * dZ_a)) / N
            sigma = min(1.0, max((mu_aff / mu) ** 3, 1e-10))
            # keep the complementarity target commensurate with remaining
            # infeasibility; otherwise mu can collapse at an infeasible
            # point and block all further progress
            target = max(sigma * mu, 1e-2 * max(pfeas, dfeas) * mu0)

            # corrector with centering
            rhs = base_rhs - target * (PAt @ Zinv.ravel())
            du = sla.cho_solve(Hf, rhs)
            dZ = Rd - (-(P @ du)).reshape(N, N)
            dZ = 0.5 * (dZ + dZ.T)
            dX = target * Zinv - X - W @ dZ @ W
            dX = 0.5 * (dX + dX.T)
            ap = _step_length(X, dX, tau)
            ad = _step_length(Z, dZ, tau)
            if min(ap, ad) < 1e-10:
                status = "NumericalTrouble"
                break
            X = X + ap * dX
            Z = Z + ad * dZ
            u = u + ad * du
        except np.linalg.LinAlgError:
            status = "NumericalTrouble"
            break
        if not np.isfinite(X).all() or not np.isfinite(Z).all():
            status = "NumericalTrouble"
            break

    if status == "Optimal":
        rp = b - PAt @ X.ravel()
        return status, u, gap, it, float(np.vdot(C, X)), float(np.linalg.norm(rp))
    # report the best iterate seen, with the honest failure status
    _, u_b, pobj_b, rp_b, gap_b = best
    return status, u_b, gap_b, it, pobj_b, rp_b


def solve(problem: SdpProblem, options: SolveOptions | None = None) -> SdpSolution:
    """Solve the moment SDP; deterministic for identical inputs."""
    opts = options or SolveOptions()
    C, P, Pt, b, free, subs, t, obj_const, sign, N, m = _compile(problem)
    if m == 0:
        # fully determined by equalities; feasibility not verified here
        y = t.copy()
        val = obj_const
        return SdpSolution("Optimal", sign * 0 + val, y, 0.0, 0, val, obj_const,
                           sign, 0.0, 0.0)
    status, u, gap, it, pobj, rp_norm = _solve_compiled(C, P, Pt, b, N, m, opts)
    y = t.copy()
    for k in range(problem.structure.n_vars):
        for j, coef in subs[k]:
            y[k] += coef * u[j]
    internal_obj = float(b @ u)  # in max sign
    objective_value = obj_const + sign * internal_obj
    return SdpSolution(status, objective_value, y, gap, it, pobj, obj_const,
                       sign, rp_norm, float(np.linalg.norm(u)))


def certify_bound(problem: SdpProblem, solution: SdpSolution) -> float:
    """Direction-safe bound on the relaxation optimum.

    For a maximization this is the weak-duality side <C, X> plus a
    conservative fold of the remaining linear-feasibility residual, so
    downstream min-entropy numbers stay valid lower bounds under solver
    inexactness.
    """
    if solution.status != "Optimal":
        raise ValueError("certify_bound needs an Optimal solution")
    slack = 10.0 * solution.rp_norm * (1.0 + solution.u_norm)
    return solution.obj_const + solution.sense_sign * (solution.dual_bound_raw + slack)
