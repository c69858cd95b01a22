"""Least-squares solution of the stacked systems, conditioning, errors.

Desk-scale systems (up to 4000 unknowns) go through a dense orthogonal
factorization; larger ones through diagonally preconditioned conjugate
gradients on the normal equations G c = H' r.  The reported condition
number is always that of the Gram matrix G = H' H.
"""

import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .tet_spline import S0dSpace, eval_s0d_batch
from .tp_spline import TensorProductSpace, eval_tp_batch

DENSE_SOLVE_LIMIT = 4000
EXACT_CONDITION_LIMIT = 3000


@dataclass
class SolveResult:
    coefficients: np.ndarray
    residual_norm: float
    gram_condition: float
    setup_seconds: float
    solve_seconds: float
    method: str
    rank_deficient: bool = False


def _system_parts(system):
    if hasattr(system, "H"):
        return system.H, system.rhs
    H, r = system
    return H, np.asarray(r, dtype=float)


def solve_least_squares(system, force_path=None, compute_condition=True):
    """Minimize ||H c - r||_2 for the stacked system.

    force_path overrides the size-based choice: "dense" or "iterative".
    Rank deficiency on the dense path is reported, not fatal; the
    minimum-norm solution is returned with a flag.
    """
    H, r = _system_parts(system)
    rows, cols = H.shape
    if rows < cols:
        raise ValueError(f"underdetermined system: {rows} rows < {cols} cols")
    path = force_path or ("dense" if cols <= DENSE_SOLVE_LIMIT
                          else "iterative")
    if path == "dense":
        t0 = time.perf_counter()
        Hd = H.toarray() if sp.issparse(H) else np.asarray(H, dtype=float)
        t1 = time.perf_counter()
        rank_tol = max(rows, cols) * np.finfo(float).eps
        c, _, rank, _ = scipy.linalg.lstsq(Hd, r, lapack_driver="gelsy",
                                           cond=rank_tol)
        t2 = time.perf_counter()
        deficient = rank < cols
        setup_s, solve_s = t1 - t0, t2 - t1
        method = "dense-qr"
    elif path == "iterative":
        t0 = time.perf_counter()
        Hs = sp.csr_matrix(H)
        G = (Hs.T @ Hs).tocsr()
        b = Hs.T @ r
        diag = G.diagonal()
        diag[diag <= 0] = 1.0
        M = sp.diags(1.0 / diag)
        t1 = time.perf_counter()
        c, info = spla.cg(G, b, rtol=1e-12, atol=0.0,
                          maxiter=10 * cols, M=M)
        t2 = time.perf_counter()
        if info > 0:
            raise RuntimeError(f"normal-equation CG did not converge "
                               f"within {10 * cols} iterations")
        deficient = False
        setup_s, solve_s = t1 - t0, t2 - t1
        method = "normal-cg"
    else:
        raise ValueError(f"unknown path {force_path!r}")
    residual = float(np.linalg.norm(H @ c - r))
    cond = condition_number(system) if compute_condition else float("nan")
    return SolveResult(c, residual, cond, setup_s, solve_s, method,
                       rank_deficient=deficient)


def condition_number(system):
    """2-norm condition of the Gram matrix G = H' H.

    Exact through singular values up to 3000 unknowns; a power /
    inverse-power estimate (good to roughly a factor of two) above.
    Returns +inf when the system is numerically rank deficient.
    """
    H, _ = _system_parts(system)
    rows, cols = H.shape
    if cols <= EXACT_CONDITION_LIMIT:
        Hd = H.toarray() if sp.issparse(H) else np.asarray(H, dtype=float)
        s = scipy.linalg.svdvals(Hd)
        tol = s[0] * max(rows, cols) * np.finfo(float).eps
        if s[-1] <= tol:
            return float("inf")
        return float((s[0] / s[-1]) ** 2)
    Hs = sp.csr_matrix(H)
    G = (Hs.T @ Hs).tocsc()
    rng = np.random.default_rng(0)
    v = rng.standard_normal(cols)
    lam_max = 0.0
    for _ in range(60):
        v = G @ v
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            return float("inf")
        v /= nrm
        lam_max = nrm
    try:
        lu = spla.splu(G)
    except RuntimeError:
        return float("inf")
    w = rng.standard_normal(cols)
    inv_norm = 0.0
    for _ in range(60):
        w = lu.solve(w)
        nrm = np.linalg.norm(w)
        if not np.isfinite(nrm) or nrm == 0.0:
            return float("inf")
        w /= nrm
        inv_norm = nrm
    return float(lam_max * inv_norm)


@dataclass(frozen=True)
class ErrorSummary:
    emax: float
    rms: float
    n_points: int


def spline_values(space, coeffs, pts, deriv=(0, 0, 0)):
    """Evaluate either kind of spline space at an array of points."""
    if isinstance(space, TensorProductSpace):
        return eval_tp_batch(space, coeffs, pts, deriv)
    if isinstance(space, S0dSpace):
        return eval_s0d_batch(space, coeffs, pts, deriv)
    raise TypeError(f"unknown space type {type(space).__name__}")


def evaluate_errors(space, coeffs, u_true, pts):
    """Maximum and root-mean-square error of the spline against truth."""
    pts = np.atleast_2d(np.asarray(pts if not hasattr(pts, "points")
                                   else pts.points, dtype=float))
    if len(pts) == 0:
        raise ValueError("empty evaluation set")
    diff = spline_values(space, coeffs, pts) - np.asarray(u_true(pts))
    return ErrorSummary(float(np.abs(diff).max()),
                        float(np.sqrt(np.mean(diff ** 2))),
                        len(pts))


def convergence_rate(e_coarse, e_fine, m_coarse, m_fine):
    """Observed order: log(e ratio) / log(h ratio) with h = 1/(m-1).

    A zero error means the method is exact at that resolution; the rate
    is reported as +inf ("exact") in that case.
    """
    if m_fine <= m_coarse or m_coarse < 2:
        raise ValueError(f"need m_fine > m_coarse >= 2, got "
                         f"{m_coarse} -> {m_fine}")
    if e_coarse < 0 or e_fine < 0:
        raise ValueError("errors must be nonnegative")
    if e_coarse == 0.0 or e_fine == 0.0:
        return float("inf")
    h_coarse = 1.0 / (m_coarse - 1)
    h_fine = 1.0 / (m_fine - 1)
    return float(np.log(e_coarse / e_fine) / np.log(h_coarse / h_fine))
