"""Manufactured-solution boundary-value problem presets.

Each preset pairs a true solution u (with hand-coded gradient and
Hessian) with a second-order operator

    L u = a1 u_xx + a2 u_yy + a3 u_zz + 2 a4 u_xy + 2 a5 u_xz + 2 a6 u_yz,

and derives the right-hand side f = L u and Dirichlet data g = u.  All
fields are vectorized over (n, 3) point arrays.  Hessian components are
ordered (xx, yy, zz, xy, xz, yz) throughout.
"""

from dataclasses import dataclass, field

import numpy as np

HESSIAN_ORDER = ("xx", "yy", "zz", "xy", "xz", "yz")


def _sin5(p):
    return np.sin(5 * p[:, 0]) * np.sin(5 * p[:, 1]) * np.sin(5 * p[:, 2])


def _sin5_grad(p):
    sx, sy, sz = (np.sin(5 * p[:, i]) for i in range(3))
    cx, cy, cz = (np.cos(5 * p[:, i]) for i in range(3))
    return 5 * np.column_stack([cx * sy * sz, sx * cy * sz, sx * sy * cz])


def _sin5_hess(p):
    sx, sy, sz = (np.sin(5 * p[:, i]) for i in range(3))
    cx, cy, cz = (np.cos(5 * p[:, i]) for i in range(3))
    u = sx * sy * sz
    return np.column_stack([
        -25 * u, -25 * u, -25 * u,
        25 * cx * cy * sz, 25 * cx * sy * cz, 25 * sx * cy * cz,
    ])


def _mono123(p):
    return p[:, 0] * p[:, 1] ** 2 * p[:, 2] ** 3


def _mono123_grad(p):
    x, y, z = p[:, 0], p[:, 1], p[:, 2]
    return np.column_stack([y**2 * z**3, 2 * x * y * z**3, 3 * x * y**2 * z**2])


def _mono123_hess(p):
    x, y, z = p[:, 0], p[:, 1], p[:, 2]
    zero = np.zeros_like(x)
    return np.column_stack([
        zero, 2 * x * z**3, 6 * x * y**2 * z,
        2 * y * z**3, 3 * y**2 * z**2, 6 * x * y * z**2,
    ])


def _quintic(p):
    return p[:, 0] ** 5 + 2 * p[:, 1] ** 5 + 3 * p[:, 2] ** 5


def _quintic_grad(p):
    x, y, z = p[:, 0], p[:, 1], p[:, 2]
    return np.column_stack([5 * x**4, 10 * y**4, 15 * z**4])


def _quintic_hess(p):
    x, y, z = p[:, 0], p[:, 1], p[:, 2]
    zero = np.zeros_like(x)
    return np.column_stack([20 * x**3, 40 * y**3, 60 * z**3,
                            zero, zero, zero])


def _sin81214(p):
    return np.sin(8 * p[:, 0]) * np.sin(12 * p[:, 1]) * np.sin(14 * p[:, 2])


def _sin81214_grad(p):
    sx, sy, sz = np.sin(8 * p[:, 0]), np.sin(12 * p[:, 1]), np.sin(14 * p[:, 2])
    cx, cy, cz = np.cos(8 * p[:, 0]), np.cos(12 * p[:, 1]), np.cos(14 * p[:, 2])
    return np.column_stack([8 * cx * sy * sz, 12 * sx * cy * sz,
                            14 * sx * sy * cz])


def _sin81214_hess(p):
    sx, sy, sz = np.sin(8 * p[:, 0]), np.sin(12 * p[:, 1]), np.sin(14 * p[:, 2])
    cx, cy, cz = np.cos(8 * p[:, 0]), np.cos(12 * p[:, 1]), np.cos(14 * p[:, 2])
    u = sx * sy * sz
    return np.column_stack([
        -64 * u, -144 * u, -196 * u,
        96 * cx * cy * sz, 112 * cx * sy * cz, 168 * sx * cy * cz,
    ])


def _sinsum(p):
    return np.sin(8 * p[:, 0]) + np.sin(12 * p[:, 1]) + np.sin(14 * p[:, 2])


def _sinsum_grad(p):
    return np.column_stack([8 * np.cos(8 * p[:, 0]),
                            12 * np.cos(12 * p[:, 1]),
                            14 * np.cos(14 * p[:, 2])])


def _sinsum_hess(p):
    zero = np.zeros(len(p))
    return np.column_stack([-64 * np.sin(8 * p[:, 0]),
                            -144 * np.sin(12 * p[:, 1]),
                            -196 * np.sin(14 * p[:, 2]),
                            zero, zero, zero])


def _abs3(p):
    t = p[:, 0] + p[:, 1] - p[:, 2]
    return np.abs(t) ** 3


def _abs3_grad(p):
    t = p[:, 0] + p[:, 1] - p[:, 2]
    d = 3 * t * np.abs(t)
    return np.column_stack([d, d, -d])


def _abs3_hess(p):
    # second derivatives exist a.e.; on the kink plane |t| = 0 the limit
    # value 0 is used
    t = np.abs(p[:, 0] + p[:, 1] - p[:, 2])
    return np.column_stack([6 * t, 6 * t, 6 * t, 6 * t, -6 * t, -6 * t])


def _sin5sum(p):
    return (np.sin(5 * p[:, 0]) + np.sin(5 * p[:, 1]) + np.sin(5 * p[:, 2]))


def _sin5sum_grad(p):
    return 5 * np.column_stack([np.cos(5 * p[:, 0]), np.cos(5 * p[:, 1]),
                                np.cos(5 * p[:, 2])])


def _sin5sum_hess(p):
    zero = np.zeros(len(p))
    return np.column_stack([-25 * np.sin(5 * p[:, 0]),
                            -25 * np.sin(5 * p[:, 1]),
                            -25 * np.sin(5 * p[:, 2]),
                            zero, zero, zero])


SOLUTIONS = {
    "sin5": (_sin5, _sin5_grad, _sin5_hess),
    "mono123": (_mono123, _mono123_grad, _mono123_hess),
    "quintic": (_quintic, _quintic_grad, _quintic_hess),
    "sin8-12-14": (_sin81214, _sin81214_grad, _sin81214_hess),
    "sinsum": (_sinsum, _sinsum_grad, _sinsum_hess),
    "abs3": (_abs3, _abs3_grad, _abs3_hess),
    "sin5sum": (_sin5sum, _sin5sum_grad, _sin5sum_hess),
}


def _const_coeffs(values):
    vals = np.asarray(values, dtype=float)

    def coeffs(p):
        return np.broadcast_to(vals, (len(p), 6)).copy()

    return coeffs


def _vardiag_coeffs(p):
    x, y = p[:, 0], p[:, 1]
    zero = np.zeros_like(x)
    return np.column_stack([10 + np.cos(x), np.exp(y), 10 + np.sin(x),
                            zero, zero, zero])


def _varfull_coeffs(p):
    x, y, z = p[:, 0], p[:, 1], p[:, 2]
    return np.column_stack([10 + np.cos(x), np.exp(y), 10 + np.sin(x),
                            np.cos(x), np.cos(y), np.cos(z)])


OPERATORS = {
    "laplace": _const_coeffs([1, 1, 1, 0, 0, 0]),
    "var-diag": _vardiag_coeffs,
    "var-full": _varfull_coeffs,
    "weak": _const_coeffs([1, 1, 1, 1, 1, 1]),
    "nonelliptic": _const_coeffs([1, 1, 1, 10, 10, 10]),
}


@dataclass(frozen=True)
class BVPDefinition:
    """A manufactured Dirichlet problem: operator, truth, and data."""

    solution_id: str
    operator_id: str
    u: callable = field(repr=False)
    grad: callable = field(repr=False)
    hessian: callable = field(repr=False)
    coefficients: callable = field(repr=False)

    def f(self, pts):
        """Right-hand side L u with cross terms doubled."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        a = self.coefficients(pts)
        h = self.hessian(pts)
        return (a[:, 0] * h[:, 0] + a[:, 1] * h[:, 1] + a[:, 2] * h[:, 2]
                + 2 * (a[:, 3] * h[:, 3] + a[:, 4] * h[:, 4]
                       + a[:, 5] * h[:, 5]))

    def g(self, pts):
        """Dirichlet data: the true solution restricted to the boundary."""
        return self.u(np.atleast_2d(np.asarray(pts, dtype=float)))


def make_preset(solution_id, operator_id):
    """Look up a (solution, operator) pair and assemble the problem."""
    if solution_id not in SOLUTIONS:
        raise KeyError(f"unknown solution preset {solution_id!r}; "
                       f"choose from {sorted(SOLUTIONS)}")
    if operator_id not in OPERATORS:
        raise KeyError(f"unknown operator preset {operator_id!r}; "
                       f"choose from {sorted(OPERATORS)}")
    u, grad, hess = SOLUTIONS[solution_id]

    def u_v(p):
        return u(np.atleast_2d(np.asarray(p, dtype=float)))

    def grad_v(p):
        return grad(np.atleast_2d(np.asarray(p, dtype=float)))

    def hess_v(p):
        return hess(np.atleast_2d(np.asarray(p, dtype=float)))

    return BVPDefinition(solution_id, operator_id, u_v, grad_v, hess_v,
                         OPERATORS[operator_id])


# ---------------------------------------------------------------------------
# Ellipticity classification

def ellipticity_eigenvalues(a):
    """Sorted eigenvalues of the symmetric coefficient matrix at a point."""
    a1, a2, a3, a4, a5, a6 = (float(v) for v in a)
    mat = np.array([[a1, a4, a5], [a4, a2, a6], [a5, a6, a3]])
    return np.linalg.eigvalsh(mat)


@dataclass(frozen=True)
class EllipticityReport:
    sample_points: np.ndarray
    eigenvalues: np.ndarray      # (n, 3) ascending per point
    classification: str          # elliptic | weakly-elliptic | non-elliptic


def classify_ellipticity(bvp, sample_points, zero_tol=1e-12):
    """Classify the operator by eigenvalue signs over sample points."""
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))
    a = bvp.coefficients(pts)
    mats = np.empty((len(pts), 3, 3))
    mats[:, 0, 0], mats[:, 1, 1], mats[:, 2, 2] = a[:, 0], a[:, 1], a[:, 2]
    mats[:, 0, 1] = mats[:, 1, 0] = a[:, 3]
    mats[:, 0, 2] = mats[:, 2, 0] = a[:, 4]
    mats[:, 1, 2] = mats[:, 2, 1] = a[:, 5]
    eig = np.linalg.eigvalsh(mats)
    if np.any(eig < -zero_tol):
        label = "non-elliptic"
    elif np.any(np.abs(eig) <= zero_tol):
        label = "weakly-elliptic"
    else:
        label = "elliptic"
    return EllipticityReport(pts, eig, label)
