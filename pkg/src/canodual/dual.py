"""Dual-side machinery of the canonical transformation.

For a program with terms 0.5*alpha_i*(xi_i(x))^2 the dual variable is an
m-vector sigma.  The core objects are

    G(sigma) = Q + sum_i sigma_i A_i
    F(sigma) = f - sum_i sigma_i b_i
    dual value  sum_i (c_i sigma_i - 0.5 sigma_i^2 / alpha_i) - 0.5 F'G+F

with G+ the Moore-Penrose inverse.  A sigma is feasible when F lies in the
column space of G; on the cone where G is positive definite the dual value
is concave and a stationary point certifies a global primal minimum, with
the minimizer recovered as x = G+F.

Dual vectors are plain float arrays of length m.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DualInfeasibleError, SingularGeometryError
from .quartic import QuarticProgram, canonical_measure, eval_primal, _freeze

# Default tolerances; see DualGeometry for how they are applied.
COLSPACE_TOL = 1e-10
EIG_BAND = 1e-10
PINV_RCOND = 1e-12


class Region(enum.Enum):
    """Definiteness classification of G(sigma)."""

    POSITIVE_DEFINITE = "positive_definite"
    NEGATIVE_DEFINITE = "negative_definite"
    INDEFINITE = "indefinite"
    SINGULAR = "singular"


@dataclass(frozen=True, eq=False)
class DualGeometry:
    """G, F, the pseudoinverse of G and feasibility data at one dual point.

    ``region`` is Singular whenever any eigenvalue of G falls inside the
    band +-EIG_BAND*max(1, ||G||); strict definiteness is required for the
    PositiveDefinite / NegativeDefinite tags.  ``colspace_ok`` holds when
    ||(I - G G+)F|| <= tol*(1 + ||F||).
    """

    G: np.ndarray
    F: np.ndarray
    Gpinv: np.ndarray
    region: Region
    colspace_ok: bool
    col_residual: float
    eigvals: np.ndarray


def _check_sigma(m: int, sigma) -> np.ndarray:
    sigma = np.ascontiguousarray(np.atleast_1d(np.asarray(sigma, dtype=float)))
    if sigma.shape != (m,):
        raise DimensionMismatchError(
            f"dual vector has shape {sigma.shape}, expected ({m},)"
        )
    return sigma


def _eigh_pinv(w: np.ndarray, V: np.ndarray, rcond: float) -> np.ndarray:
    scale = np.max(np.abs(w)) if w.size else 0.0
    if scale == 0.0:
        return np.zeros((w.size, w.size))
    inv = np.where(np.abs(w) > rcond * scale, 1.0, 0.0)
    inv = np.divide(inv, w, out=np.zeros_like(w), where=inv != 0.0)
    return (V * inv) @ V.T


def pseudo_inverse(M, rcond: float = PINV_RCOND) -> np.ndarray:
    """Moore-Penrose inverse of a symmetric matrix via eigendecomposition.

    Eigenvalues of magnitude below rcond times the largest are treated as
    exact zeros.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    M = 0.5 * (M + M.T)
    w, V = np.linalg.eigh(M)
    return _eigh_pinv(w, V, rcond)


def geometry_from_packed(packed, sigma: np.ndarray,
                         tol_col: float = COLSPACE_TOL,
                         rcond: float = PINV_RCOND) -> DualGeometry:
    """Assemble and classify the dual geometry from packed program arrays."""
    if packed.A.shape[0]:
        G = packed.Q + np.einsum("i,ijk->jk", sigma, packed.A)
        F = packed.f - sigma @ packed.b
    else:
        G = packed.Q.copy()
        F = packed.f.copy()
    G = 0.5 * (G + G.T)
    w, V = np.linalg.eigh(G)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    band = EIG_BAND * max(1.0, scale)
    if w.size == 0:
        region = Region.POSITIVE_DEFINITE  # empty G acts as trivially definite
    elif np.any(np.abs(w) <= band):
        region = Region.SINGULAR
    elif np.all(w > 0.0):
        region = Region.POSITIVE_DEFINITE
    elif np.all(w < 0.0):
        region = Region.NEGATIVE_DEFINITE
    else:
        region = Region.INDEFINITE
    Gpinv = _eigh_pinv(w, V, rcond)
    resid = float(np.linalg.norm(F - G @ (Gpinv @ F)))
    ok = resid <= tol_col * (1.0 + float(np.linalg.norm(F)))
    return DualGeometry(
        G=_freeze(G), F=_freeze(F), Gpinv=_freeze(Gpinv),
        region=region, colspace_ok=ok, col_residual=resid, eigvals=_freeze(w),
    )


def build_geometry(prog: QuarticProgram, sigma,
                   tol_col: float = COLSPACE_TOL,
                   rcond: float = PINV_RCOND) -> DualGeometry:
    """G(sigma), F(sigma), pseudoinverse, definiteness and feasibility."""
    sigma = _check_sigma(prog.m, sigma)
    return geometry_from_packed(prog.packed, sigma, tol_col, rcond)


def _require_feasible(geom: DualGeometry) -> DualGeometry:
    if not geom.colspace_ok:
        raise DualInfeasibleError(geom.col_residual)
    return geom


def dual_value_from(packed, sigma: np.ndarray, geom: DualGeometry) -> float:
    head = float(packed.c @ sigma - 0.5 * (sigma / packed.alpha) @ sigma) if sigma.size else 0.0
    return head - 0.5 * float(geom.F @ (geom.Gpinv @ geom.F))


def dual_grad_from(packed, sigma: np.ndarray, geom: DualGeometry) -> np.ndarray:
    x = geom.Gpinv @ geom.F
    if not sigma.size:
        return np.zeros(0)
    Ax = packed.A @ x
    xi = 0.5 * (Ax @ x) + packed.b @ x + packed.c
    return xi - sigma / packed.alpha


def dual_hess_from(packed, sigma: np.ndarray, geom: DualGeometry) -> np.ndarray:
    """Hessian using the pseudoinverse of G; valid on the nonsingular set."""
    m = sigma.size
    if m == 0:
        return np.zeros((0, 0))
    x = geom.Gpinv @ geom.F
    B = packed.A @ x + packed.b
    H = -np.diag(1.0 / packed.alpha) - B @ geom.Gpinv @ B.T
    return 0.5 * (H + H.T)


def eval_dual(prog: QuarticProgram, sigma) -> float:
    """Dual value; raises DualInfeasibleError outside the feasible space."""
    sigma = _check_sigma(prog.m, sigma)
    packed = prog.packed
    if np.any(packed.alpha == 0.0):
        raise ValueError("dual value undefined for zero-alpha terms")
    geom = _require_feasible(geometry_from_packed(packed, sigma))
    return dual_value_from(packed, sigma, geom)


def grad_dual(prog: QuarticProgram, sigma) -> np.ndarray:
    """Gradient of the dual value: xi(G+F) - sigma/alpha."""
    sigma = _check_sigma(prog.m, sigma)
    packed = prog.packed
    if np.any(packed.alpha == 0.0):
        raise ValueError("dual gradient undefined for zero-alpha terms")
    geom = _require_feasible(geometry_from_packed(packed, sigma))
    return dual_grad_from(packed, sigma, geom)


def hess_dual(prog: QuarticProgram, sigma) -> np.ndarray:
    """Analytic dual Hessian -diag(1/alpha) - B'G^{-1}B with B_i = A_i x + b_i.

    Requires G(sigma) nonsingular; negative semidefinite wherever G is
    positive definite and all alpha are positive.
    """
    sigma = _check_sigma(prog.m, sigma)
    packed = prog.packed
    if np.any(packed.alpha == 0.0):
        raise ValueError("dual Hessian undefined for zero-alpha terms")
    geom = _require_feasible(geometry_from_packed(packed, sigma))
    if geom.region is Region.SINGULAR:
        raise SingularGeometryError("G(sigma) is singular; dual Hessian undefined")
    return dual_hess_from(packed, sigma, geom)


def recover_primal(prog: QuarticProgram, sigma) -> np.ndarray:
    """Primal partner x = G+(sigma) F(sigma) of a feasible dual point."""
    sigma = _check_sigma(prog.m, sigma)
    geom = _require_feasible(geometry_from_packed(prog.packed, sigma))
    return geom.Gpinv @ geom.F


def gao_strang(prog: QuarticProgram, x, sigma) -> float:
    """Mixed complementary value sum_i (xi_i(x) sigma_i - 0.5 sigma_i^2/alpha_i)
    plus the quadratic tail at x."""
    sigma = _check_sigma(prog.m, sigma)
    packed = prog.packed
    if np.any(packed.alpha == 0.0):
        raise ValueError("complementary value undefined for zero-alpha terms")
    xi = canonical_measure(prog, x)
    x = np.asarray(x, dtype=float)
    head = float(xi @ sigma - 0.5 * (sigma / packed.alpha) @ sigma) if sigma.size else 0.0
    return head + 0.5 * float(x @ packed.Q @ x) - float(packed.f @ x)


def duality_gap(prog: QuarticProgram, x, sigma) -> float:
    """|P(x) - P^d(sigma)| for a feasible sigma."""
    return abs(eval_primal(prog, x) - eval_dual(prog, sigma))
