"""Pure numpy implementations of the hot evaluation kernels.

These are the fallback used when the compiled extension is unavailable and
the ground truth the extension is tested against.  All functions take packed
C-contiguous float64 arrays:

    alpha (m,)   term weights
    A     (m,n,n) symmetric matrices of the quadratic measures
    b     (m,n)  linear parts
    c     (m,)   constant parts
    Q     (n,n)  quadratic tail
    f     (n,)   linear tail
"""

import numpy as np


def quartic_measure(A, b, c, x):
    """Vector of quadratic measures 0.5 x'A_i x + b_i'x + c_i."""
    if A.shape[0] == 0:
        return np.zeros(0)
    return 0.5 * np.einsum("ijk,j,k->i", A, x, x) + b @ x + c


def quartic_value(alpha, A, b, c, Q, f, x):
    """Objective value: sum of 0.5 alpha_i xi_i^2 plus the quadratic tail."""
    xi = quartic_measure(A, b, c, x)
    return float(0.5 * (alpha * xi) @ xi + 0.5 * x @ Q @ x - f @ x)


def quartic_value_grad(alpha, A, b, c, Q, f, x):
    """Objective value and analytic gradient, in one pass."""
    if A.shape[0] == 0:
        g = Q @ x - f
        return float(0.5 * x @ Q @ x - f @ x), g
    Ax = A @ x
    xi = 0.5 * (Ax @ x) + b @ x + c
    g = (alpha * xi) @ (Ax + b) + Q @ x - f
    val = 0.5 * (alpha * xi) @ xi + 0.5 * x @ Q @ x - f @ x
    return float(val), g


def lj_value(pos):
    """Reduced-unit Lennard-Jones cluster energy of (N,3) positions.

    Returns +inf when two atoms coincide.
    """
    n = pos.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    d = pos[iu] - pos[ju]
    tau = np.einsum("ij,ij->i", d, d)
    if tau.size and tau.min() == 0.0:
        return float("inf")
    it3 = 1.0 / (tau * tau * tau)
    return float(4.0 * np.sum(it3 * it3 - it3))


def lj_value_grad(pos):
    """Energy and (N,3) gradient of the reduced-unit cluster energy."""
    n = pos.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    d = pos[iu] - pos[ju]
    tau = np.einsum("ij,ij->i", d, d)
    if tau.size and tau.min() == 0.0:
        return float("inf"), np.full_like(pos, np.nan)
    it = 1.0 / tau
    it3 = it * it * it
    it4 = it3 * it
    it7 = it3 * it4
    energy = float(4.0 * np.sum(it3 * it3 - it3))
    coef = 24.0 * it4 - 48.0 * it7
    pair = coef[:, None] * d
    grad = np.zeros_like(pos)
    np.add.at(grad, iu, pair)
    np.subtract.at(grad, ju, pair)
    return energy, grad
