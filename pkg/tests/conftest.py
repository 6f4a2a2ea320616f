"""Shared test helpers: expected solution values and numerical oracles."""

import numpy as np
import pytest

import canodual as cd
from canodual import fixtures

# (x, dual point, objective value, kind) for the three stationary points of
# the bundled one-dimensional double-well program; published to six digits.
DOUBLE_WELL_POINTS = (
    (2.11491, 0.236417, -1.02951, cd.PointKind.CERTIFIED_GLOBAL_MIN),
    (-1.86081, -0.268701, 0.9665031, cd.PointKind.LOCAL_MIN),
    (-0.254102, -1.96772, 2.063, cd.PointKind.LOCAL_MAX),
)

# Published solutions of the five bundled distance-geometry instances.
MDGP_EXPECTED = {
    "3nvf-model-1": {
        "sigma": np.array([70.1836, 70.1812]),
        "x": np.array([-2.28097, -1.20037, -1.69582]),
        "c": np.array([124.7908, 34.615]),
    },
    "3nvf-models-2-3": {
        "sigma": np.array([0.920088, 0.0127286, 0.921273]),
        "x": np.array([9.16977, -0.676538, -1.9274, 13.9231, -0.879925, -0.0129248]),
        "c": np.array([143.4545, 143.4545, 34.615]),
    },
    "3nvg-model-1": {
        "sigma": np.array([0.708403, 0.0127287, 0.699001]),
        "x": np.array([-8.51192, -2.41048, 6.4135, -9.19493, -0.276929, 6.09007]),
        "c": np.array([135.009238, 135.009238, 105.3125]),
    },
    "3nvg-models-2-3": {
        "sigma": np.array([0.849735, 0.0127287, 0.84036]),
        "x": np.array([-8.95484, -2.63187, 7.00689, -10.0759, -0.710929, 7.27107]),
        "c": np.array([168.721474, 168.721474, 105.312565]),
    },
    "3nvh-models-1-2": {
        "sigma": np.array([0.0127287]),
        "x": np.array([3.69507, 0.450071, -6.01593]),
        "c": np.array([57.409]),
    },
}


@pytest.fixture
def double_well():
    return fixtures.double_well()


@pytest.fixture(params=fixtures.MDGP_NAMES)
def mdgp_name(request):
    return request.param


def central_difference(fun, x, h=1e-5):
    """Central finite-difference gradient, the oracle for analytic gradients."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        g[i] = (fun(x + step) - fun(x - step)) / (2.0 * h)
    return g


def relative_error(approx, exact):
    approx = np.atleast_1d(np.asarray(approx, dtype=float))
    exact = np.atleast_1d(np.asarray(exact, dtype=float))
    return float(np.linalg.norm(approx - exact) / max(1.0, np.linalg.norm(exact)))


def golden_section_min(fun, lo, hi, tol=1e-12):
    """Golden-section line minimizer, used as an independent optimum oracle."""
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = fun(d)
    t = 0.5 * (a + b)
    return t, fun(t)


def random_rotation(rng):
    """Haar-ish random rotation from the QR of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def rigid_feasible_instance():
    """A sensor pinned inside four anchors with exact target distances."""
    anchors = np.array([
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ])
    xstar = np.array([0.1, 0.2, 0.3])
    constraints = [
        cd.DistanceConstraint(cd.AnchorRef(i), cd.SensorRef(0),
                              target=float(np.linalg.norm(xstar - anchors[i])))
        for i in range(4)
    ]
    inst = cd.MdgpInstance(anchors=anchors, sensor_count=1,
                           constraints=constraints, epsilon=0.0)
    return inst, xstar
