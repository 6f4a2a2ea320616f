"""Pair potentials and local refinement of atom clusters.

Cluster energies use reduced units (well depth and diameter both 1); the
coefficient forms A/r^12 - B/r^6 and C/r^12 - D/r^10 cover the physical-unit
van der Waals and hydrogen-bond pair energies.  Refinement runs a fixed
budget of steepest-descent steps followed by nonlinear conjugate gradient
(Polak-Ribiere with periodic restart), both under a backtracking line
search, so the energy trace never increases.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CoincidentAtomsError


@dataclass(frozen=True)
class LjParams:
    """Well depth and atom diameter of the 4*eps*((s/r)^12 - (s/r)^6) form."""

    epsilon: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.epsilon <= 0 or self.sigma <= 0:
            raise ValueError("epsilon and sigma must be positive")


@dataclass(frozen=True)
class PairCoefficients:
    """Coefficients of the r^-12/r^-6 (A, B) and r^-12/r^-10 (C, D) forms."""

    A: float = 1.0
    B: float = 1.0
    C: float = 1.0
    D: float = 1.0

    def __post_init__(self):
        for name in ("A", "B", "C", "D"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"coefficient {name} must be finite and nonnegative")


@dataclass(frozen=True, eq=False)
class Configuration:
    """N >= 2 atom positions, tagged with their unit system."""

    positions: np.ndarray  # (N, 3)
    units: str = "reduced"

    def __post_init__(self):
        pos = np.atleast_2d(np.array(self.positions, dtype=float))
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError(f"positions must be (N, 3), got {pos.shape}")
        if pos.shape[0] < 2:
            raise ValueError("a configuration needs at least two atoms")
        pos = np.ascontiguousarray(pos)
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)


def lj_pair(r: float, p: LjParams = LjParams()) -> float:
    """Pair energy 4*eps*((sigma/r)^12 - (sigma/r)^6); zero crossing at
    r = sigma, minimum -eps at r = 2^(1/6)*sigma."""
    if r <= 0:
        raise ValueError("pair distance must be positive")
    s6 = (p.sigma / r) ** 6
    return 4.0 * p.epsilon * (s6 * s6 - s6)


def vdw_AB(r: float, p: PairCoefficients) -> float:
    """van der Waals pair energy A/r^12 - B/r^6."""
    if r <= 0:
        raise ValueError("pair distance must be positive")
    return p.A / r ** 12 - p.B / r ** 6


def hb_potential(r: float, p: PairCoefficients) -> float:
    """Hydrogen-bond pair energy C/r^12 - D/r^10."""
    if r <= 0:
        raise ValueError("pair distance must be positive")
    return p.C / r ** 12 - p.D / r ** 10


def _positions(cfg: Configuration) -> np.ndarray:
    return np.ascontiguousarray(cfg.positions)


def lj_cluster_energy(cfg: Configuration) -> float:
    """Reduced-unit cluster energy 4*sum((1/tau^6) - (1/tau^3)) over pairs,
    with tau the squared pair distance."""
    value = kernels.lj_value(_positions(cfg))
    if not math.isfinite(value):
        raise CoincidentAtomsError("coincident atoms: cluster energy diverges")
    return value


def lj_cluster_grad(cfg: Configuration) -> np.ndarray:
    """Gradient of the cluster energy, flattened to length 3N."""
    value, grad = kernels.lj_value_grad(_positions(cfg))
    if not math.isfinite(value):
        raise CoincidentAtomsError("coincident atoms: cluster energy diverges")
    return np.asarray(grad).reshape(-1)


@dataclass(eq=False)
class RefineResult:
    configuration: Configuration
    energies: list  # accepted energy per step, starting value first
    converged: bool
    message: str = ""


def _line_search(pos, energy, grad, direction, t0):
    """Backtracking on the flattened position vector; returns the accepted
    (positions, energy, step) or None."""
    slope = float(grad @ direction)
    if slope >= 0:
        return None
    t = t0
    for _ in range(60):
        cand = pos + t * direction.reshape(pos.shape)
        cand_e = kernels.lj_value(np.ascontiguousarray(cand))
        if math.isfinite(cand_e) and cand_e <= energy + 1e-4 * t * slope:
            return cand, cand_e, t
        t *= 0.5
    return None


def refine(cfg: Configuration, stage1_steps: int = 500,
           stage2_steps: int = 500, grad_tol: float = 1e-12) -> RefineResult:
    """Two-stage local descent on the reduced-unit cluster energy.

    Stage one is steepest descent, stage two Polak-Ribiere conjugate
    gradient restarted every 3N iterations.  Both stop early once the
    gradient norm drops below grad_tol; a failed line search returns the
    best configuration so far with a diagnostic message.
    """
    pos = _positions(cfg).copy()
    n = pos.shape[0]
    energy, grad = kernels.lj_value_grad(pos)
    if not math.isfinite(energy):
        raise CoincidentAtomsError("coincident atoms: cluster energy diverges")
    grad = np.asarray(grad).reshape(-1)
    energies = [energy]
    t_prev = 1e-3
    message = ""
    converged = False

    def finish():
        out = Configuration(positions=pos, units=cfg.units)
        return RefineResult(configuration=out, energies=energies,
                            converged=converged, message=message)

    for _ in range(stage1_steps):
        if np.linalg.norm(grad) <= grad_tol:
            converged = True
            return finish()
        step = _line_search(pos, energy, grad, -grad, min(1.0, 4.0 * t_prev))
        if step is None:
            message = "line search failed during steepest descent"
            return finish()
        pos, energy, t_prev = step
        _, g = kernels.lj_value_grad(np.ascontiguousarray(pos))
        grad = np.asarray(g).reshape(-1)
        energies.append(energy)

    direction = -grad
    since_restart = 0
    for _ in range(stage2_steps):
        if np.linalg.norm(grad) <= grad_tol:
            converged = True
            return finish()
        if since_restart >= 3 * n or float(grad @ direction) >= 0:
            direction = -grad
            since_restart = 0
        step = _line_search(pos, energy, grad, direction, min(1.0, 4.0 * t_prev))
        if step is None and since_restart > 0:
            direction = -grad  # retry along steepest descent before giving up
            since_restart = 0
            step = _line_search(pos, energy, grad, direction, min(1.0, 4.0 * t_prev))
        if step is None:
            message = "line search failed during conjugate gradient"
            return finish()
        pos, energy, t_prev = step
        _, g = kernels.lj_value_grad(np.ascontiguousarray(pos))
        new_grad = np.asarray(g).reshape(-1)
        beta = float(new_grad @ (new_grad - grad)) / max(float(grad @ grad), 1e-300)
        direction = -new_grad + max(beta, 0.0) * direction
        grad = new_grad
        since_restart += 1
        energies.append(energy)

    converged = bool(np.linalg.norm(grad) <= grad_tol)
    return finish()
