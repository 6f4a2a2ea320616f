"""Distance-geometry instances and their compilation to quartic programs.

An instance places ``sensor_count`` unknown points among fixed anchors so
that weighted squared-distance residuals (||p - q||^2 - r^2)^2 are
minimized, with a small linear pull -epsilon'x that breaks ties and keeps
infeasible instances well posed.  Each distance constraint becomes one
squared-quadratic term with weight alpha = 2w, so the compiled objective
matches the direct weighted least-squares form exactly.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InstanceError
from .quartic import QuadraticMap, QuarticProgram, QuarticTerm
from .solver import SolveReport, SolverConfig, solve

DEFAULT_WEIGHT = 0.5
DEFAULT_EPSILON = 0.05
DEFAULT_TARGET = 3.4  # twice the carbon van der Waals radius, in angstroms


@dataclass(frozen=True)
class AnchorRef:
    index: int


@dataclass(frozen=True)
class SensorRef:
    index: int


@dataclass(frozen=True)
class DistanceConstraint:
    """Target distance between two points, each an anchor or a sensor."""

    end_a: AnchorRef | SensorRef
    end_b: AnchorRef | SensorRef
    target: float = DEFAULT_TARGET
    weight: float = DEFAULT_WEIGHT


@dataclass(frozen=True, eq=False)
class MdgpInstance:
    """Anchors, sensors and weighted distance constraints."""

    anchors: np.ndarray  # (num_anchors, 3)
    sensor_count: int
    constraints: tuple
    epsilon: np.ndarray = None  # (3 * sensor_count,), defaults to all 0.05

    def __post_init__(self):
        anchors = np.atleast_2d(np.array(self.anchors, dtype=float))
        if anchors.size == 0:
            anchors = anchors.reshape(0, 3)
        if anchors.shape[1] != 3:
            raise InstanceError(f"anchors must be 3-vectors, got shape {anchors.shape}")
        anchors.flags.writeable = False
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(self, "sensor_count", int(self.sensor_count))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        n = 3 * self.sensor_count
        if self.epsilon is None:
            eps = np.full(n, DEFAULT_EPSILON)
        else:
            eps = np.asarray(self.epsilon, dtype=float)
            if eps.ndim == 0:
                eps = np.full(n, float(eps))
        if eps.shape != (n,):
            raise InstanceError(
                f"epsilon must have length {n} (3 per sensor), got {eps.shape}"
            )
        eps = np.ascontiguousarray(eps)
        eps.flags.writeable = False
        object.__setattr__(self, "epsilon", eps)
        self._check()

    def _check(self):
        if self.sensor_count < 0:
            raise InstanceError("sensor count must be nonnegative")
        if not self.constraints:
            raise InstanceError("no constraints")
        for k, con in enumerate(self.constraints):
            for ref in (con.end_a, con.end_b):
                if isinstance(ref, AnchorRef):
                    if not 0 <= ref.index < len(self.anchors):
                        raise InstanceError(f"constraint {k}: anchor index {ref.index} out of range")
                elif isinstance(ref, SensorRef):
                    if not 0 <= ref.index < self.sensor_count:
                        raise InstanceError(f"constraint {k}: sensor index {ref.index} out of range")
                else:
                    raise InstanceError(f"constraint {k}: endpoint must be an anchor or sensor ref")
            if isinstance(con.end_a, AnchorRef) and isinstance(con.end_b, AnchorRef):
                raise InstanceError(f"constraint {k}: both ends are anchors")
            if not con.target > 0:
                raise InstanceError(f"constraint {k}: target distance must be positive")
            if not con.weight > 0:
                raise InstanceError(f"constraint {k}: weight must be positive")


def _term_for(inst: MdgpInstance, con: DistanceConstraint) -> QuarticTerm:
    n = 3 * inst.sensor_count
    A = np.zeros((n, n))
    b = np.zeros(n)
    c = -con.target ** 2
    sensors = [r for r in (con.end_a, con.end_b) if isinstance(r, SensorRef)]
    anchors = [r for r in (con.end_a, con.end_b) if isinstance(r, AnchorRef)]
    if len(sensors) == 1:
        k = sensors[0].index
        p = inst.anchors[anchors[0].index]
        sl = slice(3 * k, 3 * k + 3)
        A[sl, sl] = 2.0 * np.eye(3)
        b[sl] = -2.0 * p
        c += float(p @ p)
    else:
        j, k = sensors[0].index, sensors[1].index
        if j == k:
            raise InstanceError("constraint links a sensor to itself")
        sj = slice(3 * j, 3 * j + 3)
        sk = slice(3 * k, 3 * k + 3)
        A[sj, sj] = 2.0 * np.eye(3)
        A[sk, sk] = 2.0 * np.eye(3)
        A[sj, sk] = -2.0 * np.eye(3)
        A[sk, sj] = -2.0 * np.eye(3)
    return QuarticTerm(alpha=2.0 * con.weight, quad=QuadraticMap(A=A, b=b, c=c))


def build_program(inst: MdgpInstance) -> QuarticProgram:
    """Compile the instance to a quartic program on R^(3s).

    One term per constraint with alpha = 2w, so 0.5*alpha*xi^2 equals
    w*(||p - q||^2 - r^2)^2; the linear pull enters through f = epsilon.
    """
    n = 3 * inst.sensor_count
    terms = tuple(_term_for(inst, con) for con in inst.constraints)
    return QuarticProgram(n=n, terms=terms, Q=np.zeros((n, n)), f=inst.epsilon)


def _endpoint_position(inst, ref, x):
    if isinstance(ref, AnchorRef):
        return inst.anchors[ref.index]
    return x[3 * ref.index:3 * ref.index + 3]


def eval_direct(inst: MdgpInstance, x) -> float:
    """Objective by explicit distance arithmetic, independent of the compiler."""
    x = np.asarray(x, dtype=float)
    if x.shape != (3 * inst.sensor_count,):
        raise DimensionMismatchError(
            f"x has shape {x.shape}, expected ({3 * inst.sensor_count},)"
        )
    total = 0.0
    for con in inst.constraints:
        pa = _endpoint_position(inst, con.end_a, x)
        pb = _endpoint_position(inst, con.end_b, x)
        diff = pa - pb
        total += con.weight * (float(diff @ diff) - con.target ** 2) ** 2
    return total - float(inst.epsilon @ x)


@dataclass(frozen=True)
class ViolationRecord:
    constraint: int
    achieved: float  # distance, angstroms
    residual: float  # squared-distance residual, angstroms^2
    flagged: bool


def violation_report(inst: MdgpInstance, x,
                     threshold: float = 0.1) -> list[ViolationRecord]:
    """Per-constraint achieved distances and squared-distance residuals.

    Residuals with magnitude above ``threshold`` (angstroms^2) are flagged.
    """
    x = np.asarray(x, dtype=float)
    out = []
    for k, con in enumerate(inst.constraints):
        pa = _endpoint_position(inst, con.end_a, x)
        pb = _endpoint_position(inst, con.end_b, x)
        d2 = float((pa - pb) @ (pa - pb))
        residual = d2 - con.target ** 2
        out.append(ViolationRecord(
            constraint=k, achieved=float(np.sqrt(d2)), residual=residual,
            flagged=abs(residual) > threshold,
        ))
    return out


@dataclass(eq=False)
class MdgpSolution:
    positions: np.ndarray | None  # (sensor_count, 3) when certified
    report: SolveReport


def solve_mdgp(inst: MdgpInstance, cfg: SolverConfig | None = None) -> MdgpSolution:
    """Compile and solve; sensor positions come from the certified point."""
    report = solve(build_program(inst), cfg)
    positions = None
    if report.best is not None:
        positions = np.asarray(report.best.x).reshape(inst.sensor_count, 3)
    return MdgpSolution(positions=positions, report=report)
