"""Maximization of the dual value over the positive definite cone and
multistart location/classification of dual critical points.

The ascent path is damped Newton with a backtracking line search that only
accepts steps keeping G(sigma) positive definite and increasing the dual
value; stationary points found there certify global primal minima.  Over
the rest of the feasible space a multistart Newton root finder locates
critical points of the dual gradient, which are then classified through the
definiteness of G and of the primal Hessian at the recovered point.

All randomness flows from the config seed through one generator, and
multistart results are merged in start order, so reports are deterministic
for a given (program, config) pair.
"""

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from .dual import (
    Region,
    dual_grad_from,
    dual_hess_from,
    dual_value_from,
    geometry_from_packed,
)
from .errors import NoFeasibleStartError
from .quartic import QuarticProgram, eval_primal, hess_primal, validate


class PointKind(enum.Enum):
    CERTIFIED_GLOBAL_MIN = "certified_global_min"
    LOCAL_MIN = "local_min"
    LOCAL_MAX = "local_max"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class SolverConfig:
    grad_tol: float = 1e-9
    max_iter: int = 200
    multistart_count: int = 64
    seed: int = 0
    step_shrink: float = 0.5
    dedupe_tol: float = 1e-6
    search_box: tuple | None = None  # (lo, hi) or per-coordinate [(lo, hi), ...]
    gap_tol: float = 1e-6  # relative: gap <= gap_tol * (1 + |dual value|)

    def __post_init__(self):
        if self.grad_tol <= 0 or self.dedupe_tol <= 0 or self.gap_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1 or self.multistart_count < 1:
            raise ValueError("iteration and multistart counts must be >= 1")
        if not 0.0 < self.step_shrink < 1.0:
            raise ValueError("step_shrink must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class CriticalPoint:
    """A dual point, its recovered primal partner and their classification."""

    sigma: np.ndarray
    x: np.ndarray
    primal_value: float
    dual_value: float
    region: Region
    kind: PointKind
    grad_norm: float
    message: str = ""

    @property
    def gap(self) -> float:
        return abs(self.primal_value - self.dual_value)


@dataclass(eq=False)
class SolveReport:
    best: CriticalPoint | None
    all_points: list
    iterations: int
    wall_time: float
    diagnostics: list = field(default_factory=list)

    @property
    def biggest_local_min(self) -> CriticalPoint | None:
        """Largest-value local minimum among the found points (metadata only;
        multistart search is not exhaustive)."""
        cands = [p for p in self.all_points if p.kind is PointKind.LOCAL_MIN]
        return max(cands, key=lambda p: p.primal_value) if cands else None

    @property
    def biggest_local_max(self) -> CriticalPoint | None:
        cands = [p for p in self.all_points if p.kind is PointKind.LOCAL_MAX]
        return max(cands, key=lambda p: p.primal_value) if cands else None


def _classify(prog, packed, sigma, geom, dual_val, primal_val, grad_norm, cfg, x):
    if grad_norm > cfg.grad_tol:
        return PointKind.UNCLASSIFIED
    gap_ok = abs(primal_val - dual_val) <= cfg.gap_tol * (1.0 + abs(dual_val))
    if geom.region is Region.POSITIVE_DEFINITE:
        # The global certificate additionally needs every term weight
        # positive; otherwise the objective may be unbounded below even
        # with G positive definite.
        if gap_ok and np.all(packed.alpha > 0.0):
            return PointKind.CERTIFIED_GLOBAL_MIN
        return PointKind.UNCLASSIFIED
    if geom.region is Region.NEGATIVE_DEFINITE:
        H = hess_primal(prog, x)
        w = np.linalg.eigvalsh(H)
        band = 1e-10 * max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
        if np.all(w > band):
            return PointKind.LOCAL_MIN
        if np.all(w < -band):
            return PointKind.LOCAL_MAX
    return PointKind.UNCLASSIFIED


def _make_point(prog, packed, sigma, cfg, message="") -> CriticalPoint:
    geom = geometry_from_packed(packed, sigma)
    x = geom.Gpinv @ geom.F
    dual_val = dual_value_from(packed, sigma, geom)
    primal_val = eval_primal(prog, x)
    g = dual_grad_from(packed, sigma, geom)
    grad_norm = float(np.linalg.norm(g)) if g.size else 0.0
    kind = _classify(prog, packed, sigma, geom, dual_val, primal_val, grad_norm, cfg, x)
    sig = sigma.copy()
    sig.flags.writeable = False
    x.flags.writeable = False
    return CriticalPoint(
        sigma=sig, x=x, primal_value=primal_val, dual_value=dual_val,
        region=geom.region, kind=kind, grad_norm=grad_norm, message=message,
    )


def classify_point(prog: QuarticProgram, point: CriticalPoint,
                   cfg: SolverConfig | None = None) -> PointKind:
    """Classification of a stationary point; raises if it is not stationary."""
    cfg = cfg or SolverConfig()
    if point.grad_norm > cfg.grad_tol:
        raise ValueError(
            f"point is not stationary (|grad| = {point.grad_norm:.3e} > {cfg.grad_tol:.3e})"
        )
    packed = prog.packed
    geom = geometry_from_packed(packed, np.asarray(point.sigma, dtype=float))
    return _classify(prog, packed, point.sigma, geom, point.dual_value,
                     point.primal_value, point.grad_norm, cfg, point.x)


def _feasible_start(prog, packed, cfg, rng):
    """Random-measure start scaled until G is positive definite."""
    from .quartic import canonical_measure

    for _ in range(16):
        x0 = rng.standard_normal(prog.n)
        xi = canonical_measure(prog, x0)
        sigma = np.maximum(packed.alpha * xi, 0.1)
        for _ in range(61):
            geom = geometry_from_packed(packed, sigma)
            if geom.region is Region.POSITIVE_DEFINITE:
                return sigma
            sigma = sigma * 2.0
    raise NoFeasibleStartError("no feasible start found: G never became positive definite")


def _maximize_impl(prog, cfg):
    packed = prog.packed
    if np.any(packed.alpha <= 0.0):
        raise ValueError("alpha nonpositive: dual concavity requires every alpha > 0")
    m = prog.m
    rng = np.random.default_rng(cfg.seed)
    if m == 0:
        geom = geometry_from_packed(packed, np.zeros(0))
        if geom.region is not Region.POSITIVE_DEFINITE or not geom.colspace_ok:
            raise NoFeasibleStartError(
                "no feasible start found: term-free program has no positive definite G"
            )
        return _make_point(prog, packed, np.zeros(0), cfg), 0

    sigma = _feasible_start(prog, packed, cfg, rng)
    geom = geometry_from_packed(packed, sigma)
    value = dual_value_from(packed, sigma, geom)
    iterations = 0
    message = ""
    for iterations in range(1, cfg.max_iter + 1):
        g = dual_grad_from(packed, sigma, geom)
        gnorm = float(np.linalg.norm(g))
        if gnorm <= cfg.grad_tol:
            break
        H = dual_hess_from(packed, sigma, geom)
        try:
            d = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            d = g.copy()
        if not np.all(np.isfinite(d)) or float(g @ d) <= 0.0:
            d = g.copy()  # ascent fallback when the Newton system is unusable
        # Below this, increases of the dual value are indistinguishable
        # from roundoff and the acceptance test switches to gradient-norm
        # decrease, which stays resolvable all the way to stationarity.
        value_floor = 8.0 * np.finfo(float).eps * (1.0 + abs(value))
        accepted = False
        for direction in (d, g):
            slope = float(g @ direction)
            t = 1.0
            while t > 1e-14 and not accepted:
                cand = sigma + t * direction
                cand_geom = geometry_from_packed(packed, cand)
                if cand_geom.region is Region.POSITIVE_DEFINITE:
                    cand_val = dual_value_from(packed, cand, cand_geom)
                    gain = 1e-4 * t * slope
                    if gain > value_floor:
                        if cand_val >= value + gain:
                            sigma, geom, value = cand, cand_geom, cand_val
                            accepted = True
                    else:
                        cand_g = dual_grad_from(packed, cand, cand_geom)
                        if float(np.linalg.norm(cand_g)) < gnorm:
                            sigma, geom, value = cand, cand_geom, cand_val
                            accepted = True
                t *= cfg.step_shrink
            if accepted:
                break
        if not accepted:
            # The ascent can stall when the maximum sits on the boundary of
            # the positive definite cone (G singular there).  A stationarity
            # polish still pins the critical point; its region is reported
            # as found, so boundary points come back unclassified.
            root, _ = _newton_root(prog, packed, cfg, sigma)
            if root is not None:
                sigma = root
            else:
                message = "line search stalled before reaching gradient tolerance"
            break
    else:
        message = "iteration limit reached"
    return _make_point(prog, packed, sigma, cfg, message=message), iterations


def maximize_dual_positive(prog: QuarticProgram,
                           cfg: SolverConfig | None = None) -> CriticalPoint:
    """Damped-Newton ascent of the dual value over the positive definite cone.

    Requires every term weight positive (concave maximization is otherwise
    unjustified).  Returns the stationary point when the gradient tolerance
    is met; on iteration limit or stall the best iterate is returned with
    kind Unclassified and an explanatory message.
    """
    cfg = cfg or SolverConfig()
    point, _ = _maximize_impl(prog, cfg)
    return point


def _default_box(packed, m):
    radius = 10.0 * np.abs(packed.alpha * packed.c) + 1.0
    return -radius, radius


def _resolve_box(cfg, packed, m):
    if cfg.search_box is None:
        return _default_box(packed, m)
    box = np.asarray(cfg.search_box, dtype=float)
    if box.shape == (2,):
        lo = np.full(m, box[0])
        hi = np.full(m, box[1])
    elif box.shape == (m, 2):
        lo, hi = box[:, 0], box[:, 1]
    else:
        raise ValueError(f"search_box must be (lo, hi) or {m} such pairs")
    if np.any(hi <= lo):
        raise ValueError("search_box upper bounds must exceed lower bounds")
    return lo, hi


def _newton_root(prog, packed, cfg, start):
    """Newton iteration on the dual gradient; None when it fails to land."""
    sigma = start.copy()
    geom = geometry_from_packed(packed, sigma)
    if geom.region is Region.SINGULAR or not geom.colspace_ok:
        return None, 0
    g = dual_grad_from(packed, sigma, geom)
    gnorm = float(np.linalg.norm(g))
    for it in range(1, cfg.max_iter + 1):
        if gnorm <= cfg.grad_tol:
            return sigma, it
        H = dual_hess_from(packed, sigma, geom)
        try:
            d = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            d = np.linalg.lstsq(H, -g, rcond=None)[0]
        if not np.all(np.isfinite(d)):
            return None, it
        t = 1.0
        while t > 1e-20:
            cand = sigma + t * d
            cand_geom = geometry_from_packed(packed, cand)
            if cand_geom.colspace_ok:
                cand_g = dual_grad_from(packed, cand, cand_geom)
                cand_norm = float(np.linalg.norm(cand_g))
                if cand_norm < gnorm * (1.0 - 1e-4 * t) or cand_norm <= cfg.grad_tol:
                    sigma, geom, g, gnorm = cand, cand_geom, cand_g, cand_norm
                    break
            t *= cfg.step_shrink
        else:
            return None, it
    return (sigma, cfg.max_iter) if gnorm <= cfg.grad_tol else (None, cfg.max_iter)


def find_critical_points(prog: QuarticProgram,
                         cfg: SolverConfig | None = None) -> list:
    """Multistart Newton root finding on the dual gradient.

    Starts are sampled uniformly over the search box (skipping the singular
    band of G); converged roots are deduplicated and classified, and the
    list is sorted by dual value, largest first.
    """
    cfg = cfg or SolverConfig()
    points, _ = _find_impl(prog, cfg)
    return points


def _find_impl(prog, cfg):
    packed = prog.packed
    m = prog.m
    if np.any(packed.alpha == 0.0):
        raise ValueError("critical point search undefined for zero-alpha terms")
    if m == 0:
        geom = geometry_from_packed(packed, np.zeros(0))
        if not geom.colspace_ok:
            return [], 0
        return [_make_point(prog, packed, np.zeros(0), cfg)], 0

    lo, hi = _resolve_box(cfg, packed, m)
    rng = np.random.default_rng(cfg.seed)
    starts = lo + (hi - lo) * rng.random((cfg.multistart_count, m))
    roots: list[np.ndarray] = []
    total_iters = 0
    slack = cfg.dedupe_tol
    for start in starts:
        root, used = _newton_root(prog, packed, cfg, start)
        total_iters += used
        if root is None:
            continue
        if np.any(root < lo - slack) or np.any(root > hi + slack):
            continue  # iterates escaped: only roots inside the box are reported
        if any(np.max(np.abs(root - kept)) <= cfg.dedupe_tol for kept in roots):
            continue
        roots.append(root)
    points = [_make_point(prog, packed, r, cfg) for r in roots]
    points.sort(key=lambda p: (-p.dual_value, tuple(p.sigma)))
    return points, total_iters


def solve(prog: QuarticProgram, cfg: SolverConfig | None = None) -> SolveReport:
    """Certificate search followed by the multistart critical-point sweep.

    Sub-operation failures (no feasible start, nonpositive weights) are
    recorded as diagnostics rather than raised, so a report is always
    produced for a structurally valid program.
    """
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    diagnostics = validate(prog)
    if diagnostics:
        return SolveReport(best=None, all_points=[], iterations=0,
                           wall_time=time.perf_counter() - t0,
                           diagnostics=diagnostics)
    best = None
    iterations = 0
    try:
        candidate, iterations = _maximize_impl(prog, cfg)
        if candidate.kind is PointKind.CERTIFIED_GLOBAL_MIN:
            best = candidate
        else:
            diagnostics.append(
                f"ascent returned uncertified point ({candidate.message or 'not positive definite'})"
            )
    except (NoFeasibleStartError, ValueError) as exc:
        candidate = None
        diagnostics.append(str(exc))

    points, sweep_iters = _find_impl(prog, cfg)
    iterations += sweep_iters
    merged = list(points)
    for extra in ([candidate] if candidate is not None else []):
        if not any(
            extra.sigma.shape == p.sigma.shape
            and (extra.sigma.size == 0 or np.max(np.abs(extra.sigma - p.sigma)) <= cfg.dedupe_tol)
            for p in merged
        ):
            merged.append(extra)
            merged.sort(key=lambda p: (-p.dual_value, tuple(p.sigma)))
    return SolveReport(best=best, all_points=merged, iterations=iterations,
                       wall_time=time.perf_counter() - t0, diagnostics=diagnostics)
