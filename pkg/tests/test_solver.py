import numpy as np
import pytest

import canodual as cd
from canodual import fixtures

from conftest import DOUBLE_WELL_POINTS, rigid_feasible_instance


def test_double_well_three_critical_points(double_well):
    cfg = cd.SolverConfig(search_box=(-3.0, 3.0))
    points = cd.find_critical_points(double_well, cfg)
    assert len(points) == 3
    found = sorted(float(p.sigma[0]) for p in points)
    expected = sorted(s for _, s, _, _ in DOUBLE_WELL_POINTS)
    assert found == pytest.approx(expected, abs=1e-3)
    by_sigma = {round(float(p.sigma[0]), 3): p for p in points}
    for x, s, value, kind in DOUBLE_WELL_POINTS:
        p = by_sigma[round(s, 3)]
        assert p.kind is kind
        assert float(p.x[0]) == pytest.approx(x, abs=1e-3)
        assert p.dual_value == pytest.approx(value, abs=1e-3)
        assert p.primal_value == pytest.approx(value, abs=1e-3)


def test_points_sorted_by_dual_value(double_well):
    points = cd.find_critical_points(double_well, cd.SolverConfig(search_box=(-3.0, 3.0)))
    values = [p.dual_value for p in points]
    assert values == sorted(values, reverse=True)


def test_maximize_dual_positive_double_well(double_well):
    point = cd.maximize_dual_positive(double_well)
    assert point.kind is cd.PointKind.CERTIFIED_GLOBAL_MIN
    assert float(point.sigma[0]) == pytest.approx(0.236417, abs=1e-4)
    assert float(point.x[0]) == pytest.approx(2.11491, abs=1e-4)
    assert point.dual_value == pytest.approx(-1.02951, abs=1e-4)
    assert point.grad_norm <= 1e-9


def test_maximize_rejects_nonpositive_alpha():
    prog = cd.make_program([(-1.0, [[1.0]], [0.0], -2.0)], Q=[[0.0]], f=[0.5])
    with pytest.raises(ValueError, match="alpha nonpositive"):
        cd.maximize_dual_positive(prog)


def test_maximize_no_feasible_start():
    # G(s) = -1 for every dual point: the positive definite cone is empty
    prog = cd.make_program([(1.0, [[0.0]], [1.0], 0.0)], Q=[[-1.0]], f=[0.0])
    with pytest.raises(cd.NoFeasibleStartError):
        cd.maximize_dual_positive(prog)


def test_maximize_iteration_limit_returns_unclassified(double_well):
    point = cd.maximize_dual_positive(double_well, cd.SolverConfig(max_iter=1))
    assert point.kind is cd.PointKind.UNCLASSIFIED
    assert "iteration limit" in point.message


def test_classify_point_rejects_nonstationary(double_well):
    points = cd.find_critical_points(double_well, cd.SolverConfig(search_box=(-3.0, 3.0)))
    p = points[0]
    bad = cd.CriticalPoint(sigma=p.sigma, x=p.x, primal_value=p.primal_value,
                           dual_value=p.dual_value, region=p.region,
                           kind=p.kind, grad_norm=1.0)
    with pytest.raises(ValueError, match="not stationary"):
        cd.classify_point(double_well, bad)


def test_classify_point_matches_solver_kinds(double_well):
    for p in cd.find_critical_points(double_well, cd.SolverConfig(search_box=(-3.0, 3.0))):
        assert cd.classify_point(double_well, p) is p.kind


def test_3nvh_positive_box_single_root():
    prog = cd.build_program(fixtures.load_instance("3nvh-models-1-2"))
    points = cd.find_critical_points(prog, cd.SolverConfig(search_box=(1e-6, 2.0)))
    assert len(points) == 1
    assert float(points[0].sigma[0]) == pytest.approx(0.0127287, abs=1e-4)
    assert points[0].kind is cd.PointKind.CERTIFIED_GLOBAL_MIN


def test_degenerate_even_quartic_single_singular_point():
    prog = cd.make_program([(1.0, [[2.0]], [0.0], 0.0)], Q=[[0.0]], f=[0.0])
    points = cd.find_critical_points(prog)
    assert len(points) == 1
    assert float(points[0].sigma[0]) == pytest.approx(0.0, abs=1e-9)
    assert points[0].region is cd.Region.SINGULAR
    assert points[0].kind is cd.PointKind.UNCLASSIFIED


def test_solve_double_well_report(double_well):
    report = cd.solve(double_well, cd.SolverConfig(search_box=(-3.0, 3.0)))
    assert report.best is not None
    assert report.best.kind is cd.PointKind.CERTIFIED_GLOBAL_MIN
    assert report.best.primal_value == pytest.approx(-1.02951, abs=1e-4)
    assert len(report.all_points) == 3
    assert report.biggest_local_min is not None
    assert report.biggest_local_min.primal_value == pytest.approx(0.9665031, abs=1e-4)
    assert report.biggest_local_max is not None


def test_solve_term_free_convex_quadratic():
    prog = cd.QuarticProgram(n=2, terms=(), Q=np.eye(2), f=np.zeros(2))
    report = cd.solve(prog)
    assert report.best is not None
    assert report.best.x == pytest.approx([0.0, 0.0])
    assert report.best.primal_value == pytest.approx(0.0)


def test_solve_never_raises_on_nonpositive_alpha():
    prog = cd.make_program([(-1.0, [[1.0]], [0.0], -2.0)], Q=[[0.0]], f=[0.5])
    report = cd.solve(prog)
    assert report.best is None
    assert any("alpha" in d for d in report.diagnostics)


def test_solve_invalid_program_reports_diagnostics():
    quad = cd.QuadraticMap(A=[[1.0]], b=[0.0, 1.0], c=0.0)
    prog = cd.QuarticProgram(n=1, terms=(cd.QuarticTerm(1.0, quad),), Q=[[0.0]], f=[0.0])
    report = cd.solve(prog)
    assert report.best is None
    assert report.all_points == []
    assert any("dimension mismatch" in d for d in report.diagnostics)


def test_determinism_bit_for_bit(double_well):
    cfg = cd.SolverConfig(seed=1234, search_box=(-3.0, 3.0))
    r1 = cd.solve(double_well, cfg)
    r2 = cd.solve(double_well, cfg)
    assert len(r1.all_points) == len(r2.all_points)
    for a, b in zip(r1.all_points, r2.all_points):
        assert a.sigma.tobytes() == b.sigma.tobytes()
        assert a.x.tobytes() == b.x.tobytes()
        assert a.primal_value == b.primal_value
        assert a.dual_value == b.dual_value
        assert a.kind is b.kind
    for name in fixtures.MDGP_NAMES:
        prog = cd.build_program(fixtures.load_instance(name))
        p1 = cd.maximize_dual_positive(prog, cfg)
        p2 = cd.maximize_dual_positive(prog, cfg)
        assert p1.sigma.tobytes() == p2.sigma.tobytes()
        assert p1.x.tobytes() == p2.x.tobytes()


def test_certificate_canonical_relation():
    cfg = cd.SolverConfig()
    for name in fixtures.MDGP_NAMES:
        prog = cd.build_program(fixtures.load_instance(name))
        point = cd.maximize_dual_positive(prog, cfg)
        assert point.kind is cd.PointKind.CERTIFIED_GLOBAL_MIN
        assert point.gap <= 1e-6 * (1.0 + abs(point.dual_value))


def test_feasible_instance_reaches_zero_objective():
    # exactly satisfiable distances with no linear pull: the solver pins the
    # stationary boundary point, recovering the feasible placement
    inst, xstar = rigid_feasible_instance()
    report = cd.solve(cd.build_program(inst))
    top = report.best or report.all_points[0]
    assert top.grad_norm <= 1e-9
    assert top.primal_value <= 1e-8
    assert top.x == pytest.approx(xstar, abs=1e-6)
    assert top.gap <= 1e-8
    for record in cd.violation_report(inst, top.x):
        assert abs(record.residual) <= 1e-4


def test_solver_config_validation():
    with pytest.raises(ValueError):
        cd.SolverConfig(grad_tol=0.0)
    with pytest.raises(ValueError):
        cd.SolverConfig(step_shrink=1.0)
    with pytest.raises(ValueError):
        cd.SolverConfig(multistart_count=0)
