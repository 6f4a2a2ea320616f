"""Randomized guards over the solver on generated programs.

Smaller seeded versions of the soundness and classification stress checks:
certificates must never sit above an independently found primal value, and
local min/max tags must survive direct perturbation of the objective.
"""

import numpy as np

import canodual as cd


def random_program(rng, n, m):
    terms = []
    for _ in range(m):
        A = rng.standard_normal((n, n))
        terms.append((float(rng.uniform(0.2, 3.0)), A + A.T,
                      rng.standard_normal(n), float(rng.uniform(-3.0, 3.0))))
    Q = rng.standard_normal((n, n))
    return cd.make_program(terms, Q=0.1 * (Q + Q.T), f=rng.standard_normal(n))


def descend(prog, x, iters=200):
    fx = cd.eval_primal(prog, x)
    g = cd.grad_primal(prog, x)
    t = 1e-3
    for _ in range(iters):
        gg = float(g @ g)
        if gg < 1e-20:
            break
        t = min(t * 2.0, 1.0)
        while t > 1e-19:
            xn = x - t * g
            fn = cd.eval_primal(prog, xn)
            if fn <= fx - 1e-4 * t * gg:
                break
            t *= 0.5
        else:
            break
        x, fx = xn, fn
        g = cd.grad_primal(prog, x)
    return fx


def test_random_certificates_are_sound():
    rng = np.random.default_rng(99)
    certified = 0
    for trial in range(20):
        prog = random_program(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
        try:
            point = cd.maximize_dual_positive(prog, cd.SolverConfig(seed=trial))
        except (cd.NoFeasibleStartError, ValueError):
            continue
        if point.kind is not cd.PointKind.CERTIFIED_GLOBAL_MIN:
            continue
        certified += 1
        best = min(descend(prog, rng.uniform(-6.0, 6.0, prog.n)) for _ in range(30))
        assert best >= point.primal_value - 1e-6 * (1.0 + abs(point.primal_value))
    assert certified >= 5  # the generator must actually exercise certificates


def test_local_classification_survives_perturbation():
    rng = np.random.default_rng(7)
    checked = 0
    for trial in range(40):
        prog = random_program(rng, int(rng.integers(1, 3)), int(rng.integers(1, 3)))
        points = cd.find_critical_points(prog, cd.SolverConfig(seed=trial,
                                                               multistart_count=24))
        for p in points:
            if p.kind is cd.PointKind.LOCAL_MIN:
                vals = [cd.eval_primal(prog, p.x + 1e-4 * d)
                        for d in rng.standard_normal((30, prog.n))]
                assert min(vals) >= p.primal_value - 1e-10
                checked += 1
            elif p.kind is cd.PointKind.LOCAL_MAX:
                vals = [cd.eval_primal(prog, p.x + 1e-4 * d)
                        for d in rng.standard_normal((30, prog.n))]
                assert max(vals) <= p.primal_value + 1e-10
                checked += 1
    assert checked >= 10


def test_reported_points_have_zero_gap():
    rng = np.random.default_rng(21)
    for trial in range(15):
        prog = random_program(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
        for p in cd.find_critical_points(prog, cd.SolverConfig(seed=trial,
                                                               multistart_count=16)):
            assert p.gap <= 1e-6 * (1.0 + abs(p.dual_value))
