import numpy as np
import pytest

from complextv import ComplexField, ConstraintSet, LineSearchPolicy, ProxOracle, SmoothOracle
from complextv.field import project_constraint, tv_seminorm, TvVariant
from complextv.optics import AmplitudeFidelity, PropagatorConfig
from complextv.prox import (
    LineSearchError,
    backtrack_step,
    check_gradient,
    fista,
    ista,
    majorizer_holds,
    momentum_sequence,
)
from complextv.retrieval import TvProx, backpropagate_init, phase_object, simulate_measurement
from conftest import random_field


def quadratic(b, scale=1.0):
    """F(x) = 1/2 ||scale * x - b||^2."""
    return SmoothOracle(
        value=lambda x: 0.5 * (scale * x - b).norm() ** 2,
        gradient=lambda x: scale * (scale * x - b),
    )


def test_momentum_sequence():
    t = momentum_sequence(3)
    assert t[0] == 1.0
    assert t[1] == pytest.approx((1 + np.sqrt(5)) / 2, abs=1e-15)
    assert t[2] == pytest.approx((1 + np.sqrt(1 + 4 * t[1] ** 2)) / 2, abs=1e-15)
    assert t[2] == pytest.approx(2.1935270853, abs=1e-9)


def test_ista_exact_step_lands_on_minimizer(rng):
    b = random_field(rng, (4, 4))
    x, state = ista(ComplexField.zeros((4, 4)), quadratic(b), iters=1,
                    policy=LineSearchPolicy(gamma0=1.0, backtracking=False))
    assert (x - b).norm() <= 1e-15
    assert state.objective_trace[-1] == pytest.approx(0.0, abs=1e-30)


def test_zero_gradient_keeps_start(rng):
    x0 = random_field(rng, (3, 5))
    F = SmoothOracle(lambda x: 0.0, lambda x: ComplexField.zeros(x.shape))
    for solver in (ista, fista):
        x, _ = solver(x0, F, iters=10)
        assert (x - x0).norm() == 0


def test_fista_one_iteration_equals_ista(rng):
    b, x0 = random_field(rng, (5, 5)), random_field(rng, (5, 5))
    prox = TvProx(0.2, TvVariant("i-iso"), ConstraintSet.UNIT_DISK, 10, warm_start=False).oracle()
    a, _ = ista(x0, quadratic(b, 2.0), prox, iters=1)
    f, _ = fista(x0, quadratic(b, 2.0), prox, iters=1)
    assert (a - f).norm() == 0


def test_backtrack_accepts_tight_majorizer(rng):
    b, z = random_field(rng, (4, 4)), random_field(rng, (4, 4))
    x, gamma = backtrack_step(z, quadratic(b), ProxOracle(), 1.0)
    assert gamma == 1.0
    assert (x - b).norm() <= 1e-14


def test_backtrack_halves_for_steep_quadratic(rng):
    b, z = random_field(rng, (4, 4)), random_field(rng, (4, 4))
    F = quadratic(b, 2.0)
    x, gamma = backtrack_step(z, F, ProxOracle(), 1.0)
    assert gamma <= 0.5
    assert majorizer_holds(F, z, F.value(z), F.gradient(z), x, gamma)


def test_backtrack_acceptance_inequality(rng):
    prox = TvProx(0.3, TvVariant("ii-aniso"), ConstraintSet.UNIT_DISK, 10, warm_start=False).oracle()
    for _ in range(20):
        b, z = random_field(rng, (6, 6)), random_field(rng, (6, 6))
        F = quadratic(b, rng.uniform(0.5, 5.0))
        x, gamma = backtrack_step(z, F, prox, rng.uniform(0.1, 10))
        d = x - z
        rhs = F.value(z) + F.gradient(z).inner(d) + d.inner(d) / (2 * gamma)
        assert F.value(x) <= rhs + 1e-12 * max(1.0, abs(rhs))


def test_backtrack_failure():
    # the prox moves by a fixed offset whatever the step, and F grows far faster
    # than the majorizer's 1/(2 gamma) term can compensate
    prox = ProxOracle(apply=lambda x, g: x + ComplexField(np.ones(x.shape), np.zeros(x.shape)))
    F_bad = SmoothOracle(lambda x: 1e30 * x.norm() ** 2, lambda x: ComplexField.zeros(x.shape))
    with pytest.raises(LineSearchError):
        backtrack_step(ComplexField.zeros((2, 2)), F_bad, prox, 1.0)
    with pytest.raises(ValueError):
        backtrack_step(ComplexField.zeros((2, 2)), F_bad, prox, 0.0)


def test_solvers_reject_zero_iterations(rng):
    with pytest.raises(ValueError):
        ista(random_field(rng, (2, 2)), quadratic(random_field(rng, (2, 2))), iters=0)


def test_ista_descent_constrained_quadratic(rng):
    b = random_field(rng, (8, 8), 2.0)
    prox = ProxOracle(apply=lambda x, g: project_constraint(x, ConstraintSet.UNIT_DISK))
    x0 = project_constraint(random_field(rng, (8, 8)), ConstraintSet.UNIT_DISK)
    _, state = ista(x0, quadratic(b, 3.0), prox, iters=40, policy=LineSearchPolicy(gamma0=5.0))
    assert np.all(np.diff(state.objective_trace) <= 1e-10)


def test_fista_best_so_far_and_final(rng):
    b = random_field(rng, (8, 8), 2.0)
    prox = TvProx(0.1, TvVariant("i-aniso"), ConstraintSet.UNIT_DISK, 20).oracle()
    x0 = project_constraint(random_field(rng, (8, 8)), ConstraintSet.UNIT_DISK)
    _, state = fista(x0, quadratic(b, 1.5), prox, iters=60)
    trace = np.array(state.objective_trace)
    assert np.all(np.diff(np.minimum.accumulate(trace)) <= 0)
    assert trace[-1] <= trace[0]


def test_fista_quadratic_converges(rng):
    # F = 1/2 ||D x - b||^2 with a fixed positive diagonal D; prox = identity
    d = rng.uniform(0.5, 2.0, (16, 16))
    b = random_field(rng, (16, 16))
    F = SmoothOracle(
        value=lambda x: 0.5 * (ComplexField(d * x.u, d * x.v) - b).norm() ** 2,
        gradient=lambda x: ComplexField(d * (d * x.u - b.u), d * (d * x.v - b.v)),
    )
    x, _ = fista(ComplexField.zeros((16, 16)), F, iters=500)
    assert F.gradient(x).norm() <= 1e-8


def test_gradient_checker_flags_wrong_gradient(rng):
    b = random_field(rng, (4, 4))
    good = quadratic(b, 1.3)
    bad = SmoothOracle(good.value, lambda x: 2.0 * good.gradient(x))
    x = random_field(rng, (4, 4))
    assert check_gradient(good, x, rng=1) <= 1e-5
    assert check_gradient(bad, x, rng=1) > 0.1


def test_phase_retrieval_ista_trace_monotone():
    rng = np.random.default_rng(5)
    img = (rng.random((64, 64)) > 0.5) * 200
    x_true = phase_object(img)
    cfg = PropagatorConfig(500e-9, 5e-3, 5e-6, 64, 64)
    y = simulate_measurement(x_true, cfg)
    fid = AmplitudeFidelity(y, cfg)
    F = SmoothOracle(fid.value, fid.gradient)
    assert check_gradient(F, x_true * 0.9, rng=0) <= 1e-5
    prox = TvProx(0.02, TvVariant("i-aniso"), ConstraintSet.UNIT_DISK, 10).oracle()
    x0 = project_constraint(backpropagate_init(y, cfg), ConstraintSet.UNIT_DISK)
    _, state = ista(x0, F, prox, iters=40)
    assert np.all(np.diff(state.objective_trace) <= 1e-10)
    assert all(v <= 1e-12 for v in state.violation_trace)
