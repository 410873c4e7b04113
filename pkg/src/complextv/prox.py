"""Proximal gradient iterations (ISTA and FISTA) with a backtracking step search."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .field import ComplexField


class LineSearchError(RuntimeError):
    pass


@dataclass
class SmoothOracle:
    """Value and gradient of the smooth term ``F``."""

    value: Callable[[ComplexField], float]
    gradient: Callable[[ComplexField], ComplexField]


def _zero(x: ComplexField) -> float:
    return 0.0


@dataclass
class ProxOracle:
    """Proximity operator of the nonsmooth term ``R``.

    ``apply(x, gamma)`` returns ``prox_{gamma R}(x)``. ``value`` gives the finite
    part of ``R`` (e.g. a TV term) and ``violation`` the distance to the feasible
    set, kept apart so traces stay finite.
    """

    apply: Callable[[ComplexField, float], ComplexField] = lambda x, gamma: x
    value: Callable[[ComplexField], float] = _zero
    violation: Callable[[ComplexField], float] = _zero


@dataclass
class LineSearchPolicy:
    """Step selection. With ``backtracking=False`` the step stays at ``gamma0``."""

    gamma0: float = 1.0
    backtracking: bool = True
    shrink: float = 0.5
    grow: float = 2.0
    gamma_min: float = 1e-12


@dataclass
class SolverState:
    x_prev: ComplexField
    x_curr: ComplexField
    z: ComplexField
    t: float = 1.0
    gamma: float = 1.0
    k: int = 0
    objective_trace: list[float] = field(default_factory=list)
    violation_trace: list[float] = field(default_factory=list)
    gamma_trace: list[float] = field(default_factory=list)


def momentum_sequence(count: int) -> list[float]:
    """First ``count`` terms of ``t_1 = 1, t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2``."""
    t = [1.0]
    while len(t) < count:
        t.append((1.0 + math.sqrt(1.0 + 4.0 * t[-1] ** 2)) / 2.0)
    return t[:count]


# relative rounding allowance for the majorizer test; without it a test that
# holds with equality (exact quadratics, fixed points) fails on the last ulp
ROUNDING_SLACK = 1e-13


def majorizer_holds(F: SmoothOracle, z, fz, gz, x_next, gamma) -> bool:
    """``F(x+) <= F(z) + <grad F(z), x+ - z> + ||x+ - z||^2 / (2 gamma)`` up to rounding."""
    d = x_next - z
    lin, quad = gz.inner(d), d.inner(d) / (2.0 * gamma)
    fx = F.value(x_next)
    slack = ROUNDING_SLACK * (abs(fx) + abs(fz) + abs(lin) + quad)
    return fx <= fz + lin + quad + slack


def backtrack_step(
    z: ComplexField,
    F: SmoothOracle,
    prox: ProxOracle,
    gamma_init: float,
    shrink: float = 0.5,
    gamma_min: float = 1e-12,
    grad_z: ComplexField | None = None,
) -> tuple[ComplexField, float]:
    """Halve ``gamma`` from ``gamma_init`` until the quadratic majorizer test passes.

    Returns the proximal gradient point and the accepted step.
    """
    if not gamma_init > 0:
        raise ValueError(f"gamma_init must be positive, got {gamma_init}")
    fz = F.value(z)
    gz = F.gradient(z) if grad_z is None else grad_z
    gamma = gamma_init
    while gamma >= gamma_min:
        x_next = prox.apply(z - gamma * gz, gamma)
        if majorizer_holds(F, z, fz, gz, x_next, gamma):
            return x_next, gamma
        gamma *= shrink
    raise LineSearchError(f"step fell below {gamma_min} without satisfying the majorizer test")


def _step(z, F, prox, policy: LineSearchPolicy, gamma):
    if policy.backtracking:
        return backtrack_step(z, F, prox, gamma, policy.shrink, policy.gamma_min)
    return prox.apply(z - gamma * F.gradient(z), gamma), gamma


def _record(state: SolverState, F, prox, x):
    state.objective_trace.append(F.value(x) + prox.value(x))
    state.violation_trace.append(prox.violation(x))


def _run(x0, F, prox, iters, policy, accelerate, callback):
    if iters < 1:
        raise ValueError("iters must be >= 1")
    policy = policy or LineSearchPolicy()
    state = SolverState(x_prev=x0, x_curr=x0, z=x0, gamma=policy.gamma0)
    _record(state, F, prox, x0)
    if callback is not None:
        callback(0, x0)
    for k in range(1, iters + 1):
        gamma = state.gamma
        if policy.backtracking and k > 1:
            gamma *= policy.grow
        base = state.z if accelerate else state.x_curr
        x_next, gamma = _step(base, F, prox, policy, gamma)
        state.x_prev, state.x_curr = state.x_curr, x_next
        state.gamma = gamma
        state.k = k
        state.gamma_trace.append(gamma)
        if accelerate:
            t_next = (1.0 + np.sqrt(1.0 + 4.0 * state.t**2)) / 2.0
            state.z = x_next + ((state.t - 1.0) / t_next) * (x_next - state.x_prev)
            state.t = t_next
        else:
            state.z = x_next
        _record(state, F, prox, x_next)
        if callback is not None:
            callback(k, x_next)
    return state.x_curr, state


def ista(x0, F, prox=None, iters=100, policy=None, callback=None):
    """Proximal gradient iterations ``x <- prox_{gamma R}(x - gamma grad F(x))``.

    Returns ``(x_K, state)``; ``state.objective_trace`` holds ``F + R`` at
    ``x_0 .. x_K``. ``callback(k, x_k)`` is called for every iterate.
    """
    return _run(x0, F, prox or ProxOracle(), iters, policy, False, callback)


def fista(x0, F, prox=None, iters=100, policy=None, callback=None):
    """FISTA: the gradient step is taken at the extrapolated point ``z_k``."""
    return _run(x0, F, prox or ProxOracle(), iters, policy, True, callback)


def check_gradient(F: SmoothOracle, x: ComplexField, n_coords=10, h=1e-6, rng=None) -> float:
    """Relative error ``||fd - g|| / ||g||`` between central differences and
    ``F.gradient`` over ``n_coords`` random coordinates of ``(u, v)``.

    Norm-wise rather than per-coordinate, so exactly-zero gradient entries do
    not blow up the ratio.
    """
    rng = np.random.default_rng(rng)
    g = F.gradient(x)
    m, n = x.shape
    fd, an = [], []
    for _ in range(n_coords):
        part = rng.integers(2)
        j, k = rng.integers(m), rng.integers(n)
        e = np.zeros((m, n))
        e[j, k] = h
        step = ComplexField(e, np.zeros_like(e)) if part == 0 else ComplexField(np.zeros_like(e), e)
        fd.append((F.value(x + step) - F.value(x - step)) / (2 * h))
        an.append((g.u if part == 0 else g.v)[j, k])
    fd, an = np.array(fd), np.array(an)
    scale = max(np.linalg.norm(an), np.linalg.norm(fd), 1e-300)
    return float(np.linalg.norm(fd - an) / scale)
