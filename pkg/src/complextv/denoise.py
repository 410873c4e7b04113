"""Constrained complex TV denoising through the dual problem.

Solves ``min_{x in C} 1/2 ||x - b||^2 + lam * TV(x)`` by (fast) gradient
projection on the dual variable ``q``; the primal estimate is recovered as
``P_C(b - lam * L^T q)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .field import (
    ComplexField,
    ConstraintSet,
    DualField,
    TvKind,
    TvVariant,
    adjoint_diff,
    diff_cols,
    diff_cols_adjoint,
    diff_rows,
    diff_rows_adjoint,
    project_unit_disk,
)


class DenoiseMode(str, enum.Enum):
    FGP = "fgp"
    GP = "gp"


@dataclass
class DenoiseParams:
    lam: float
    variant: TvVariant = field(default_factory=TvVariant)
    constraint: ConstraintSet = ConstraintSet.FULL_SPACE
    iterations: int = 50
    mode: DenoiseMode = DenoiseMode.FGP
    warm_start: DualField | None = None
    # evaluating h costs one extra adjoint + projection per iteration
    record_trace: bool = True


@dataclass
class DenoiseResult:
    x: ComplexField
    q: DualField
    dual_objective_trace: list[float]


def _ball_scale(radius: float, norm: np.ndarray) -> np.ndarray:
    # radius / max(radius, norm), with a degenerate radius collapsing the ball to {0}
    if radius <= 0:
        return np.zeros_like(norm)
    return radius / np.maximum(radius, norm)


def _project_dual_parts(r1, r2, s1, s2, variant: TvVariant):
    kind = variant.kind
    if kind is TvKind.I_ANISO:
        c1 = _ball_scale(1.0, np.sqrt(r1**2 + s1**2))
        c2 = _ball_scale(1.0, np.sqrt(r2**2 + s2**2))
        return r1 * c1, r2 * c2, s1 * c1, s2 * c2

    if kind is TvKind.II_ANISO:
        a, b = variant.alpha, 1.0 - variant.alpha
        return np.clip(r1, -a, a), np.clip(r2, -a, a), np.clip(s1, -b, b), np.clip(s2, -b, b)

    # isotropic kinds: interior cells (j < m, k < n) are coupled, the last
    # column of the vertical differences and the last row of the horizontal
    # ones are projected on their own
    out = [r1.copy(), r2.copy(), s1.copy(), s2.copy()]
    o1, o2, p1, p2 = out
    if kind is TvKind.I_ISO:
        ri1, ri2, si1, si2 = r1[:, :-1], r2[:-1, :], s1[:, :-1], s2[:-1, :]
        c = _ball_scale(1.0, np.sqrt(ri1**2 + ri2**2 + si1**2 + si2**2))
        o1[:, :-1], o2[:-1, :], p1[:, :-1], p2[:-1, :] = ri1 * c, ri2 * c, si1 * c, si2 * c
        c1 = _ball_scale(1.0, np.sqrt(r1[:, -1:] ** 2 + s1[:, -1:] ** 2))
        o1[:, -1:], p1[:, -1:] = r1[:, -1:] * c1, s1[:, -1:] * c1
        c2 = _ball_scale(1.0, np.sqrt(r2[-1:, :] ** 2 + s2[-1:, :] ** 2))
        o2[-1:, :], p2[-1:, :] = r2[-1:, :] * c2, s2[-1:, :] * c2
        return tuple(out)

    # II_ISO
    for (d1, d2, e1, e2), radius in (((r1, r2, o1, o2), variant.alpha), ((s1, s2, p1, p2), 1.0 - variant.alpha)):
        i1, i2 = d1[:, :-1], d2[:-1, :]
        c = _ball_scale(radius, np.sqrt(i1**2 + i2**2))
        e1[:, :-1], e2[:-1, :] = i1 * c, i2 * c
        e1[:, -1:] = np.clip(d1[:, -1:], -radius, radius)
        e2[-1:, :] = np.clip(d2[-1:, :], -radius, radius)
    return tuple(out)


def project_dual(q: DualField, variant: TvVariant) -> DualField:
    """Euclidean projection of ``q`` onto the dual set of ``variant``."""
    return DualField(*_project_dual_parts(*q.parts(), variant))


def _adjoint_parts(r1, r2, s1, s2):
    return (
        diff_rows_adjoint(r1) + diff_cols_adjoint(r2),
        diff_rows_adjoint(s1) + diff_cols_adjoint(s2),
    )


def _project_c(u, v, constraint):
    if constraint is ConstraintSet.UNIT_DISK:
        return project_unit_disk(u, v)
    return u, v


def _shifted(b: ComplexField, lam: float, q_parts):
    lu, lv = _adjoint_parts(*q_parts)
    return b.u - lam * lu, b.v - lam * lv


def _grad_parts(b, lam, constraint, q_parts):
    pu, pv = _project_c(*_shifted(b, lam, q_parts), constraint)
    k = -2.0 * lam
    return k * diff_rows(pu), k * diff_cols(pu), k * diff_rows(pv), k * diff_cols(pv)


def _objective_parts(b, lam, constraint, q_parts) -> float:
    wu, wv = _shifted(b, lam, q_parts)
    pu, pv = _project_c(wu, wv, constraint)
    dist2 = np.sum((wu - pu) ** 2) + np.sum((wv - pv) ** 2)
    return float(np.sum(wu**2) + np.sum(wv**2) - dist2)


def _check_lam(lam: float):
    if not np.isfinite(lam) or lam <= 0:
        raise ValueError(f"lam must be positive and finite, got {lam}")


def dual_gradient(q: DualField, b: ComplexField, lam: float, constraint: ConstraintSet) -> DualField:
    """``-2 lam L(P_C(b - lam L^T q))``."""
    _check_lam(lam)
    return DualField(*_grad_parts(b, lam, ConstraintSet(constraint), q.parts()))


def dual_objective(q: DualField, b: ComplexField, lam: float, constraint: ConstraintSet) -> float:
    """``h(q) = ||w||^2 - ||w - P_C(w)||^2`` with ``w = b - lam L^T q``.

    The constant ``||b||^2`` separating ``h`` from the (scaled, negated) Lagrange
    dual function is not included, so only differences of ``h`` carry meaning.
    At the optimum the primal value is ``(||b||^2 - h(q*)) / 2``.
    """
    _check_lam(lam)
    return _objective_parts(b, lam, ConstraintSet(constraint), q.parts())


def primal_from_dual(q: DualField, b: ComplexField, lam: float, constraint: ConstraintSet) -> ComplexField:
    w = b - lam * adjoint_diff(q)
    return ComplexField(*_project_c(w.u, w.v, ConstraintSet(constraint)))


def denoise(b: ComplexField, params: DenoiseParams) -> DenoiseResult:
    """Run ``params.iterations`` steps of GP or FGP on the dual of the denoising problem.

    The step size is fixed at ``1 / (16 lam^2)``, the reciprocal of the
    Lipschitz bound of the dual gradient. There is no early exit.
    """
    lam = params.lam
    _check_lam(lam)
    if params.iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not isinstance(b, ComplexField):
        b = ComplexField.from_complex(b)
    constraint = ConstraintSet(params.constraint)
    mode = DenoiseMode(params.mode)
    variant = params.variant

    if params.warm_start is not None:
        if params.warm_start.source_shape != b.shape:
            raise ValueError(
                f"warm start shaped for {params.warm_start.source_shape}, observation is {b.shape}"
            )
        q = params.warm_start.parts()
        if not all(np.isfinite(a).all() for a in q):
            raise ValueError("warm start contains non-finite values")
    else:
        q = DualField.zeros(b.shape).parts()

    step = 1.0 / (16.0 * lam**2)
    trace = []
    if params.record_trace:
        trace.append(_objective_parts(b, lam, constraint, q))

    def gp_step(point):
        g = _grad_parts(b, lam, constraint, point)
        return _project_dual_parts(*(a - step * ga for a, ga in zip(point, g)), variant)

    if mode is DenoiseMode.GP:
        for _ in range(params.iterations):
            q = gp_step(q)
            if params.record_trace:
                trace.append(_objective_parts(b, lam, constraint, q))
    else:
        r, t = q, 1.0
        for _ in range(params.iterations):
            q_prev = q
            q = gp_step(r)
            t_next = (1.0 + np.sqrt(1.0 + 4.0 * t * t)) / 2.0
            beta = (t - 1.0) / t_next
            r = tuple(a + beta * (a - ap) for a, ap in zip(q, q_prev))
            t = t_next
            if params.record_trace:
                trace.append(_objective_parts(b, lam, constraint, q))

    q_final = DualField(*q)
    return DenoiseResult(primal_from_dual(q_final, b, lam, constraint), q_final, trace)
