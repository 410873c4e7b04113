"""Constrained total-variation denoising of complex images and its use in phase retrieval."""

from .denoise import DenoiseMode, DenoiseParams, DenoiseResult, denoise, dual_gradient, dual_objective, project_dual
from .field import (
    ComplexField,
    ConstraintSet,
    DiffField,
    DualField,
    TvKind,
    TvVariant,
    adjoint_diff,
    forward_diff,
    project_constraint,
    tv_seminorm,
)
from .optics import PropagatorConfig, fidelity_gradient, fidelity_value, forward_intensity, propagate
from .prox import LineSearchPolicy, ProxOracle, SmoothOracle, backtrack_step, fista, ista
from .retrieval import (
    Algorithm,
    NoiseKind,
    NoiseModel,
    RetrievalParams,
    RetrievalReport,
    backpropagate_init,
    ip_retrieve,
    phase_rmse,
    retrieve,
    simulate_measurement,
)

__version__ = "0.1.0"
