"""Desk-scale benchmark experiments: the denoising demo, the CTV/TV/IP retrieval
comparison, FISTA vs ISTA and the tau sweep. Used by ``scripts/`` and the
acceptance tests. Needs scikit-image for the test image."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .denoise import DenoiseParams, denoise
from .field import ComplexField, ConstraintSet, TvVariant
from .optics import PropagatorConfig
from .retrieval import (
    Algorithm,
    NoiseKind,
    NoiseModel,
    RetrievalParams,
    RetrievalReport,
    add_phase_noise,
    benchmark_image,
    phase_object,
    phase_rmse,
    retrieve,
    simulate_measurement,
)

# imaging geometry of the simulated inline-holography benchmark
WAVELENGTH = 500e-9
DISTANCE = 5e-3
PITCH = 5e-6
BENCH_TAU = 0.02

# denoising demo: weight per TV type
DEMO_LAMBDA = {"i-iso": 0.2, "i-aniso": 0.2, "ii-iso": 0.3, "ii-aniso": 0.3}


@dataclass
class Benchmark:
    x_true: ComplexField
    y: np.ndarray
    cfg: PropagatorConfig
    seed: int


def make_benchmark(size: int = 128, seed: int = 0, noise_level: float = 0.1) -> Benchmark:
    """Pure-phase cameraman object (phase in [0, pi]) and its noisy intensity image."""
    x = phase_object(benchmark_image(size))
    cfg = PropagatorConfig(WAVELENGTH, DISTANCE, PITCH, size, size)
    y = simulate_measurement(x, cfg, NoiseModel(NoiseKind.INTENSITY, noise_level), seed)
    return Benchmark(x, y, cfg, seed)


@dataclass
class MethodSpec:
    """One reconstruction method: ``ctv`` (unit disk), ``tv`` (no constraint) or ``ip``."""

    name: str
    algorithm: Algorithm = Algorithm.FISTA
    tau: float = BENCH_TAU
    variant: TvVariant = field(default_factory=lambda: TvVariant("i-aniso"))


def run_method(bench: Benchmark, spec: MethodSpec, outer_iters: int = 150) -> RetrievalReport:
    if spec.name == "ip":
        algorithm, constraint = Algorithm.IP, ConstraintSet.UNIT_DISK
    elif spec.name in ("ctv", "tv"):
        algorithm = spec.algorithm
        constraint = ConstraintSet.UNIT_DISK if spec.name == "ctv" else ConstraintSet.FULL_SPACE
    else:
        raise ValueError(f"unknown method {spec.name!r}")
    params = RetrievalParams(tau=spec.tau, variant=spec.variant, constraint=constraint,
                             outer_iters=outer_iters, algorithm=algorithm, seed=bench.seed)
    return retrieve(bench.y, bench.cfg, params, x_true=bench.x_true)


def first_crossing(trace, target: float) -> int | None:
    """First index with ``trace[k] <= target``, or None."""
    hits = np.flatnonzero(np.asarray(trace) <= target)
    return int(hits[0]) if hits.size else None


def denoise_demo(kind: str, size: int = 256, sigma: float = np.pi / 10, iterations: int = 50,
                 seed: int = 0, lam: float | None = None) -> tuple[float, float]:
    """Phase RMSE of the noisy cameraman phase field before and after denoising."""
    clean = phase_object(benchmark_image(size))
    noisy = add_phase_noise(clean, sigma, seed)
    variant = TvVariant(kind, 0.5)
    params = DenoiseParams(DEMO_LAMBDA[kind] if lam is None else lam, variant,
                           ConstraintSet.UNIT_DISK, iterations, record_trace=False)
    return phase_rmse(noisy, clean), phase_rmse(denoise(noisy, params).x, clean)
