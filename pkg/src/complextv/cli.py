"""Command-line front end.

Exit codes: 0 success, 1 malformed input file, 2 invalid configuration,
3 shape mismatch between measurement and reference.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .denoise import DenoiseMode, DenoiseParams, denoise
from .field import ComplexField, ConstraintSet, TvVariant
from .fieldio import (
    ConfigError,
    FieldFormatError,
    RunConfig,
    is_field_file,
    load_config,
    minmax_to_gray,
    phase_to_gray,
    read_field,
    read_pgm,
    write_field,
    write_pgm,
)
from .optics import PropagatorConfig, propagate
from .prox import LineSearchError
from .retrieval import (
    Algorithm,
    NoiseKind,
    NoiseModel,
    RetrievalParams,
    add_phase_noise,
    phase_object,
    phase_rmse,
    retrieve,
    simulate_measurement,
)

EXIT_OK, EXIT_FILE, EXIT_CONFIG, EXIT_SHAPE = 0, 1, 2, 3


class ShapeMismatch(ValueError):
    pass


def _config(path) -> RunConfig:
    return load_config(path) if path else RunConfig()


def _variant(cfg: RunConfig) -> TvVariant:
    return TvVariant(cfg.tv_variant, cfg.alpha)


def _propagator(cfg: RunConfig, shape) -> PropagatorConfig:
    return PropagatorConfig(cfg.wavelength_m, cfg.distance_m, cfg.pixel_pitch_m, *shape)


def _load_object(path) -> ComplexField:
    """A CTVF field as is, or an 8-bit PGM turned into a pure-phase object."""
    try:
        field_file = is_field_file(path)
    except OSError as e:
        raise FieldFormatError(str(e)) from e
    return read_field(path) if field_file else phase_object(read_pgm(path))


def _load_intensity(path) -> np.ndarray:
    """A CTVF field with zero imaginary part, or a PGM read as ``pixel / 255``."""
    try:
        field_file = is_field_file(path)
    except OSError as e:
        raise FieldFormatError(str(e)) from e
    if not field_file:
        return read_pgm(path).astype(np.float64) / 255.0
    x = read_field(path)
    if np.any(x.v != 0) or np.any(x.u < 0):
        raise FieldFormatError("measurement must be real and nonnegative")
    return x.u


def _reference(path, shape):
    if path is None:
        return None
    ref = _load_object(path)
    if ref.shape != shape:
        raise ShapeMismatch(f"reference is {ref.shape}, data is {shape}")
    return ref


def _kv(**pairs):
    for k, v in pairs.items():
        print(f"{k}={v}")


def cmd_denoise(args) -> int:
    cfg = _config(args.config)
    if cfg.algorithm == "ip":
        raise ConfigError("denoise runs gp/fgp (ista/fista are accepted as aliases)")
    mode = DenoiseMode.GP if cfg.algorithm in ("gp", "ista") else DenoiseMode.FGP
    if cfg.lam <= 0:
        raise ConfigError("lambda must be positive for denoising")
    b = read_field(args.input)
    ref = _reference(args.reference, b.shape)
    if cfg.noise_kind == NoiseKind.INTENSITY.value:
        raise ConfigError("denoise supports noise_kind none or phase")
    if cfg.noise_kind == NoiseKind.PHASE.value:
        b = add_phase_noise(b, cfg.noise_level, cfg.seed)
    params = DenoiseParams(cfg.lam, _variant(cfg), ConstraintSet(cfg.constraint), cfg.inner_iters, mode)
    result = denoise(b, params)
    write_field(args.output, result.x)
    h = result.dual_objective_trace
    _kv(**{"lambda": cfg.lam}, variant=cfg.tv_variant, alpha=cfg.alpha, K=cfg.inner_iters,
        mode=mode.value, dual_objective_final=repr(h[-1]), dual_objective_delta=repr(h[-1] - h[-2]))
    if ref is not None:
        _kv(rmse_before=repr(phase_rmse(b, ref)), rmse_after=repr(phase_rmse(result.x, ref)))
    return EXIT_OK


def cmd_retrieve(args) -> int:
    cfg = _config(args.config)
    if cfg.algorithm not in {a.value for a in Algorithm}:
        raise ConfigError(f"retrieve runs fista, ista or ip, not {cfg.algorithm}")
    if cfg.algorithm != "ip" and cfg.tau <= 0:
        raise ConfigError("tau must be positive for TV-regularized retrieval")
    y = _load_intensity(args.measurement)
    ref = _reference(args.reference, y.shape)
    params = RetrievalParams(
        tau=cfg.tau, variant=_variant(cfg), constraint=ConstraintSet(cfg.constraint),
        outer_iters=cfg.outer_iters, inner_iters=cfg.inner_iters, algorithm=Algorithm(cfg.algorithm),
        warm_start_dual=cfg.warm_start == "on", seed=cfg.seed,
    )
    report = retrieve(y, _propagator(cfg, y.shape), params, x_true=ref)
    trace_path = Path(args.trace) if args.trace else Path(args.output).with_suffix(".csv")
    lines = ["iter,objective,rmse"]
    for k, obj in enumerate(report.objective_trace):
        rmse = repr(report.rmse_trace[k]) if report.rmse_trace else ""
        lines.append(f"{k},{obj!r},{rmse}")
    write_field(args.output, report.x_hat)
    trace_path.write_text("\n".join(lines) + "\n")
    _kv(algorithm=cfg.algorithm, iterations=cfg.outer_iters,
        objective_final=repr(report.objective_trace[-1]), trace=trace_path)
    if report.rmse_trace:
        _kv(rmse_final=repr(report.rmse_trace[-1]))
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _config(args.config)
    if cfg.noise_kind == NoiseKind.PHASE.value:
        raise ConfigError("simulate supports noise_kind none or intensity")
    obj = _load_object(args.object)
    noise = NoiseModel(NoiseKind(cfg.noise_kind), cfg.noise_level)
    y = simulate_measurement(obj, _propagator(cfg, obj.shape), noise, cfg.seed)
    write_field(args.output, ComplexField(y, np.zeros_like(y)))
    if args.object_out:
        write_field(args.object_out, obj)
    _kv(rows=y.shape[0], cols=y.shape[1], noise_kind=cfg.noise_kind, noise_level=cfg.noise_level,
        mean_intensity=repr(float(y.mean())))
    return EXIT_OK


def cmd_propagate(args) -> int:
    cfg = _config(args.config)
    x = read_field(args.input)
    pcfg = _propagator(cfg, x.shape)
    write_field(args.output, propagate(x, pcfg.reversed() if args.back else pcfg))
    return EXIT_OK


def cmd_export_pgm(args) -> int:
    """Write one channel as an 8-bit PGM (lossy)."""
    x = read_field(args.field)
    if args.channel == "phase":
        img, lo, hi = phase_to_gray(x.argument()), -np.pi, np.pi
    else:
        data = {"magnitude": x.modulus(), "real": x.u, "imag": x.v}[args.channel]
        img, lo, hi = minmax_to_gray(data)
    write_pgm(args.output, img)
    _kv(channel=args.channel, min=repr(lo), max=repr(hi))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="complextv", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("denoise", help="constrained complex TV denoising of a field")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--config")
    p.add_argument("--reference", help="clean field for phase RMSE before/after")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("retrieve", help="phase retrieval from one intensity image")
    p.add_argument("measurement")
    p.add_argument("output")
    p.add_argument("--config")
    p.add_argument("--reference", help="ground-truth object (field or PGM) for the RMSE trace")
    p.add_argument("--trace", help="CSV trace path (default: output with .csv suffix)")
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("simulate", help="simulate an intensity measurement of an object")
    p.add_argument("object", help="CTVF field or 8-bit PGM (phase = pi * pixel / 255)")
    p.add_argument("output")
    p.add_argument("--config")
    p.add_argument("--object-out", help="also write the object field")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("propagate", help="angular-spectrum propagation of a field")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--config")
    p.add_argument("--back", action="store_true", help="propagate by -distance")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("export-pgm", help="export one channel of a field as PGM")
    p.add_argument("field")
    p.add_argument("output")
    p.add_argument("--channel", choices=["phase", "magnitude", "real", "imag"], default="phase")
    p.set_defaults(func=cmd_export_pgm)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FieldFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FILE
    except (ConfigError, LineSearchError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ShapeMismatch as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SHAPE


if __name__ == "__main__":
    sys.exit(main())
