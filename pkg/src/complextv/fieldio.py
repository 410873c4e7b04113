"""File formats: the CTVF binary field container, 8-bit PGM images and
key=value run configs."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .field import ComplexField, ConstraintSet, TvKind

MAGIC = b"CTVF"
VERSION = 1
_HEADER = struct.Struct("<4sIII")


class FieldFormatError(ValueError):
    """Malformed or unreadable field/image file."""


class ConfigError(ValueError):
    """Invalid run configuration."""


def encode_field(x: ComplexField) -> bytes:
    rows, cols = x.shape
    header = _HEADER.pack(MAGIC, VERSION, rows, cols)
    return header + x.u.astype("<f8").tobytes() + x.v.astype("<f8").tobytes()


def decode_field(data: bytes) -> ComplexField:
    if len(data) < _HEADER.size:
        raise FieldFormatError(f"file too short for a header ({len(data)} bytes)")
    magic, version, rows, cols = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FieldFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FieldFormatError(f"unsupported version {version}")
    expected = 16 * rows * cols
    payload = data[_HEADER.size:]
    if len(payload) != expected:
        raise FieldFormatError(f"payload is {len(payload)} bytes, expected {expected}")
    if rows < 1 or cols < 1:
        raise FieldFormatError(f"empty field {rows}x{cols}")
    vals = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    if not np.isfinite(vals).all():
        raise FieldFormatError("payload contains non-finite values")
    n = rows * cols
    return ComplexField(vals[:n].reshape(rows, cols), vals[n:].reshape(rows, cols))


def write_field(path, x: ComplexField):
    Path(path).write_bytes(encode_field(x))


def read_field(path) -> ComplexField:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise FieldFormatError(str(e)) from e
    return decode_field(data)


def _pgm_tokens(data: bytes, count: int):
    """Split off ``count`` whitespace-separated header tokens, skipping comments."""
    tokens, i = [], 0
    while len(tokens) < count:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if data[i:i + 1] == b"#":
            while i < len(data) and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < len(data) and not data[j:j + 1].isspace():
            j += 1
        if j == i:
            raise FieldFormatError("truncated PGM header")
        tokens.append(data[i:j])
        i = j
    # exactly one whitespace byte separates the header from the raster
    return tokens, i + 1


def read_pgm(path) -> np.ndarray:
    """Read a binary (P5) 8-bit PGM as a uint8 matrix."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise FieldFormatError(str(e)) from e
    tokens, offset = _pgm_tokens(data, 4)
    if tokens[0] != b"P5":
        raise FieldFormatError(f"not a binary PGM (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as e:
        raise FieldFormatError("non-numeric PGM header") from e
    if maxval != 255:
        raise FieldFormatError(f"only 8-bit PGM is supported (maxval {maxval})")
    raster = data[offset:offset + width * height]
    if len(raster) != width * height or width < 1 or height < 1:
        raise FieldFormatError("truncated PGM raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path, image: np.ndarray):
    image = np.asarray(image, dtype=np.uint8)
    h, w = image.shape
    Path(path).write_bytes(b"P5\n%d %d\n255\n" % (w, h) + image.tobytes())


def is_field_file(path) -> bool:
    with open(path, "rb") as f:
        return f.read(4) == MAGIC


def phase_to_gray(phase: np.ndarray) -> np.ndarray:
    """Map phase in (-pi, pi] linearly onto 0..255."""
    return np.clip(np.round((phase + np.pi) / (2 * np.pi) * 255), 0, 255).astype(np.uint8)


def minmax_to_gray(a: np.ndarray) -> tuple[np.ndarray, float, float]:
    lo, hi = float(a.min()), float(a.max())
    if hi == lo:
        return np.zeros(a.shape, dtype=np.uint8), lo, hi
    return np.round((a - lo) / (hi - lo) * 255).astype(np.uint8), lo, hi


# ---------------------------------------------------------------- configs

_CHOICES = {
    "tv_variant": {k.value for k in TvKind},
    "constraint": {c.value for c in ConstraintSet},
    "algorithm": {"fista", "ista", "ip", "gp", "fgp"},
    "noise_kind": {"none", "intensity", "phase"},
    "warm_start": {"on", "off"},
}


@dataclass
class RunConfig:
    wavelength_m: float = 500e-9
    distance_m: float = 5e-3
    pixel_pitch_m: float = 5e-6
    tv_variant: str = "i-aniso"
    alpha: float = 0.5
    tau: float = 0.02
    lam: float = 0.2
    outer_iters: int = 150
    inner_iters: int = 10
    constraint: str = "unit-disk"
    algorithm: str = "fista"
    noise_kind: str = "none"
    noise_level: float = 0.0
    seed: int = 0
    warm_start: str = "on"


# "lambda" is a Python keyword; the config key maps onto ``lam``
_KEYS = {"lambda": "lam", **{k: k for k in RunConfig.__dataclass_fields__ if k != "lam"}}
_INT_KEYS = {"outer_iters", "inner_iters", "seed"}
_POSITIVE = {"wavelength_m", "pixel_pitch_m", "outer_iters", "inner_iters"}


def parse_config(text: str) -> RunConfig:
    """Parse ``key=value`` lines. Blank lines and ``#`` comments are skipped.

    Raises :class:`ConfigError` naming the offending line number.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if _KEYS[key] in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[_KEYS[key]] = _convert(lineno, key, value)
    cfg = RunConfig(**values)
    if not 0 <= cfg.alpha <= 1:
        raise ConfigError(f"alpha must lie in [0, 1], got {cfg.alpha}")
    return cfg


def _convert(lineno: int, key: str, value: str):
    name = _KEYS[key]
    if name in _CHOICES:
        if value not in _CHOICES[name]:
            raise ConfigError(f"line {lineno}: {key} must be one of {sorted(_CHOICES[name])}, got {value!r}")
        return value
    try:
        out = int(value) if name in _INT_KEYS else float(value)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} expects a number, got {value!r}") from None
    if name in ("wavelength_m", "pixel_pitch_m", "distance_m", "alpha", "tau", "lam", "noise_level"):
        if not np.isfinite(out):
            raise ConfigError(f"line {lineno}: {key} must be finite")
    if name in _POSITIVE and out <= 0:
        raise ConfigError(f"line {lineno}: {key} must be positive")
    if name in ("tau", "lam", "noise_level", "seed") and out < 0:
        raise ConfigError(f"line {lineno}: {key} must be nonnegative")
    return out


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read config: {e}") from e
    return parse_config(text)
