"""Angular-spectrum free-space propagation and the amplitude data-fidelity term."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import ComplexField

# zero-modulus guard for the unit-phase factor
EPS = 1e-12


@dataclass(frozen=True)
class PropagatorConfig:
    """Propagation geometry in SI units. A negative ``distance`` back-propagates."""

    wavelength: float
    distance: float
    pixel_pitch: float
    rows: int
    cols: int

    def __post_init__(self):
        if not self.wavelength > 0 or not self.pixel_pitch > 0:
            raise ValueError("wavelength and pixel_pitch must be positive")
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid must be at least 1x1")
        if not np.isfinite(self.distance):
            raise ValueError("distance must be finite")

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def reversed(self) -> PropagatorConfig:
        return PropagatorConfig(self.wavelength, -self.distance, self.pixel_pitch, self.rows, self.cols)


def frequency_grid(cfg: PropagatorConfig) -> tuple[np.ndarray, np.ndarray]:
    """Spatial frequencies ``(k - N//2) / (N * pitch)``, laid out in FFT order.

    ``np.fft.fftfreq`` yields exactly the centered sample set, just rolled so
    that index 0 is DC; that matches the unshifted transform used below.
    """
    fy = np.fft.fftfreq(cfg.rows, d=cfg.pixel_pitch)
    fx = np.fft.fftfreq(cfg.cols, d=cfg.pixel_pitch)
    return np.meshgrid(fx, fy)


@lru_cache(maxsize=32)
def _transfer(cfg: PropagatorConfig) -> np.ndarray:
    if cfg.distance == 0:
        # no propagation at all, evanescent components included
        h = np.ones(cfg.shape, dtype=np.complex128)
        h.setflags(write=False)
        return h
    fx, fy = frequency_grid(cfg)
    arg = 1.0 - (cfg.wavelength * fx) ** 2 - (cfg.wavelength * fy) ** 2
    band = arg >= 0
    phase = (2 * np.pi / cfg.wavelength) * cfg.distance * np.sqrt(np.where(band, arg, 0.0))
    h = np.where(band, np.exp(1j * phase), 0.0)
    h.setflags(write=False)
    return h


def transfer_function(cfg: PropagatorConfig) -> np.ndarray:
    """Angular-spectrum transfer function; evanescent frequencies are set to 0 for ``distance != 0``."""
    return _transfer(cfg).copy()


def propagating_band(cfg: PropagatorConfig) -> np.ndarray:
    return np.abs(_transfer(cfg)) > 0


def _check_shape(x: ComplexField, cfg: PropagatorConfig):
    if x.shape != cfg.shape:
        raise ValueError(f"field shape {x.shape} does not match propagator grid {cfg.shape}")


def propagate_complex(z: np.ndarray, cfg: PropagatorConfig) -> np.ndarray:
    return np.fft.ifft2(np.fft.fft2(z, norm="ortho") * _transfer(cfg), norm="ortho")


def propagate(x: ComplexField, cfg: PropagatorConfig) -> ComplexField:
    """Propagate ``x`` by ``cfg.distance`` with a unitary FFT pair.

    ``propagate(., cfg.reversed())`` is the exact adjoint, and the inverse on
    the propagating band.
    """
    _check_shape(x, cfg)
    return ComplexField.from_complex(propagate_complex(x.to_complex(), cfg))


def forward_intensity(x: ComplexField, cfg: PropagatorConfig) -> np.ndarray:
    _check_shape(x, cfg)
    return np.abs(propagate_complex(x.to_complex(), cfg)) ** 2


def unit_phase(xi: np.ndarray) -> np.ndarray:
    """``xi / |xi|`` with zero entries mapped to 0."""
    return xi / np.maximum(np.abs(xi), EPS)


def _check_intensity(y: np.ndarray, cfg: PropagatorConfig) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    if y.shape != cfg.shape:
        raise ValueError(f"intensity shape {y.shape} does not match grid {cfg.shape}")
    if (y < 0).any() or not np.isfinite(y).all():
        raise ValueError("intensity must be finite and nonnegative")
    return y


def fidelity_value(x: ComplexField, y: np.ndarray, cfg: PropagatorConfig) -> float:
    """``1/2 sum (|A x| - sqrt(y))^2``."""
    y = _check_intensity(y, cfg)
    _check_shape(x, cfg)
    rho = np.abs(propagate_complex(x.to_complex(), cfg)) - np.sqrt(y)
    return 0.5 * float(np.sum(rho**2))


def fidelity_gradient(x: ComplexField, y: np.ndarray, cfg: PropagatorConfig) -> ComplexField:
    """Gradient of :func:`fidelity_value` with respect to the pair ``(u, v)``."""
    y = _check_intensity(y, cfg)
    _check_shape(x, cfg)
    xi = propagate_complex(x.to_complex(), cfg)
    residual = unit_phase(xi) * (np.abs(xi) - np.sqrt(y))
    return ComplexField.from_complex(propagate_complex(residual, cfg.reversed()))


class AmplitudeFidelity:
    """``F(x) = 1/2 ||A x| - sqrt(y)||^2`` as a smooth oracle, caching the last propagation."""

    def __init__(self, y: np.ndarray, cfg: PropagatorConfig):
        self.y = _check_intensity(y, cfg)
        self.sqrt_y = np.sqrt(self.y)
        self.cfg = cfg
        self.back = cfg.reversed()
        self._key = None
        self._xi = None

    def _forward(self, x: ComplexField) -> np.ndarray:
        # identity check is enough: fields are immutable
        if self._key is not x:
            _check_shape(x, self.cfg)
            self._xi = propagate_complex(x.to_complex(), self.cfg)
            self._key = x
        return self._xi

    def value(self, x: ComplexField) -> float:
        rho = np.abs(self._forward(x)) - self.sqrt_y
        return 0.5 * float(np.sum(rho**2))

    def gradient(self, x: ComplexField) -> ComplexField:
        xi = self._forward(x)
        residual = unit_phase(xi) * (np.abs(xi) - self.sqrt_y)
        return ComplexField.from_complex(propagate_complex(residual, self.back))
