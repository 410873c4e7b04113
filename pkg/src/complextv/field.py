"""Complex fields as real matrix pairs, finite differences, TV seminorms and
object-domain constraint sets."""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields

import numpy as np


def _as_matrix(a, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D matrix, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class ComplexField:
    """A complex m x n image stored as its real part ``u`` and imaginary part ``v``."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = _as_matrix(self.u, "u")
        v = _as_matrix(self.v, "v")
        if u.shape != v.shape:
            raise ValueError(f"real/imaginary shapes differ: {u.shape} vs {v.shape}")
        if u.shape[0] < 1 or u.shape[1] < 1:
            raise ValueError(f"field must be at least 1x1, got {u.shape}")
        if not (np.isfinite(u).all() and np.isfinite(v).all()):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_complex(cls, z) -> ComplexField:
        z = np.asarray(z, dtype=np.complex128)
        return cls(z.real.copy(), z.imag.copy())

    @classmethod
    def zeros(cls, shape: tuple[int, int]) -> ComplexField:
        return cls(np.zeros(shape), np.zeros(shape))

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape

    def to_complex(self) -> np.ndarray:
        return self.u + 1j * self.v

    def modulus(self) -> np.ndarray:
        return np.hypot(self.u, self.v)

    def argument(self) -> np.ndarray:
        return np.arctan2(self.v, self.u)

    def inner(self, other: ComplexField) -> float:
        """Real inner product of the matrix pairs."""
        return float(np.sum(self.u * other.u) + np.sum(self.v * other.v))

    def norm(self) -> float:
        return float(np.sqrt(self.inner(self)))

    def __add__(self, other: ComplexField) -> ComplexField:
        return ComplexField(self.u + other.u, self.v + other.v)

    def __sub__(self, other: ComplexField) -> ComplexField:
        return ComplexField(self.u - other.u, self.v - other.v)

    def __mul__(self, c: float) -> ComplexField:
        return ComplexField(c * self.u, c * self.v)

    __rmul__ = __mul__

    def __neg__(self) -> ComplexField:
        return ComplexField(-self.u, -self.v)


class _MatrixGroup:
    """Shared arithmetic for the four-matrix groups living on the difference grid."""

    def parts(self) -> tuple[np.ndarray, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))

    @property
    def source_shape(self) -> tuple[int, int]:
        a1, a2 = self.parts()[:2]
        return a2.shape[0], a1.shape[1]

    def _check(self):
        arrs = [_as_matrix(a, f.name) for a, f in zip(self.parts(), fields(self))]
        for a, f in zip(arrs, fields(self)):
            object.__setattr__(self, f.name, a)
        m, n = arrs[1].shape[0], arrs[0].shape[1]
        vert, horiz = (max(m - 1, 0), n), (m, max(n - 1, 0))
        expected = (vert, horiz, vert, horiz)
        if tuple(a.shape for a in arrs) != expected:
            raise ValueError(
                f"inconsistent difference shapes {[a.shape for a in arrs]} for source {(m, n)}"
            )

    def _new(self, arrays):
        return type(self)(*arrays)

    def inner(self, other) -> float:
        return float(sum(np.sum(a * b) for a, b in zip(self.parts(), other.parts())))

    def norm(self) -> float:
        return float(np.sqrt(self.inner(self)))

    def __add__(self, other):
        return self._new(a + b for a, b in zip(self.parts(), other.parts()))

    def __sub__(self, other):
        return self._new(a - b for a, b in zip(self.parts(), other.parts()))

    def __mul__(self, c: float):
        return self._new(c * a for a in self.parts())

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-a for a in self.parts())

    @classmethod
    def zeros(cls, shape: tuple[int, int]):
        m, n = shape
        vert, horiz = np.zeros((m - 1, n)), np.zeros((m, n - 1))
        return cls(vert, horiz, vert.copy(), horiz.copy())


@dataclass(frozen=True, eq=False)
class DiffField(_MatrixGroup):
    """Vertical (``*1``) and horizontal (``*2``) differences of the real and imaginary parts."""

    u1: np.ndarray
    u2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        self._check()


@dataclass(frozen=True, eq=False)
class DualField(_MatrixGroup):
    """Dual variable on the difference grid; ``r*`` pair with the real part, ``s*`` with the imaginary."""

    r1: np.ndarray
    r2: np.ndarray
    s1: np.ndarray
    s2: np.ndarray

    def __post_init__(self):
        self._check()


class TvKind(str, enum.Enum):
    I_ISO = "i-iso"
    I_ANISO = "i-aniso"
    II_ISO = "ii-iso"
    II_ANISO = "ii-aniso"


@dataclass(frozen=True)
class TvVariant:
    """Which complex TV seminorm to use. ``alpha`` weights the real part for type-II kinds."""

    kind: TvKind = TvKind.I_ANISO
    alpha: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "kind", TvKind(self.kind))
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    @property
    def type_two(self) -> bool:
        return self.kind in (TvKind.II_ISO, TvKind.II_ANISO)

    @property
    def isotropic(self) -> bool:
        return self.kind in (TvKind.I_ISO, TvKind.II_ISO)


class ConstraintSet(str, enum.Enum):
    FULL_SPACE = "none"
    UNIT_DISK = "unit-disk"


def diff_rows(a: np.ndarray) -> np.ndarray:
    """``a[j, k] - a[j+1, k]`` over the last two axes."""
    return a[..., :-1, :] - a[..., 1:, :]


def diff_cols(a: np.ndarray) -> np.ndarray:
    """``a[j, k] - a[j, k+1]`` over the last two axes."""
    return a[..., :, :-1] - a[..., :, 1:]


def diff_rows_adjoint(d: np.ndarray) -> np.ndarray:
    """Adjoint of :func:`diff_rows`; ``d`` has one row fewer than the result."""
    shape = d.shape[:-2] + (d.shape[-2] + 1, d.shape[-1])
    out = np.zeros(shape)
    out[..., :-1, :] += d
    out[..., 1:, :] -= d
    return out


def diff_cols_adjoint(d: np.ndarray) -> np.ndarray:
    shape = d.shape[:-1] + (d.shape[-1] + 1,)
    out = np.zeros(shape)
    out[..., :, :-1] += d
    out[..., :, 1:] -= d
    return out


def forward_diff(x: ComplexField) -> DiffField:
    return DiffField(diff_rows(x.u), diff_cols(x.u), diff_rows(x.v), diff_cols(x.v))


def adjoint_diff(q: DualField | DiffField) -> ComplexField:
    """Adjoint of :func:`forward_diff` (a negative divergence with zero boundary terms)."""
    a1, a2, b1, b2 = q.parts()
    return ComplexField(
        diff_rows_adjoint(a1) + diff_cols_adjoint(a2),
        diff_rows_adjoint(b1) + diff_cols_adjoint(b2),
    )


def _real_tv(d1: np.ndarray, d2: np.ndarray, isotropic: bool) -> float:
    if not isotropic:
        return float(np.abs(d1).sum() + np.abs(d2).sum())
    interior = np.sqrt(d1[:, :-1] ** 2 + d2[:-1, :] ** 2).sum()
    return float(interior + np.abs(d1[:, -1:]).sum() + np.abs(d2[-1:, :]).sum())


def tv_seminorm(x: ComplexField, variant: TvVariant = TvVariant()) -> float:
    """Evaluate one of the four complex TV seminorms of ``x``.

    Boundary terms (last column of the vertical differences, last row of the
    horizontal ones) are included exactly as in the isotropic definitions.
    """
    p = forward_diff(x)
    if variant.type_two:
        a = variant.alpha
        return a * _real_tv(p.u1, p.u2, variant.isotropic) + (1 - a) * _real_tv(
            p.v1, p.v2, variant.isotropic
        )
    mag1 = np.hypot(p.u1, p.v1)
    mag2 = np.hypot(p.u2, p.v2)
    return _real_tv(mag1, mag2, variant.isotropic)


def project_unit_disk(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    scale = np.maximum(1.0, np.hypot(u, v))
    return u / scale, v / scale


def project_constraint(x: ComplexField, constraint: ConstraintSet) -> ComplexField:
    if ConstraintSet(constraint) is ConstraintSet.FULL_SPACE:
        return x
    return ComplexField(*project_unit_disk(x.u, x.v))


def constraint_violation(x: ComplexField, constraint: ConstraintSet) -> float:
    """Frobenius distance from ``x`` to the constraint set (0 when feasible)."""
    return (x - project_constraint(x, constraint)).norm()
