import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from complextv import (
    ComplexField,
    ConstraintSet,
    DualField,
    TvVariant,
    adjoint_diff,
    forward_diff,
    project_constraint,
    tv_seminorm,
)
from conftest import VARIANTS, random_dual, random_field
from oracles import brute_real_tv, brute_tv

SIZES = [(1, 1), (1, 7), (6, 1), (5, 4), (8, 8)]


def test_field_rejects_bad_input():
    with pytest.raises(ValueError):
        ComplexField(np.zeros((2, 2)), np.zeros((2, 3)))
    with pytest.raises(ValueError):
        ComplexField(np.array([[np.nan]]), np.zeros((1, 1)))
    with pytest.raises(ValueError):
        ComplexField(np.zeros((0, 3)), np.zeros((0, 3)))
    with pytest.raises(ValueError):
        DualField(np.zeros((1, 3)), np.zeros((2, 3)), np.zeros((1, 3)), np.zeros((2, 2)))


def test_complex_accessors():
    x = ComplexField.from_complex(np.array([[3 + 4j, -1j]]))
    np.testing.assert_array_equal(x.modulus(), [[5.0, 1.0]])
    np.testing.assert_allclose(x.argument(), [[np.arctan2(4, 3), -np.pi / 2]])
    np.testing.assert_array_equal(x.to_complex(), [[3 + 4j, -1j]])


def test_forward_diff_constant_is_zero():
    p = forward_diff(ComplexField(np.full((3, 3), 2.5), np.full((3, 3), -1.0)))
    for a in p.parts():
        assert not a.any()


def test_forward_diff_hand_example():
    p = forward_diff(ComplexField(np.array([[0.0, 1.0], [2.0, 3.0]]), np.zeros((2, 2))))
    np.testing.assert_array_equal(p.u1, [[-2.0, -2.0]])
    np.testing.assert_array_equal(p.u2, [[-1.0], [-1.0]])
    assert not p.v1.any() and not p.v2.any()


@pytest.mark.parametrize("m,n", SIZES + [(33, 17)])
def test_forward_diff_shapes(m, n, rng):
    p = forward_diff(random_field(rng, (m, n)))
    assert p.u1.shape == p.v1.shape == (m - 1, n)
    assert p.u2.shape == p.v2.shape == (m, n - 1)
    assert p.source_shape == (m, n)


def test_adjoint_zero_and_basis():
    assert adjoint_diff(DualField.zeros((3, 4))).norm() == 0
    r1 = np.zeros((1, 2))
    r1[0, 0] = 1
    x = adjoint_diff(DualField(r1, np.zeros((2, 1)), np.zeros((1, 2)), np.zeros((2, 1))))
    np.testing.assert_array_equal(x.u, [[1.0, 0.0], [-1.0, 0.0]])
    assert not x.v.any()


@pytest.mark.parametrize("m,n", SIZES)
def test_adjoint_identity(m, n, rng):
    for _ in range(100):
        x, q = random_field(rng, (m, n)), random_dual(rng, (m, n))
        lhs = forward_diff(x).inner(q)
        rhs = x.inner(adjoint_diff(q))
        assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))


@pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: v.kind.value)
def test_tv_constant_is_zero(variant):
    assert tv_seminorm(ComplexField(np.full((4, 5), 0.3), np.full((4, 5), 0.7)), variant) == 0


def test_tv_hand_example():
    x = ComplexField(np.array([[0.0, 1.0], [0.0, 1.0]]), np.zeros((2, 2)))
    assert tv_seminorm(x, TvVariant("i-aniso")) == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("kind", ["ii-iso", "ii-aniso"])
@pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0])
def test_tv_type_two_pure_imaginary(kind, alpha, rng):
    w = rng.standard_normal((5, 6))
    real_kind = "iso" if kind == "ii-iso" else "aniso"
    got = tv_seminorm(ComplexField(np.zeros_like(w), w), TvVariant(kind, alpha))
    assert got == pytest.approx((1 - alpha) * brute_real_tv(w, real_kind), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: v.kind.value)
@pytest.mark.parametrize("m,n", SIZES + [(3, 9)])
def test_tv_matches_loop_oracle(variant, m, n, rng):
    for _ in range(5):
        x = random_field(rng, (m, n))
        expected = brute_tv(x.u, x.v, variant.kind.value, variant.alpha)
        assert tv_seminorm(x, variant) == pytest.approx(expected, rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("kind,real_kind", [("i-iso", "iso"), ("i-aniso", "aniso")])
def test_type_one_reduces_to_real_tv(kind, real_kind, rng):
    for _ in range(20):
        u = rng.standard_normal((6, 7))
        got = tv_seminorm(ComplexField(u, np.zeros_like(u)), TvVariant(kind))
        assert abs(got - brute_real_tv(u, real_kind)) <= 1e-12 * max(1, got)


@pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: v.kind.value)
def test_tv_homogeneity_and_triangle(variant, rng):
    for _ in range(50):
        x, y = random_field(rng, (5, 4)), random_field(rng, (5, 4))
        c = rng.uniform(-3, 3)
        assert tv_seminorm(c * x, variant) == pytest.approx(abs(c) * tv_seminorm(x, variant), rel=1e-12)
        assert tv_seminorm(x + y, variant) <= tv_seminorm(x, variant) + tv_seminorm(y, variant) + 1e-9
        assert tv_seminorm(x, variant) >= 0


def test_tv_zero_only_on_constants(rng):
    # type-II with alpha at an endpoint ignores one part, so only interior alpha here
    for variant in VARIANTS:
        for _ in range(20):
            x = random_field(rng, (3, 3))
            assert tv_seminorm(x, variant) > 0
        # perturb one pixel of a constant image
        u = np.ones((3, 3))
        u[1, 2] += 1e-3
        assert tv_seminorm(ComplexField(u, np.ones((3, 3))), variant) > 0


def test_isotropic_below_anisotropic(rng):
    for _ in range(100):
        x = random_field(rng, (6, 5))
        assert tv_seminorm(x, TvVariant("i-iso")) <= tv_seminorm(x, TvVariant("i-aniso")) + 1e-12
        assert tv_seminorm(x, TvVariant("ii-iso")) <= tv_seminorm(x, TvVariant("ii-aniso")) + 1e-12


@given(
    arrays(np.float64, (4, 3), elements=st.floats(-1e3, 1e3)),
    arrays(np.float64, (4, 3), elements=st.floats(-1e3, 1e3)),
    st.sampled_from(VARIANTS),
)
@settings(max_examples=60, deadline=None)
def test_tv_matches_loop_oracle_hypothesis(u, v, variant):
    expected = brute_tv(u, v, variant.kind.value, variant.alpha)
    assert tv_seminorm(ComplexField(u, v), variant) == pytest.approx(expected, rel=1e-10, abs=1e-9)


def test_unit_disk_projection_examples():
    x = ComplexField(np.array([[0.3, -0.1]]), np.array([[0.2, 0.5]]))
    y = project_constraint(x, ConstraintSet.UNIT_DISK)
    np.testing.assert_array_equal(y.u, x.u)
    np.testing.assert_array_equal(y.v, x.v)
    p = project_constraint(ComplexField(np.array([[3.0]]), np.array([[4.0]])), ConstraintSet.UNIT_DISK)
    assert p.u[0, 0] == pytest.approx(0.6, abs=1e-15)
    assert p.v[0, 0] == pytest.approx(0.8, abs=1e-15)
    assert project_constraint(x, ConstraintSet.FULL_SPACE) is x


def test_unit_disk_projection_properties(rng):
    for _ in range(100):
        x, y = random_field(rng, (4, 5), 2.0), random_field(rng, (4, 5), 2.0)
        px, py = (project_constraint(a, ConstraintSet.UNIT_DISK) for a in (x, y))
        assert np.all(px.u**2 + px.v**2 <= 1 + 1e-15)
        ppx = project_constraint(px, ConstraintSet.UNIT_DISK)
        assert (ppx - px).norm() <= 1e-12
        assert (px - py).norm() <= (x - y).norm() + 1e-15


def test_field_arithmetic(rng):
    x, y = random_field(rng, (3, 2)), random_field(rng, (3, 2))
    np.testing.assert_allclose((x + y).to_complex(), x.to_complex() + y.to_complex())
    np.testing.assert_allclose((2 * x - y).to_complex(), 2 * x.to_complex() - y.to_complex())
    assert x.norm() == pytest.approx(np.linalg.norm(x.to_complex()))
