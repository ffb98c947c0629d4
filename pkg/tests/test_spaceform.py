"""Distance machinery of the constant-curvature models."""

import numpy as np
import pytest

from curvbound.errors import DomainError, UndefinedGradientError
from curvbound.spaceform import (
    AmbientModel,
    ReferenceBall,
    ambient_distance,
    distance_gradient,
    distance_hessian_bilinear,
    distance_hessian_quadform,
    fd_distance_hessian_quadform,
    geodesic_point,
    geodesic_velocity,
    hessian_comparison_residual,
)

from conftest import (
    all_models,
    base_point,
    random_point_at,
    random_tangent,
    rho_range,
    unit_radial,
)


# -- distances ---------------------------------------------------------------


def test_euclidean_distance_pythagoras():
    model = AmbientModel.euclidean(2)
    assert ambient_distance(model, np.zeros(2), np.array([3.0, 4.0])) == pytest.approx(5.0)


def test_minkowski_distance():
    model = AmbientModel.minkowski(2)
    assert ambient_distance(model, np.zeros(2), np.array([5.0, 3.0])) == pytest.approx(4.0)


def test_sphere_distance_is_arc_length():
    model = AmbientModel.sphere(1.0, 2)
    o = np.array([1.0, 0.0, 0.0])
    x = np.array([np.cos(1.0), np.sin(1.0), 0.0])
    assert ambient_distance(model, o, x) == pytest.approx(1.0, abs=1e-12)


def test_sphere_antipodal_rejected():
    model = AmbientModel.sphere(1.0, 2)
    o = np.array([1.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        ambient_distance(model, o, -o)


def test_minkowski_chronology_guards():
    model = AmbientModel.minkowski(2)
    o = np.zeros(2)
    with pytest.raises(DomainError):
        ambient_distance(model, o, np.array([1.0, 2.0]))  # spacelike related
    with pytest.raises(DomainError):
        ambient_distance(model, o, np.array([-2.0, 0.5]))  # past


def test_distance_along_radial_geodesics_all_models(rng):
    for model in all_models():
        o = base_point(model)
        lo, hi = rho_range(model)
        for _ in range(20):
            v = unit_radial(model, o, rng)
            t = lo + (hi - lo) * rng.random()
            x = geodesic_point(model, o, v, t)
            assert ambient_distance(model, o, x) == pytest.approx(t, abs=1e-9), model.model_kind


# -- gradients ---------------------------------------------------------------


def test_euclidean_gradient_is_radial_unit():
    model = AmbientModel.euclidean(2)
    g = distance_gradient(model, np.zeros(2), np.array([0.0, 2.0]))
    np.testing.assert_allclose(g, [0.0, 1.0], atol=1e-14)


def test_minkowski_gradient_past_directed_unit():
    model = AmbientModel.minkowski(2)
    g = distance_gradient(model, np.zeros(2), np.array([5.0, 3.0]))
    np.testing.assert_allclose(g, [-5.0 / 4.0, -3.0 / 4.0], atol=1e-14)
    assert model.flat_inner(g, g) == pytest.approx(-1.0, abs=1e-12)


def test_gradient_unit_norm_everywhere(rng):
    for model in all_models():
        o = base_point(model)
        lo, hi = rho_range(model)
        for _ in range(25):
            x = random_point_at(model, o, lo + (hi - lo) * rng.random(), rng)
            g = distance_gradient(model, o, x)
            assert abs(abs(model.flat_inner(g, g)) - 1.0) < 1e-12, model.model_kind


def test_gradient_is_radial_velocity(rng):
    # Riemannian: grad rho = gamma'(rho); Lorentzian: grad rho = -gamma'(rho).
    for model in all_models():
        o = base_point(model)
        lo, hi = rho_range(model)
        sign = 1.0 if model.signature == "riemannian" else -1.0
        for _ in range(10):
            v = unit_radial(model, o, rng)
            t = lo + (hi - lo) * rng.random()
            x = geodesic_point(model, o, v, t)
            g = distance_gradient(model, o, x)
            np.testing.assert_allclose(
                g, sign * geodesic_velocity(model, o, v, t), atol=1e-9
            )


def test_gradient_rejected_at_reference():
    model = AmbientModel.euclidean(3)
    with pytest.raises(UndefinedGradientError):
        distance_gradient(model, np.zeros(3), np.zeros(3))


def test_near_coincident_rejected():
    model = AmbientModel.euclidean(2)
    with pytest.raises(UndefinedGradientError):
        distance_hessian_quadform(model, np.zeros(2), np.array([1e-9, 0.0]), np.array([0.0, 1.0]))


# -- Hessians ----------------------------------------------------------------


def test_euclidean_hessian_orthogonal_direction():
    model = AmbientModel.euclidean(2)
    o = np.zeros(2)
    x = np.array([0.0, 2.0])
    assert distance_hessian_quadform(model, o, x, np.array([1.0, 0.0])) == pytest.approx(0.5)


def test_radial_direction_annihilated(rng):
    for model in all_models():
        if model.signature != "riemannian":
            continue
        o = base_point(model)
        lo, hi = rho_range(model)
        x = random_point_at(model, o, 0.5 * (lo + hi), rng)
        g = distance_gradient(model, o, x)
        assert abs(distance_hessian_quadform(model, o, x, g)) < 1e-10


def test_minkowski_hessian_spacelike_orthogonal():
    model = AmbientModel.minkowski(2)
    o = np.zeros(2)
    x = np.array([2.0, 0.0])
    X = np.array([0.0, 1.0])
    assert distance_hessian_quadform(model, o, x, X) == pytest.approx(-0.5)
    assert fd_distance_hessian_quadform(model, o, x, X) == pytest.approx(-0.5, abs=1e-8)


def test_hyperbolic_hessian_is_coth(rng):
    model = AmbientModel.hyperbolic(-1.0, 3)
    o = base_point(model)
    x = random_point_at(model, o, 1.0, rng)
    g = distance_gradient(model, o, x)
    X = random_tangent(model, x, rng)
    X = X - model.flat_inner(X, g) * g
    X = X / np.sqrt(model.flat_inner(X, X))
    expected = 1.0 / np.tanh(1.0)  # 1.3130352854993312
    assert distance_hessian_quadform(model, o, x, X) == pytest.approx(expected, abs=1e-10)
    assert hessian_comparison_residual(model, o, x, X) == pytest.approx(0.0, abs=1e-6)


def test_hessian_polarization_symmetry(rng):
    for model in all_models():
        o = base_point(model)
        lo, hi = rho_range(model)
        for _ in range(10):
            x = random_point_at(model, o, lo + (hi - lo) * rng.random(), rng)
            X = random_tangent(model, x, rng)
            Y = random_tangent(model, x, rng)
            lhs = distance_hessian_quadform(model, o, x, X + Y) - distance_hessian_quadform(
                model, o, x, X - Y
            )
            rhs = 4.0 * distance_hessian_bilinear(model, o, x, X, Y)
            assert lhs == pytest.approx(rhs, abs=1e-8)
            assert distance_hessian_bilinear(model, o, x, X, Y) == pytest.approx(
                distance_hessian_bilinear(model, o, x, Y, X), abs=1e-12
            )


def test_fd_hessian_matches_closed_form_all_models(rng):
    for model in all_models():
        o = base_point(model)
        lo, hi = rho_range(model)
        for _ in range(100):
            x = random_point_at(model, o, lo + (hi - lo) * rng.random(), rng)
            X = random_tangent(model, x, rng, spacelike=True)
            closed = distance_hessian_quadform(model, o, x, X)
            fd = fd_distance_hessian_quadform(model, o, x, X)
            assert abs(closed - fd) < 1e-6 * max(1.0, abs(closed)), model.model_kind


def test_comparison_residual_vanishes_in_space_forms(rng):
    for model in all_models():
        o = base_point(model)
        lo, hi = rho_range(model)
        for _ in range(30):
            x = random_point_at(model, o, lo + (hi - lo) * rng.random(), rng)
            X = random_tangent(model, x, rng, spacelike=True)
            assert abs(hessian_comparison_residual(model, o, x, X)) < 1e-6 * max(
                1.0, float(np.dot(X, X))
            )


def test_non_tangent_vector_rejected():
    model = AmbientModel.sphere(1.0, 2)
    o = np.array([1.0, 0.0, 0.0])
    x = np.array([np.cos(1.0), np.sin(1.0), 0.0])
    with pytest.raises(DomainError):
        distance_hessian_quadform(model, o, x, x)  # position vector is normal


# -- reference balls and model validation ------------------------------------


def test_reference_ball_guards():
    sphere = AmbientModel.sphere(1.0, 3)
    ReferenceBall(base_point(sphere), 1.5).validate(sphere)
    with pytest.raises(DomainError):
        ReferenceBall(base_point(sphere), np.pi / 2).validate(sphere)
    ads = AmbientModel.lorentz_space_form(-1.0, 3)
    with pytest.raises(DomainError):
        ReferenceBall(base_point(ads), np.pi / 2).validate(ads)
    with pytest.raises(DomainError):
        ReferenceBall(base_point(sphere), -1.0).validate(sphere)


def test_model_invariants_enforced():
    with pytest.raises(ValueError):
        AmbientModel("riemannian", -1.0, 3, "sphere_embedded")
    with pytest.raises(ValueError):
        AmbientModel("riemannian", 0.5, 3, "euclidean")
    with pytest.raises(ValueError):
        AmbientModel("riemannian", 1.0, 1, "sphere_embedded")
    with pytest.raises(ValueError):
        AmbientModel("lorentzian", 0.0, 3, "lorentz_spaceform")


def test_off_model_points_rejected():
    model = AmbientModel.sphere(1.0, 2)
    with pytest.raises(DomainError):
        ambient_distance(model, np.array([1.0, 0.0, 0.0]), np.array([2.0, 0.0, 0.0]))
