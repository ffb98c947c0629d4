"""Shared sampling helpers: random points and tangents in each model space."""

import numpy as np
import pytest

from curvbound.spaceform import (
    LORENTZIAN,
    RIEMANNIAN,
    AmbientModel,
    geodesic_point,
)


def all_models(dimension=3):
    """One model of every kind, Lorentz space forms in both curvature signs."""
    return [
        AmbientModel.euclidean(dimension),
        AmbientModel.sphere(1.0, dimension),
        AmbientModel.hyperbolic(-1.0, dimension),
        AmbientModel.minkowski(dimension),
        AmbientModel.lorentz_space_form(0.7, dimension),
        AmbientModel.lorentz_space_form(-0.8, dimension),
    ]


def base_point(model):
    """A canonical point to use as reference: origin, or a quadric vertex."""
    x = np.zeros(model.embedding_dim)
    b = model.curvature
    if model.model_kind == "sphere_embedded":
        x[0] = 1.0 / np.sqrt(b)
    elif model.model_kind == "hyperboloid_embedded":
        x[0] = 1.0 / np.sqrt(-b)
    elif model.model_kind == "lorentz_spaceform":
        if b > 0:
            x[-1] = 1.0 / np.sqrt(b)
        else:
            x[0] = 1.0 / np.sqrt(-b)
    return x


def rho_range(model):
    """A distance range staying inside every domain guard of the model."""
    b = model.curvature
    if model.signature == RIEMANNIAN and b > 0:
        return 0.1, 0.95 * np.pi / (2.0 * np.sqrt(b))
    if model.signature == LORENTZIAN and b < 0:
        return 0.1, 0.9 * np.pi / (2.0 * np.sqrt(-b))
    return 0.1, 2.5


def unit_timelike_future(model, x, rng, tilt=0.9):
    """Random future-directed unit timelike tangent vector at x."""
    t = model.time_orientation(x)
    that = t / np.sqrt(-model.flat_inner(t, t))
    w = model.tangent_project(x, rng.standard_normal(model.embedding_dim))
    w = w + model.flat_inner(w, that) * that  # remove timelike part
    nw = model.flat_inner(w, w)
    xi = tilt * rng.random()
    if nw < 1e-12:
        return that
    w = w / np.sqrt(nw)
    return (that + xi * w) / np.sqrt(1.0 - xi * xi)


def unit_radial(model, o, rng):
    """Random initial velocity for a radial geodesic from o."""
    if model.signature == LORENTZIAN:
        return unit_timelike_future(model, o, rng)
    v = model.tangent_project(o, rng.standard_normal(model.embedding_dim))
    return v / np.sqrt(model.flat_inner(v, v))


def random_point_at(model, o, rho, rng):
    """Point at distance rho from o along a random radial geodesic."""
    return geodesic_point(model, o, unit_radial(model, o, rng), rho)


def random_tangent(model, x, rng, spacelike=False):
    """Random tangent vector at x; optionally forced spacelike (Lorentzian)."""
    v = model.tangent_project(x, rng.standard_normal(model.embedding_dim))
    if spacelike and model.signature == LORENTZIAN:
        t = model.time_orientation(x)
        that = t / np.sqrt(-model.flat_inner(t, t))
        v = v + model.flat_inner(v, that) * that
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)
