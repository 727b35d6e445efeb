import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wulffkit import (Ball, Ellipsoid, Fourier2D, InvalidBody, body_from_dict,
                      body_from_json, ellipticity_bounds)


def bodies():
    return [Ball(1.0, dim=2), Ball(0.7, dim=3),
            Ellipsoid(np.diag([4.0, 1.0])),
            Ellipsoid([[2.0, 0.3], [0.3, 1.0]]),
            Fourier2D(2.0, cos=[0.2, 0.3])]


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 10))
@settings(max_examples=50, deadline=None)
def test_support_positive_homogeneity(x, y, lam):
    w = np.array([x, y])
    if np.linalg.norm(w) < 1e-6:
        return
    for body in bodies():
        if body.dim != 2:
            continue
        h1 = float(body.support(lam * w))
        h2 = lam * float(body.support(w))
        assert abs(h1 - h2) <= 1e-10 * (1.0 + abs(h2))


def test_projection_attains_support():
    # h_K(w) = <pi_K(w), w> and pi_K(w) is in K
    rng = np.random.default_rng(3)
    for body in bodies():
        w = rng.normal(size=(64, body.dim))
        w /= np.linalg.norm(w, axis=-1, keepdims=True)
        p = body.k_projection(w)
        h = body.support(w)
        assert np.max(np.abs(np.einsum("ij,ij->i", p, w) - h)) < 1e-9
        assert body.contains(p * (1.0 - 1e-9)).all()


def test_tangent_map_requires_tangent_argument():
    from wulffkit.errors import NotOrthogonal
    body = Ball(1.0, dim=2)
    w = np.array([[1.0, 0.0]])
    with pytest.raises(NotOrthogonal):
        body.tangent_map(w, w)


def test_tangent_map_symmetric_on_tangents():
    rng = np.random.default_rng(4)
    for body in bodies():
        if body.dim != 2:
            continue
        w = rng.normal(size=(32, 2))
        w /= np.linalg.norm(w, axis=-1, keepdims=True)
        t = np.stack([-w[:, 1], w[:, 0]], axis=-1)
        q = np.einsum("ij,ij->i", body.tangent_map(w, t), t)
        assert np.all(q > 0.0)   # strict convexity


def test_volumes():
    assert Ball(1.0, dim=2).volume() == pytest.approx(np.pi)
    assert Ball(1.0, dim=3).volume() == pytest.approx(4 * np.pi / 3)
    # ellipsoid {x: x^T A^{-1} x <= 1} scaled from the ball by sqrt-eigenvalues
    assert Ellipsoid(np.diag([4.0, 1.0])).volume() == pytest.approx(2 * np.pi)


def test_ellipticity_bounds_bracket_q():
    body = Ellipsoid(np.diag([4.0, 1.0]))
    eb = ellipticity_bounds(body)
    rng = np.random.default_rng(5)
    w = rng.normal(size=(128, 2))
    w /= np.linalg.norm(w, axis=-1, keepdims=True)
    t = np.stack([-w[:, 1], w[:, 0]], axis=-1)
    q = np.einsum("ij,ij->i", body.tangent_map(w, t), t)
    assert np.all(q >= eb.a - 1e-9)
    assert np.all(q <= eb.b + 1e-9)


def test_fourier_convexity_margin_rejected():
    with pytest.raises(InvalidBody):
        Fourier2D(1.0, cos=[0.0, 0.4])   # h + h'' dips negative


def test_invalid_inputs():
    with pytest.raises(InvalidBody):
        Ball(-1.0, dim=2)
    with pytest.raises(InvalidBody):
        Ellipsoid([[1.0, 2.0], [2.0, 1.0]])   # not positive definite


def test_json_round_trip_bit_faithful():
    for body in bodies():
        d = body.to_dict()
        clone = body_from_dict(json.loads(json.dumps(d)))
        assert clone.to_dict() == d
        w = np.array([[0.6, -0.8]] if body.dim == 2 else [[0.6, 0.0, -0.8]])
        assert float(clone.support(w)[0]) == float(body.support(w)[0])


def test_body_from_json_rejects_unknown_kind():
    with pytest.raises(InvalidBody):
        body_from_json('{"dim": 2, "kind": "cube", "side": 1.0}')
