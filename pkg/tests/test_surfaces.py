import numpy as np
import pytest

from wulffkit import (Ball, Ellipsoid, Fourier2D, NotClosed, anisotropic_area,
                      boundary_frame, circle, enclosed_volume, flat_disk,
                      frame_at, frames, from_control_points, segment, sphere,
                      trace_gap, wulff_sample)
from wulffkit.domains import Slab
from wulffkit.surfaces import Curve2D, euclidean_area


def test_circle_frames():
    c = circle(2.0)
    body = Ball(1.0, dim=2)
    fb = frames(c, body)
    assert np.allclose(np.linalg.norm(fb.normals, axis=-1), 1.0)
    assert np.allclose(fb.HK, -0.5, atol=1e-12)
    assert np.allclose(fb.phi, 1.0)
    # normals point outward
    assert np.all(np.einsum("ij,ij->i", fb.normals, fb.points) > 0.0)


def test_anisotropic_normal_identities():
    body = Fourier2D(2.0, cos=[0.2, 0.3])
    c = circle(1.0)
    fb = frames(c, body)
    # <N_K, N> = h_K(N)
    assert np.max(np.abs(np.einsum("ij,ij->i", fb.NK, fb.normals)
                         - fb.phi)) < 1e-10
    # anisotropic conormal is orthogonal to the anisotropic normal
    bf = boundary_frame(segment([0.0, 0.0], [0.0, 1.0]), body, Slab(1.0),
                        "start")
    fr = frame_at(segment([0.0, 0.0], [0.0, 1.0]), body, 0.0)
    assert abs(np.dot(bf.nu_K, fr.N_K)) < 1e-10


def test_trace_gap_nonnegative_and_zero_on_wulff():
    for body in (Ball(1.0, dim=2), Ellipsoid(np.diag([4.0, 1.0])),
                 Fourier2D(2.0, cos=[0.2, 0.3])):
        surf = wulff_sample(body, 64)
        fb = frames(surf, body)
        assert np.min(fb.trace_gap) >= -1e-10
        assert np.max(np.abs(fb.trace_gap)) < 1e-8
    c = circle(0.5)
    body = Ellipsoid(np.diag([4.0, 1.0]))
    fb = frames(c, body)
    assert np.min(fb.trace_gap) >= -1e-10


def test_trace_gap_zero_on_flat_pieces():
    body = Fourier2D(2.0, cos=[0.2, 0.3])
    assert abs(trace_gap(segment([0.0, 0.0], [1.0, 1.0]), body, 0.3)) < 1e-12


def test_areas_and_volumes():
    assert anisotropic_area(circle(2.0), Ball(1.0, dim=2)) == pytest.approx(
        4 * np.pi, rel=1e-12)
    assert euclidean_area(sphere(1.0)) == pytest.approx(4 * np.pi, rel=1e-10)
    assert enclosed_volume(circle(1.5)) == pytest.approx(np.pi * 2.25,
                                                         rel=1e-12)
    assert enclosed_volume(sphere(1.0)) == pytest.approx(4 * np.pi / 3,
                                                         rel=1e-10)


def test_scaling_laws():
    body = Fourier2D(2.0, cos=[0.2, 0.3])
    lam = 1.7
    a1 = anisotropic_area(circle(1.0), body)
    a2 = anisotropic_area(circle(lam), body)
    assert abs(a2 - lam * a1) < 1e-10 * a1
    v1 = enclosed_volume(sphere(1.0))
    v2 = enclosed_volume(sphere(lam))
    assert abs(v2 - lam**3 * v1) < 1e-10 * v2


def test_open_curve_needs_closure():
    seg = segment([0.0, 0.0], [0.0, 1.0])
    with pytest.raises(NotClosed):
        enclosed_volume(seg)
    area = enclosed_volume(seg, closure=[("segment", (0.0, 1.0), (-1.0, 1.0)),
                                         ("segment", (-1.0, 1.0), (-1.0, 0.0)),
                                         ("segment", (-1.0, 0.0), (0.0, 0.0))])
    assert area == pytest.approx(1.0, abs=1e-12)


def test_quadrature_convergence_order():
    """Doubling panels on a closed analytic curve should converge fast."""
    body = Fourier2D(2.0, cos=[0.2, 0.3])

    def area_with(panels):
        c = circle(1.0, panels=panels)
        return anisotropic_area(c, body)

    e1 = abs(area_with(2) - area_with(64))
    e2 = abs(area_with(4) - area_with(64))
    assert e2 < e1 / 16.0 or e2 < 1e-13


def test_wulff_sample_resolution_2d3d():
    b2 = Fourier2D(2.0, cos=[0.2, 0.3])
    s2 = wulff_sample(b2, 48)
    assert np.max(np.abs(frames(s2, b2).HK + 1.0)) < 1e-8
    b3 = Ellipsoid(np.diag([4.0, 2.0, 1.0]))
    s3 = wulff_sample(b3, 32)
    assert np.max(np.abs(frames(s3, b3).HK + 1.0)) < 1e-8


def test_flat_disk_is_flat():
    fb = frames(flat_disk(1.0), Ball(1.0, dim=3))
    assert np.max(np.abs(fb.HK)) < 1e-10
    assert np.max(np.abs(fb.trace_gap)) < 1e-10


def test_from_control_points_round_trip():
    th = np.linspace(0.0, 2 * np.pi, 40, endpoint=False)
    pts = np.stack([2 * np.cos(th), np.sin(th)], axis=-1)
    c = from_control_points(pts)
    assert isinstance(c, Curve2D)
    # spline area close to the ellipse area
    assert enclosed_volume(c) == pytest.approx(2 * np.pi, rel=1e-5)
