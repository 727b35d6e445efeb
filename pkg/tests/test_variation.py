import numpy as np
import pytest

from wulffkit import (Ball, Ellipsoid, Flow, Fourier2D, ModeUnsupported,
                      NotStationary, ZeroVolumeVelocity,
                      area_plus_volume_second, bump_field, circle,
                      constant_field, first_variation, fourier_mode_field,
                      index_form, profile_slope_curvature, second_variation,
                      segment, sphere, stationarity_residual,
                      volume_preserving_field, wulff_sample)
from wulffkit.domains import Disk2D, Slab
from wulffkit.variation import deformed, functionals


def test_dilation_flow_trivial():
    # unit circle flowing along N_K with Ball(1) is the concentric dilation
    flow = Flow(circle(1.0), Ball(1.0, dim=2), constant_field(1.0))
    for t in (0.0, 0.1, 0.3):
        f = functionals(flow, t)
        assert f["area"] == pytest.approx(2 * np.pi * (1 + t), rel=1e-12)
        assert f["volume"] == pytest.approx(np.pi * (1 + t) ** 2, rel=1e-12)


def test_wulff_dilation_identity():
    body = Fourier2D(2.0, cos=[0.0, 0.3])
    flow = Flow(wulff_sample(body, 64), body, constant_field(1.0))
    V = body.volume()
    f = functionals(flow, 0.2)
    assert f["area"] == pytest.approx(1.2 * 2 * V, rel=1e-10)
    assert f["volume"] == pytest.approx(1.2**2 * V, rel=1e-10)


def test_supported_omega_leaves_functionals_at_zero():
    flow = Flow(circle(1.0), Ball(1.0, dim=2), bump_field(np.pi, 1.0))
    f0 = functionals(flow, 0.0)
    assert f0["area"] == pytest.approx(2 * np.pi, rel=1e-12)
    assert f0["volume"] == pytest.approx(np.pi, rel=1e-12)


def test_first_variation_closed_forms():
    body = Ball(1.0, dim=2)
    rep = first_variation(Flow(circle(1.0), body, constant_field(1.0)))
    assert rep.a_prime_analytic == pytest.approx(2 * np.pi, rel=1e-12)
    assert rep.v_prime_analytic == pytest.approx(2 * np.pi, rel=1e-12)
    assert rep.a_prime_fd == pytest.approx(rep.a_prime_analytic, rel=1e-8)
    # odd mode integrates to zero on the circle
    rep = first_variation(Flow(circle(1.0), body, fourier_mode_field(1)))
    assert abs(rep.a_prime_analytic) < 1e-12
    assert abs(rep.v_prime_analytic) < 1e-12
    assert abs(rep.v_prime_fd) < 1e-6


def test_minimal_segment_first_variation_vanishes():
    flow = Flow(segment([0.0, 0.0], [0.0, 1.0]), Ball(1.0, dim=2),
                bump_field(0.5, 0.45))
    rep = first_variation(flow)
    assert abs(rep.a_prime_analytic) < 1e-12
    assert abs(rep.a_prime_fd) < 1e-8


def test_second_variation_circle_mode():
    # straight-line A'' for omega = cos(2 theta) on the unit circle
    rep = second_variation(Flow(circle(1.0), Ball(1.0, dim=2),
                                fourier_mode_field(2)))
    assert rep.a_second_analytic == pytest.approx(4 * np.pi, rel=1e-10)
    assert rep.a_second_fd == pytest.approx(rep.a_second_analytic, rel=1e-6)


def test_second_variation_rejects_chart_mode():
    flow = Flow(segment([0.0, -1.0], [0.0, 1.0]), Ball(1.0, dim=2),
                constant_field(1.0), mode="boundary_straightened",
                domain=Disk2D())
    with pytest.raises(ModeUnsupported):
        second_variation(flow)


def test_stationarity_gate():
    body = Ball(1.0, dim=2)
    res = stationarity_residual(segment([0.0, -1.0], [0.0, 1.0]), body,
                                Disk2D())
    assert res["mean_curvature_dev"] < 1e-12
    assert res["contact_dev"] < 1e-12
    # a circle is not stationary for an anisotropic body
    with pytest.raises(NotStationary):
        index_form(circle(0.5), Ellipsoid(np.diag([4.0, 1.0])), Disk2D(),
                   constant_field(1.0))


def test_index_form_diameter_chord():
    """The diameter chord with the ball has I_K(1) = -2: no interior term,
    two endpoint contributions of the wall curvature."""
    chord = segment([0.0, -1.0], [0.0, 1.0], panels=48)
    ik = index_form(chord, Ball(1.0, dim=2), Disk2D(), constant_field(1.0))
    assert ik == pytest.approx(-2.0, abs=1e-10)


def test_area_plus_volume_second_matches_index_form():
    body = Ellipsoid(np.diag([4.0, 1.0]))
    seg = segment([0.0, 0.0], [0.0, 1.0], panels=48)
    om = bump_field(0.5, 0.45)

    def closure(curve):
        a = curve.point(np.array([curve.domain[1]]))[0]
        b = curve.point(np.array([curve.domain[0]]))[0]
        from wulffkit.domains import wall_closure
        return wall_closure([a, [-2.0, a[1]], [-2.0, b[1]], b])

    ik = index_form(seg, body, Slab(1.0), om)
    flow = Flow(seg, body, om, domain=Slab(1.0), closure_fn=closure)
    fd = area_plus_volume_second(flow)
    assert fd["value"] == pytest.approx(ik, rel=1e-6, abs=1e-8)


def test_flow_independence_on_stationary_chord():
    # straight-line with interior-supported omega vs the straightened chart
    chord = segment([0.0, -1.0], [0.0, 1.0], panels=48)
    body = Ball(1.0, dim=2)
    om = bump_field(0.5, 0.4)
    ik = index_form(chord, body, Disk2D(), om)
    for mode in ("straight_line", "boundary_straightened"):
        flow = Flow(chord, body, om, mode=mode, domain=Disk2D())
        fd = area_plus_volume_second(flow)
        assert fd["value"] == pytest.approx(ik, rel=1e-3, abs=1e-6)


def test_profile_slope_curvature_segment():
    body = Ellipsoid(np.diag([4.0, 1.0]))
    seg = segment([0.0, 0.0], [0.0, 1.0], panels=48)
    flow = Flow(seg, body, bump_field(0.5, 0.45), domain=Slab(1.0))
    out = profile_slope_curvature(flow)
    # H_K = 0 on the minimal segment, so the profile slope vanishes
    assert out["f_prime"] == pytest.approx(0.0, abs=1e-10)
    assert out["f_prime_fd"] == pytest.approx(0.0, abs=1e-6)
    assert out["f_second_fd"] == pytest.approx(out["f_second"], rel=1e-3)


def test_profile_slope_rejects_volume_stationary_flow():
    flow = Flow(circle(1.0), Ball(1.0, dim=2), fourier_mode_field(2))
    with pytest.raises(ZeroVolumeVelocity):
        profile_slope_curvature(flow)


def test_volume_preserving_field_flux():
    rng = np.random.default_rng(12)
    for body, surf in ((Fourier2D(2.0, cos=[0.2, 0.3]), None),
                       (Ball(1.0, dim=3), sphere(1.0))):
        if surf is None:
            surf = wulff_sample(body, 64)
        om = volume_preserving_field(surf, body, rng)
        rep = first_variation(Flow(surf, body, om))
        assert abs(rep.v_prime_analytic) < 1e-10


def test_deformed_keeps_initial_velocity():
    flow = Flow(circle(1.0), Ball(1.0, dim=2), fourier_mode_field(2))
    h = 1e-6
    s = np.linspace(0.0, 2 * np.pi, 32, endpoint=False)
    p0 = deformed(flow, 0.0).point(s)
    p1 = deformed(flow, h).point(s)
    vel = (p1 - p0) / h
    want = np.cos(2 * s)[:, None] * p0
    assert np.max(np.abs(vel - want)) < 1e-5
