import numpy as np
import pytest

from wulffkit import (Ball, Ellipsoid, Fourier2D, candidate_oracle,
                      comparison_report, concavity_report, cone_body_volume,
                      cone_profile, polygon_profile, structure_checks,
                      unit_square, wulff_cone_perimeter)
from wulffkit.domains import half_plane_cone, octant, quarter_plane
from wulffkit.errors import InsufficientSamples
from wulffkit.profiles import radial_function, reflected_body


def test_radial_function_ball_and_ellipse():
    th = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    assert np.allclose(radial_function(Ball(1.0, dim=2), th), 1.0, atol=1e-12)
    # ellipse x^2/4 + y^2 = 1 in polar form
    rho = radial_function(Ellipsoid(np.diag([4.0, 1.0])), th)
    want = 1.0 / np.sqrt(np.cos(th) ** 2 / 4.0 + np.sin(th) ** 2)
    assert np.max(np.abs(rho - want)) < 1e-10


def test_cone_body_volume_2d():
    out = cone_body_volume(Ball(1.0, dim=2), quarter_plane())
    assert out["value"] == pytest.approx(np.pi / 4.0, rel=1e-12)
    out = cone_body_volume(Ellipsoid(np.diag([4.0, 1.0])),
                           half_plane_cone([0.0, 1.0]))
    assert out["value"] == pytest.approx(np.pi, rel=1e-12)


def test_asymmetric_halves_sum_to_volume():
    body = Fourier2D(2.0, cos=[0.2, 0.3])
    up = cone_body_volume(body, half_plane_cone([1.0, 0.0]))["value"]
    dn = cone_body_volume(body, half_plane_cone([-1.0, 0.0]))["value"]
    assert up + dn == pytest.approx(body.volume(), rel=1e-10)
    assert up != pytest.approx(dn, rel=1e-3)


def test_cone_perimeter_identity_2d():
    for body in (Ball(1.0, dim=2), Ellipsoid(np.diag([4.0, 1.0])),
                 Fourier2D(2.0, cos=[0.2, 0.3])):
        for cone in (quarter_plane(), half_plane_cone([0.0, 1.0])):
            per = wulff_cone_perimeter(body, cone)
            vol = cone_body_volume(body, cone)["value"]
            assert per == pytest.approx(2.0 * vol, rel=1e-9)


def test_cone_profile_square_root_law():
    vs = np.array([0.1, 0.5, 1.0])
    prof = cone_profile(Ball(1.0, dim=2), quarter_plane(), vs)
    assert np.max(np.abs(prof - np.sqrt(np.pi * vs))) < 1e-12


def test_mc_octant_volume():
    out = cone_body_volume(Ball(1.0, dim=3), octant(), samples=200_000,
                           seed=5)
    assert out["method"] == "mc"
    assert abs(out["value"] - np.pi / 6.0) < 3.0 * out["sigma"]


def test_reflected_body():
    body = Fourier2D(2.0, cos=[0.2, 0.3])
    refl = reflected_body(body)
    w = np.array([[0.6, 0.8], [-1.0, 0.0]])
    assert np.allclose(refl.support(w), body.support(-w))
    sym = Ball(1.0, dim=2)
    assert reflected_body(sym) is sym


def test_candidate_oracle_square_ball():
    body = Ball(1.0, dim=2)
    sq = unit_square()
    v, cand = candidate_oracle(body, sq, 0.1)
    assert cand.kind == "corner_wulff_arc"
    assert v == pytest.approx(np.sqrt(np.pi * 0.1), rel=1e-5)
    v, cand = candidate_oracle(body, sq, 0.5)
    assert cand.kind == "chord"
    assert v == pytest.approx(1.0, rel=1e-9)
    # large volumes go through the complement
    v, cand = candidate_oracle(body, sq, 0.9)
    assert cand.kind.startswith("complement:")
    assert v == pytest.approx(np.sqrt(np.pi * 0.1), rel=1e-5)


def test_concavity_needs_uniform_grid():
    body = Ball(1.0, dim=2)
    prof = polygon_profile(body, unit_square(), [0.1, 0.2, 0.25, 0.4, 0.5])
    with pytest.raises(InsufficientSamples):
        concavity_report(prof)


def test_reports_on_coarse_square_profile():
    body = Ball(1.0, dim=2)
    sq = unit_square()
    vols = [i / 10 for i in range(1, 10)]
    prof = polygon_profile(body, sq, vols)
    assert concavity_report(prof)["pass"]
    assert comparison_report(prof, body, sq)["pass"]
    st = structure_checks(prof)
    assert st["subadditive"]
    assert st["symmetric"]
