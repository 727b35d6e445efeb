import numpy as np
import pytest

from wulffkit import (Disk2D, HalfSpace, Polygon2D, PolyhedralCone, Slab,
                      domain_from_dict, octant, quarter_plane, unit_square)
from wulffkit.domains import half_plane_cone, wall_closure
from wulffkit.errors import NotOnBoundary


def test_half_space_membership():
    hs = HalfSpace([0.0, 1.0])
    assert hs.contains(np.array([[0.3, 0.5], [0.3, -0.5]])).tolist() == [True, False]
    assert np.allclose(hs.inner_normal([1.0, 0.0]), [0.0, 1.0])


def test_slab_membership_and_walls():
    sl = Slab(1.0)
    assert sl.contains(np.array([[5.0, 0.5]]))[0]
    assert not sl.contains(np.array([[0.0, 1.5]]))[0]
    assert np.allclose(sl.inner_normal([0.0, 0.0]), [0.0, 1.0])
    assert np.allclose(sl.inner_normal([0.0, 1.0]), [0.0, -1.0])
    with pytest.raises(NotOnBoundary):
        sl.require_on_boundary([0.0, 0.5])


def test_cone_angular_interval():
    t0, t1 = quarter_plane().angular_interval()
    assert (t0, t1) == pytest.approx((0.0, np.pi / 2.0))
    t0, t1 = half_plane_cone([0.0, 1.0]).angular_interval()
    assert (t0, t1) == pytest.approx((0.0, np.pi))


def test_octant_contains():
    oc = octant()
    assert oc.contains(np.array([[0.1, 0.2, 0.3]]))[0]
    assert not oc.contains(np.array([[0.1, -0.2, 0.3]]))[0]


def test_polygon_validation():
    with pytest.raises(ValueError):
        Polygon2D([[0, 0], [0, 1], [1, 1], [1, 0]])   # clockwise
    with pytest.raises(ValueError):
        Polygon2D([[0, 0], [1, 0], [2, 0], [1, 1]])   # collinear run


def test_polygon_arclength_round_trip():
    sq = unit_square()
    assert sq.area() == pytest.approx(1.0)
    assert sq.perimeter == pytest.approx(4.0)
    for s in np.linspace(0.0, 4.0, 17, endpoint=False):
        p = sq.point_at(s)
        assert sq.arclength_of(p) == pytest.approx(s % 4.0, abs=1e-12)


def test_polygon_support_cone():
    sq = unit_square()
    cone = sq.support_cone(0)
    # at the origin corner the support cone is the first quadrant
    assert cone.contains(np.array([[0.5, 0.5]]))[0]
    assert not cone.contains(np.array([[-0.1, 0.5]]))[0]


def test_polygon_boundary_closure_walk():
    sq = unit_square()
    a = np.array([0.5, 0.0])
    b = np.array([0.0, 0.5])
    pieces = sq.boundary_closure(a, b)
    from wulffkit.surfaces import _closure_area_term
    walk = sum(_closure_area_term(p) for p in pieces)
    # a -> b counterclockwise along the boundary plus the chord b -> a
    chord = 0.5 * (b[0] * a[1] - b[1] * a[0])
    assert walk + chord == pytest.approx(1.0 - 0.125)


def test_disk_closure_and_curvature():
    dk = Disk2D()
    a = np.array([1.0, 0.0])
    b = np.array([0.0, 1.0])
    pieces = dk.boundary_closure(a, b)
    from wulffkit.surfaces import _closure_area_term
    walk = sum(_closure_area_term(p) for p in pieces)
    chord = 0.5 * (b[0] * a[1] - b[1] * a[0])
    # ccw arc a -> b plus the chord b -> a bounds the circular segment
    assert walk + chord == pytest.approx(np.pi / 4.0 - 0.5, abs=1e-12)
    assert dk.second_form(a, np.array([0.0, 1.0])) == pytest.approx(1.0)


def test_wall_closure_pieces():
    pieces = wall_closure([[0.0, 1.0], [-1.0, 1.0], [-1.0, 0.0], [0.0, 0.0]])
    assert all(p[0] == "segment" for p in pieces)
    assert len(pieces) == 3


def test_domain_from_dict():
    d = domain_from_dict({"kind": "polygon2d",
                          "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]})
    assert isinstance(d, Polygon2D)
    with pytest.raises(ValueError):
        domain_from_dict({"kind": "moebius"})
