"""Pinned geometric scenes used by the test battery and the CLI suite."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from . import bodies as bd
from . import domains as dm
from . import surfaces as sf
from .surfaces import ParamField
from .variation import Flow


def standard_bodies():
    """The five reference bodies exercised by the Wulff identity checks."""
    return [
        ("ball2", bd.Ball(1.0, dim=2)),
        ("ball3", bd.Ball(1.0, dim=3)),
        ("ellipsoid2", bd.Ellipsoid(np.diag([4.0, 1.0]))),
        ("ellipsoid3", bd.Ellipsoid(np.diag([4.0, 2.0, 1.0]))),
        ("fourier_sym", bd.Fourier2D(2.0, cos=[0.0, 0.3])),
        ("fourier_asym", bd.Fourier2D(2.0, cos=[0.2, 0.3])),
    ]


def _cos_field(freq: float = np.pi, phase: float = 0.0) -> ParamField:
    def val(s):
        return np.cos(freq * np.atleast_1d(np.asarray(s, float)) + phase)

    def der(s):
        return -freq * np.sin(freq * np.atleast_1d(np.asarray(s, float)) + phase)

    return ParamField(val, der)


def _poly_field(a: float, b: float, c: float) -> ParamField:
    def val(s):
        s = np.atleast_1d(np.asarray(s, float))
        return a + b * s + c * s * s

    def der(s):
        s = np.atleast_1d(np.asarray(s, float))
        return b + 2.0 * c * s

    return ParamField(val, der)


def _surface_cos_u_field() -> ParamField:
    """Height function z = cos(u) on spherical parametrizations."""
    def val(u, v):
        return np.cos(np.atleast_1d(np.asarray(u, float)))

    def d1(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        return np.stack([-np.sin(u), np.zeros_like(u)], axis=-1)

    return ParamField(val, d1)


def _radial_bump_field(r0: float, r1: float) -> ParamField:
    """Bump in the radial surface coordinate, zero outside (r0, r1)."""
    c = 0.5 * (r0 + r1)
    w = 0.5 * (r1 - r0)
    base = sf.bump_field(c, w)

    def val(u, v):
        return base(u)

    def d1(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        return np.stack([np.atleast_1d(base.d1(u)), np.zeros_like(u)], axis=-1)

    return ParamField(val, d1)


def ellipse_curve(a: float = 2.0, b: float = 1.0) -> sf.Curve2D:
    def pt(s):
        s = np.atleast_1d(np.asarray(s, float))
        return np.stack([a * np.cos(s), b * np.sin(s)], axis=-1)

    def vel(s):
        s = np.atleast_1d(np.asarray(s, float))
        return np.stack([-a * np.sin(s), b * np.cos(s)], axis=-1)

    def acc(s):
        s = np.atleast_1d(np.asarray(s, float))
        return np.stack([-a * np.cos(s), -b * np.sin(s)], axis=-1)

    return sf.Curve2D(pt, vel, acc, closed=True, name=f"ellipse({a},{b})")


def variation_scenes():
    """Twelve pinned flows for the first/second variation battery."""
    ball2 = bd.Ball(1.0, dim=2)
    ball3 = bd.Ball(1.0, dim=3)
    ell2 = bd.Ellipsoid(np.diag([4.0, 1.0]))
    ell3 = bd.Ellipsoid(np.diag([4.0, 2.0, 1.0]))
    fsym = bd.Fourier2D(2.0, cos=[0.0, 0.3])
    fasym = bd.Fourier2D(2.0, cos=[0.2, 0.3])
    circle = sf.circle(1.0)
    bump = sf.bump_field(np.pi, 2.0)
    seg_bump = sf.bump_field(0.5, 0.45)
    scenes = [
        ("circle_ball_const", Flow(circle, ball2, sf.constant_field(1.0))),
        ("circle_ball_mode2", Flow(circle, ball2, sf.fourier_mode_field(2))),
        ("circle_ellipse_bump", Flow(circle, ell2, bump)),
        ("ellipse_ball_const", Flow(ellipse_curve(), ball2,
                                    sf.constant_field(1.0))),
        ("wulff_fsym_const", Flow(sf.wulff_sample(fsym, 64), fsym,
                                  sf.constant_field(1.0))),
        ("wulff_fasym_mode1", Flow(sf.wulff_sample(fasym, 64), fasym,
                                   sf.fourier_mode_field(1))),
        ("circle_fasym_bump", Flow(circle, fasym, bump)),
        ("sphere_ball_const", Flow(sf.sphere(1.0), ball3,
                                   sf.constant_field(1.0))),
        ("sphere_ell3_height", Flow(sf.sphere(1.0), ell3,
                                    _surface_cos_u_field())),
        ("segment_ellipse_bump", Flow(sf.segment([0.0, 0.0], [0.0, 1.0]),
                                      ell2, seg_bump,
                                      domain=dm.Slab(1.0))),
        ("segment_fourier_bump", Flow(sf.segment([0.0, 0.0], [0.0, 1.0]),
                                      fsym, seg_bump,
                                      domain=dm.Slab(1.0))),
        ("flatdisk_ball3_bump", Flow(sf.flat_disk(1.0), ball3,
                                     _radial_bump_field(0.15, 0.85))),
    ]
    return scenes


def wulff_arc_in_disk(body: bd.ConvexBody, lam: float = 0.5):
    """Wulff arc meeting the unit circle with zero anisotropic contact.

    For a body symmetric about the x-axis the arc center sits at (d, 0);
    the endpoint normal angle and d are solved so the endpoint lies on the
    circle and N_K is tangent to it there.
    """
    def center_offset(psi):
        p = body.k_projection(np.array([[np.cos(psi), np.sin(psi)]]))[0]
        # contact: <N_K, p_end> = 0 with p_end = (d, 0) + lam * p
        return -lam * float(p @ p) / p[0]

    def endpoint_radius(psi):
        p = body.k_projection(np.array([[np.cos(psi), np.sin(psi)]]))[0]
        d = center_offset(psi)
        q = np.array([d, 0.0]) + lam * p
        return float(np.linalg.norm(q)) - 1.0

    psi_e = brentq(endpoint_radius, np.pi / 2.0 + 1e-6, np.pi - 1e-6,
                   xtol=1e-14)
    d = center_offset(psi_e)
    arc = sf.wulff_arc(body, (psi_e, 2.0 * np.pi - psi_e), scale=lam,
                       translate=(d, 0.0), panels=48)
    return arc, {"center_offset": d, "endpoint_angle": psi_e, "lam": lam}


def stationary_scenes():
    """Four stationary free-boundary scenes with three test fields each."""
    ell2 = bd.Ellipsoid(np.diag([4.0, 1.0]))
    fsym = bd.Fourier2D(2.0, cos=[0.0, 0.3])
    ball2 = bd.Ball(1.0, dim=2)
    scenes = []

    slab = dm.Slab(1.0)
    seg = sf.segment([0.0, 0.0], [0.0, 1.0], panels=48)

    def slab_closure(curve):
        a = curve.point(np.array([curve.domain[1]]))[0]
        b = curve.point(np.array([curve.domain[0]]))[0]
        return dm.wall_closure([a, [-2.0, a[1]], [-2.0, b[1]], b])

    scenes.append(("segment_slab_ellipse", seg, ell2, slab, "straight_line",
                   slab_closure,
                   [sf.constant_field(1.0), _cos_field(np.pi),
                    _poly_field(0.3, 0.0, 1.0)]))

    quarter = dm.quarter_plane()
    qarc = sf.wulff_arc(fsym, (0.0, np.pi / 2.0), panels=48)

    def corner_closure(curve):
        a = curve.point(np.array([curve.domain[1]]))[0]
        b = curve.point(np.array([curve.domain[0]]))[0]
        return dm.wall_closure([a, [0.0, 0.0], b])

    scenes.append(("quarter_wulff_corner", qarc, fsym, quarter,
                   "straight_line", corner_closure,
                   [sf.constant_field(1.0), _cos_field(2.0),
                    _poly_field(0.5, 0.4, 0.0)]))

    disk = dm.Disk2D()
    chord = sf.segment([0.0, -1.0], [0.0, 1.0], panels=48)
    scenes.append(("diameter_chord_disk", chord, ball2, disk,
                   "boundary_straightened", None,
                   [sf.constant_field(1.0), _cos_field(np.pi),
                    _poly_field(0.3, 0.0, 1.0)]))

    darc, _ = wulff_arc_in_disk(ell2, lam=0.5)
    scenes.append(("wulff_arc_disk", darc, ell2, disk,
                   "boundary_straightened", None,
                   [sf.constant_field(1.0), _cos_field(1.0),
                    _poly_field(0.4, 0.1, 0.0)]))
    return scenes


def random_convex_hexagon(seed: int = 2024) -> dm.Polygon2D:
    """Strictly convex hexagon from jittered angles on a circle."""
    rng = np.random.default_rng(seed)
    for _ in range(100):
        ang = np.sort(rng.uniform(0.0, 2.0 * np.pi, 6))
        if np.min(np.diff(np.concatenate([ang, [ang[0] + 2.0 * np.pi]]))) < 0.35:
            continue
        rad = rng.uniform(0.8, 1.3, 6)
        pts = rad[:, None] * np.stack([np.cos(ang), np.sin(ang)], axis=-1)
        try:
            return dm.Polygon2D(pts)
        except ValueError:
            continue
    raise RuntimeError("failed to sample a strictly convex hexagon")
