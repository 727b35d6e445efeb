"""Constrained refinement of profile candidates by a free boundary curve.

The curve is a chord between two sliding boundary points plus sine-mode
normal deviations; anisotropic length is minimized under an enclosed-area
constraint with an augmented Lagrangian and BFGS inner solves.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.optimize import brentq, minimize

from .bodies import ConvexBody
from .domains import Polygon2D
from .errors import OptimizerDiverged
from .quadrature import gauss_panels
from .surfaces import _closure_area_term

N_MODES = 6
N_STARTS = 8


class _FreeCurve:
    """Chord from boundary point s_b to s_a with sine-mode normal bumps."""

    def __init__(self, poly: Polygon2D, body: ConvexBody):
        self.poly = poly
        self.body = body
        self.tau, self.w = gauss_panels(0.0, 1.0, 8)
        k = np.arange(1, N_MODES + 1)
        self.modes = np.sin(np.pi * np.outer(self.tau, k))
        self.dmodes = np.pi * k[None, :] * np.cos(np.pi * np.outer(self.tau, k))

    def unpack(self, x):
        return x[0], x[1], x[2:]

    def geometry(self, x):
        sa, sb, c = self.unpack(x)
        pa = self.poly.point_at(sa)
        pb = self.poly.point_at(sb)
        chord = pa - pb
        ln = np.linalg.norm(chord)
        if ln < 1e-12:
            return None
        t = chord / ln
        nhat = np.array([t[1], -t[0]])   # outward for the swept region
        dev = self.modes @ c
        ddev = self.dmodes @ c
        pts = pb[None, :] + self.tau[:, None] * chord + dev[:, None] * nhat
        vel = chord[None, :] + ddev[:, None] * nhat
        return pa, pb, pts, vel, nhat

    def length(self, x):
        geo = self.geometry(x)
        if geo is None:
            return np.inf
        _, _, _, vel, _ = geo
        speed = np.linalg.norm(vel, axis=-1)
        normals = np.stack([vel[:, 1], -vel[:, 0]], axis=-1) / speed[:, None]
        return float(np.sum(self.w * self.body.support(normals) * speed))

    def area(self, x):
        sa, sb, _ = self.unpack(x)
        geo = self.geometry(x)
        if geo is None:
            return 0.0
        pa, pb, pts, vel, _ = geo
        walk = self.poly.boundary_closure(pa, pb)
        area = sum(_closure_area_term(p) for p in walk)
        area += 0.5 * float(np.sum(
            self.w * (pts[:, 0] * vel[:, 1] - pts[:, 1] * vel[:, 0])))
        return area

    def violation(self, x):
        geo = self.geometry(x)
        if geo is None:
            return np.inf
        _, _, pts, _, _ = geo
        d = np.min(np.einsum("ikj,kj->ik",
                             pts[:, None, :] - self.poly.vertices[None, :, :],
                             self.poly.edge_normals), axis=1)
        return float(np.sum(np.minimum(d, 0.0) ** 2))


def _chord_start(curve: _FreeCurve, v: float, sa: float):
    P = curve.poly.perimeter

    def f(sb):
        return curve.area(np.concatenate([[sa, sb], np.zeros(N_MODES)])) - v

    lo, hi = sa + 1e-6, sa + P - 1e-6
    if f(lo) > 0.0 or f(hi) < 0.0:
        return None
    sb = brentq(f, lo, hi, xtol=1e-10)
    return np.concatenate([[sa, sb], np.zeros(N_MODES)])


def optimize_profile_point(body: ConvexBody, poly: Polygon2D, v: float,
                           seed: int = 0, init=None):
    """Best refined curve at one volume; returns (value, descriptor)."""
    rng = np.random.default_rng([seed, int(v * 1e9) & 0xFFFFFFFF])
    curve = _FreeCurve(poly, body)
    P = poly.perimeter
    starts = []
    if init is not None and init.kind == "chord":
        x = _chord_start(curve, v, float(init.params["s_a"]))
        if x is not None:
            starts.append(x)
    if init is not None and init.kind.endswith("wulff_arc"):
        x = _arc_start(curve, body, poly, init)
        if x is not None:
            starts.append(x)
    while len(starts) < N_STARTS:
        x = _chord_start(curve, v, float(rng.uniform(0.0, P)))
        if x is not None:
            x = x + np.concatenate([[0.0, 0.0],
                                    0.01 * rng.normal(size=N_MODES)])
            starts.append(x)
    best_val, best_x, best_res = np.inf, None, np.inf
    for x0 in starts:
        x, g = _aug_lagrangian(curve, v, x0)
        if x is None:
            continue
        val = curve.length(x)
        if abs(g) < 1e-8 and curve.violation(x) < 1e-12 and val < best_val:
            best_val, best_x, best_res = val, x, abs(g)
    if best_x is None:
        raise OptimizerDiverged(f"no start converged at volume {v}")
    sa, sb, c = curve.unpack(best_x)
    return best_val, {"kind": "optimizer_curve",
                      "s_a": float(np.mod(sa, P)), "s_b": float(np.mod(sb, P)),
                      "modes": [float(x) for x in c],
                      "constraint_residual": float(best_res)}


def _arc_start(curve: _FreeCurve, body, poly: Polygon2D, init):
    """Seed the curve parameters from a Wulff-arc candidate's geometry."""
    from .profiles import arc_free_points
    if "vertex" in init.params:
        p0 = poly.vertices[int(init.params["vertex"])]
    else:
        i = int(init.params["edge"])
        a = poly.vertices[i]
        b = poly.vertices[(i + 1) % len(poly.vertices)]
        p0 = a + float(init.params["offset"]) * (b - a)
    pts = arc_free_points(body, poly, p0, float(init.params["lam"]))
    # arc runs with increasing normal angle; the swept-region convention
    # traverses the free curve from s_b back to s_a, i.e. pts[0] is p_b
    sb = poly.arclength_of(pts[0])
    sa = poly.arclength_of(pts[-1])
    if sb <= sa:
        sb += poly.perimeter
    pa, pb = pts[-1], pts[0]
    chord = pa - pb
    ln = np.linalg.norm(chord)
    if ln < 1e-9:
        return None
    t = chord / ln
    nhat = np.array([t[1], -t[0]])
    rel = pts - pb
    tau = rel @ t / ln
    dev = rel @ nhat
    k = np.arange(1, N_MODES + 1)
    M = np.sin(np.pi * np.outer(tau, k))
    c, *_ = np.linalg.lstsq(M, dev, rcond=None)
    return np.concatenate([[sa, sb], c])


def _aug_lagrangian(curve: _FreeCurve, v: float, x0):
    mu, rho = 0.0, 1000.0
    x = np.asarray(x0, dtype=float)
    for _ in range(6):
        def obj(z):
            g = curve.area(z) - v
            return (curve.length(z) + mu * g + 0.5 * rho * g * g
                    + 1e4 * curve.violation(z))

        # infeasible geometries return inf; scipy's numdiff warns on those
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            res = minimize(obj, x, method="BFGS",
                           options={"maxiter": 200, "gtol": 1e-9})
        x = res.x
        g = curve.area(x) - v
        if abs(g) < 1e-10:
            return x, g
        mu += rho * g
        rho *= 10.0
    g = curve.area(x) - v
    return (x, g) if abs(g) < 1e-8 else (None, g)
