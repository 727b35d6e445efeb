"""Parametric curves and surface patches with anisotropic frame calculus.

Curves live in the plane, patches in space; both carry exact (or high-order
finite-difference) parameter derivatives and a composite Gauss-Legendre
quadrature.  Frames bundle the Euclidean normal and shape operator with
their anisotropic counterparts obtained by composing with the body's
boundary projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bodies import ConvexBody
from .errors import DegenerateMetric, NotClosed
from .quadrature import gauss_panels, gauss_rectangle

IMMERSION_TOL = 1e-8

# 6th-order central difference stencils
_D1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_D2 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0
_OFF = np.arange(-3, 4)


def _fd_apply(fn, x, h, stencil):
    acc = None
    for k, c in zip(_OFF, stencil):
        if c == 0.0:
            continue
        term = c * np.asarray(fn(x + k * h))
        acc = term if acc is None else acc + term
    return acc


def rot90(p):
    """Rotate plane vectors by +90 degrees."""
    p = np.asarray(p, dtype=float)
    return np.stack([-p[..., 1], p[..., 0]], axis=-1)


# ---------------------------------------------------------------------------
# curve and surface containers


class Curve2D:
    """Plane curve s -> R^2 with analytic or FD parameter derivatives.

    orientation +1 picks the normal obtained by rotating the unit tangent
    clockwise, which is the outer normal of a counterclockwise closed curve.
    """

    ambient_dim = 2

    def __init__(self, point, velocity=None, accel=None, domain=(0.0, 2.0 * np.pi),
                 closed=True, orientation=1.0, panels=32, nodes=16, name=""):
        self.point = point
        self.domain = (float(domain[0]), float(domain[1]))
        self.closed = bool(closed)
        self.orientation = float(orientation)
        self.panels = panels
        self.nodes = nodes
        self.name = name
        span = self.domain[1] - self.domain[0]
        self._h = 5e-3 * span / (2.0 * np.pi)
        self.velocity = velocity if velocity is not None else self._fd_velocity
        self.accel = accel if accel is not None else self._fd_accel
        self._quad = None

    def _fd_velocity(self, s):
        return _fd_apply(self.point, np.asarray(s, dtype=float), self._h, _D1) / self._h

    def _fd_accel(self, s):
        return _fd_apply(self.point, np.asarray(s, dtype=float), self._h, _D2) / self._h**2

    def quad(self):
        if self._quad is None:
            self._quad = gauss_panels(*self.domain, self.panels, self.nodes)
        return self._quad

    def normal(self, s):
        v = self.velocity(np.asarray(s, dtype=float))
        speed = np.linalg.norm(v, axis=-1)
        t = v / speed[..., None]
        return -self.orientation * rot90(t)

    def closure_gap(self):
        a = self.point(np.array([self.domain[0]]))[0]
        b = self.point(np.array([self.domain[1]]))[0]
        return float(np.linalg.norm(a - b))


class Surface3D:
    """Parametric patch (u, v) -> R^3 on a rectangle.

    Derivative callables take flattened u, v arrays; missing ones are
    replaced by high-order central differences of the point map.
    """

    ambient_dim = 3

    def __init__(self, point, derivs=None, second_derivs=None,
                 domain_u=(0.0, np.pi), domain_v=(0.0, 2.0 * np.pi),
                 closed=True, orientation=1.0, upanels=8, vpanels=16,
                 nodes=16, name=""):
        self.point = point
        self.domain_u = (float(domain_u[0]), float(domain_u[1]))
        self.domain_v = (float(domain_v[0]), float(domain_v[1]))
        self.closed = bool(closed)
        self.orientation = float(orientation)
        self.upanels = upanels
        self.vpanels = vpanels
        self.nodes = nodes
        self.name = name
        self._hu = 5e-3 * (self.domain_u[1] - self.domain_u[0]) / np.pi
        self._hv = 5e-3 * (self.domain_v[1] - self.domain_v[0]) / (2.0 * np.pi)
        self._derivs = derivs
        self._second = second_derivs
        self._quad = None

    def derivs(self, u, v):
        """Return (f_u, f_v), each (m, 3)."""
        if self._derivs is not None:
            return self._derivs(u, v)
        fu = _fd_apply(lambda uu: self.point(uu, v), u, self._hu, _D1) / self._hu
        fv = _fd_apply(lambda vv: self.point(u, vv), v, self._hv, _D1) / self._hv
        return fu, fv

    def second_derivs(self, u, v):
        """Return (f_uu, f_uv, f_vv)."""
        if self._second is not None:
            return self._second(u, v)
        fuu = _fd_apply(lambda uu: self.point(uu, v), u, self._hu, _D2) / self._hu**2
        fvv = _fd_apply(lambda vv: self.point(u, vv), v, self._hv, _D2) / self._hv**2

        def dv_of(uu):
            return _fd_apply(lambda vv: self.point(uu, vv), v, self._hv, _D1) / self._hv

        fuv = _fd_apply(dv_of, u, self._hu, _D1) / self._hu
        return fuu, fuv, fvv

    def quad(self):
        if self._quad is None:
            self._quad = gauss_rectangle(self.domain_u, self.domain_v,
                                         self.upanels, self.vpanels, self.nodes)
        return self._quad

    def normal(self, u, v):
        fu, fv = self.derivs(u, v)
        cr = np.cross(fu, fv)
        nn = np.linalg.norm(cr, axis=-1)
        return self.orientation * cr / nn[..., None]


Hypersurface = Curve2D | Surface3D


# ---------------------------------------------------------------------------
# frames


@dataclass
class FrameBatch:
    """Euclidean and anisotropic frame data at a batch of parameters."""

    params: tuple
    points: np.ndarray
    normals: np.ndarray
    measure: np.ndarray          # |gamma'| or |f_u x f_v|
    basis: np.ndarray            # (m, n, d) orthonormal tangent frames
    B: np.ndarray                # (m, n, n) Euclidean shape operator
    NK: np.ndarray
    phi: np.ndarray
    Q: np.ndarray
    BK: np.ndarray
    HK: np.ndarray
    trace_gap: np.ndarray


@dataclass
class Frame:
    point: np.ndarray
    N: np.ndarray
    B: np.ndarray
    N_K: np.ndarray
    phi_K: float
    B_K: np.ndarray
    H_K: float
    trace_gap: float


def _curve_frames(curve: Curve2D, body: ConvexBody, s) -> FrameBatch:
    s = np.atleast_1d(np.asarray(s, dtype=float))
    p = curve.point(s)
    v = curve.velocity(s)
    a = curve.accel(s)
    speed = np.linalg.norm(v, axis=-1)
    if np.any(speed < IMMERSION_TOL):
        raise DegenerateMetric("curve velocity below immersion tolerance")
    t = v / speed[:, None]
    n = -curve.orientation * rot90(t)
    # d/ds of N, then B(T) = -dN/ds_arc
    va = np.einsum("ij,ij->i", v, a)
    dn_ds = -curve.orientation * (rot90(a) / speed[:, None]
                                  - rot90(v) * (va / speed**3)[:, None])
    bscal = -np.einsum("ij,ij->i", dn_ds, t) / speed
    basis = t[:, None, :]
    B = bscal[:, None, None]
    NK = body.k_projection(n)
    phi = body.support(n)
    qt = body.tangent_map(n, t)
    q = np.einsum("ij,ij->i", qt, t)
    Q = q[:, None, None]
    BK = Q * B
    HK = BK[:, 0, 0]
    gap = np.zeros_like(HK)
    return FrameBatch((s,), p, n, speed, basis, B, NK, phi, Q, BK, HK, gap)


def _surface_frames(surf: Surface3D, body: ConvexBody, u, v) -> FrameBatch:
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    p = surf.point(u, v)
    fu, fv = surf.derivs(u, v)
    cr = np.cross(fu, fv)
    area = np.linalg.norm(cr, axis=-1)
    if np.any(area < IMMERSION_TOL):
        raise DegenerateMetric("surface patch below immersion tolerance")
    n = surf.orientation * cr / area[:, None]
    fuu, fuv, fvv = surf.second_derivs(u, v)
    II = np.empty((u.size, 2, 2))
    II[:, 0, 0] = np.einsum("ij,ij->i", fuu, n)
    II[:, 0, 1] = II[:, 1, 0] = np.einsum("ij,ij->i", fuv, n)
    II[:, 1, 1] = np.einsum("ij,ij->i", fvv, n)
    # orthonormal frame e1 = fu/|fu|, e2 = Gram-Schmidt of fv
    E = np.einsum("ij,ij->i", fu, fu)
    F = np.einsum("ij,ij->i", fu, fv)
    G = np.einsum("ij,ij->i", fv, fv)
    se = np.sqrt(E)
    e1 = fu / se[:, None]
    w2 = fv - (F / E)[:, None] * fu
    r = np.linalg.norm(w2, axis=-1)
    e2 = w2 / r[:, None]
    # rows of M express e_i in the (fu, fv) coordinate basis
    M = np.zeros((u.size, 2, 2))
    M[:, 0, 0] = 1.0 / se
    M[:, 1, 0] = -F / (E * r)
    M[:, 1, 1] = 1.0 / r
    B = np.einsum("mik,mkl,mjl->mij", M, II, M)
    basis = np.stack([e1, e2], axis=1)
    NK = body.k_projection(n)
    phi = body.support(n)
    Q = np.empty((u.size, 2, 2))
    for j in range(2):
        qv = body.tangent_map(n, basis[:, j, :])
        for i in range(2):
            Q[:, i, j] = np.einsum("ij,ij->i", qv, basis[:, i, :])
    BK = np.einsum("mij,mjk->mik", Q, B)
    HK = 0.5 * np.einsum("mii->m", BK)
    tr2 = np.einsum("mij,mji->m", BK, BK)
    gap = tr2 - 2.0 * HK**2
    return FrameBatch((u, v), p, n, area, basis, B, NK, phi, Q, BK, HK, gap)


def frames(surface: Hypersurface, body: ConvexBody, params=None) -> FrameBatch:
    """Frame data at given parameters (defaults to the quadrature nodes)."""
    if isinstance(surface, Curve2D):
        if params is None:
            params = surface.quad()[0]
        return _curve_frames(surface, body, params)
    if params is None:
        uq, vq, _ = surface.quad()
    else:
        uq, vq = params
    return _surface_frames(surface, body, uq, vq)


def frame_at(surface: Hypersurface, body: ConvexBody, param) -> Frame:
    """Single-point frame; param is a scalar (curves) or (u, v) pair."""
    if isinstance(surface, Curve2D):
        fb = _curve_frames(surface, body, np.array([param], dtype=float))
    else:
        fb = _surface_frames(surface, body,
                             np.array([param[0]], dtype=float),
                             np.array([param[1]], dtype=float))
    return Frame(fb.points[0], fb.normals[0], fb.B[0], fb.NK[0],
                 float(fb.phi[0]), fb.BK[0], float(fb.HK[0]),
                 float(fb.trace_gap[0]))


def trace_gap(surface: Hypersurface, body: ConvexBody, param) -> float:
    return frame_at(surface, body, param).trace_gap


# ---------------------------------------------------------------------------
# integrals


def anisotropic_area(surface: Hypersurface, body: ConvexBody) -> float:
    """Integral of the support function of the normal over the surface."""
    if isinstance(surface, Curve2D):
        s, w = surface.quad()
        v = surface.velocity(s)
        speed = np.linalg.norm(v, axis=-1)
        n = -surface.orientation * rot90(v / speed[:, None])
        return float(np.sum(w * body.support(n) * speed))
    uq, vq, w = surface.quad()
    fu, fv = surface.derivs(uq, vq)
    cr = np.cross(fu, fv)
    area = np.linalg.norm(cr, axis=-1)
    n = surface.orientation * cr / area[:, None]
    return float(np.sum(w * body.support(n) * area))


def euclidean_area(surface: Hypersurface) -> float:
    if isinstance(surface, Curve2D):
        s, w = surface.quad()
        v = surface.velocity(s)
        return float(np.sum(w * np.linalg.norm(v, axis=-1)))
    uq, vq, w = surface.quad()
    fu, fv = surface.derivs(uq, vq)
    return float(np.sum(w * np.linalg.norm(np.cross(fu, fv), axis=-1)))


def _closure_area_term(piece) -> float:
    """Shoelace contribution of one closure piece traversed a -> b."""
    if piece[0] == "segment":
        _, a, b = piece
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        return 0.5 * float(a[0] * b[1] - a[1] * b[0])
    if piece[0] == "arc":
        _, c, R, p1, p2 = piece
        cx, cy = float(c[0]), float(c[1])
        term = R * (cx * (np.sin(p2) - np.sin(p1)) - cy * (np.cos(p2) - np.cos(p1)))
        return 0.5 * float(term + R * R * (p2 - p1))
    raise ValueError(f"unknown closure piece {piece[0]!r}")


def enclosed_volume(surface: Hypersurface, closure=None) -> float:
    """Signed volume from the divergence of the position field.

    For curves a closure path (list of segment/arc pieces continuing from
    the curve end back to its start) may be supplied; without one the curve
    must close up to tolerance.
    """
    if isinstance(surface, Curve2D):
        s, w = surface.quad()
        p = surface.point(s)
        v = surface.velocity(s)
        area = 0.5 * float(np.sum(w * (p[:, 0] * v[:, 1] - p[:, 1] * v[:, 0])))
        if closure:
            for piece in closure:
                area += _closure_area_term(piece)
        elif surface.closure_gap() > 1e-8:
            raise NotClosed(
                f"curve endpoint gap {surface.closure_gap():.2e} and no closure given")
        return area
    if closure:
        raise ValueError("closure paths are only supported for plane curves")
    uq, vq, w = surface.quad()
    p = surface.point(uq, vq)
    fu, fv = surface.derivs(uq, vq)
    cr = np.cross(fu, fv)
    # flux of (0, 0, z): exact for closed surfaces and measures the volume
    # over the z=0 plane for graph-like open ones
    return float(np.sum(w * p[:, 2] * cr[:, 2]) * surface.orientation)


# ---------------------------------------------------------------------------
# scalar fields on the parameter domain


@dataclass
class ParamField:
    """Scalar field on the parameter domain with analytic derivatives.

    value/d1/d2 take the same arrays as the surface parametrization; for
    surfaces d1 returns the (f_u, f_v)-coordinate gradient (m, 2).
    """

    value: Callable
    d1: Callable
    d2: Callable | None = None

    def __call__(self, *args):
        return np.asarray(self.value(*args), dtype=float)


def constant_field(c: float = 1.0) -> ParamField:
    return ParamField(
        lambda *a: np.full(np.shape(np.atleast_1d(a[0])), float(c)),
        lambda *a: (np.zeros(np.shape(np.atleast_1d(a[0]))) if len(a) == 1
                    else np.zeros(np.atleast_1d(a[0]).shape + (2,))),
    )


def bump_field(center: float, width: float) -> ParamField:
    """Smooth bump exp(1 - 1/(1 - x^2)) on |x| < 1, x = (s - center)/width."""

    def val(s):
        x = (np.atleast_1d(np.asarray(s, float)) - center) / width
        out = np.zeros_like(x)
        m = np.abs(x) < 1.0
        out[m] = np.exp(1.0 - 1.0 / (1.0 - x[m] ** 2))
        return out

    def der(s):
        x = (np.atleast_1d(np.asarray(s, float)) - center) / width
        out = np.zeros_like(x)
        m = np.abs(x) < 1.0
        xm = x[m]
        out[m] = np.exp(1.0 - 1.0 / (1.0 - xm**2)) * (-2.0 * xm / (1.0 - xm**2) ** 2)
        return out / width

    return ParamField(val, der)


def fourier_mode_field(k: int, phase: float = 0.0, period: float = 2.0 * np.pi) -> ParamField:
    om = 2.0 * np.pi / period

    def val(s):
        return np.cos(k * om * np.atleast_1d(np.asarray(s, float)) + phase)

    def der(s):
        return -k * om * np.sin(k * om * np.atleast_1d(np.asarray(s, float)) + phase)

    return ParamField(val, der)


def surface_gradient(surface: Hypersurface, fb: FrameBatch, fld: ParamField):
    """Ambient tangential gradient of a parameter field at frame nodes."""
    if isinstance(surface, Curve2D):
        (s,) = fb.params
        df = np.atleast_1d(fld.d1(s))
        t = fb.basis[:, 0, :]
        return (df / fb.measure)[:, None] * t
    u, v = fb.params
    dcoord = np.asarray(fld.d1(u, v), dtype=float)  # (m, 2) wrt (u, v)
    fu, fv = surface.derivs(u, v)
    E = np.einsum("ij,ij->i", fu, fu)
    F = np.einsum("ij,ij->i", fu, fv)
    G = np.einsum("ij,ij->i", fv, fv)
    det = E * G - F * F
    a = (G * dcoord[:, 0] - F * dcoord[:, 1]) / det
    b = (E * dcoord[:, 1] - F * dcoord[:, 0]) / det
    return a[:, None] * fu + b[:, None] * fv


def anisotropic_gradient(surface: Hypersurface, body: ConvexBody,
                         fld: ParamField, param):
    """Tangential gradient pushed through the body's projection differential."""
    fb = frames(surface, body,
                np.array([param], dtype=float) if isinstance(surface, Curve2D)
                else (np.array([param[0]], float), np.array([param[1]], float)))
    g = surface_gradient(surface, fb, fld)
    return body.tangent_map(fb.normals, g)[0]


# ---------------------------------------------------------------------------
# shape constructors


def circle(radius: float = 1.0, center=(0.0, 0.0), orientation: float = 1.0,
           panels: int = 32) -> Curve2D:
    c = np.asarray(center, dtype=float)

    def pt(s):
        s = np.atleast_1d(np.asarray(s, float))
        return c + radius * np.stack([np.cos(s), np.sin(s)], axis=-1)

    def vel(s):
        s = np.atleast_1d(np.asarray(s, float))
        return radius * np.stack([-np.sin(s), np.cos(s)], axis=-1)

    def acc(s):
        s = np.atleast_1d(np.asarray(s, float))
        return -radius * np.stack([np.cos(s), np.sin(s)], axis=-1)

    return Curve2D(pt, vel, acc, closed=True, orientation=orientation,
                   panels=panels, name=f"circle(r={radius})")


def segment(a, b, normal_side: float = 1.0, panels: int = 32) -> Curve2D:
    """Straight segment from a to b; normal_side flips the chosen normal."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)

    def pt(s):
        s = np.atleast_1d(np.asarray(s, float))
        return a + s[:, None] * (b - a)

    def vel(s):
        s = np.atleast_1d(np.asarray(s, float))
        return np.broadcast_to(b - a, s.shape + (2,)).copy()

    def acc(s):
        s = np.atleast_1d(np.asarray(s, float))
        return np.zeros(s.shape + (2,))

    return Curve2D(pt, vel, acc, domain=(0.0, 1.0), closed=False,
                   orientation=normal_side, panels=panels, name="segment")


def wulff_sample(body: ConvexBody, resolution: int = 64):
    """Boundary of the body parametrized by its normal directions.

    Resolution counts quadrature panels per angular coordinate (at least 16).
    The Euclidean outer normal at parameter value w equals w.
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    if body.dim == 2:
        def pt(s):
            s = np.atleast_1d(np.asarray(s, float))
            u = np.stack([np.cos(s), np.sin(s)], axis=-1)
            return body.k_projection(u)

        return Curve2D(pt, closed=True, orientation=1.0, panels=resolution,
                       name=f"wulff[{body.kind}]")

    def pt3(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        v = np.atleast_1d(np.asarray(v, float))
        w = np.stack([np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u)],
                     axis=-1)
        return body.k_projection(w)

    # both 3D families have h(w) = sqrt(w^T A w); exact chain-rule derivatives
    # keep the frames well conditioned near the poles
    A = None
    if getattr(body, "kind", "") == "ball":
        A = body.radius**2 * np.eye(3)
    elif getattr(body, "kind", "") == "ellipsoid":
        A = body.A
    derivs = second = None
    if A is not None:
        def _sphere_jets(u, v):
            u = np.atleast_1d(np.asarray(u, float))
            v = np.atleast_1d(np.asarray(v, float))
            su, cu, sv, cv = np.sin(u), np.cos(u), np.sin(v), np.cos(v)
            z = np.zeros_like(u)
            w = np.stack([su * cv, su * sv, cu], axis=-1)
            wu = np.stack([cu * cv, cu * sv, -su], axis=-1)
            wv = np.stack([-su * sv, su * cv, z], axis=-1)
            wuu = -w
            wuv = np.stack([-cu * sv, cu * cv, z], axis=-1)
            wvv = np.stack([-su * cv, -su * sv, z], axis=-1)
            return w, wu, wv, wuu, wuv, wvv

        def _hess_apply(w, h, z):
            Az = z @ A
            Aw = w @ A
            wAz = np.einsum("ij,ij->i", w, Az)
            return Az / h[:, None] - Aw * (wAz / h**3)[:, None]

        def _dhess_apply(w, h, z1, z2):
            Az1, Az2, Aw = z1 @ A, z2 @ A, w @ A
            a1 = np.einsum("ij,ij->i", w, Az1)
            a2 = np.einsum("ij,ij->i", w, Az2)
            a12 = np.einsum("ij,ij->i", z1, Az2)
            return (-Az2 * (a1 / h**3)[:, None]
                    - Az1 * (a2 / h**3)[:, None]
                    - Aw * (a12 / h**3)[:, None]
                    + 3.0 * Aw * (a1 * a2 / h**5)[:, None])

        def derivs(u, v):
            w, wu, wv, *_ = _sphere_jets(u, v)
            h = np.sqrt(np.einsum("ij,jk,ik->i", w, A, w))
            return _hess_apply(w, h, wu), _hess_apply(w, h, wv)

        def second(u, v):
            w, wu, wv, wuu, wuv, wvv = _sphere_jets(u, v)
            h = np.sqrt(np.einsum("ij,jk,ik->i", w, A, w))
            fuu = _dhess_apply(w, h, wu, wu) + _hess_apply(w, h, wuu)
            fuv = _dhess_apply(w, h, wu, wv) + _hess_apply(w, h, wuv)
            fvv = _dhess_apply(w, h, wv, wv) + _hess_apply(w, h, wvv)
            return fuu, fuv, fvv

    upan = max(8, resolution // 2)
    return Surface3D(pt3, derivs=derivs, second_derivs=second,
                     domain_u=(1e-7, np.pi - 1e-7),
                     domain_v=(0.0, 2.0 * np.pi), closed=True,
                     upanels=upan, vpanels=resolution,
                     name=f"wulff[{body.kind}]")


def wulff_arc(body: ConvexBody, theta_range, scale: float = 1.0,
              translate=(0.0, 0.0), panels: int = 32) -> Curve2D:
    """Scaled, translated arc of a planar Wulff boundary over a normal-angle range."""
    t0, t1 = float(theta_range[0]), float(theta_range[1])
    off = np.asarray(translate, dtype=float)

    def pt(s):
        s = np.atleast_1d(np.asarray(s, float))
        u = np.stack([np.cos(s), np.sin(s)], axis=-1)
        return off + scale * body.k_projection(u)

    return Curve2D(pt, domain=(t0, t1), closed=False, orientation=1.0,
                   panels=panels, name=f"wulff_arc[{body.kind}]")


def sphere(radius: float = 1.0, orientation: float = 1.0) -> Surface3D:
    def pt(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        v = np.atleast_1d(np.asarray(v, float))
        return radius * np.stack(
            [np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u)], axis=-1)

    def derivs(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        v = np.atleast_1d(np.asarray(v, float))
        fu = radius * np.stack(
            [np.cos(u) * np.cos(v), np.cos(u) * np.sin(v), -np.sin(u)], axis=-1)
        fv = radius * np.stack(
            [-np.sin(u) * np.sin(v), np.sin(u) * np.cos(v), np.zeros_like(u)],
            axis=-1)
        return fu, fv

    def second(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        v = np.atleast_1d(np.asarray(v, float))
        fuu = -radius * np.stack(
            [np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u)], axis=-1)
        fuv = radius * np.stack(
            [-np.cos(u) * np.sin(v), np.cos(u) * np.cos(v), np.zeros_like(u)],
            axis=-1)
        fvv = radius * np.stack(
            [-np.sin(u) * np.cos(v), -np.sin(u) * np.sin(v), np.zeros_like(u)],
            axis=-1)
        return fuu, fuv, fvv

    return Surface3D(pt, derivs, second, domain_u=(1e-7, np.pi - 1e-7),
                     closed=True, orientation=orientation,
                     name=f"sphere(r={radius})")


def flat_disk(radius: float = 1.0, height: float = 0.0) -> Surface3D:
    """Flat disk in the plane z = height, normal +e_z, polar parametrization."""

    def pt(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        v = np.atleast_1d(np.asarray(v, float))
        return np.stack([u * np.cos(v), u * np.sin(v),
                         np.full_like(u, height)], axis=-1)

    def derivs(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        v = np.atleast_1d(np.asarray(v, float))
        z = np.zeros_like(u)
        fu = np.stack([np.cos(v), np.sin(v), z], axis=-1)
        fv = np.stack([-u * np.sin(v), u * np.cos(v), z], axis=-1)
        return fu, fv

    def second(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        v = np.atleast_1d(np.asarray(v, float))
        z = np.zeros_like(u)
        fuu = np.stack([z, z, z], axis=-1)
        fuv = np.stack([-np.sin(v), np.cos(v), z], axis=-1)
        fvv = np.stack([-u * np.cos(v), -u * np.sin(v), z], axis=-1)
        return fuu, fuv, fvv

    return Surface3D(pt, derivs, second, domain_u=(1e-4, radius),
                     domain_v=(0.0, 2.0 * np.pi), closed=False,
                     orientation=1.0, name="flat_disk")


def perturbed(surface: Hypersurface, body: ConvexBody, fld: ParamField,
              eps: float):
    """Normal graph over a surface: p + eps * f * N; FD derivatives."""
    if isinstance(surface, Curve2D):
        def pt(s):
            s = np.atleast_1d(np.asarray(s, float))
            v = surface.velocity(s)
            speed = np.linalg.norm(v, axis=-1)
            n = -surface.orientation * rot90(v / speed[:, None])
            return surface.point(s) + eps * fld(s)[:, None] * n

        return Curve2D(pt, domain=surface.domain, closed=surface.closed,
                       orientation=surface.orientation, panels=surface.panels,
                       name=surface.name + "+graph")

    def pt3(u, v):
        n = surface.normal(np.atleast_1d(u), np.atleast_1d(v))
        return surface.point(u, v) + eps * fld(u, v)[:, None] * n

    return Surface3D(pt3, domain_u=surface.domain_u, domain_v=surface.domain_v,
                     closed=surface.closed, orientation=surface.orientation,
                     upanels=surface.upanels, vpanels=surface.vpanels,
                     name=surface.name + "+graph")


def from_control_points(points, panels: int = 32) -> Curve2D:
    """Closed curve through sampled control points via periodic cubic splines."""
    from scipy.interpolate import CubicSpline

    pts = np.asarray(points, dtype=float)
    if np.linalg.norm(pts[0] - pts[-1]) > 0:
        pts = np.vstack([pts, pts[0]])
    t = np.linspace(0.0, 2.0 * np.pi, pts.shape[0])
    spl = CubicSpline(t, pts, bc_type="periodic")

    def pt(s):
        return spl(np.mod(np.atleast_1d(np.asarray(s, float)), 2.0 * np.pi))

    def vel(s):
        return spl(np.mod(np.atleast_1d(np.asarray(s, float)), 2.0 * np.pi), 1)

    def acc(s):
        return spl(np.mod(np.atleast_1d(np.asarray(s, float)), 2.0 * np.pi), 2)

    return Curve2D(pt, vel, acc, closed=True, panels=panels, name="spline")


@dataclass
class BoundaryFrame:
    point: np.ndarray
    nu: np.ndarray               # inner conormal
    nu_K: np.ndarray
    xi: np.ndarray               # inner normal of the domain wall
    contact: float               # <N_K, xi>, the free-boundary residual
    transversality: float        # <nu, xi>
    ii_nk: float                 # wall second fundamental form on N_K


def boundary_frame(surface: Curve2D, body: ConvexBody, domain,
                   endpoint: str = "end") -> BoundaryFrame:
    """Conormal and contact data where a curve meets the domain wall."""
    if endpoint not in ("start", "end"):
        raise ValueError("endpoint must be 'start' or 'end'")
    s = surface.domain[0] if endpoint == "start" else surface.domain[1]
    fr = frame_at(surface, body, s)
    domain.require_on_boundary(fr.point)
    v = surface.velocity(np.array([s]))[0]
    t = v / np.linalg.norm(v)
    nu = t if endpoint == "start" else -t
    nu_K = fr.phi_K * nu - float(np.dot(fr.N_K, nu)) * fr.N
    xi = domain.inner_normal(fr.point)
    return BoundaryFrame(fr.point, nu, nu_K, xi,
                         float(np.dot(fr.N_K, xi)),
                         float(np.dot(nu, xi)),
                         float(domain.second_form(fr.point, fr.N_K)))


def frame_csv(surface: Hypersurface, body: ConvexBody) -> str:
    """Per-node frame table with fixed columns, deterministic formatting."""
    fb = frames(surface, body)
    rows = ["u,v,x,y,z,Nx,Ny,Nz,phiK,HK,trace_gap"]
    if isinstance(surface, Curve2D):
        (s,) = fb.params
        uu, vv = s, np.zeros_like(s)
        pts = np.column_stack([fb.points, np.zeros_like(s)])
        nor = np.column_stack([fb.normals, np.zeros_like(s)])
    else:
        uu, vv = fb.params
        pts, nor = fb.points, fb.normals
    for i in range(len(uu)):
        vals = [uu[i], vv[i], *pts[i], *nor[i], fb.phi[i], fb.HK[i], fb.trace_gap[i]]
        rows.append(",".join(repr(float(x)) for x in vals))
    return "\n".join(rows) + "\n"
