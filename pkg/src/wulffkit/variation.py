"""Normal deformations of hypersurfaces and variation-formula checks.

Flows move a base surface by t * omega * N_K, either along straight lines
(zero acceleration) or conjugated through a wall-flattening chart so the
endpoints stay on a curved domain boundary.  Analytic first and second
variation formulas are compared against Richardson-extrapolated finite
differences of the area and volume functionals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bodies import ConvexBody
from .domains import Disk2D, Domain, FullSpace
from .errors import (DegenerateMetric, ImmersionLost, ModeUnsupported,
                     NotStationary, ZeroVolumeVelocity)
from .surfaces import (Curve2D, FrameBatch, Hypersurface, ParamField,
                       Surface3D, anisotropic_area, boundary_frame,
                       enclosed_volume, frames, rot90, surface_gradient,
                       _fd_apply, _D1)

FD_STEPS = (1e-2, 5e-3, 2.5e-3)
STATIONARITY_TOL = 1e-4


@dataclass
class Flow:
    base: Hypersurface
    body: ConvexBody
    omega: ParamField
    mode: str = "straight_line"
    domain: Domain | None = None
    closure_fn: object = None    # callable(curve) -> closure pieces

    def __post_init__(self):
        if self.mode not in ("straight_line", "boundary_straightened"):
            raise ModeUnsupported(f"unknown flow mode {self.mode!r}")
        if self.mode == "boundary_straightened" and not isinstance(self.domain, Disk2D):
            # flat walls: the normal field is already tangent to the wall at a
            # stationary contact, so the straight-line flow is admissible as is
            self.mode = "straight_line"


@dataclass
class VariationReport:
    a_prime_analytic: float = np.nan
    a_prime_fd: float = np.nan
    v_prime_analytic: float = np.nan
    v_prime_fd: float = np.nan
    a_second_analytic: float = np.nan
    a_second_fd: float = np.nan
    v_second_fd: float = np.nan
    index_form_value: float = np.nan
    fd_steps: tuple = FD_STEPS
    observed_order: float = np.nan
    fd_error_estimates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            if isinstance(v, float) and np.isnan(v):
                continue
            out[k] = list(v) if isinstance(v, tuple) else v
        return out


# ---------------------------------------------------------------------------
# deformed surfaces


def _curve_normal_jet(curve: Curve2D, s):
    """Unit normal and its parameter derivative along a curve."""
    v = curve.velocity(s)
    a = curve.accel(s)
    speed = np.linalg.norm(v, axis=-1)
    t = v / speed[:, None]
    n = -curve.orientation * rot90(t)
    va = np.einsum("ij,ij->i", v, a)
    dn = -curve.orientation * (rot90(a) / speed[:, None]
                               - rot90(v) * (va / speed**3)[:, None])
    return n, dn, t, speed


def _straight_line_curve(flow: Flow, t: float) -> Curve2D:
    base, body, om = flow.base, flow.body, flow.omega

    def pt(s):
        s = np.atleast_1d(np.asarray(s, float))
        n, _, _, _ = _curve_normal_jet(base, s)
        return base.point(s) + t * om(s)[:, None] * body.k_projection(n)

    def vel(s):
        s = np.atleast_1d(np.asarray(s, float))
        n, dn, _, _ = _curve_normal_jet(base, s)
        nk = body.k_projection(n)
        dnk = body.tangent_map(n, dn)
        dom = np.atleast_1d(om.d1(s))
        return (base.velocity(s) + t * (dom[:, None] * nk + om(s)[:, None] * dnk))

    return Curve2D(pt, vel, domain=base.domain, closed=base.closed,
                   orientation=base.orientation, panels=base.panels,
                   nodes=base.nodes, name=base.name + "+flow")


def _surface_normal_jet(base: Surface3D, u, v):
    """Normal and its parameter derivatives via the Weingarten equations."""
    fu, fv = base.derivs(u, v)
    cr = np.cross(fu, fv)
    nn = np.linalg.norm(cr, axis=-1)
    n = base.orientation * cr / nn[:, None]
    fuu, fuv, fvv = base.second_derivs(u, v)
    e = np.einsum("ij,ij->i", fuu, n)
    f = np.einsum("ij,ij->i", fuv, n)
    g = np.einsum("ij,ij->i", fvv, n)
    E = np.einsum("ij,ij->i", fu, fu)
    F = np.einsum("ij,ij->i", fu, fv)
    G = np.einsum("ij,ij->i", fv, fv)
    det = E * G - F * F
    # Weingarten matrix S = I^{-1} II; N_u = -(S00 fu + S10 fv), same for v
    s00 = (G * e - F * f) / det
    s10 = (E * f - F * e) / det
    s01 = (G * f - F * g) / det
    s11 = (E * g - F * f) / det
    nu = -(s00[:, None] * fu + s10[:, None] * fv)
    nv = -(s01[:, None] * fu + s11[:, None] * fv)
    return n, nu, nv, fu, fv


def _straight_line_surface(flow: Flow, t: float) -> Surface3D:
    base, body, om = flow.base, flow.body, flow.omega

    def pt(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        v = np.atleast_1d(np.asarray(v, float))
        n = base.normal(u, v)
        return base.point(u, v) + t * om(u, v)[:, None] * body.k_projection(n)

    def derivs(u, v):
        u = np.atleast_1d(np.asarray(u, float))
        v = np.atleast_1d(np.asarray(v, float))
        n, nu, nv, fu, fv = _surface_normal_jet(base, u, v)
        nk = body.k_projection(n)
        dnk_u = body.tangent_map(n, nu)
        dnk_v = body.tangent_map(n, nv)
        ov = om(u, v)
        d = np.asarray(om.d1(u, v), dtype=float)
        Fu = fu + t * (d[:, 0, None] * nk + ov[:, None] * dnk_u)
        Fv = fv + t * (d[:, 1, None] * nk + ov[:, None] * dnk_v)
        return Fu, Fv

    return Surface3D(pt, derivs=derivs, domain_u=base.domain_u,
                     domain_v=base.domain_v,
                     closed=base.closed, orientation=base.orientation,
                     upanels=base.upanels, vpanels=base.vpanels,
                     nodes=base.nodes, name=base.name + "+flow")


def _smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f = np.where(x > 0.0, np.exp(-1.0 / np.maximum(x, 1e-300)), 0.0)
        g = np.where(x < 1.0, np.exp(-1.0 / np.maximum(1.0 - x, 1e-300)), 0.0)
    return f / (f + g)


def _chart_curve(flow: Flow, t: float) -> Curve2D:
    """Disk flow: straight lines in (angle, depth) coordinates near the wall,
    blended with the plain straight-line flow away from it.

    The polar chart is singular at the disk center, so the chart motion only
    acts where the base point is in the outer radial band; both branches
    have the same velocity omega * N_K at t = 0, so the blend does too.
    """
    base, body, om = flow.base, flow.body, flow.omega
    disk: Disk2D = flow.domain
    c, R = disk.center, disk.radius

    def pt(s):
        s = np.atleast_1d(np.asarray(s, float))
        n, _, _, _ = _curve_normal_jet(base, s)
        X = om(s)[:, None] * body.k_projection(n)
        p0 = base.point(s)
        straight = p0 + t * X
        p = p0 - c
        r = np.linalg.norm(p, axis=-1)
        chi = _smooth_step((r / R - 0.55) / 0.30)
        rs = np.maximum(r, 1e-9 * R)
        th = np.arctan2(p[:, 1], p[:, 0])
        u = p / rs[:, None]
        uperp = rot90(u)
        # chart Jacobian columns are r*uperp (d/d theta) and -u (d/d depth)
        Xth = np.einsum("ij,ij->i", X, uperp) / rs
        Xw = -np.einsum("ij,ij->i", X, u)
        th2 = th + t * Xth
        r2 = r - t * Xw
        chart = c + r2[:, None] * np.stack([np.cos(th2), np.sin(th2)], axis=-1)
        return (1.0 - chi)[:, None] * straight + chi[:, None] * chart

    return Curve2D(pt, domain=base.domain, closed=base.closed,
                   orientation=base.orientation, panels=base.panels,
                   nodes=base.nodes, name=base.name + "+chart_flow")


def deformed(flow: Flow, t: float) -> Hypersurface:
    if t == 0.0:
        return flow.base
    if isinstance(flow.base, Surface3D):
        return _straight_line_surface(flow, t)
    if flow.mode == "boundary_straightened":
        return _chart_curve(flow, t)
    return _straight_line_curve(flow, t)


def _default_closure(flow: Flow, curve: Curve2D):
    if curve.closed:
        return None
    if flow.closure_fn is not None:
        return flow.closure_fn(curve)
    a = curve.point(np.array([curve.domain[1]]))[0]
    b = curve.point(np.array([curve.domain[0]]))[0]
    if isinstance(flow.domain, Disk2D):
        return flow.domain.boundary_closure(a, b)
    return [("segment", a, b)]


def functionals(flow: Flow, t: float) -> dict:
    """Anisotropic area and enclosed volume of the deformed surface."""
    surf = deformed(flow, t)
    try:
        area = anisotropic_area(surf, flow.body)
    except DegenerateMetric as exc:
        raise ImmersionLost(f"deformation at t={t} is not an immersion") from exc
    if isinstance(surf, Curve2D):
        vol = enclosed_volume(surf, closure=_default_closure(flow, surf))
    else:
        vol = enclosed_volume(surf)
    return {"area": area, "volume": vol}


# ---------------------------------------------------------------------------
# Richardson finite differences


def _fd_table(fn, order: int, steps):
    """Central differences at each step; returns (values, richardson, order)."""
    cache = {0.0: fn(0.0)} if order == 2 else {}
    vals = []
    for h in steps:
        for t in (h, -h):
            if t not in cache:
                cache[t] = fn(t)
        if order == 1:
            vals.append((cache[h] - cache[-h]) / (2.0 * h))
        else:
            vals.append((cache[h] - 2.0 * cache[0.0] + cache[-h]) / h**2)
    d0, d1, d2 = vals
    r1 = (4.0 * d1 - d0) / 3.0
    r2 = (4.0 * d2 - d1) / 3.0
    best = (16.0 * r2 - r1) / 15.0
    num = abs(d0 - d1)
    den = abs(d1 - d2)
    if den > 1e-14 * (1.0 + abs(d2)) and num > 0.0:
        obs = float(np.log2(num / den))
    else:
        obs = np.inf
    err = abs(r2 - best)
    return best, err, obs


def fd_derivative(fn, order: int = 1, steps=FD_STEPS, retries: int = 3):
    """Richardson-extrapolated derivative of fn at 0, halving steps on
    immersion loss."""
    steps = tuple(steps)
    for attempt in range(retries + 1):
        try:
            return _fd_table(fn, order, steps)
        except ImmersionLost:
            if attempt == retries:
                raise
            steps = tuple(h / 2.0 for h in steps)


# ---------------------------------------------------------------------------
# variation formulas


def _omega_values(flow: Flow, fb: FrameBatch):
    if isinstance(flow.base, Curve2D):
        return np.atleast_1d(flow.omega(fb.params[0]))
    return np.atleast_1d(flow.omega(*fb.params))


def _quad_weights(surface: Hypersurface):
    if isinstance(surface, Curve2D):
        return surface.quad()[1]
    return surface.quad()[2]


def first_variation(flow: Flow) -> VariationReport:
    """A'(0) and V'(0), analytic against finite differences.

    With X = omega * N_K the conormal boundary term vanishes identically
    (<N_K, nu_K> = 0), so the general first-variation formula reduces to
    the interior integrals even for surfaces with boundary.
    """
    fb = frames(flow.base, flow.body)
    w = _quad_weights(flow.base)
    om = _omega_values(flow, fb)
    n = flow.base.ambient_dim - 1
    dA = w * fb.measure
    rep = VariationReport()
    rep.v_prime_analytic = float(np.sum(dA * om * fb.phi))
    rep.a_prime_analytic = float(-n * np.sum(dA * fb.HK * om * fb.phi))
    a_fd, a_err, a_ord = fd_derivative(lambda t: functionals(flow, t)["area"], 1)
    v_fd, v_err, v_ord = fd_derivative(lambda t: functionals(flow, t)["volume"], 1)
    rep.a_prime_fd, rep.v_prime_fd = a_fd, v_fd
    rep.observed_order = min(a_ord, v_ord)
    rep.fd_error_estimates = {"a_prime": a_err, "v_prime": v_err}
    return rep


def _grad_energy(flow: Flow, fb: FrameBatch):
    """<Q grad(omega), grad(omega)> at the frame nodes."""
    g = surface_gradient(flow.base, fb, flow.omega)
    qg = flow.body.tangent_map(fb.normals, g)
    return np.einsum("ij,ij->i", qg, g)


def second_variation(flow: Flow) -> VariationReport:
    """Straight-line A''(0) against finite differences (acceleration-free)."""
    if flow.mode != "straight_line":
        raise ModeUnsupported("second_variation needs the straight-line mode")
    fb = frames(flow.base, flow.body)
    w = _quad_weights(flow.base)
    om = _omega_values(flow, fb)
    n = flow.base.ambient_dim - 1
    dA = w * fb.measure
    tr2 = np.einsum("mij,mji->m", fb.BK, fb.BK)
    grad_term = _grad_energy(flow, fb) * fb.phi**2
    curv_term = (n**2 * fb.HK**2 - tr2) * om**2 * fb.phi
    rep = first_variation(flow)
    rep.a_second_analytic = float(np.sum(dA * (grad_term + curv_term)))
    a2, a2e, a2o = fd_derivative(lambda t: functionals(flow, t)["area"], 2)
    v2, v2e, _ = fd_derivative(lambda t: functionals(flow, t)["volume"], 2)
    rep.a_second_fd, rep.v_second_fd = a2, v2
    rep.fd_error_estimates.update({"a_second": a2e, "v_second": v2e})
    return rep


def stationarity_residual(surface: Hypersurface, body: ConvexBody,
                          domain: Domain) -> dict:
    """Deviation of H_K from its mean, and the wall contact residual."""
    fb = frames(surface, body)
    w = _quad_weights(surface)
    dA = w * fb.measure
    hbar = float(np.sum(dA * fb.HK) / np.sum(dA))
    hdev = float(np.max(np.abs(fb.HK - hbar)))
    cdev = 0.0
    if isinstance(surface, Curve2D) and not surface.closed:
        for end in ("start", "end"):
            bf = boundary_frame(surface, body, domain, end)
            cdev = max(cdev, abs(bf.contact))
    elif isinstance(surface, Surface3D) and not surface.closed:
        vs = np.linspace(surface.domain_v[0], surface.domain_v[1], 64,
                         endpoint=False)
        us = np.full_like(vs, surface.domain_u[1])
        fbb = frames(surface, body, (us, vs))
        for p, nk in zip(fbb.points, fbb.NK):
            domain.require_on_boundary(p)
            cdev = max(cdev, abs(float(np.dot(nk, domain.inner_normal(p)))))
    return {"mean_curvature_dev": hdev, "contact_dev": cdev,
            "mean_curvature": hbar}


def index_form(surface: Hypersurface, body: ConvexBody, domain: Domain,
               omega: ParamField) -> float:
    """Stability quadratic form with the wall-curvature boundary term."""
    res = stationarity_residual(surface, body, domain)
    if (res["mean_curvature_dev"] > STATIONARITY_TOL
            or res["contact_dev"] > STATIONARITY_TOL):
        raise NotStationary(
            f"residuals {res['mean_curvature_dev']:.2e}, "
            f"{res['contact_dev']:.2e} exceed {STATIONARITY_TOL}")
    fb = frames(surface, body)
    w = _quad_weights(surface)
    om = _omega_values(Flow(surface, body, omega), fb)
    dA = w * fb.measure
    tr2 = np.einsum("mij,mji->m", fb.BK, fb.BK)
    g = surface_gradient(surface, fb, omega)
    qg = body.tangent_map(fb.normals, g)
    grad = np.einsum("ij,ij->i", qg, g)
    val = float(np.sum(dA * (grad * fb.phi**2 - tr2 * om**2 * fb.phi)))
    if isinstance(surface, Curve2D) and not surface.closed:
        for end, s in (("start", surface.domain[0]), ("end", surface.domain[1])):
            bf = boundary_frame(surface, body, domain, end)
            ii = bf.ii_nk
            if ii != 0.0:
                ov = float(np.atleast_1d(omega(np.array([s])))[0])
                phi = body.support(np.atleast_2d(
                    frames(surface, body, np.array([s])).normals))[0]
                val -= ii / bf.transversality * ov**2 * float(phi)
    return val


def profile_slope_curvature(flow: Flow) -> dict:
    """Slope and curvature of anisotropic area as a function of volume.

    The tracked quantity is f(v) = A_K^{(n+1)/n} along the flow; analytic
    values use the index form, FD values reparametrize the flow by volume.
    """
    n = flow.base.ambient_dim - 1
    fb = frames(flow.base, flow.body)
    w = _quad_weights(flow.base)
    om = _omega_values(flow, fb)
    dA = w * fb.measure
    vflux = float(np.sum(dA * om * fb.phi))
    if abs(vflux) < 1e-10:
        raise ZeroVolumeVelocity("volume is stationary along this flow")
    area = float(np.sum(dA * fb.phi))
    hbar = float(np.sum(dA * fb.HK) / np.sum(dA))
    dom = flow.domain if flow.domain is not None else FullSpace(flow.base.ambient_dim)
    ik = index_form(flow.base, flow.body, dom, flow.omega)
    f_prime = -(n + 1) * hbar * area ** (1.0 / n)
    f_second = ((n + 1) / n) * area ** (1.0 / n) * (
        n * hbar**2 / area + ik / vflux**2)
    expo = (n + 1) / n

    def g(t):
        return functionals(flow, t)["area"] ** expo

    def vol(t):
        return functionals(flow, t)["volume"]

    g1, _, _ = fd_derivative(g, 1)
    g2, _, _ = fd_derivative(g, 2)
    v1, _, _ = fd_derivative(vol, 1)
    v2, _, _ = fd_derivative(vol, 2)
    return {"f_prime": f_prime, "f_second": f_second,
            "f_prime_fd": g1 / v1, "f_second_fd": (g2 * v1 - g1 * v2) / v1**3,
            "index_form": ik}


def area_plus_volume_second(flow: Flow) -> dict:
    """FD second derivative of A_K + n * mean(H_K) * V along the flow."""
    fb = frames(flow.base, flow.body)
    w = _quad_weights(flow.base)
    dA = w * fb.measure
    n = flow.base.ambient_dim - 1
    hbar = float(np.sum(dA * fb.HK) / np.sum(dA))

    def fn(t):
        f = functionals(flow, t)
        return f["area"] + n * hbar * f["volume"]

    val, err, obs = fd_derivative(fn, 2)
    return {"value": val, "error_estimate": err, "observed_order": obs,
            "mean_curvature": hbar}


def volume_preserving_field(surface: Hypersurface, body: ConvexBody,
                            rng: np.random.Generator) -> ParamField:
    """Random smooth field with zero anisotropic volume flux."""
    fb = frames(surface, body)
    w = _quad_weights(surface)
    dA = w * fb.measure

    if isinstance(surface, Curve2D):
        ks = rng.integers(1, 5, size=3)
        amps = rng.normal(size=3)
        phs = rng.uniform(0.0, 2.0 * np.pi, size=3)
        span = surface.domain[1] - surface.domain[0]

        def raw(s):
            s = np.atleast_1d(np.asarray(s, float))
            x = 2.0 * np.pi * (s - surface.domain[0]) / span
            return sum(a * np.cos(k * x + p) for a, k, p in zip(amps, ks, phs))

        def raw_d(s):
            s = np.atleast_1d(np.asarray(s, float))
            x = 2.0 * np.pi * (s - surface.domain[0]) / span
            return sum(-a * k * (2.0 * np.pi / span) * np.sin(k * x + p)
                       for a, k, p in zip(amps, ks, phs))

        c = float(np.sum(dA * raw(fb.params[0]) * fb.phi)
                  / np.sum(dA * fb.phi))
        return ParamField(lambda s: raw(s) - c, raw_d)

    coef = rng.normal(size=3)

    def raw3(u, v):
        p = surface.point(np.atleast_1d(u), np.atleast_1d(v))
        return p @ coef

    c = float(np.sum(dA * raw3(*fb.params) * fb.phi) / np.sum(dA * fb.phi))

    def d1(u, v):
        fu, fv = surface.derivs(np.atleast_1d(u), np.atleast_1d(v))
        return np.stack([fu @ coef, fv @ coef], axis=-1)

    return ParamField(lambda u, v: raw3(u, v) - c, d1)
