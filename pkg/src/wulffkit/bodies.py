"""Smooth strictly convex bodies described by their support functions.

Three families are implemented: Euclidean balls, ellipsoids given by a
symmetric positive-definite matrix A with h(w) = sqrt(w^T A w), and planar
bodies whose support function is a truncated Fourier series in the normal
angle.  Each family exposes the support function h, its gradient (the
projection onto the boundary that realizes the supporting hyperplane), and
the differential of that projection restricted to the orthogonal complement
of the direction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidBody, NotOrthogonal, ZeroVector

_BALL_VOL = {2: np.pi, 3: 4.0 * np.pi / 3.0}

# quantitative strict-convexity floor for Fourier bodies: min (h + h'')
CONVEXITY_MARGIN = 1e-3


@dataclass(frozen=True)
class EllipticityBounds:
    """Two-sided bounds a|v|^2 <= <Q_w v, v> <= b|v|^2 on the sphere."""

    a: float
    b: float


class ConvexBody:
    """Base class; subclasses implement the support calculus."""

    dim: int
    kind: str
    centrally_symmetric: bool

    def support(self, w):
        raise NotImplementedError

    def k_projection(self, w):
        raise NotImplementedError

    def tangent_map(self, w, v):
        """Differential of the boundary projection at unit w applied to v in w-perp."""
        raise NotImplementedError

    def volume(self) -> float:
        raise NotImplementedError

    def contains(self, points, tol: float = 0.0):
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    # -- shared helpers -----------------------------------------------------

    def _check_direction(self, w):
        w = np.asarray(w, dtype=float)
        norms = np.linalg.norm(w, axis=-1)
        if np.any(norms == 0.0):
            raise ZeroVector("direction must be nonzero")
        return w, norms

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class Ball(ConvexBody):
    """Round ball of given radius about the origin (isotropic case)."""

    kind = "ball"
    centrally_symmetric = True

    def __init__(self, radius: float, dim: int = 2):
        if radius <= 0:
            raise InvalidBody("ball radius must be positive")
        if dim not in (2, 3):
            raise InvalidBody("ambient dimension must be 2 or 3")
        self.radius = float(radius)
        self.dim = dim

    def support(self, w):
        w, norms = self._check_direction(w)
        return self.radius * norms

    def k_projection(self, w):
        w, norms = self._check_direction(w)
        return self.radius * w / norms[..., None]

    def tangent_map(self, w, v):
        w, v = _check_tangent_args(self, w, v)
        return self.radius * v

    def volume(self) -> float:
        return _BALL_VOL[self.dim] * self.radius**self.dim

    def contains(self, points, tol: float = 0.0):
        pts = np.asarray(points, dtype=float)
        return np.linalg.norm(pts, axis=-1) <= self.radius + tol

    def to_dict(self) -> dict:
        return {"dim": self.dim, "kind": "ball", "radius": self.radius}


class Ellipsoid(ConvexBody):
    """Body with support function sqrt(w^T A w) for A symmetric positive definite."""

    kind = "ellipsoid"
    centrally_symmetric = True

    def __init__(self, A, dim: int | None = None):
        A = np.asarray(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidBody("A must be a square matrix")
        if dim is None:
            dim = A.shape[0]
        if dim not in (2, 3) or A.shape[0] != dim:
            raise InvalidBody("ambient dimension must be 2 or 3 and match A")
        if np.max(np.abs(A - A.T)) > 1e-12 * (1.0 + np.max(np.abs(A))):
            raise InvalidBody("A must be symmetric")
        eigs = np.linalg.eigvalsh(A)
        if eigs.min() <= 0:
            raise InvalidBody("A must be positive definite")
        self.A = 0.5 * (A + A.T)
        self.dim = dim
        self._Ainv = np.linalg.inv(self.A)

    def support(self, w):
        w, _ = self._check_direction(w)
        return np.sqrt(np.einsum("...i,ij,...j->...", w, self.A, w))

    def k_projection(self, w):
        w, _ = self._check_direction(w)
        h = self.support(w)
        return np.einsum("ij,...j->...i", self.A, w) / h[..., None]

    def tangent_map(self, w, v):
        w, v = _check_tangent_args(self, w, v)
        h = self.support(w)
        Av = np.einsum("ij,...j->...i", self.A, v)
        Aw = np.einsum("ij,...j->...i", self.A, w)
        wAv = np.einsum("...i,...i->...", w, Av)
        return Av / h[..., None] - Aw * (wAv / h**3)[..., None]

    def volume(self) -> float:
        return _BALL_VOL[self.dim] * float(np.sqrt(np.linalg.det(self.A)))

    def contains(self, points, tol: float = 0.0):
        pts = np.asarray(points, dtype=float)
        q = np.einsum("...i,ij,...j->...", pts, self._Ainv, pts)
        return q <= 1.0 + tol

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "kind": "ellipsoid",
            "matrix": [float(x) for x in self.A.ravel()],
        }


class Fourier2D(ConvexBody):
    """Planar body with support function h(t) = a0 + sum a_k cos kt + b_k sin kt.

    Strict convexity requires h + h'' > 0; a quantitative margin is enforced
    at construction over a dense angular sample.
    """

    kind = "fourier2d"
    dim = 2

    def __init__(self, a0: float, cos=(), sin=()):
        self.a0 = float(a0)
        self.cos = np.asarray(cos, dtype=float)
        self.sin = np.asarray(sin, dtype=float)
        if self.sin.size < self.cos.size:
            self.sin = np.pad(self.sin, (0, self.cos.size - self.sin.size))
        if self.cos.size < self.sin.size:
            self.cos = np.pad(self.cos, (0, self.sin.size - self.cos.size))
        theta = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
        curv = self.h(theta) + self.h(theta, order=2)
        if curv.min() < CONVEXITY_MARGIN:
            raise InvalidBody(
                f"convexity margin violated: min(h + h'') = {curv.min():.3e}"
            )
        if self.h(theta).min() <= 0.0:
            raise InvalidBody("support function must be positive")
        odd = [k for k in range(1, self.cos.size + 1) if k % 2 == 1]
        self.centrally_symmetric = all(
            abs(self.cos[k - 1]) < 1e-15 and abs(self.sin[k - 1]) < 1e-15 for k in odd
        )

    def h(self, theta, order: int = 0):
        """Angular support function or its derivative of given order."""
        theta = np.asarray(theta, dtype=float)
        out = np.full_like(theta, self.a0 if order == 0 else 0.0)
        for idx in range(self.cos.size):
            k = idx + 1
            kt = k * theta
            a, b = self.cos[idx], self.sin[idx]
            if order % 4 == 0:
                ca, sb = np.cos(kt), np.sin(kt)
            elif order % 4 == 1:
                ca, sb = -np.sin(kt), np.cos(kt)
            elif order % 4 == 2:
                ca, sb = -np.cos(kt), -np.sin(kt)
            else:
                ca, sb = np.sin(kt), -np.cos(kt)
            out = out + k**order * (a * ca + b * sb)
        return out

    def support(self, w):
        w, norms = self._check_direction(w)
        theta = np.arctan2(w[..., 1], w[..., 0])
        return norms * self.h(theta)

    def k_projection(self, w):
        w, _ = self._check_direction(w)
        theta = np.arctan2(w[..., 1], w[..., 0])
        h = self.h(theta)
        hp = self.h(theta, order=1)
        u = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        uperp = np.stack([-np.sin(theta), np.cos(theta)], axis=-1)
        return h[..., None] * u + hp[..., None] * uperp

    def tangent_map(self, w, v):
        w, v = _check_tangent_args(self, w, v)
        theta = np.arctan2(w[..., 1], w[..., 0])
        q = self.h(theta) + self.h(theta, order=2)
        return q[..., None] * v

    def volume(self) -> float:
        # (1/2) int (h^2 - h'^2) dt in closed form
        k = np.arange(1, self.cos.size + 1)
        coef2 = self.cos**2 + self.sin**2
        return float(
            np.pi * self.a0**2 + 0.5 * np.pi * np.sum((1.0 - k**2) * coef2)
        )

    def contains(self, points, tol: float = 0.0):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        theta = np.linspace(0.0, 2.0 * np.pi, 720, endpoint=False)
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        h = self.h(theta)
        proj = pts @ dirs.T
        ok = np.all(proj <= h[None, :] + tol, axis=-1)
        return ok if np.asarray(points).ndim > 1 else bool(ok[0])

    def to_dict(self) -> dict:
        return {
            "dim": 2,
            "kind": "fourier2d",
            "a0": self.a0,
            "cos": [float(x) for x in self.cos],
            "sin": [float(x) for x in self.sin],
        }


def _check_tangent_args(body, w, v):
    w = np.asarray(w, dtype=float)
    v = np.asarray(v, dtype=float)
    norms = np.linalg.norm(w, axis=-1)
    if np.any(norms == 0.0):
        raise ZeroVector("direction must be nonzero")
    w = w / norms[..., None]
    dot = np.abs(np.einsum("...i,...i->...", w, v))
    vn = np.linalg.norm(v, axis=-1)
    if np.any(dot > 1e-10 * np.maximum(vn, 1e-300)):
        raise NotOrthogonal("tangent argument must be orthogonal to the direction")
    return w, v


# -- module-level operations ------------------------------------------------


def support(body: ConvexBody, w):
    return body.support(w)


def k_projection(body: ConvexBody, w):
    return body.k_projection(w)


def tangent_map(body: ConvexBody, w, v):
    return body.tangent_map(w, v)


def body_volume(body: ConvexBody) -> float:
    return body.volume()


def unit_directions(dim: int, samples: int):
    """Roughly uniform unit vectors: equal angles in 2D, Fibonacci points in 3D."""
    if dim == 2:
        t = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
        return np.stack([np.cos(t), np.sin(t)], axis=-1)
    i = np.arange(samples, dtype=float)
    golden = (1.0 + np.sqrt(5.0)) / 2.0
    z = 1.0 - (2.0 * i + 1.0) / samples
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = 2.0 * np.pi * i / golden
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


def tangent_basis(w):
    """Orthonormal basis of w-perp for each unit vector in w (shape (m, d))."""
    w = np.atleast_2d(np.asarray(w, dtype=float))
    m, d = w.shape
    if d == 2:
        e1 = np.stack([-w[:, 1], w[:, 0]], axis=-1)
        return e1[:, None, :]
    ref = np.zeros_like(w)
    ref[np.abs(w[:, 0]) < 0.9, 0] = 1.0
    ref[np.abs(w[:, 0]) >= 0.9, 1] = 1.0
    e1 = ref - w * np.einsum("ij,ij->i", ref, w)[:, None]
    e1 /= np.linalg.norm(e1, axis=-1)[:, None]
    e2 = np.cross(w, e1)
    return np.stack([e1, e2], axis=1)


def projection_differential_matrix(body: ConvexBody, w):
    """Matrix of the tangent map on w-perp in the basis from tangent_basis.

    w has shape (m, d); returns (m, n, n) with n = d - 1.
    """
    w = np.atleast_2d(np.asarray(w, dtype=float))
    basis = tangent_basis(w)
    n = basis.shape[1]
    mat = np.empty((w.shape[0], n, n))
    for j in range(n):
        qv = body.tangent_map(w, basis[:, j, :])
        for i in range(n):
            mat[:, i, j] = np.einsum("ij,ij->i", qv, basis[:, i, :])
    return mat


def ellipticity_bounds(body: ConvexBody, samples: int = 0) -> EllipticityBounds:
    """Extreme eigenvalues of the projection differential over sampled directions."""
    if samples == 0:
        samples = 1024 if body.dim == 2 else 2048
    if samples < 64:
        raise ValueError("need at least 64 sample directions")
    w = unit_directions(body.dim, samples)
    mat = projection_differential_matrix(body, w)
    sym = 0.5 * (mat + np.swapaxes(mat, 1, 2))
    eigs = np.linalg.eigvalsh(sym)
    a, b = float(eigs.min()), float(eigs.max())
    if a <= 0.0:
        raise InvalidBody("strict convexity violated numerically (a <= 0)")
    return EllipticityBounds(a, b)


def body_from_dict(data: dict) -> ConvexBody:
    """Inverse of ConvexBody.to_dict; validates keys strictly."""
    kind = data.get("kind")
    if kind == "ball":
        _require_keys(data, {"dim", "kind", "radius"})
        return Ball(data["radius"], dim=data["dim"])
    if kind == "ellipsoid":
        _require_keys(data, {"dim", "kind", "matrix"})
        d = data["dim"]
        A = np.asarray(data["matrix"], dtype=float).reshape(d, d)
        return Ellipsoid(A, dim=d)
    if kind == "fourier2d":
        _require_keys(data, {"dim", "kind", "a0", "cos", "sin"})
        if data["dim"] != 2:
            raise InvalidBody("fourier2d bodies are planar")
        return Fourier2D(data["a0"], cos=data["cos"], sin=data["sin"])
    raise InvalidBody(f"unknown body kind: {kind!r}")


def body_from_json(text: str) -> ConvexBody:
    return body_from_dict(json.loads(text))


def _require_keys(data: dict, allowed: set):
    extra = set(data) - allowed
    if extra:
        raise InvalidBody(f"unexpected body keys: {sorted(extra)}")
    missing = allowed - set(data)
    if missing:
        raise InvalidBody(f"missing body keys: {sorted(missing)}")
