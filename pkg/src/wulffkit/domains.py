"""Ambient convex regions with boundary normal and curvature data.

Each domain answers membership queries, reports the inner unit normal and
the (scalar) second fundamental form of its boundary, and helps build the
closure paths used when integrating volumes of regions bounded partly by
the domain walls.
"""

from __future__ import annotations

import numpy as np

from .errors import NotOnBoundary

BOUNDARY_TOL = 1e-8


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


class Domain:
    kind: str
    dim: int

    def contains(self, points, tol: float = 0.0):
        raise NotImplementedError

    def boundary_distance(self, p) -> float:
        """Distance from p to the boundary (p assumed inside or near it)."""
        raise NotImplementedError

    def inner_normal(self, p):
        raise NotImplementedError

    def second_form(self, p, v) -> float:
        """II(v_tan, v_tan) of the boundary at p with respect to the inner normal."""
        return 0.0

    def require_on_boundary(self, p, tol: float = BOUNDARY_TOL):
        d = self.boundary_distance(p)
        if d > tol:
            raise NotOnBoundary(f"point {np.asarray(p)} is {d:.2e} from the wall")


class FullSpace(Domain):
    kind = "full_space"

    def __init__(self, dim: int = 2):
        self.dim = dim

    def contains(self, points, tol: float = 0.0):
        pts = np.asarray(points, dtype=float)
        return np.ones(pts.shape[:-1], dtype=bool)

    def boundary_distance(self, p) -> float:
        return np.inf

    def inner_normal(self, p):
        raise NotOnBoundary("full space has no boundary")


class HalfSpace(Domain):
    """Points x with <x - anchor, xi> >= 0."""

    kind = "half_space"

    def __init__(self, xi, anchor=None, dim: int | None = None):
        self.xi = _unit(xi)
        self.dim = dim if dim is not None else self.xi.size
        self.anchor = (np.zeros(self.dim) if anchor is None
                       else np.asarray(anchor, dtype=float))

    def _height(self, points):
        pts = np.asarray(points, dtype=float)
        return np.einsum("...i,i->...", pts - self.anchor, self.xi)

    def contains(self, points, tol: float = 0.0):
        return self._height(points) >= -tol

    def boundary_distance(self, p) -> float:
        return float(np.abs(self._height(p)))

    def inner_normal(self, p):
        return self.xi.copy()


class Slab(Domain):
    """Region 0 <= <x, xi> <= width."""

    kind = "slab"

    def __init__(self, width: float, xi=(0.0, 1.0)):
        if width <= 0:
            raise ValueError("slab width must be positive")
        self.width = float(width)
        self.xi = _unit(xi)
        self.dim = self.xi.size

    def _height(self, points):
        return np.einsum("...i,i->...", np.asarray(points, dtype=float), self.xi)

    def contains(self, points, tol: float = 0.0):
        h = self._height(points)
        return (h >= -tol) & (h <= self.width + tol)

    def boundary_distance(self, p) -> float:
        h = float(self._height(p))
        return min(abs(h), abs(self.width - h))

    def inner_normal(self, p):
        h = float(self._height(p))
        return self.xi.copy() if abs(h) <= abs(self.width - h) else -self.xi


class PolyhedralCone(Domain):
    """Intersection of half-spaces through a common apex."""

    kind = "polyhedral_cone"

    def __init__(self, normals, apex=None):
        self.normals = np.atleast_2d(np.asarray(normals, dtype=float))
        self.normals /= np.linalg.norm(self.normals, axis=-1)[:, None]
        self.dim = self.normals.shape[1]
        self.apex = (np.zeros(self.dim) if apex is None
                     else np.asarray(apex, dtype=float))

    def _heights(self, points):
        pts = np.asarray(points, dtype=float)
        return np.einsum("...i,ji->...j", pts - self.apex, self.normals)

    def contains(self, points, tol: float = 0.0):
        return np.all(self._heights(points) >= -tol, axis=-1)

    def boundary_distance(self, p) -> float:
        return float(np.min(np.abs(self._heights(p))))

    def inner_normal(self, p):
        h = np.abs(self._heights(p))
        return self.normals[int(np.argmin(h))].copy()

    def angular_interval(self):
        """Direction angles [t0, t1] spanned by a planar cone."""
        if self.dim != 2:
            raise ValueError("angular_interval is for planar cones")
        centers = np.arctan2(self.normals[:, 1], self.normals[:, 0])
        lo = centers[0] - np.pi / 2.0
        hi = centers[0] + np.pi / 2.0
        for c in centers[1:]:
            # lift this half-plane's interval near the current one
            c = c + 2.0 * np.pi * np.round((0.5 * (lo + hi) - c) / (2.0 * np.pi))
            lo = max(lo, c - np.pi / 2.0)
            hi = min(hi, c + np.pi / 2.0)
        if hi <= lo:
            raise ValueError("cone has empty interior")
        return float(lo), float(hi)

    def solid_angle_fraction_3d(self):
        raise NotImplementedError("use Monte Carlo volume estimates in 3D")


def half_plane_cone(xi, apex=None) -> PolyhedralCone:
    return PolyhedralCone([xi], apex=apex)


def quarter_plane() -> PolyhedralCone:
    return PolyhedralCone([[1.0, 0.0], [0.0, 1.0]])


def octant() -> PolyhedralCone:
    return PolyhedralCone(np.eye(3))


class Polygon2D(Domain):
    """Convex polygon with counterclockwise vertices."""

    kind = "polygon2d"
    dim = 2

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or V.shape[0] < 3:
            raise ValueError("need at least 3 plane vertices")
        e1 = np.roll(V, -1, axis=0) - V
        e2 = np.roll(V, -2, axis=0) - np.roll(V, -1, axis=0)
        cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        if np.any(cross <= 0):
            raise ValueError("vertices must be strictly convex, counterclockwise")
        self.vertices = V
        edges = np.roll(V, -1, axis=0) - V
        lengths = np.linalg.norm(edges, axis=-1)
        tang = edges / lengths[:, None]
        # inner normal of a CCW polygon edge is the left-rotated tangent
        self.edge_normals = np.stack([-tang[:, 1], tang[:, 0]], axis=-1)
        self.edge_lengths = lengths
        self.cum_lengths = np.concatenate([[0.0], np.cumsum(lengths)])
        self.perimeter = float(self.cum_lengths[-1])

    def area(self) -> float:
        V = self.vertices
        W = np.roll(V, -1, axis=0)
        return 0.5 * float(np.sum(V[:, 0] * W[:, 1] - V[:, 1] * W[:, 0]))

    def _heights(self, points):
        pts = np.asarray(points, dtype=float)
        return np.einsum("...ji,ji->...j",
                         pts[..., None, :] - self.vertices, self.edge_normals)

    def contains(self, points, tol: float = 0.0):
        return np.all(self._heights(points) >= -tol, axis=-1)

    def boundary_distance(self, p) -> float:
        return float(np.min(np.abs(self._heights(p))))

    def nearest_edge(self, p) -> int:
        return int(np.argmin(np.abs(self._heights(p))))

    def inner_normal(self, p):
        return self.edge_normals[self.nearest_edge(p)].copy()

    def point_at(self, s: float):
        """Boundary point at arclength s from vertex 0, counterclockwise."""
        s = float(np.mod(s, self.perimeter))
        i = int(np.searchsorted(self.cum_lengths, s, side="right") - 1)
        i = min(i, len(self.edge_lengths) - 1)
        t = (s - self.cum_lengths[i]) / self.edge_lengths[i]
        a = self.vertices[i]
        b = self.vertices[(i + 1) % len(self.vertices)]
        return a + t * (b - a)

    def arclength_of(self, p) -> float:
        i = self.nearest_edge(p)
        a = self.vertices[i]
        return float(self.cum_lengths[i]
                     + np.linalg.norm(np.asarray(p, float) - a))

    def support_cone(self, vertex_index: int) -> PolyhedralCone:
        """Smallest cone at a vertex containing the polygon."""
        m = len(self.vertices)
        i = vertex_index % m
        return PolyhedralCone(
            [self.edge_normals[(i - 1) % m], self.edge_normals[i]],
            apex=self.vertices[i])

    def boundary_closure(self, p_end, p_start):
        """Segment pieces from p_end to p_start counterclockwise along the boundary."""
        s0 = self.arclength_of(p_end)
        s1 = self.arclength_of(p_start)
        if s1 <= s0 + 1e-14:
            s1 += self.perimeter
        pieces = []
        cur = np.asarray(p_end, dtype=float)
        # vertices passed between the two arclengths
        ks = [c for c in np.concatenate([self.cum_lengths[:-1],
                                         self.cum_lengths[:-1] + self.perimeter])
              if s0 + 1e-12 < c < s1 - 1e-12]
        for c in sorted(ks):
            nxt = self.point_at(c)
            if np.linalg.norm(nxt - cur) > 1e-14:
                pieces.append(("segment", cur.copy(), nxt.copy()))
            cur = nxt
        tgt = np.asarray(p_start, dtype=float)
        if np.linalg.norm(tgt - cur) > 1e-14:
            pieces.append(("segment", cur.copy(), tgt.copy()))
        return pieces


def unit_square() -> Polygon2D:
    return Polygon2D([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


class Disk2D(Domain):
    kind = "disk2d"
    dim = 2

    def __init__(self, center=(0.0, 0.0), radius: float = 1.0):
        if radius <= 0:
            raise ValueError("disk radius must be positive")
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)

    def contains(self, points, tol: float = 0.0):
        pts = np.asarray(points, dtype=float)
        return np.linalg.norm(pts - self.center, axis=-1) <= self.radius + tol

    def boundary_distance(self, p) -> float:
        r = float(np.linalg.norm(np.asarray(p, float) - self.center))
        return abs(self.radius - r)

    def inner_normal(self, p):
        return _unit(self.center - np.asarray(p, dtype=float))

    def second_form(self, p, v) -> float:
        xi = self.inner_normal(p)
        v = np.asarray(v, dtype=float)
        vt = v - np.dot(v, xi) * xi
        return float(np.dot(vt, vt)) / self.radius

    def area(self) -> float:
        return np.pi * self.radius**2

    def angle_of(self, p) -> float:
        d = np.asarray(p, dtype=float) - self.center
        return float(np.arctan2(d[1], d[0]))

    def boundary_closure(self, p_end, p_start, ccw: bool = True):
        """Circle arc from p_end to p_start, counterclockwise by default."""
        a0 = self.angle_of(p_end)
        a1 = self.angle_of(p_start)
        if ccw:
            while a1 <= a0 + 1e-14:
                a1 += 2.0 * np.pi
        else:
            while a1 >= a0 - 1e-14:
                a1 -= 2.0 * np.pi
        return [("arc", self.center.copy(), self.radius, a0, a1)]


def wall_closure(points):
    """Straight closure pieces through the given polyline points, in order."""
    pts = [np.asarray(p, dtype=float) for p in points]
    return [("segment", a, b) for a, b in zip(pts[:-1], pts[1:])]


def domain_from_dict(data: dict) -> Domain:
    kind = data.get("kind")
    if kind == "full_space":
        return FullSpace(dim=int(data.get("dim", 2)))
    if kind == "half_space":
        return HalfSpace(data["xi"], anchor=data.get("anchor"))
    if kind == "slab":
        return Slab(data["width"], xi=data.get("xi", (0.0, 1.0)))
    if kind == "polyhedral_cone":
        return PolyhedralCone(data["normals"], apex=data.get("apex"))
    if kind == "polygon2d":
        return Polygon2D(data["vertices"])
    if kind == "disk2d":
        return Disk2D(center=data.get("center", (0.0, 0.0)),
                      radius=data.get("radius", 1.0))
    raise ValueError(f"unknown domain kind: {kind!r}")
