"""Composite Gauss-Legendre quadrature on intervals and rectangles."""

from __future__ import annotations

import numpy as np


def gauss_panels(a: float, b: float, panels: int, nodes: int = 16):
    """Composite Gauss-Legendre rule on [a, b].

    Returns (points, weights) as 1-d arrays of length panels * nodes.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, panels + 1)
    lo = edges[:-1][:, None]
    hi = edges[1:][:, None]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = (mid + half * x[None, :]).ravel()
    wts = (half * w[None, :]).ravel()
    return pts, wts


def gauss_rectangle(urange, vrange, upanels: int, vpanels: int, nodes: int = 16):
    """Tensor-product composite rule on a parameter rectangle.

    Returns flattened (u, v, w) arrays.
    """
    us, wu = gauss_panels(urange[0], urange[1], upanels, nodes)
    vs, wv = gauss_panels(vrange[0], vrange[1], vpanels, nodes)
    U, V = np.meshgrid(us, vs, indexing="ij")
    W = np.outer(wu, wv)
    return U.ravel(), V.ravel(), W.ravel()
