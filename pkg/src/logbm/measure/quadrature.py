"""Quadrature on the unit sphere and integration in polar coordinates.

For a star body with gauge ``g`` and a function ``f`` homogeneous of degree
``q``:

    int_K f(x) dx = 1/(n+q) * int_{S^{n-1}} f(theta) g(theta)^{-(n+q)} dtheta
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from logbm.combine import DirectionGrid
from logbm.sample import sphere_uniform


def sphere_area(n: int) -> float:
    """(n-1)-dimensional area of S^{n-1}."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


def ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    directions: np.ndarray
    weights: np.ndarray

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def equal_weights(grid: DirectionGrid) -> SphereQuadrature:
    n = grid.dim
    return SphereQuadrature(grid.directions, np.full(len(grid), sphere_area(n) / len(grid)))


def arc_quadrature(breaks, order: int = 8, max_arc: float = 2 * math.pi / 90) -> SphereQuadrature:
    """Gauss-Legendre rule on the circle split at ``breaks`` (angles).

    Integrands that are smooth between the breakpoints are integrated to
    near machine precision.
    """
    b = np.mod(np.asarray(breaks, dtype=float), 2 * math.pi)
    base = np.linspace(0.0, 2 * math.pi, int(math.ceil(2 * math.pi / max_arc)), endpoint=False)
    b = np.unique(np.concatenate([b, base]))
    b = b[np.concatenate([[True], np.diff(b) > 1e-13])]
    ends = np.concatenate([b[1:], [b[0] + 2 * math.pi]])
    x, w = np.polynomial.legendre.leggauss(order)
    half = (ends - b) / 2
    mid = (ends + b) / 2
    ang = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return SphereQuadrature(np.column_stack([np.cos(ang), np.sin(ang)]), wts)


def default_quadrature(n: int, size: int | None = None, kinks=None) -> SphereQuadrature:
    if n == 2 and kinks is not None:
        return arc_quadrature(kinks)
    if n >= 4:
        dirs = sphere_uniform(n, size or 20000, 0)
        return SphereQuadrature(dirs, np.full(len(dirs), sphere_area(n) / len(dirs)))
    return equal_weights(DirectionGrid.default(n, size))


def as_quadrature(quad, n: int) -> SphereQuadrature:
    if quad is None:
        return default_quadrature(n)
    if isinstance(quad, SphereQuadrature):
        return quad
    if isinstance(quad, DirectionGrid):
        return equal_weights(quad)
    if isinstance(quad, tuple) and quad and quad[0] == "mc":
        _, count, seed = quad
        dirs = sphere_uniform(n, int(count), seed)
        return SphereQuadrature(dirs, np.full(len(dirs), sphere_area(n) / len(dirs)))
    raise TypeError(f"cannot interpret {quad!r} as a sphere quadrature")


def _gauge_values(gauge, dirs):
    fn = gauge.gauge if hasattr(gauge, "gauge") else gauge
    return np.asarray(fn(dirs), dtype=float)


def polar_integral(gauge, dim: int, f=None, degree: float = 0.0, quad=None) -> float:
    """int_K f for ``K = {gauge <= 1}`` and ``f`` homogeneous of the given degree."""
    q = as_quadrature(quad, dim)
    g = _gauge_values(gauge, q.directions)
    fv = 1.0 if f is None else np.asarray(f(q.directions), dtype=float)
    return q.integrate(fv * g ** (-(dim + degree))) / (dim + degree)


def volume_sphere(gauge, dim: int | None = None, quad=None) -> float:
    """Volume of ``{gauge <= 1}``: ``(1/n) int_S gauge^{-n}``."""
    n = dim if dim is not None else gauge.dim
    return polar_integral(gauge, n, quad=quad)
