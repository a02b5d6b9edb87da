"""Lp and logarithmic combinations of bodies, Wulff shapes and body flows.

Every combination that is not an exact Minkowski sum is returned as a Wulff
shape over a finite :class:`DirectionGrid`: the intersection of the halfspaces
``x . v <= f(v)`` for grid directions ``v``. Such a body contains the true
(infinite-direction) combination, so its volume is an upper bound that
decreases as the grid is refined.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from logbm.errors import InvalidLambda, InvalidP, NonpositiveFactor, OriginNotInterior, GeometryError
from logbm.geom_core.body import Body, make_hpoly, make_vpoly, dilate_body

DEFAULT_GRID_SIZE = {1: 2, 2: 720, 3: 2000}


# --------------------------------------------------------------------------
# direction grids
# --------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class DirectionGrid:
    """A finite set of unit directions (rows of ``directions``)."""

    directions: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        d = np.array(self.directions, dtype=float)
        if d.ndim != 2 or len(d) == 0:
            raise ValueError("directions must be a non-empty 2-D array")
        norms = np.linalg.norm(d, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero direction in grid")
        d = np.where(np.abs(norms - 1.0)[:, None] <= 2.0 ** -50, d, d / norms[:, None])
        d.setflags(write=False)
        object.__setattr__(self, "directions", d)

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    def __len__(self) -> int:
        return len(self.directions)

    @cached_property
    def mesh(self) -> float:
        """Largest angular distance from a grid direction to its nearest neighbour
        (2-D: largest gap between consecutive angles)."""
        d = self.directions
        if self.dim == 1:
            return math.pi
        if self.dim == 2:
            ang = np.sort(np.arctan2(d[:, 1], d[:, 0]))
            gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))
            return float(gaps.max())
        dist, _ = cKDTree(d).query(d, k=2)
        return float(2 * np.arcsin(min(dist[:, 1].max() / 2, 1.0)))

    @classmethod
    def circle(cls, m: int = 720, phase: float = 0.0) -> "DirectionGrid":
        ang = phase + 2 * math.pi * np.arange(m) / m
        return cls(np.column_stack([np.cos(ang), np.sin(ang)]), symmetric=m % 2 == 0)

    @classmethod
    def fibonacci(cls, count: int = 2000, symmetrize: bool = True) -> "DirectionGrid":
        """Fibonacci sphere points; with ``symmetrize`` the first half is mirrored."""
        m = count // 2 if symmetrize else count
        i = np.arange(m) + 0.5
        z = 1 - 2 * i / (m if not symmetrize else 2 * m)
        phi = math.pi * (3 - math.sqrt(5)) * i
        r = np.sqrt(1 - z * z)
        pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
        if symmetrize:
            pts = np.vstack([pts, -pts])
        return cls(pts, symmetric=symmetrize)

    @classmethod
    def coordinate(cls, n: int) -> "DirectionGrid":
        """The 2n directions ``±e_i`` (facet normals of the cube)."""
        eye = np.eye(n)
        return cls(np.vstack([eye, -eye]), symmetric=True)

    @classmethod
    def default(cls, n: int, size: int | None = None) -> "DirectionGrid":
        if n == 1:
            return cls.coordinate(1)
        if n == 2:
            return cls.circle(size or DEFAULT_GRID_SIZE[2])
        if n == 3:
            return cls.fibonacci(size or DEFAULT_GRID_SIZE[3])
        rng = np.random.default_rng(n)
        g = rng.standard_normal(((size or 40 * n) // 2, n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        return cls(np.vstack([np.eye(n), g, -np.eye(n), -g]), symmetric=True)

    def refine_with(self, extra) -> "DirectionGrid":
        extra = np.atleast_2d(np.asarray(extra, dtype=float))
        return DirectionGrid(np.vstack([self.directions, extra]), symmetric=False)

    def to_json(self) -> dict:
        return {"directions": self.directions.tolist(), "symmetric": self.symmetric}


def _grid_for(K, grid) -> DirectionGrid:
    return grid if grid is not None else DirectionGrid.default(K.dim)


def _check_lambda(lam) -> float:
    lam = float(lam)
    if not (0.0 <= lam <= 1.0):
        raise InvalidLambda(f"lambda must lie in [0, 1], got {lam}")
    return lam


# --------------------------------------------------------------------------
# Wulff shapes and combinations
# --------------------------------------------------------------------------
def wulff(grid: DirectionGrid, offsets) -> Body:
    """Intersection of ``{x : x . v <= f}`` over grid directions ``v`` with offsets ``f``."""
    return make_hpoly(grid.directions, offsets)


def lp_sum(K, L, alpha: float, beta: float, p: float, grid: DirectionGrid | None = None) -> Body:
    """Wulff shape of ``(alpha h_K^p + beta h_L^p)^{1/p}`` on ``grid`` (p > 0)."""
    g = _grid_for(K, grid)
    hK = np.asarray(K.support(g.directions))
    hL = np.asarray(L.support(g.directions))
    return wulff(g, (alpha * hK ** p + beta * hL ** p) ** (1.0 / p))


def minkowski_sum(K: Body, L: Body, alpha: float = 1.0, beta: float = 1.0) -> Body:
    """Exact ``alpha K + beta L`` through the hull of pairwise vertex sums (n <= 3)."""
    if K.dim != L.dim:
        from logbm.errors import DimensionMismatch

        raise DimensionMismatch("bodies live in different dimensions")
    pts = (alpha * K.vertices[:, None, :] + beta * L.vertices[None, :, :]).reshape(-1, K.dim)
    return make_vpoly(pts)


def lp_combine(K, L, lam: float, p: float, grid: DirectionGrid | None = None) -> Body:
    """``lam K +_p (1 - lam) L``.

    For ``p = 1`` between planar polytopes the exact Minkowski sum is returned;
    otherwise the Wulff shape of the p-mean of the support functions on
    ``grid``. ``p = 0`` is the logarithmic combination and ``0 < p < 1`` is the
    Wulff shape of the (non-convex) p-mean.
    """
    lam = _check_lambda(lam)
    p = float(p)
    if not p >= 0 or math.isinf(p):
        raise InvalidP(f"p must be a finite nonnegative number, got {p}")
    if p == 0:
        return log_combine(K, L, lam, grid)
    exact = isinstance(K, Body) and isinstance(L, Body) and K.vertices is not None and L.vertices is not None
    if p == 1 and K.dim == 2 and exact:
        if lam in (0.0, 1.0):
            return K if lam == 1.0 else L
        return minkowski_sum(K, L, lam, 1.0 - lam)
    return lp_sum(K, L, lam, 1.0 - lam, p, grid)


def log_offsets(hK: np.ndarray, hL: np.ndarray, lam: float) -> np.ndarray:
    return hK ** lam * hL ** (1.0 - lam)


def log_combine(K, L, lam: float, grid: DirectionGrid | None = None) -> Body:
    """Logarithmic combination: Wulff shape of ``h_K^lam h_L^{1-lam}`` on ``grid``."""
    lam = _check_lambda(lam)
    g = _grid_for(K, grid)
    hK = np.asarray(K.support(g.directions))
    hL = np.asarray(L.support(g.directions))
    return wulff(g, log_offsets(hK, hL, lam))


def dilate(body: Body, factor: float) -> Body:
    if not factor > 0:
        raise NonpositiveFactor(f"dilation factor must be positive, got {factor}")
    return dilate_body(body, float(factor))


# --------------------------------------------------------------------------
# flows
# --------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class FlowSpec:
    """Diagonal exponent vector ``(a_1, ..., a_n)`` of the flow ``t -> e^{At}``."""

    exponents: np.ndarray

    def __post_init__(self):
        a = np.array(self.exponents, dtype=float).ravel()
        if not np.all(np.isfinite(a)):
            raise ValueError("flow exponents must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "exponents", a)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    @property
    def trace(self) -> float:
        return float(self.exponents.sum())

    def scaling(self, t: float) -> np.ndarray:
        return np.exp(self.exponents * t)

    def matrix(self, t: float) -> np.ndarray:
        return np.diag(self.scaling(t))

    def to_json(self) -> dict:
        return {"exponents": self.exponents.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "FlowSpec":
        return cls(data["exponents"])


def cube_flow(A: FlowSpec, t: float) -> Body:
    """The box ``e^{At} C_n`` with constraints ``±e_i`` in coordinate order."""
    n = A.dim
    eye = np.eye(n)
    s = A.scaling(t)
    return make_hpoly(np.vstack([eye, -eye]), np.concatenate([s, s]))


@dataclass(frozen=True, eq=False)
class VertexFlow:
    """Polytope family ``P_t = conv{e^{a_i t} x_i}`` for ``t`` in ``window``."""

    points: np.ndarray
    exponents: np.ndarray
    window: tuple = field(default=(-1.0, 1.0))

    def __post_init__(self):
        x = np.array(self.points, dtype=float)
        a = np.array(self.exponents, dtype=float).ravel()
        if x.ndim != 2 or len(a) != len(x):
            raise ValueError("points and exponents must have matching lengths")
        if len(x) < x.shape[1] + 1:
            raise ValueError("a vertex flow needs at least n + 1 points")
        t1, t2 = (float(w) for w in self.window)
        if not t1 < t2:
            raise ValueError("window must satisfy t1 < t2")
        x.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "points", x)
        object.__setattr__(self, "exponents", a)
        object.__setattr__(self, "window", (t1, t2))
        for t in np.linspace(t1, t2, 32):
            try:
                self.at(t)
            except GeometryError as exc:
                raise OriginNotInterior(f"P_t loses the origin at t={t:.4g}") from exc

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def at(self, t: float) -> Body:
        return make_vpoly(self.points * np.exp(self.exponents * t)[:, None])

    def to_json(self) -> dict:
        return {
            "points": self.points.tolist(),
            "exponents": self.exponents.tolist(),
            "window": list(self.window),
        }

    @classmethod
    def from_json(cls, data: dict) -> "VertexFlow":
        return cls(data["points"], data["exponents"], tuple(data.get("window", (-1.0, 1.0))))


def vertex_flow_body(flow: VertexFlow, t: float) -> Body:
    t1, t2 = flow.window
    if not t1 - 1e-12 <= t <= t2 + 1e-12:
        raise OriginNotInterior(f"t={t} lies outside the flow window {flow.window}")
    return flow.at(t)
