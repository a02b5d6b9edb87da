"""Quermassintegrals: Kubota averages of projection volumes, exact planar and
spatial formulas for polytopes, and least-squares Steiner polynomials."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from logbm.combine import DirectionGrid, minkowski_sum
from logbm.errors import IllConditionedFit, UnsupportedDimension
from logbm.geom_core.body import Body, make_vpoly, regular_polygon
from logbm.measure.mc import Estimate, exact, mc_mean
from logbm.measure.quadrature import ball_volume
from logbm.measure.volume import facet_areas, volume
from logbm.sample import as_seed, haar_frame


def _projection_volume(body, frame: np.ndarray) -> float:
    k = frame.shape[0]
    if k == 1:
        u = frame[0]
        return float(body.support(u) + body.support(-u))
    if body.vertices is None or k > 3:
        raise UnsupportedDimension("projection volume needs vertices and target dimension <= 3")
    return volume(make_vpoly(body.vertices @ frame.T))


def kubota(body, i: int, n_subspaces: int = 2000, seed=0) -> Estimate:
    """``(omega_n / omega_{n-i}) E |K|H|`` over Haar-random (n-i)-subspaces ``H``."""
    n = body.dim
    k = n - i
    const = ball_volume(n) / ball_volume(k)

    def draw(rng, count):
        return np.array([_projection_volume(body, haar_frame(rng, n, k)) for _ in range(count)])

    seed = as_seed(seed)
    res = mc_mean(draw, n_subspaces, seed)
    return Estimate(const * float(res.mean[0]), const * float(res.stderr()[0]), res.n_samples, seed)


def dihedral_sum(body: Body) -> float:
    """Sum over edges of length times the angle between the adjacent facet normals (n = 3)."""
    V = body.vertices
    edges: dict[tuple[int, int], list[int]] = {}
    for fi, f in enumerate(body.facets):
        for a, b in zip(f, np.roll(f, -1)):
            edges.setdefault((min(a, b), max(a, b)), []).append(fi)
    total = 0.0
    for (a, b), fs in edges.items():
        if len(fs) != 2:  # pragma: no cover - closed polytope surfaces pair every edge
            continue
        c = float(np.clip(body.normals[fs[0]] @ body.normals[fs[1]], -1.0, 1.0))
        total += float(np.linalg.norm(V[a] - V[b])) * math.acos(c)
    return total


def quermass_exact(body: Body, i: int) -> float:
    n = body.dim
    if i == 0:
        return volume(body)
    if i == n:
        return ball_volume(n)
    if body.facets is None:
        raise UnsupportedDimension("exact quermassintegrals need facets (n <= 3)")
    if n == 2:
        return 0.5 * float(facet_areas(body).sum())
    if n == 3 and i == 1:
        return float(facet_areas(body).sum()) / 3.0
    if n == 3 and i == 2:
        return dihedral_sum(body) / 6.0
    raise UnsupportedDimension(f"no exact formula for W_{i} in dimension {n}")


def quermass(body, i: int, n_subspaces: int = 2000, seed=0, method: str = "kubota") -> Estimate:
    """W_i(K). ``method`` is ``"kubota"`` (Monte-Carlo), ``"exact"`` (polytopes,
    n <= 3) or ``"auto"`` (exact when available)."""
    n = body.dim
    if not 0 <= i <= n:
        raise ValueError(f"index i must lie in [0, {n}]")
    if i == n:
        return exact(ball_volume(n))
    if i == 0:
        if isinstance(body, Body) and body.facets is not None:
            return exact(volume(body))
        raise UnsupportedDimension("volume is unavailable for this body")
    if method == "auto":
        method = "exact" if isinstance(body, Body) and body.facets is not None else "kubota"
    if method == "exact":
        return exact(quermass_exact(body, i))
    if method == "kubota":
        return kubota(body, i, n_subspaces, seed)
    raise ValueError(f"unknown quermass method {method!r}")


@dataclass(frozen=True)
class SteinerFit:
    t_grid: np.ndarray
    volumes: np.ndarray
    coefficients: np.ndarray   # c_i with |K + tB| ~ sum c_i t^i
    quermass: np.ndarray       # c_i / binom(n, i)
    residual: float
    condition: float


def ball_polytope(n: int) -> Body:
    """Inscribed polytope standing in for the Euclidean unit ball."""
    if n == 1:
        return make_vpoly([[-1.0], [1.0]])
    if n == 2:
        return regular_polygon(720)
    if n == 3:
        return make_vpoly(DirectionGrid.fibonacci(2000).directions)
    raise UnsupportedDimension("Steiner fits are limited to n <= 3")


def steiner_fit(body: Body, t_grid=None, max_condition: float = 1e10) -> SteinerFit:
    """Fit ``|K + tB| = sum_i binom(n, i) W_i t^i`` from exact volumes on ``t_grid``."""
    n = body.dim
    t = np.linspace(0.1, 1.0, n + 4) if t_grid is None else np.asarray(t_grid, dtype=float)
    if len(t) < n + 1 or np.any(t <= 0):
        raise ValueError("t_grid needs at least n + 1 positive points")
    B = ball_polytope(n)
    vols = np.array([volume(minkowski_sum(body, B, 1.0, float(s))) for s in t])
    X = np.vander(t, n + 1, increasing=True)
    cond = float(np.linalg.cond(X))
    if cond > max_condition:
        raise IllConditionedFit(f"Vandermonde condition number {cond:.3g} is too large")
    coef, *_ = np.linalg.lstsq(X, vols, rcond=None)
    resid = float(np.linalg.norm(X @ coef - vols))
    binom = np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)
    return SteinerFit(t, vols, coef, coef / binom, resid, cond)
