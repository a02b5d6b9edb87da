"""Exact and Monte-Carlo volumes, and the cone-volume measure."""
from __future__ import annotations

import numpy as np

from logbm.errors import UnsupportedDimension
from logbm.geom_core.body import Body
from logbm.geom_core.hull import facet_area
from logbm.measure.mc import Estimate, mc_mean
from logbm.sample import as_seed, sample_box


def volume(body: Body) -> float:
    """Exact volume for n <= 3, as a sum of origin-coned simplices over facets."""
    if body.vertices is None or body.facets is None:
        raise UnsupportedDimension(f"exact volume is unavailable in dimension {body.dim}")
    V = body.vertices
    if body.dim == 1:
        return float(V.max() - V.min())
    if body.dim == 2:
        a = np.array([V[f[0]] for f in body.facets])
        b = np.array([V[f[1]] for f in body.facets])
        return float(0.5 * np.abs(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]).sum())
    total = 0.0
    for f in body.facets:
        p0 = V[f[0]]
        tri = np.cross(V[f[1:-1]], V[f[2:]])
        total += abs(float((tri @ p0).sum()))
    return total / 6.0


def box_volume(lo, hi) -> float:
    return float(np.prod(np.asarray(hi) - np.asarray(lo)))


def volume_mc(body, n_samples: int = 10**6, seed=0) -> Estimate:
    """Hit-or-miss volume estimate from uniform draws in the bounding box."""
    lo, hi = body.bounding_box()
    vol_box = box_volume(lo, hi)

    def draw(rng, count):
        return (body.gauge(sample_box(rng, lo, hi, count)) <= 1.0).astype(float)

    res = mc_mean(draw, n_samples, seed)
    p = float(res.mean[0])
    se = vol_box * float(np.sqrt(p * (1 - p) / res.n_samples))
    return Estimate(vol_box * p, se, res.n_samples, as_seed(seed))


def cone_volume(body: Body) -> np.ndarray:
    """Mass ``h_K(u_F) |F| / n`` of each facet ``F``; the masses sum to the volume."""
    if body.vertices is None or body.facets is None:
        raise UnsupportedDimension("cone volumes need exact facets (n <= 3)")
    areas = np.array([facet_area(body.vertices[f], u) for f, u in zip(body.facets, body.normals)])
    return body.offsets * areas / body.dim


def facet_areas(body: Body) -> np.ndarray:
    return np.array([facet_area(body.vertices[f], u) for f, u in zip(body.facets, body.normals)])
