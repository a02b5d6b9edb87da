"""Exact convex hulls in dimensions 1, 2 and 3.

The hull of a point set is returned as the extreme-point indices together with
the facet list: outward unit normal, offset and the ordered indices of the
facet's vertices. Polarity turns every H-representation question into a hull
of the dual points ``v_i / b_i``, so this is the single enumeration primitive
used by :mod:`logbm.geom_core.body`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from logbm.errors import DegenerateBody

# relative distance below which points count as collinear/coplanar
PLANAR_TOL = 1e-12
COPLANAR_TOL_3D = 1e-10


@dataclass(frozen=True)
class HullData:
    extreme: np.ndarray          # sorted indices of the extreme input points
    normals: np.ndarray          # (f, n) outward unit normals
    offsets: np.ndarray          # (f,) signed offsets n . x for x on the facet
    facets: tuple                # f int arrays of input indices, ordered


def _scale(points: np.ndarray) -> float:
    s = float(np.abs(points).max(initial=0.0))
    return s if s > 0 else 1.0


def _cross2(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_polygon(pts: np.ndarray, tol: float) -> list[int]:
    """Counter-clockwise indices of the extreme points of a planar set.

    Monotone chain; a point within distance ``tol`` of the current hull edge is
    treated as collinear and dropped.
    """
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts_l = pts.tolist()

    def chain(seq):
        out: list[int] = []
        for i in seq:
            while len(out) >= 2:
                a, b = pts_l[out[-2]], pts_l[out[-1]]
                length = np.hypot(b[0] - a[0], b[1] - a[1])
                if _cross2(a, b, pts_l[i]) <= tol * max(length, tol):
                    out.pop()
                else:
                    break
            out.append(int(i))
        return out

    lower = chain(order)
    upper = chain(order[::-1])
    return lower[:-1] + upper[:-1]


def _hull1(points: np.ndarray) -> HullData:
    x = points[:, 0]
    lo, hi = int(np.argmin(x)), int(np.argmax(x))
    if x[hi] - x[lo] <= PLANAR_TOL * _scale(points):
        raise DegenerateBody("points span no segment")
    return HullData(
        extreme=np.array(sorted({lo, hi})),
        normals=np.array([[-1.0], [1.0]]),
        offsets=np.array([-x[lo], x[hi]]),
        facets=(np.array([lo]), np.array([hi])),
    )


def _hull2(points: np.ndarray) -> HullData:
    scale = _scale(points)
    ring = convex_polygon(points, PLANAR_TOL * scale)
    if len(ring) < 3:
        raise DegenerateBody("points are collinear")
    k = len(ring)
    normals, offsets, facets = [], [], []
    for j in range(k):
        a, b = points[ring[j]], points[ring[(j + 1) % k]]
        d = b - a
        nrm = np.array([d[1], -d[0]]) / np.hypot(d[0], d[1])
        normals.append(nrm)
        offsets.append(float(nrm @ a))
        facets.append(np.array([ring[j], ring[(j + 1) % k]]))
    return HullData(np.array(sorted(ring)), np.array(normals), np.array(offsets), tuple(facets))


def plane_basis(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal ``e1, e2`` with ``e1 x e2 = normal``."""
    helper = np.eye(3)[int(np.argmin(np.abs(normal)))]
    e1 = np.cross(helper, normal)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    return e1, e2


def _hull3(points: np.ndarray) -> HullData:
    scale = _scale(points)
    centered = points - points.mean(axis=0)
    if np.linalg.svd(centered, compute_uv=False)[-1] <= PLANAR_TOL * scale:
        raise DegenerateBody("points are coplanar")
    try:
        hull = ConvexHull(points)
    except QhullError as exc:  # pragma: no cover - guarded by the rank test
        raise DegenerateBody(str(exc)) from exc

    simp, nb = hull.simplices, hull.neighbors
    nrm = hull.equations[:, :3]
    off = -hull.equations[:, 3]
    f = len(simp)
    parent = list(range(f))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    tol = COPLANAR_TOL_3D * scale
    for k in range(3):
        j = nb[:, k]
        dist = np.abs(np.einsum("fd,fvd->fv", nrm, points[simp[j]]) - off[:, None]).max(axis=1)
        for i in np.flatnonzero(dist <= tol):
            ri, rj = find(int(i)), find(int(j[i]))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[int]] = {}
    for i in range(f):
        groups.setdefault(find(i), []).append(i)

    tri = points[simp]
    areas = 0.5 * np.linalg.norm(np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]), axis=1)

    normals, offsets, facets = [], [], []
    for members in groups.values():
        w = areas[members]
        n = (nrm[members] * w[:, None]).sum(axis=0)
        n /= np.linalg.norm(n)
        idx = np.unique(simp[members])
        e1, e2 = plane_basis(n)
        flat = np.column_stack([points[idx] @ e1, points[idx] @ e2])
        ring = convex_polygon(flat, tol)
        verts = idx[ring]
        normals.append(n)
        offsets.append(float((points[verts] @ n).mean()))
        facets.append(verts)
    extreme = np.unique(np.concatenate(facets))
    return HullData(extreme, np.array(normals), np.array(offsets), tuple(facets))


def hull(points) -> HullData:
    """Hull of ``points`` (shape ``(m, n)``, ``n`` in {1, 2, 3})."""
    points = np.asarray(points, dtype=float)
    n = points.shape[1]
    if points.shape[0] < n + 1:
        raise DegenerateBody(f"need at least {n + 1} points in dimension {n}")
    if n == 1:
        return _hull1(points)
    if n == 2:
        return _hull2(points)
    if n == 3:
        return _hull3(points)
    raise ValueError("exact hulls are only available for n <= 3")


def polygon_area(ring_pts: np.ndarray) -> float:
    """Signed shoelace area of an ordered planar polygon."""
    x, y = ring_pts[:, 0], ring_pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def facet_area(verts: np.ndarray, normal: np.ndarray) -> float:
    """(n-1)-volume of an ordered facet polygon in dimension n <= 3."""
    if verts.shape[1] == 1:
        return 1.0
    if verts.shape[1] == 2:
        return float(np.linalg.norm(verts[1] - verts[0]))
    c = np.cross(verts[1:-1] - verts[0], verts[2:] - verts[0])
    return 0.5 * float(np.abs(c @ normal).sum())
