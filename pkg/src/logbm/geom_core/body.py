"""Convex polytopes containing the origin in their interior.

A :class:`Body` remembers the representation it was built from (``"H"`` for
halfspaces ``x . v_i <= b_i`` with unit ``v_i``, ``"V"`` for a vertex list).
In dimension <= 3 both representations are enumerated eagerly and kept
irredundant, which makes polarity a relabelling:

    H {x . v_i <= b_i}  <->  V conv{v_i / b_i}

In dimension >= 4 only the given representation is stored and the other one
is reached through linear programs (:mod:`logbm.geom_core.lp`).
"""
from __future__ import annotations

import numpy as np

from logbm.errors import (
    DegenerateBody,
    DimensionMismatch,
    EmptySection,
    NonpositiveOffset,
    OriginNotInterior,
    SingularMatrix,
    UnboundedBody,
    UnsupportedDimension,
)
from logbm.geom_core import lp
from logbm.geom_core.hull import PLANAR_TOL, hull, plane_basis

EXACT_MAX_DIM = 3
_INTERIOR_TOL = 1e-12
_UNIT_TOL = 2.0 ** -50


def _unit_rows(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Normalize rows; rows already unit to a few ulps are left untouched so
    repeated normalization (e.g. a JSON round trip) is bit-stable."""
    norms = np.linalg.norm(v, axis=1)
    keep = np.abs(norms - 1.0) <= _UNIT_TOL
    scale = np.where(keep, 1.0, norms)
    return v / scale[:, None], scale


def _transpose(facets, n_points: int) -> list[list[int]]:
    inc: list[list[int]] = [[] for _ in range(n_points)]
    for f, verts in enumerate(facets):
        for v in verts:
            inc[v].append(f)
    return inc


def _ordered(idx, coords: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Order the points ``coords[idx]`` counter-clockwise around ``normal``."""
    idx = np.asarray(idx, dtype=int)
    n = coords.shape[1]
    if n == 1 or len(idx) <= 1:
        return idx
    pts = coords[idx]
    if n == 2:
        a, b = pts[0], pts[-1]
        return idx if a[0] * b[1] - a[1] * b[0] > 0 else idx[::-1]
    e1, e2 = plane_basis(normal)
    c = pts.mean(axis=0)
    ang = np.arctan2((pts - c) @ e2, (pts - c) @ e1)
    return idx[np.argsort(ang, kind="stable")]


class Body:
    """An origin-interior convex polytope.

    Attributes ``normals``/``offsets`` and ``vertices`` are read-only arrays;
    either may be ``None`` in dimension >= 4. ``facets[i]`` lists the indices
    of the vertices on facet ``i`` (counter-clockwise about ``normals[i]``).
    """

    __slots__ = ("dim", "rep", "normals", "offsets", "vertices", "facets", "_dual", "_symmetric")

    def __init__(self, dim, rep, normals=None, offsets=None, vertices=None, facets=None):
        self.dim = int(dim)
        self.rep = rep
        for name, arr in (("normals", normals), ("offsets", offsets), ("vertices", vertices)):
            if arr is not None:
                arr = np.array(arr, dtype=float)
                arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        self.facets = None if facets is None else tuple(np.asarray(f, dtype=int) for f in facets)
        self._dual = None
        self._symmetric = None

    def __repr__(self) -> str:
        m = "?" if self.normals is None else len(self.normals)
        k = "?" if self.vertices is None else len(self.vertices)
        return f"Body(dim={self.dim}, rep={self.rep!r}, facets={m}, vertices={k})"

    @property
    def exact(self) -> bool:
        return self.normals is not None and self.vertices is not None

    # -- evaluation -------------------------------------------------------
    def support(self, u):
        """h_K(u) for one direction or a stack of directions (rows)."""
        U = np.asarray(u, dtype=float)
        single = U.ndim == 1
        U = np.atleast_2d(U)
        if self.vertices is not None:
            vals = (U @ self.vertices.T).max(axis=1)
        else:
            vals = np.array([lp.maximize(row, self.normals, self.offsets)[0] for row in U])
        return float(vals[0]) if single else vals

    def support_lp(self, u) -> float:
        """Support through the simplex solver (needs the H-representation)."""
        if self.normals is None:
            raise UnsupportedDimension("H-representation unavailable")
        return lp.maximize(np.asarray(u, dtype=float), self.normals, self.offsets)[0]

    def gauge(self, x):
        """Minkowski functional ||x||_K; rows of ``x`` are evaluated separately."""
        X = np.asarray(x, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if self.normals is not None:
            vals = np.maximum((X @ self.normals.T / self.offsets).max(axis=1), 0.0)
        else:
            ones = np.ones(len(self.vertices))
            vals = np.array([lp.maximize(row, self.vertices, ones)[0] for row in X])
        return float(vals[0]) if single else vals

    def contains(self, x, tol: float = 1e-12):
        return self.gauge(x) <= 1.0 + tol

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        if self.vertices is not None:
            return self.vertices.min(axis=0), self.vertices.max(axis=0)
        eye = np.eye(self.dim)
        return -self.support(-eye), self.support(eye)

    @property
    def is_symmetric(self) -> bool:
        if self._symmetric is None:
            if self.vertices is not None:
                self._symmetric = _closed_under_negation(self.vertices, self.dim)
            else:
                rows = np.column_stack([self.normals, self.offsets])
                self._symmetric = _closed_under_negation(rows, self.dim)
        return self._symmetric

    def support_kinks(self) -> np.ndarray:
        """Angles (2-D) at which h_K fails to be smooth: the facet normals."""
        return np.arctan2(self.normals[:, 1], self.normals[:, 0])

    def gauge_kinks(self) -> np.ndarray:
        """Angles (2-D) at which ||.||_K fails to be smooth: the vertex directions."""
        return np.arctan2(self.vertices[:, 1], self.vertices[:, 0])

    def to_json(self) -> dict:
        if self.rep == "H":
            return {
                "rep": "H",
                "normals": self.normals.tolist(),
                "offsets": self.offsets.tolist(),
                "symmetric": bool(self.is_symmetric),
            }
        return {"rep": "V", "vertices": self.vertices.tolist()}


def _closed_under_negation(rows: np.ndarray, flip_cols: int, tol: float = 1e-9) -> bool:
    """True when negating the first ``flip_cols`` columns permutes the rows."""
    if len(rows) % 2:
        return False
    flip = rows.copy()
    flip[:, :flip_cols] *= -1
    scale = max(float(np.abs(rows).max(initial=1.0)), 1.0)
    return all(np.min(np.abs(rows - r).max(axis=1)) <= tol * scale for r in flip)


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------
def _from_vertices(points: np.ndarray, rep: str = "V") -> Body:
    n = points.shape[1]
    hd = hull(points)
    scale = float(np.abs(points).max())
    if np.any(hd.offsets <= _INTERIOR_TOL * scale):
        raise OriginNotInterior("origin is not an interior point of the hull")
    pos = {int(p): i for i, p in enumerate(hd.extreme)}
    facets = [np.array([pos[int(v)] for v in f]) for f in hd.facets]
    return Body(n, rep, hd.normals, hd.offsets, points[hd.extreme], facets)


def _from_halfspaces(normals: np.ndarray, offsets: np.ndarray, rep: str = "H") -> Body:
    n = normals.shape[1]
    q = normals / offsets[:, None]
    try:
        hd = hull(q)
    except DegenerateBody as exc:
        raise UnboundedBody("constraint normals do not span positively") from exc
    if np.any(hd.offsets <= _INTERIOR_TOL * float(np.abs(q).max())):
        raise UnboundedBody("some direction has infinite support")
    kept = hd.extreme
    verts = hd.normals / hd.offsets[:, None]
    inc = _transpose(hd.facets, len(q))
    facets = [_ordered(inc[i], verts, normals[i]) for i in kept]
    return Body(n, rep, normals[kept], offsets[kept], verts, facets)


def _check_dim(arr, what) -> np.ndarray:
    a = np.asarray(arr, dtype=float)
    if a.ndim != 2 or a.shape[1] < 1:
        raise DimensionMismatch(f"{what} must be a non-empty 2-D array")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} contains non-finite entries")
    return a


def make_hpoly(normals, offsets, symmetrize: bool = False) -> Body:
    """Body ``{x : x . v_i <= b_i}``; with ``symmetrize`` each slab is made two-sided."""
    V = _check_dim(normals, "normals")
    b = np.asarray(offsets, dtype=float).ravel()
    if len(b) != len(V):
        raise DimensionMismatch("normals and offsets differ in length")
    if np.any(~np.isfinite(b)) or np.any(b <= 0):
        raise NonpositiveOffset("all offsets must be positive")
    if np.any(np.linalg.norm(V, axis=1) == 0):
        raise DimensionMismatch("zero normal")
    V, s = _unit_rows(V)
    b = b / s
    if symmetrize:
        V = np.vstack([V, -V])
        b = np.concatenate([b, b])
    if V.shape[1] <= EXACT_MAX_DIM:
        return _from_halfspaces(V, b)
    return _hpoly_lp(V, b)


def make_vpoly(vertices) -> Body:
    """Body ``conv(vertices)``; non-extreme points are dropped."""
    P = _check_dim(vertices, "vertices")
    if P.shape[1] <= EXACT_MAX_DIM:
        return _from_vertices(P)
    return _vpoly_lp(P)


def _hpoly_lp(V: np.ndarray, b: np.ndarray) -> Body:
    n = V.shape[1]
    for e in np.vstack([np.eye(n), -np.eye(n)]):
        if not np.isfinite(lp.maximize(e, V, b)[0]):
            raise UnboundedBody("some direction has infinite support")
    keep = list(range(len(V)))
    for k in range(len(V)):
        rest = [i for i in keep if i != k]
        val = lp.maximize(V[k], V[rest], b[rest])[0]
        if val <= b[k] * (1 + 1e-12):
            keep = rest
    return Body(n, "H", V[keep], b[keep])


def _vpoly_lp(P: np.ndarray) -> Body:
    n = P.shape[1]
    scale = float(np.abs(P).max())
    if np.linalg.matrix_rank(P - P.mean(axis=0), tol=PLANAR_TOL * scale) < n:
        raise DegenerateBody("affine span is not full-dimensional")
    ones = np.ones(len(P))
    for e in np.vstack([np.eye(n), -np.eye(n)]):
        if not np.isfinite(lp.maximize(e, P, ones)[0]):
            raise OriginNotInterior("origin is not an interior point of the hull")
    keep = list(range(len(P)))
    for k in range(len(P)):
        rest = [i for i in keep if i != k]
        val = lp.maximize(P[k], P[rest], np.ones(len(rest)))[0]
        if val <= 1 + 1e-12:
            keep = rest
    return Body(n, "V", vertices=P[keep])


# --------------------------------------------------------------------------
# duality, representation changes, linear images
# --------------------------------------------------------------------------
def polar_dual(body: Body) -> Body:
    """K° = {y : x . y <= 1 for all x in K}; cached on both bodies."""
    if body._dual is not None:
        return body._dual
    rep = "V" if body.rep == "H" else "H"
    if body.exact:
        norms = np.linalg.norm(body.vertices, axis=1)
        d_normals = body.vertices / norms[:, None]
        d_offsets = 1.0 / norms
        d_vertices = body.normals / body.offsets[:, None]
        inc = _transpose(body.facets, len(body.vertices))
        d_facets = [_ordered(inc[j], d_vertices, d_normals[j]) for j in range(len(inc))]
        dual = Body(body.dim, rep, d_normals, d_offsets, d_vertices, d_facets)
    elif body.normals is not None:
        dual = Body(body.dim, "V", vertices=body.normals / body.offsets[:, None])
    else:
        norms = np.linalg.norm(body.vertices, axis=1)
        if np.any(norms == 0):
            raise OriginNotInterior("a vertex sits at the origin")
        dual = Body(body.dim, "H", body.vertices / norms[:, None], 1.0 / norms)
    dual._dual = body
    body._dual = dual
    return dual


def to_vrep(body: Body) -> Body:
    if body.rep == "V":
        return body
    if body.vertices is None:
        raise UnsupportedDimension(f"no exact vertex enumeration in dimension {body.dim}")
    return Body(body.dim, "V", body.normals, body.offsets, body.vertices, body.facets)


def to_hrep(body: Body) -> Body:
    if body.rep == "H":
        return body
    if body.normals is None:
        raise UnsupportedDimension(f"no exact facet enumeration in dimension {body.dim}")
    return Body(body.dim, "H", body.normals, body.offsets, body.vertices, body.facets)


def linear_image(body: Body, matrix) -> Body:
    """T K; vertices map by T, normals by T^{-T} (renormalized)."""
    T = np.asarray(matrix, dtype=float)
    if T.shape != (body.dim, body.dim):
        raise DimensionMismatch("matrix shape does not match the body dimension")
    if abs(np.linalg.det(T)) <= 1e-12:
        raise SingularMatrix("linear map is not invertible")
    if body.rep == "V":
        return make_vpoly(body.vertices @ T.T)
    W = body.normals @ np.linalg.inv(T)
    norms = np.linalg.norm(W, axis=1)
    return make_hpoly(W / norms[:, None], body.offsets / norms)


def dilate_body(body: Body, factor: float) -> Body:
    if body.rep == "V":
        return make_vpoly(body.vertices * factor)
    return make_hpoly(body.normals, body.offsets * factor)


# --------------------------------------------------------------------------
# subspaces
# --------------------------------------------------------------------------
class Subspace:
    """Span of ``k`` orthonormal rows of ``basis`` in R^n."""

    __slots__ = ("basis",)

    def __init__(self, basis):
        B = np.atleast_2d(np.asarray(basis, dtype=float))
        if not np.allclose(B @ B.T, np.eye(len(B)), atol=1e-12):
            raise ValueError("subspace basis must be orthonormal")
        B.setflags(write=False)
        self.basis = B

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def coordinate(cls, n: int, axes) -> "Subspace":
        return cls(np.eye(n)[list(axes)])

    def __repr__(self) -> str:
        return f"Subspace(k={self.dim}, n={self.ambient})"


def section(body: Body, H: Subspace) -> Body:
    """K ∩ H in the coordinates of ``H.basis``."""
    if body.dim > EXACT_MAX_DIM:
        raise UnsupportedDimension("sections need exact facets (n <= 3)")
    if H.ambient != body.dim:
        raise DimensionMismatch("subspace lives in a different dimension")
    W = body.normals @ H.basis.T
    norms = np.linalg.norm(W, axis=1)
    live = norms > 1e-14
    if not np.any(live):  # pragma: no cover - impossible for a bounded body
        raise EmptySection("subspace misses every constraint")
    return make_hpoly(W[live] / norms[live, None], body.offsets[live] / norms[live])


def project(body: Body, H: Subspace) -> Body:
    """Orthogonal projection K|H in the coordinates of ``H.basis``."""
    if H.ambient != body.dim:
        raise DimensionMismatch("subspace lives in a different dimension")
    if body.vertices is None:
        raise UnsupportedDimension("projection needs the vertex representation")
    if H.dim > EXACT_MAX_DIM:
        raise UnsupportedDimension("projection target must have dimension <= 3")
    return make_vpoly(body.vertices @ H.basis.T)


def in_out_radius(body: Body) -> tuple[float, float]:
    """(min distance from 0 to the boundary, max distance from 0 to a point of K)."""
    if body.normals is None or body.vertices is None:
        raise UnsupportedDimension("in/out radius needs both representations")
    return float(body.offsets.min()), float(np.linalg.norm(body.vertices, axis=1).max())


# --------------------------------------------------------------------------
# standard bodies
# --------------------------------------------------------------------------
def cube(n: int, half_width: float = 1.0) -> Body:
    eye = np.eye(n)
    return make_hpoly(np.vstack([eye, -eye]), np.full(2 * n, float(half_width)))


def cross_polytope(n: int) -> Body:
    """B_1^n; built from vertices when n <= 3 and from its 2^n facets otherwise."""
    eye = np.eye(n)
    if n <= EXACT_MAX_DIM:
        return make_vpoly(np.vstack([eye, -eye]))
    signs = np.array(np.meshgrid(*[[-1.0, 1.0]] * n, indexing="ij")).reshape(n, -1).T
    return make_hpoly(signs, np.ones(len(signs)))


def box(half_widths) -> Body:
    h = np.asarray(half_widths, dtype=float)
    eye = np.eye(len(h))
    return make_hpoly(np.vstack([eye, -eye]), np.concatenate([h, h]))


def regular_polygon(m: int, radius: float = 1.0, phase: float = 0.0) -> Body:
    """Regular m-gon inscribed in the circle of the given radius."""
    ang = phase + 2 * np.pi * np.arange(m) / m
    return make_vpoly(radius * np.column_stack([np.cos(ang), np.sin(ang)]))


def body_from_json(data: dict) -> Body:
    """Inverse of :meth:`Body.to_json`."""
    rep = data.get("rep")
    if rep == "H":
        return make_hpoly(data["normals"], data["offsets"])
    if rep == "V":
        return make_vpoly(data["vertices"])
    raise ValueError(f"unknown body representation {rep!r}")


# --------------------------------------------------------------------------
# slice profile
# --------------------------------------------------------------------------
def _slice_volume(body: Body, u: np.ndarray, s: float) -> float:
    """(n-1)-volume of K ∩ {x . u = s} for n in {1, 2, 3}."""
    n = body.dim
    if n == 1:
        return 1.0 if -body.support(-u) <= s <= body.support(u) else 0.0
    basis = plane_basis(u) if n == 3 else (np.array([-u[1], u[0]]),)
    B = np.array(basis)
    # points x = s u + B^T y ; constraints v.(s u) + (B v).y <= b
    W = body.normals @ B.T
    rhs = body.offsets - s * (body.normals @ u)
    if np.any(rhs <= 0) and np.any(np.linalg.norm(W, axis=1)[rhs <= 0] < 1e-14):
        return 0.0
    if n == 2:
        w = W[:, 0]
        up = rhs[w > 1e-14] / w[w > 1e-14]
        lo = rhs[w < -1e-14] / w[w < -1e-14]
        return max(float(up.min() - lo.max()), 0.0)
    from logbm.geom_core.hull import polygon_area

    pts = []
    for i in range(len(W)):
        for j in range(i + 1, len(W)):
            M = W[[i, j]]
            det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            if abs(det) < 1e-14:
                continue
            y = np.linalg.solve(M, rhs[[i, j]])
            if np.all(W @ y <= rhs + 1e-10 * max(1.0, float(np.abs(rhs).max()))):
                pts.append(y)
    if len(pts) < 3:
        return 0.0
    P = np.array(pts)
    c = P.mean(axis=0)
    P = P[np.argsort(np.arctan2(P[:, 1] - c[1], P[:, 0] - c[0]))]
    return abs(polygon_area(P))


def schwartz_profile(body: Body, u, grid) -> np.ndarray:
    """Radii r(s) of the balls replacing the slices ``K ∩ {x . u = s}``.

    ``r(s) = (|K ∩ {x.u = s}|_{n-1} / omega_{n-1})^{1/(n-1)}``; in dimension 1
    the slices are points and the profile is the indicator of the support range.
    """
    if body.dim > EXACT_MAX_DIM or body.normals is None:
        raise UnsupportedDimension("slice profiles need exact facets (n <= 3)")
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    n = body.dim
    vols = np.array([_slice_volume(body, u, float(s)) for s in np.asarray(grid, dtype=float)])
    if n == 1:
        return vols
    omega = 2.0 if n == 2 else np.pi
    return (vols / omega) ** (1.0 / (n - 1))
