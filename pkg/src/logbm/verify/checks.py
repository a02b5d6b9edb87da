"""Inequality checks returning :class:`~logbm.verify.reports.CheckReport`.

Where a combination is discretized on a direction grid, the right-hand side
is evaluated on the same discretization (e.g. ``K~ = wulff(grid, h_K)``) so
that the finite statement being tested is itself a true inequality.
"""
from __future__ import annotations

import math

import numpy as np

from logbm.combine import DirectionGrid, log_combine, lp_combine, wulff
from logbm.errors import (
    CentroidNotOrigin,
    DimensionMismatch,
    NotATriangle,
    NotSymmetric,
    UnsupportedDimension,
)
from logbm.geom_core.body import Body, Subspace, dilate_body, polar_dual, section
from logbm.geom_core.functional import GaugeBody
from logbm.measure.density import DensitySpec, measure_of
from logbm.measure.moments import moments
from logbm.measure.quadrature import SphereQuadrature, arc_quadrature, default_quadrature
from logbm.measure.quermass import quermass
from logbm.measure.volume import volume
from logbm.sample import as_seed, sphere_uniform
from logbm.verify.reports import EXACT_TOL, CheckReport, inequality_report

LOG_BM_TOL = 1e-6
MAHLER_TRIANGLE = 27.0 / 4.0
VACUOUS_BOUND = 1e3


def _grid(K, grid):
    return grid if grid is not None else DirectionGrid.default(K.dim)


def _same_dim(K, L):
    if K.dim != L.dim:
        raise DimensionMismatch("bodies live in different dimensions")


def _require_symmetric(*bodies):
    for B in bodies:
        if hasattr(B, "is_symmetric") and not B.is_symmetric:
            raise NotSymmetric("this check needs origin-symmetric bodies")


def _exact_body(B) -> bool:
    return isinstance(B, Body) and B.facets is not None


def discretize(K, grid: DirectionGrid) -> Body:
    """Wulff shape of ``h_K`` on ``grid`` (contains ``K``)."""
    return wulff(grid, K.support(grid.directions))


# --------------------------------------------------------------------------
# log-Brunn-Minkowski
# --------------------------------------------------------------------------
def check_log_bm(K, L, lam: float, density: DensitySpec | None = None, grid=None,
                 n_samples: int = 10**6, seed=0, method: str = "radial",
                 tolerance: float | None = None) -> CheckReport:
    """``mu(lam K +_0 (1-lam) L) >= mu(K)^lam mu(L)^{1-lam}`` for symmetric ``K, L``.

    The combination is the grid Wulff shape, a superset of the true one, so
    this is a necessary test.
    """
    _same_dim(K, L)
    _require_symmetric(K, L)
    density = density or DensitySpec.lebesgue()
    g = _grid(K, grid)
    C = log_combine(K, L, lam, g)
    params = {"lambda": lam, "density": density.kind, "grid_size": len(g)}
    if density.kind == "lebesgue" and _exact_body(K) and _exact_body(L) and _exact_body(C):
        vK, vL, vC = volume(K), volume(L), volume(C)
        lhs = vK ** lam * vL ** (1 - lam)
        params.update(volume_K=vK, volume_L=vL)
        return inequality_report("log-bm", lhs, vC, "le", tolerance=tolerance or LOG_BM_TOL, params=params)
    seed = as_seed(seed)
    eK, eL, eC = (measure_of(B, density, n_samples, seed, method=method) for B in (K, L, C))
    lhs = eK.value ** lam * eL.value ** (1 - lam)
    se_lhs = lhs * math.hypot(lam * eK.stderr / eK.value, (1 - lam) * eL.stderr / eL.value)
    se = math.hypot(se_lhs, eC.stderr)
    params.update(mu_K=eK.value, mu_L=eL.value)
    return inequality_report("log-bm", lhs, eC.value, "le", stderr=se, seed=seed,
                             n_samples=eC.n_samples, params=params, tolerance=tolerance)


def check_dual_log_bm(K, L, lam: float, grid=None, tolerance: float | None = None) -> CheckReport:
    """``|(lam K +_0 (1-lam) L)°| <= |K~°|^lam |L~°|^{1-lam}`` with grid-discretized ``K~, L~``."""
    _same_dim(K, L)
    g = _grid(K, grid)
    C = log_combine(K, L, lam, g)
    Kd, Ld = discretize(K, g), discretize(L, g)
    lhs = volume(polar_dual(C))
    vK, vL = volume(polar_dual(Kd)), volume(polar_dual(Ld))
    rhs = vK ** lam * vL ** (1 - lam)
    tol = tolerance if tolerance is not None else (EXACT_TOL if K.dim <= 2 else 1e-8)
    return inequality_report("dual-log-bm", lhs, rhs, "le", tolerance=tol,
                             params={"lambda": lam, "grid_size": len(g),
                                     "polar_volume_K": vK, "polar_volume_L": vL})


# --------------------------------------------------------------------------
# vertex flows
# --------------------------------------------------------------------------
def _vertex_flow_indices(flow, t: float, body: Body) -> np.ndarray:
    pts = flow.points * np.exp(flow.exponents * t)[:, None]
    d = np.linalg.norm(body.vertices[:, None, :] - pts[None, :, :], axis=2)
    return d.argmin(axis=1)


def _cone_simplices(body: Body) -> list[np.ndarray]:
    """Vertex-index tuples of a triangulation of the boundary; coned at 0 they tile ``body``."""
    out = []
    for f in body.facets:
        if body.dim == 2:
            out.append(np.array(f))
        else:
            out.extend(np.array([f[0], f[k], f[k + 1]]) for k in range(1, len(f) - 1))
    return out


def check_simplex_lower_bound(flow, s: float, r: float, tolerance: float = EXACT_TOL) -> CheckReport:
    """``|P_{s+r}| >= sum_i |Delta_{i,r}|`` where the ``Delta_i`` tile ``P_s``
    and each vertex ``x_j`` is transported to ``e^{a_j r} x_j``."""
    P = flow.at(s)
    if P.facets is None:
        raise UnsupportedDimension("needs exact facets (n <= 3)")
    n = P.dim
    idx = _vertex_flow_indices(flow, s, P)
    fact = math.factorial(n)
    moved = P.vertices * np.exp(flow.exponents[idx] * r)[:, None]
    base = sum(abs(np.linalg.det(P.vertices[c])) for c in _cone_simplices(P)) / fact
    lhs = sum(abs(np.linalg.det(moved[c])) for c in _cone_simplices(P)) / fact
    rhs = volume(flow.at(s + r))
    vs = volume(P)
    tiling = abs(math.log(base) - math.log(vs))
    rep = inequality_report("simplex-lower-bound", lhs, rhs, "le", tolerance=tolerance,
                            params={"s": s, "r": r, "tiling_error": tiling, "volume_P_s": vs})
    rep.passed = rep.passed and tiling <= tolerance
    return rep


# --------------------------------------------------------------------------
# dual quermassintegrals
# --------------------------------------------------------------------------
def _combination(K, L, lam, p, grid):
    """Combination and the bodies the right-hand side should use."""
    if p == 1 and K.dim == 2 and _exact_body(K) and _exact_body(L):
        return lp_combine(K, L, lam, 1.0), K, L
    g = _grid(K, grid)
    C = lp_combine(K, L, lam, p, g)
    return C, discretize(K, g), discretize(L, g)


def _polar_quermass(bodies, i, n_subspaces, seed, method):
    return [quermass(polar_dual(B), i, n_subspaces, seed, method=method) for B in bodies]


def check_dual_quermass(K, L, lam: float, p: float, i: int, grid=None, n_subspaces: int = 4000,
                        seed=0, method: str = "auto", tolerance: float | None = None) -> CheckReport:
    """``W_i([lam K +_p (1-lam) L]°) <= W_i(K°)^lam W_i(L°)^{1-lam}``."""
    _same_dim(K, L)
    n = K.dim
    if not 1 <= i <= n - 1:
        raise ValueError("index i must lie in [1, n-1]")
    C, Kr, Lr = _combination(K, L, lam, p, grid)
    seed = as_seed(seed)
    wC, wK, wL = _polar_quermass((C, Kr, Lr), i, n_subspaces, seed, method)
    lhs = wC.value
    rhs = wK.value ** lam * wL.value ** (1 - lam)
    params = {"lambda": lam, "p": p, "i": i, "W_K_polar": wK.value, "W_L_polar": wL.value}
    if wC.stderr == 0 and wK.stderr == 0 and wL.stderr == 0:
        return inequality_report("dual-quermass", lhs, rhs, "le", params=params,
                                 tolerance=tolerance if tolerance is not None else 1e-8)
    se_rhs = rhs * math.hypot(lam * wK.stderr / wK.value, (1 - lam) * wL.stderr / wL.value)
    se = math.hypot(wC.stderr, se_rhs)
    return inequality_report("dual-quermass", lhs, rhs, "le", stderr=se, seed=seed,
                             n_samples=n_subspaces, params=params, tolerance=tolerance)


def check_dual_quermass_dim(K, L, lam: float, p: float, i: int, grid=None, n_subspaces: int = 4000,
                            seed=0, method: str = "auto", tolerance: float | None = None) -> CheckReport:
    """``W_i(C°)^{-q} >= lam W_i(K°)^{-q} + (1-lam) W_i(L°)^{-q}`` with ``q = p/(n-i)``.

    By the arithmetic-geometric mean inequality this implies the
    multiplicative form of :func:`check_dual_quermass`; the report records
    that implication (``params["implies_multiplicative"]``) on the same data.
    """
    _same_dim(K, L)
    n = K.dim
    if not p > 0:
        raise ValueError("the dimension-dependent form needs p > 0")
    if not 1 <= i <= n - 1:
        raise ValueError("index i must lie in [1, n-1]")
    q = p / (n - i)
    C, Kr, Lr = _combination(K, L, lam, p, grid)
    seed = as_seed(seed)
    wC, wK, wL = _polar_quermass((C, Kr, Lr), i, n_subspaces, seed, method)
    lhs = wC.value ** -q
    rhs = lam * wK.value ** -q + (1 - lam) * wL.value ** -q
    exact_path = wC.stderr == 0 and wK.stderr == 0 and wL.stderr == 0
    tol = tolerance if tolerance is not None else (1e-8 if exact_path else None)
    se = None
    if not exact_path:
        se_l = q * lhs * wC.stderr / wC.value
        se_r = q * math.hypot(lam * wK.value ** -q * wK.stderr / wK.value,
                              (1 - lam) * wL.value ** -q * wL.stderr / wL.value)
        se = math.hypot(se_l, se_r)
    rep = inequality_report("dual-quermass-dim", lhs, rhs, "ge", stderr=se, seed=seed if se else None,
                            n_samples=0 if exact_path else n_subspaces, tolerance=tol,
                            params={"lambda": lam, "p": p, "i": i, "q": q})
    mult = inequality_report("dual-quermass", wC.value, wK.value ** lam * wL.value ** (1 - lam), "le",
                             tolerance=tol / q if exact_path else None, stderr=se)
    rep.params["multiplicative_margin"] = mult.margin
    rep.params["multiplicative_pass"] = mult.passed
    rep.params["implies_multiplicative"] = (not rep.passed) or mult.passed
    return rep


# --------------------------------------------------------------------------
# dilates, sections, triangles
# --------------------------------------------------------------------------
def _scaled_measure(M, alpha, density, n_samples, seed, method):
    if alpha == 0:
        from logbm.measure.mc import exact

        return exact(0.0)
    return measure_of(dilate_body(M, alpha), density, n_samples, seed, method=method)


def check_gaussian_dilates(density: DensitySpec, M, alpha: float, beta: float, lam: float,
                           n_samples: int = 10**6, seed=0, method: str = "radial",
                           tolerance: float | None = None) -> CheckReport:
    """``mu(lam K + (1-lam) L)^{1/2} >= lam mu(K)^{1/2} + (1-lam) mu(L)^{1/2}``
    for the dilates ``K = alpha M``, ``L = beta M`` of a symmetric planar ``M``."""
    if M.dim != 2:
        raise UnsupportedDimension("this check is planar")
    _require_symmetric(M)
    if alpha < 0 or beta < 0:
        raise ValueError("dilation factors must be nonnegative")
    seed = as_seed(seed)
    gamma = lam * alpha + (1 - lam) * beta
    eK, eL, eC = (_scaled_measure(M, c, density, n_samples, seed, method) for c in (alpha, beta, gamma))
    lhs = lam * math.sqrt(eK.value) + (1 - lam) * math.sqrt(eL.value)
    rhs = math.sqrt(eC.value)
    params = {"alpha": alpha, "beta": beta, "lambda": lam, "density": density.kind}
    if eK.stderr == 0 and eL.stderr == 0 and eC.stderr == 0:
        return inequality_report("gaussian-dilates", lhs, rhs, "le", params=params, tolerance=tolerance)

    def half(e):
        return e.stderr / (2 * math.sqrt(e.value)) if e.value > 0 else 0.0

    se = math.hypot(math.hypot(lam * half(eK), (1 - lam) * half(eL)), half(eC))
    return inequality_report("gaussian-dilates", lhs, rhs, "le", stderr=se, seed=seed,
                             n_samples=eC.n_samples, params=params, tolerance=tolerance)


def subspace_grid(grid: DirectionGrid, H: Subspace) -> DirectionGrid:
    """Normalized projections of the ambient grid, in ``H``-coordinates."""
    w = grid.directions @ H.basis.T
    norms = np.linalg.norm(w, axis=1)
    keep = norms > 1e-9
    return DirectionGrid(w[keep] / norms[keep, None])


def check_section_containment(K, L, lam: float, H: Subspace, grid=None, n_probes: int = 1000,
                              seed=0, tolerance: float = EXACT_TOL) -> CheckReport:
    """``lam (K∩H) +_0 (1-lam) (L∩H)  ⊆  (lam K +_0 (1-lam) L) ∩ H``.

    The left side uses the projected grid, which makes every one of its
    constraints at least as tight as the matching ambient one.
    """
    _same_dim(K, L)
    if K.dim > 3 or H.dim not in (1, 2):
        raise UnsupportedDimension("sections need n <= 3 and dim H in {1, 2}")
    g = _grid(K, grid)
    gH = subspace_grid(g, H)
    A = log_combine(section(K, H), section(L, H), lam, gH)
    B = section(log_combine(K, L, lam, g), H)
    probes = sphere_uniform(H.dim, n_probes, seed)
    boundary = np.vstack([A.vertices, probes / A.gauge(probes)[:, None]])
    worst = float(B.gauge(boundary).max())
    margin = 1.0 - worst
    return CheckReport("section-containment", worst, 1.0, margin, tolerance, margin >= -tolerance,
                       None, as_seed(seed), int(n_probes),
                       {"lambda": lam, "subspace_dim": H.dim, "grid_size": len(g)})


def _is_centered_triangle(T):
    if T.dim != 2:
        raise UnsupportedDimension("triangles are planar")
    if T.vertices is None or len(T.vertices) != 3:
        raise NotATriangle("body does not have exactly three vertices")
    c = T.vertices.mean(axis=0)
    if np.linalg.norm(c) > 1e-9:
        raise CentroidNotOrigin(f"centroid {c} is not the origin")


def mahler_product(K: Body) -> float:
    return volume(K) * volume(polar_dual(K))


def check_triangle_logbm(t1: Body, t2: Body, lam: float, grid=None,
                         tolerance: float = EXACT_TOL) -> CheckReport:
    """Planar log-Brunn-Minkowski for two centroid-origin triangles, plus the
    Mahler-product lower bound ``|T||T°| >= 27/4``."""
    _is_centered_triangle(t1)
    _is_centered_triangle(t2)
    g = _grid(t1, grid)
    v1, v2 = volume(t1), volume(t2)
    lhs = v1 ** lam * v2 ** (1 - lam)
    rhs = volume(log_combine(t1, t2, lam, g))
    m1, m2 = mahler_product(t1), mahler_product(t2)
    rep = inequality_report("triangle-logbm", lhs, rhs, "le", tolerance=tolerance,
                            params={"lambda": lam, "mahler_1": m1, "mahler_2": m2})
    mahler_ok = min(m1, m2) >= MAHLER_TRIANGLE * (1 - tolerance)
    rep.params["mahler_pass"] = mahler_ok
    rep.passed = rep.passed and mahler_ok
    return rep


# --------------------------------------------------------------------------
# smoothed duals: (K° +_p a L°)°
# --------------------------------------------------------------------------
def _gauge_fn(B):
    return B.gauge


def psum_dual_body(K, L, p: float, a: float) -> GaugeBody:
    """``(K° +_p a L°)°``, whose gauge is ``(||x||_K^p + a ||x||_L^p)^{1/p}``."""
    gK, gL = _gauge_fn(K), _gauge_fn(L)
    lo, hi = K.bounding_box()

    def g(x):
        return (gK(x) ** p + a * gL(x) ** p) ** (1.0 / p)

    kinks = np.concatenate([_kinks(K, "gauge"), _kinks(L, "gauge")]) if K.dim == 2 else np.empty(0)
    return GaugeBody(K.dim, g, lo, hi, kinks)


def _kinks(B, which):
    fn = getattr(B, f"{which}_kinks", None)
    return np.asarray(fn(), dtype=float) if fn is not None else np.empty(0)


def check_moment_gap(K, L, p: float, a: float, n_samples: int = 10**6, seed=0,
                     tolerance: float | None = None) -> CheckReport:
    """``|T| int_T ||x||_L^{2p} - (int_T ||x||_L^p)^2 <= p/(a(n+p)) |T| int_T ||x||_L^p``
    for ``T = (K° +_p a L°)°``."""
    _same_dim(K, L)
    n = K.dim
    T = psum_dual_body(K, L, p, a)
    seed = as_seed(seed)
    ms = moments(T, L=L, p=p, n_samples=n_samples, seed=seed)
    I0 = ms.volume
    G1, G2 = ms.gauge_moments
    c = p / (a * (n + p))
    lhs = I0 * G2 - G1 ** 2
    rhs = c * I0 * G1
    k = n * (n + 1) // 2
    grad = np.zeros(len(ms.raw.mean))
    grad[0] = c * G1 - G2
    grad[3 + k] = c * I0 + 2 * G1
    grad[4 + k] = -I0
    se = ms.raw.delta(grad)
    return inequality_report("moment-gap", lhs, rhs, "le", stderr=se, seed=seed,
                             n_samples=ms.n_samples, tolerance=tolerance,
                             params={"p": p, "a": a, "volume_T": I0})


def _quadrature_for(K, size: int | None = None, arcs: int = 96) -> SphereQuadrature:
    if K.dim == 2:
        kinks = np.concatenate([_kinks(K, "support"), _kinks(K, "gauge")])
        return arc_quadrature(kinks, order=10, max_arc=2 * math.pi / arcs)
    return default_quadrature(K.dim, size)


def isotropy_curve(K, a: float, v, quad: SphereQuadrature):
    """``t -> |(K +_2 a S_t B)°|`` with ``S_t = exp(t (v v^T - I/n))``, by polar quadrature."""
    n = K.dim
    th = quad.directions
    hK2 = np.asarray(K.support(th)) ** 2
    c2 = (th @ v) ** 2
    r2 = np.einsum("ij,ij->i", th, th)

    def f(t):
        ball = np.exp(2 * t * (1 - 1 / n)) * c2 + np.exp(-2 * t / n) * (r2 - c2)
        return quad.integrate((hK2 + a * ball) ** (-n / 2)) / n

    return f


def check_isotropy_derivative(K, a: float, v, h: float = 1e-2, quad=None,
                              tolerance: float | None = None) -> CheckReport:
    """Central difference of ``t -> |(K +_2 a S_t B)°|`` at ``t = 0`` against
    ``(n+2) a [ -int_T (x.v)^2 + (1/n) int_T |x|^2 ]`` with ``T = (K +_2 a B)°``.

    The tolerance comes from the Richardson pair ``h, h/2``: the O(h^2) error
    of ``D(h)`` is about ``4/3 |D(h) - D(h/2)|``; twice that is allowed.
    """
    n = K.dim
    if n > 3:
        raise UnsupportedDimension("polar quadrature is limited to n <= 3")
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    q = quad if quad is not None else _quadrature_for(K)
    f = isotropy_curve(K, a, v, q)
    D = [(f(s) - f(-s)) / (2 * s) for s in (h, h / 2, h / 4)]
    th = q.directions
    g = np.sqrt(np.asarray(K.support(th)) ** 2 + a * np.einsum("ij,ij->i", th, th))
    w = g ** (-(n + 2)) / (n + 2)
    mom_v = q.integrate(w * (th @ v) ** 2)
    mom_r = q.integrate(w * np.einsum("ij,ij->i", th, th))
    rhs = (n + 2) * a * (-mom_v + mom_r / n)
    err = abs(D[0] - D[1])
    tol = tolerance if tolerance is not None else 2 * (4 / 3) * err + 1e-10
    gap = abs(D[0] - rhs)
    extrap = (4 * D[1] - D[0]) / 3
    e1, e2 = abs(D[1] - D[0]), abs(D[2] - D[1])
    ratio = e1 / e2 if e2 > 0 else float("inf")
    return CheckReport("isotropy-derivative", D[0], rhs, -gap, tol, gap <= tol, None, None, 0,
                       {"a": a, "v": v, "h": h, "fd_half_step": D[1], "fd_quarter_step": D[2],
                        "richardson": extrap, "richardson_gap": abs(extrap - rhs),
                        "richardson_ratio": ratio})


def _class_body(K, a, Q):
    """``{y : ||y||_K^2 + a y^T Q y <= 1}``."""
    def g(y):
        return np.sqrt(K.gauge(y) ** 2 + a * np.einsum("ij,jk,ik->i", y, Q, y))
    return g


def variance_class_isotropic(K, a: float, quad=None, max_iter: int = 50):
    """Unit-determinant ``S`` such that ``S (K° +_2 a B)°``-type body
    ``{||S^{-1} x||_K^2 + a |x|^2 <= 1}`` is isotropic.

    With ``T_Q = {||y||_K^2 + a y^T Q y <= 1}`` and ``S = Q^{1/2}``, isotropy of
    ``S T_Q`` means ``int_{T_Q} y y^T`` is proportional to ``Q^{-1}``; the map
    ``Q -> normalize(M_Q^{-1})`` is iterated to its fixed point.
    """
    n = K.dim
    q = quad if quad is not None else default_quadrature(n)
    th = q.directions
    Q = np.eye(n)
    for _ in range(max_iter):
        g = _class_body(K, a, Q)(th)
        w = q.weights * g ** (-(n + 2)) / (n + 2)
        M = (th * w[:, None]).T @ th
        Qn = np.linalg.inv(M)
        Qn /= np.linalg.det(Qn) ** (1.0 / n)
        done = np.abs(Qn - Q).max() < 1e-13
        Q = Qn
        if done:
            break
    wq, U = np.linalg.eigh(Q)
    S = (U * np.sqrt(wq)) @ U.T
    return S, Q


def check_variance_bound(K, a: float, n_samples: int = 10**6, seed=0, quad=None,
                         tolerance: float | None = None) -> CheckReport:
    """``sigma^2(T) <= 2 / (a' (n+2) L_T^2)`` for the isotropic, volume-one body
    ``T = (K'° +_2 a' B)°`` obtained from ``K`` and ``a`` (``a'`` absorbs the
    volume normalization)."""
    _require_symmetric(K)
    n = K.dim
    if n > 3:
        raise UnsupportedDimension("limited to n <= 3")
    qd = quad if quad is not None else (_quadrature_for(K) if n == 2 else default_quadrature(n))
    S, Q = variance_class_isotropic(K, a, qd)
    Sinv = np.linalg.inv(S)

    def g_star(x):
        return np.sqrt(K.gauge(x @ Sinv.T) ** 2 + a * np.einsum("ij,ij->i", x, x))

    # |S T_Q| = |T_Q| since det S = 1; T_Q is integrated where its kinks are known
    vol = qd.integrate(_class_body(K, a, Q)(qd.directions) ** (-n)) / n
    c = vol ** (-1.0 / n)
    a1 = a / c ** 2
    eye = np.eye(n)
    cap = 1.0 / math.sqrt(a)
    hi = c * np.minimum(np.asarray(K.support(eye @ S)), cap)
    lo = -c * np.minimum(np.asarray(K.support(-eye @ S)), cap)
    T1 = GaugeBody(n, lambda x: g_star(x / c), lo, hi)
    seed = as_seed(seed)
    ms = moments(T1, n_samples=n_samples, seed=seed)
    I0, I2, I4, C = ms.volume, ms.second_radial, ms.fourth_radial, ms.covariance
    sig2 = n * (I4 * I0 / I2 ** 2 - 1.0)
    L2 = np.linalg.det(C) ** (1.0 / n) / I0 ** ((n + 2) / n)
    bound = 2.0 / (a1 * (n + 2) * L2)
    k = n * (n + 1) // 2
    g_s = np.zeros(len(ms.raw.mean))
    g_s[0] = n * I4 / I2 ** 2
    g_s[1 + k] = -2 * n * I4 * I0 / I2 ** 3
    g_s[2 + k] = n * I0 / I2 ** 2
    iu = np.triu_indices(n)
    Cinv = np.linalg.inv(C)
    g_b = np.zeros(len(ms.raw.mean))
    # bound ∝ 1/L^2, so d bound = -bound * d log L^2
    g_b[0] = bound * (n + 2) / (n * I0)
    g_b[1:1 + k] = -bound * np.where(iu[0] == iu[1], 1.0, 2.0) * Cinv[iu] / n
    se = ms.raw.delta(g_s - g_b)
    rep = inequality_report("variance-bound", sig2, bound, "le", stderr=se, seed=seed,
                            n_samples=ms.n_samples, tolerance=tolerance,
                            params={"a": a, "a_normalized": a1, "L_T": math.sqrt(L2),
                                    "volume_T": I0, "isotropic_map": S})
    rep.params["vacuous"] = bool(bound > VACUOUS_BOUND)
    return rep
