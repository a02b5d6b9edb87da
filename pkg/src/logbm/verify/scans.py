"""Log-concavity and log-convexity scans over one-parameter body families."""
from __future__ import annotations

import numpy as np
from scipy import special

from logbm.combine import FlowSpec
from logbm.errors import UnsupportedDimension
from logbm.geom_core.body import Body, linear_image, make_hpoly
from logbm.measure.density import DensitySpec
from logbm.measure.mc import mc_mean
from logbm.measure.quadrature import arc_quadrature, as_quadrature, default_quadrature
from logbm.measure.volume import box_volume, volume
from logbm.sample import as_seed, sample_box
from logbm.verify.checks import _kinks, _require_symmetric
from logbm.verify.reports import EXACT_TOL, ScanReport, scan_report

SCAN_B_SIGMAS = 3.0
STRIP_TOL = 1e-8


def _flow(A, n) -> FlowSpec:
    A = A if isinstance(A, FlowSpec) else FlowSpec(A)
    if A.dim != n:
        raise ValueError("flow dimension does not match the body")
    return A


def scan_b(density: DensitySpec, K, A, t_grid, n_samples: int = 10**6, seed=0,
           method: str = "radial", sigmas: float = SCAN_B_SIGMAS) -> ScanReport:
    """Scan ``t -> log mu(e^{At} K)`` for concavity.

    All grid points share one set of random draws, so the estimated curve is
    smooth in ``t`` and second differences are assessed against their
    covariance-propagated standard errors. Lebesgue measure is exact.
    """
    _require_symmetric(K)
    A = _flow(A, K.dim)
    t = np.asarray(t_grid, dtype=float)
    params = {"density": density.kind, "flow": A.exponents.tolist(), "method": method}
    if density.kind == "lebesgue":
        vals = [volume(linear_image(K, A.matrix(s))) for s in t]
        return scan_report("scan-b", t, vals, "concave", params=params)
    seed = as_seed(seed)
    n = K.dim
    inv_scales = np.exp(-np.outer(t, A.exponents))          # (m, n) rows: e^{-A t}
    if density.kind == "gaussian":
        sigma = density.sigma
        if method == "radial":
            def draw(rng, count):
                g = rng.standard_normal((count, n))
                th = g / np.linalg.norm(g, axis=1, keepdims=True)
                cols = []
                for s in inv_scales:
                    r = 1.0 / (sigma * K.gauge(th * s))
                    cols.append(special.gammainc(n / 2, 0.5 * r * r))
                return np.column_stack(cols)
        elif method == "indicator":
            def draw(rng, count):
                z = sigma * rng.standard_normal((count, n))
                return np.column_stack([(K.gauge(z * s) <= 1.0).astype(float) for s in inv_scales])
        else:
            raise ValueError(f"unknown Gaussian method {method!r}")
        res = mc_mean(draw, n_samples, seed)
        return scan_report("scan-b", t, res.mean, "concave", cov=res.cov, sigmas=sigmas,
                           seed=seed, n_samples=res.n_samples, params=params)
    # mu(e^{At} K) = e^{tr(A) t} int_K f(e^{At} y) dy
    lo, hi = K.bounding_box()
    vbox = box_volume(lo, hi)
    scales = np.exp(np.outer(t, A.exponents))
    jac = np.exp(A.trace * t)

    def draw(rng, count):
        y = sample_box(rng, lo, hi, count)
        inside = K.gauge(y) <= 1.0
        return np.column_stack([np.where(inside, density.value(y * s), 0.0) for s in scales])

    res = mc_mean(draw, n_samples, seed)
    factor = vbox * jac
    return scan_report("scan-b", t, res.mean * factor, "concave", cov=res.cov * np.outer(factor, factor),
                       sigmas=sigmas, seed=seed, n_samples=res.n_samples, params=params)


def strip_volume(K: Body, u, a: float, t: float) -> float:
    """``|{|x.u| <= a} ∩ e^t K|`` from the joint halfspace description."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    normals = np.vstack([K.normals, u, -u])
    offsets = np.concatenate([np.exp(t) * K.offsets, [a, a]])
    return volume(make_hpoly(normals, offsets))


def check_strip_b(K: Body, u, a: float, t_grid, tolerance: float = STRIP_TOL) -> ScanReport:
    """Concavity of ``t -> log |E ∩ e^t K|`` for the symmetric strip ``E = {|x.u| <= a}``."""
    if K.dim > 3 or K.normals is None:
        raise UnsupportedDimension("exact strip volumes need n <= 3")
    _require_symmetric(K)
    t = np.asarray(t_grid, dtype=float)
    vals = [strip_volume(K, u, a, s) for s in t]
    return scan_report("strip-b", t, vals, "concave", abs_tol=tolerance,
                       params={"u": np.asarray(u, dtype=float).tolist(), "a": a})


def scan_dual_b(flow, t_grid, tolerance: float = EXACT_TOL) -> ScanReport:
    """Convexity of ``t -> log |P_t|`` for ``P_t = conv{e^{a_i t} x_i}``."""
    if flow.dim > 3:
        raise UnsupportedDimension("exact volumes need n <= 3")
    t = np.asarray(t_grid, dtype=float)
    lo, hi = flow.window
    if t.min() < lo - 1e-12 or t.max() > hi + 1e-12:
        raise ValueError("t_grid leaves the flow window")
    vals = [volume(flow.at(s)) for s in t]
    return scan_report("dual-b", t, vals, "convex", abs_tol=tolerance,
                       params={"window": list(flow.window)})


def dual_family_quadrature(K, L, size: int | None = None):
    if K.dim == 2:
        return arc_quadrature(np.concatenate([_kinks(K, "support"), _kinks(L, "support")]), order=10)
    return default_quadrature(K.dim, size)


def scan_dual_family(K, L, p: float, a: float, t_grid, quad=None,
                     tolerance: float = EXACT_TOL) -> ScanReport:
    """Concavity of ``t -> log (1/n) int_S (h_K^p + e^t a h_L^p)^{-n/p}``,
    the volume of ``(K +_p e^t a L)°``."""
    if K.dim != L.dim:
        raise ValueError("bodies live in different dimensions")
    _require_symmetric(K, L)
    n = K.dim
    q = as_quadrature(quad, n) if quad is not None else dual_family_quadrature(K, L)
    hK = np.asarray(K.support(q.directions)) ** p
    hL = np.asarray(L.support(q.directions)) ** p
    t = np.asarray(t_grid, dtype=float)
    vals = [q.integrate((hK + np.exp(s) * a * hL) ** (-n / p)) / n for s in t]
    return scan_report("dual-family", t, vals, "concave", abs_tol=tolerance,
                       params={"p": p, "a": a, "quadrature_size": len(q.weights)})
