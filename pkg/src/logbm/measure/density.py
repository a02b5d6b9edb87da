"""Measures with log-concave densities and their Monte-Carlo integration."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import integrate, special

from logbm.errors import InvalidP, NonIntegrable
from logbm.geom_core.body import Body, make_hpoly
from logbm.measure.mc import Estimate, exact, mc_mean
from logbm.measure.volume import box_volume, volume, volume_mc
from logbm.sample import as_seed, sample_box

KINDS = ("lebesgue", "gaussian", "gauge_exp", "uniform_on", "truncated")
# e^{-36} makes the mass outside the truncation box negligible
_TAIL_LEVEL = 36.0


@dataclass(frozen=True, eq=False)
class DensitySpec:
    """One of the supported densities.

    ``gaussian`` is the normalized N(0, sigma^2 I) density; ``gauge_exp`` is
    ``exp(-||x||_M^p)``; ``uniform_on`` is the indicator of ``W``;
    ``truncated`` is ``exp(-max(||x||_M^p, s))`` on ``||x||_M^p <= t`` and 0
    beyond.
    """

    kind: str
    sigma: float = 1.0
    M: Any = None
    p: float | None = None
    W: Any = None
    s: float | None = None
    t: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "gaussian" and not self.sigma > 0:
            raise ValueError("Gaussian scale must be positive")
        if self.kind in ("gauge_exp", "truncated"):
            if self.M is None or self.p is None:
                raise ValueError(f"{self.kind} density needs M and p")
            if not self.p >= 1:
                raise InvalidP("the exponent p must be at least 1")
        if self.kind == "truncated":
            if self.s is None or self.t is None or not self.s > 0 or not self.t > self.s:
                raise NonIntegrable("truncated density needs t > s > 0")
        if self.kind == "uniform_on" and self.W is None:
            raise ValueError("uniform_on density needs W")

    @classmethod
    def lebesgue(cls):
        return cls("lebesgue")

    @classmethod
    def gaussian(cls, sigma: float = 1.0):
        return cls("gaussian", sigma=sigma)

    @classmethod
    def gauge_exp(cls, M, p: float):
        return cls("gauge_exp", M=M, p=p)

    @classmethod
    def uniform_on(cls, W):
        return cls("uniform_on", W=W)

    @classmethod
    def truncated(cls, M, p: float, s: float, t: float):
        return cls("truncated", M=M, p=p, s=s, t=t)

    @property
    def is_even(self) -> bool:
        if self.kind in ("lebesgue", "gaussian"):
            return True
        body = self.W if self.kind == "uniform_on" else self.M
        return bool(getattr(body, "is_symmetric", False))

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.kind == "lebesgue":
            return np.ones(len(x))
        if self.kind == "gaussian":
            n = x.shape[1]
            r2 = np.einsum("ij,ij->i", x, x) / self.sigma ** 2
            return np.exp(-0.5 * r2) / (2 * math.pi * self.sigma ** 2) ** (n / 2)
        if self.kind == "uniform_on":
            return (self.W.gauge(x) <= 1.0).astype(float)
        g = self.M.gauge(x) ** self.p
        if self.kind == "gauge_exp":
            return np.exp(-g)
        return np.where(g <= self.t, np.exp(-np.maximum(g, self.s)), 0.0)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "gaussian":
            out["sigma"] = self.sigma
        if self.kind in ("gauge_exp", "truncated"):
            out["M"] = self.M.to_json()
            out["p"] = self.p
        if self.kind == "truncated":
            out["s"], out["t"] = self.s, self.t
        if self.kind == "uniform_on":
            out["W"] = self.W.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DensitySpec":
        from logbm.geom_core.body import body_from_json

        kw = {k: v for k, v in data.items() if k != "kind"}
        for key in ("M", "W"):
            if key in kw:
                kw[key] = body_from_json(kw[key])
        return cls(data["kind"], **kw)


def _exact_capable(body) -> bool:
    return isinstance(body, Body) and body.vertices is not None and body.facets is not None


def gaussian_radial_estimator(body, sigma: float):
    """Per-direction conditional probability ``P(sigma Z in K | Z/|Z| = theta)``.

    The radial part of a standard Gaussian is chi-distributed, so the
    conditional probability is ``F_chi(1 / (sigma ||theta||_K))``.
    """
    n = body.dim

    def f(theta):
        r = 1.0 / (sigma * body.gauge(theta))
        return special.gammainc(n / 2, 0.5 * r * r)

    return f


def measure_of(body, density: DensitySpec, n_samples: int = 10**6, seed=0,
               method: str = "indicator") -> Estimate:
    """mu(K) for the measure with the given density.

    ``body=None`` stands for the whole space (Gaussian only). Gaussian
    measures are estimated from Gaussian draws, either with the indicator of
    ``K`` (``method="indicator"``) or by integrating out the radius
    (``method="radial"``). Other densities are integrated with uniform draws in
    the bounding box of ``K``.
    """
    seed = as_seed(seed)
    kind = density.kind
    if kind == "lebesgue":
        return exact(volume(body)) if _exact_capable(body) else volume_mc(body, n_samples, seed)
    if kind == "uniform_on" and _exact_capable(body) and _exact_capable(density.W):
        inter = make_hpoly(np.vstack([body.normals, density.W.normals]),
                           np.concatenate([body.offsets, density.W.offsets]))
        return exact(volume(inter))
    if kind == "gaussian":
        sigma = density.sigma
        if body is None:
            return Estimate(1.0, 0.0, int(n_samples), seed)
        n = body.dim
        if method == "radial":
            f = gaussian_radial_estimator(body, sigma)

            def draw(rng, count):
                g = rng.standard_normal((count, n))
                return f(g / np.linalg.norm(g, axis=1, keepdims=True))
        elif method == "indicator":
            def draw(rng, count):
                z = sigma * rng.standard_normal((count, n))
                return (body.gauge(z) <= 1.0).astype(float)
        else:
            raise ValueError(f"unknown Gaussian method {method!r}")
        res = mc_mean(draw, n_samples, seed)
        return Estimate(float(res.mean[0]), float(res.stderr()[0]), res.n_samples, seed)
    if body is None:
        raise NonIntegrable("only the Gaussian measure is integrated over the whole space")
    lo, hi = body.bounding_box()
    vol_box = box_volume(lo, hi)

    def draw(rng, count):
        x = sample_box(rng, lo, hi, count)
        return np.where(body.gauge(x) <= 1.0, density.value(x), 0.0)

    res = mc_mean(draw, n_samples, seed)
    return Estimate(vol_box * float(res.mean[0]), vol_box * float(res.stderr()[0]), res.n_samples, seed)


def density_norm_constant(M, p: float, n_samples: int = 10**6, seed=0) -> Estimate:
    """``int exp(-||x||_M^p) dx / |M|``, which equals Gamma(n/p + 1).

    One-dimensional bodies are integrated by adaptive quadrature; otherwise
    uniform draws in the box ``{||x||_M^p <= 36}`` are used.
    """
    if not p >= 1:
        raise InvalidP("the exponent p must be at least 1")
    n = M.dim
    if n == 1:
        hp, hm = M.support(np.array([1.0])), M.support(np.array([-1.0]))
        total = 0.0
        for h in (hp, hm):
            val, _ = integrate.quad(lambda x: math.exp(-((x / h) ** p)), 0.0, math.inf,
                                    epsabs=1e-13, epsrel=1e-12)
            total += val
        return exact(total / (hp + hm))
    seed = as_seed(seed)
    vol_m = volume(M) if _exact_capable(M) else None
    if vol_m is None:
        est = volume_mc(M, n_samples, seed.child(1))
        vol_m, vol_se = est.value, est.stderr
    else:
        vol_se = 0.0
    lo, hi = M.bounding_box()
    scale = _TAIL_LEVEL ** (1.0 / p)
    lo, hi = scale * lo, scale * hi
    vol_box = box_volume(lo, hi)

    def draw(rng, count):
        x = sample_box(rng, lo, hi, count)
        return np.exp(-M.gauge(x) ** p)

    res = mc_mean(draw, n_samples, seed.child(0))
    integral = vol_box * float(res.mean[0])
    int_se = vol_box * float(res.stderr()[0])
    ratio = integral / vol_m
    se = ratio * math.hypot(int_se / integral, vol_se / vol_m)
    return Estimate(ratio, se, res.n_samples, seed)
