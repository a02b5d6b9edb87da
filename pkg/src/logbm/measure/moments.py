"""Second and fourth moments, isotropic position, isotropic constant and the
normalized variance of |X|^2."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from logbm.errors import NotIsotropic, NotSymmetric, SingularCovariance
from logbm.measure.mc import Estimate, MeanResult, mc_mean
from logbm.measure.volume import box_volume
from logbm.sample import SeedSpec, as_seed, sample_box

ISOTROPY_SIGMAS = 4.0


@dataclass(frozen=True, eq=False)
class MomentSummary:
    """Unnormalized integrals over the body with the given density.

    ``volume`` is the total mass; ``covariance`` is ``int x x^T``;
    ``second_radial``/``fourth_radial`` are ``int |x|^2`` and ``int |x|^4``;
    ``gauge_moments`` holds ``(int ||x||_L^p, int ||x||_L^{2p})`` when requested.
    """

    volume: float
    volume_stderr: float
    covariance: np.ndarray
    covariance_stderr: np.ndarray
    second_radial: float
    second_radial_stderr: float
    fourth_radial: float
    fourth_radial_stderr: float
    gauge_moments: tuple | None
    gauge_moments_stderr: tuple | None
    n_samples: int
    seed: SeedSpec
    raw: MeanResult        # column means: [1, x_i x_j (i<=j), |x|^2, |x|^4, g^p, g^2p] times box volume

    def to_json(self) -> dict:
        return {
            "volume": self.volume,
            "volume_stderr": self.volume_stderr,
            "covariance": self.covariance.tolist(),
            "covariance_stderr": self.covariance_stderr.tolist(),
            "second_radial": self.second_radial,
            "second_radial_stderr": self.second_radial_stderr,
            "fourth_radial": self.fourth_radial,
            "fourth_radial_stderr": self.fourth_radial_stderr,
            "gauge_moments": None if self.gauge_moments is None else list(self.gauge_moments),
            "gauge_moments_stderr": None if self.gauge_moments_stderr is None else list(self.gauge_moments_stderr),
            "n_samples": self.n_samples,
            "seed": self.seed.to_json(),
        }


def moments(body, density=None, L=None, p: float | None = None,
            n_samples: int = 10**6, seed=0) -> MomentSummary:
    """Monte-Carlo moments from uniform draws in the bounding box of ``body``."""
    n = body.dim
    seed = as_seed(seed)
    lo, hi = body.bounding_box()
    vbox = box_volume(lo, hi)
    iu = np.triu_indices(n)
    with_gauge = L is not None and p is not None

    def draw(rng, count):
        x = sample_box(rng, lo, hi, count)
        w = (body.gauge(x) <= 1.0).astype(float)
        if density is not None and density.kind != "lebesgue":
            w = w * density.value(x)
        r2 = np.einsum("ij,ij->i", x, x)
        cols = [w[:, None], w[:, None] * (x[:, iu[0]] * x[:, iu[1]]), (w * r2)[:, None], (w * r2 * r2)[:, None]]
        if with_gauge:
            gp = L.gauge(x) ** p
            cols += [(w * gp)[:, None], (w * gp * gp)[:, None]]
        return vbox * np.hstack(cols)

    res = mc_mean(draw, n_samples, seed)
    m, se = res.mean, res.stderr()
    k = len(iu[0])
    cov = np.zeros((n, n))
    cov_se = np.zeros((n, n))
    cov[iu] = m[1:1 + k]
    cov_se[iu] = se[1:1 + k]
    cov = cov + np.triu(cov, 1).T
    cov_se = cov_se + np.triu(cov_se, 1).T
    j = 1 + k
    gm = gse = None
    if with_gauge:
        gm = (float(m[j + 2]), float(m[j + 3]))
        gse = (float(se[j + 2]), float(se[j + 3]))
    return MomentSummary(
        float(m[0]), float(se[0]), cov, cov_se,
        float(m[j]), float(se[j]), float(m[j + 1]), float(se[j + 1]),
        gm, gse, res.n_samples, seed, res,
    )


def _require_symmetric(body):
    if hasattr(body, "is_symmetric") and not body.is_symmetric:
        raise NotSymmetric("isotropic position is defined here for symmetric bodies")


def isotropic_from_covariance(cov: np.ndarray) -> np.ndarray:
    """``T = det(C)^{1/(2n)} C^{-1/2}``: the unit-determinant map making ``T C T^T`` scalar."""
    n = len(cov)
    w, U = np.linalg.eigh(cov)
    if w.min() <= 1e-14 * max(w.max(), 1e-300):
        raise SingularCovariance("covariance matrix is singular")
    inv_sqrt = (U / np.sqrt(w)) @ U.T
    T = math.exp(np.log(w).sum() / (2 * n)) * inv_sqrt
    return T / abs(np.linalg.det(T)) ** (1.0 / n)


def isotropic_map(body, n_samples: int = 10**6, seed=0) -> np.ndarray:
    """Unit-determinant ``T`` such that ``T K`` has scalar covariance."""
    _require_symmetric(body)
    return isotropic_from_covariance(moments(body, n_samples=n_samples, seed=seed).covariance)


def isotropic_constant(body, n_samples: int = 10**6, seed=0) -> Estimate:
    """``L_K`` with ``L_K^2 = det(int_K x x^T)^{1/n} / |K|^{(n+2)/n}``.

    ``min_{T in SL_n} int_{TK} |x|^2 = n det(C)^{1/n}``, attained at the
    isotropic map, so no explicit transformation is needed.
    """
    _require_symmetric(body)
    n = body.dim
    ms = moments(body, n_samples=n_samples, seed=seed)
    C, vol = ms.covariance, ms.volume
    if np.linalg.eigvalsh(C).min() <= 0:
        raise SingularCovariance("covariance matrix is singular")
    L2 = np.linalg.det(C) ** (1.0 / n) / vol ** ((n + 2) / n)
    Cinv = np.linalg.inv(C)
    iu = np.triu_indices(n)
    grad_cov = np.where(iu[0] == iu[1], 1.0, 2.0) * Cinv[iu] / n
    k = len(iu[0])
    grad = np.zeros(len(ms.raw.mean))
    grad[0] = -(n + 2) / (n * vol)
    grad[1:1 + k] = grad_cov
    L = math.sqrt(L2)
    se = 0.5 * L * ms.raw.delta(grad)
    return Estimate(L, se, ms.n_samples, ms.seed)


def sigma2(body, n_samples: int = 10**6, seed=0, check_isotropy: bool = True) -> Estimate:
    """``n (E|X|^4 - (E|X|^2)^2) / (E|X|^2)^2`` for ``X`` uniform on an isotropic body.

    The ratio is invariant under dilation, so for a volume-one body it is the
    usual ``(|K| int|x|^4 - (int|x|^2)^2) / ((1/n)(int|x|^2)^2)``.
    """
    n = body.dim
    ms = moments(body, n_samples=n_samples, seed=seed)
    if check_isotropy:
        C, se = ms.covariance, ms.covariance_stderr
        dev = C - np.trace(C) / n * np.eye(n)
        if np.any(np.abs(dev) > ISOTROPY_SIGMAS * np.maximum(se, 1e-300)):
            raise NotIsotropic("covariance is not a multiple of the identity")
    I0, I2, I4 = ms.volume, ms.second_radial, ms.fourth_radial
    value = n * (I4 * I0 / I2 ** 2 - 1.0)
    k = n * (n + 1) // 2
    grad = np.zeros(len(ms.raw.mean))
    grad[0] = n * I4 / I2 ** 2
    grad[1 + k] = -2 * n * I4 * I0 / I2 ** 3
    grad[2 + k] = n * I0 / I2 ** 2
    return Estimate(value, ms.raw.delta(grad), ms.n_samples, ms.seed)
