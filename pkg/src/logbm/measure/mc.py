"""Chunked Monte-Carlo averaging with deterministic per-chunk streams.

``n_samples`` is cut into chunks of ``CHUNK`` draws; chunk ``c`` uses the
stream ``(seed, c)``. Chunk means and scatter matrices are merged with the
pairwise update of Chan, Golub and LeVeque, so the result depends only on the
seed and the chunk layout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from logbm.sample import SeedSpec, as_seed

CHUNK = 1 << 16


@dataclass(frozen=True)
class Estimate:
    """A Monte-Carlo (or exact, ``stderr = 0``) estimate.

    Iterating yields ``(value, stderr)`` so that ``value, err = estimate`` works.
    """

    value: float
    stderr: float
    n_samples: int = 0
    seed: SeedSpec | None = None

    def __iter__(self):
        yield self.value
        yield self.stderr

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "seed": None if self.seed is None else self.seed.to_json(),
        }


def exact(value: float) -> Estimate:
    return Estimate(float(value), 0.0, 0, None)


@dataclass(frozen=True)
class MeanResult:
    mean: np.ndarray        # (k,) sample mean of each column
    cov: np.ndarray         # (k, k) covariance of the *mean* (sample covariance / N)
    n_samples: int
    seed: SeedSpec

    def stderr(self) -> np.ndarray:
        return np.sqrt(np.maximum(np.diag(self.cov), 0.0))

    def delta(self, grad) -> float:
        """Delta-method standard error of a smooth function with gradient ``grad``."""
        g = np.asarray(grad, dtype=float)
        return float(math.sqrt(max(g @ self.cov @ g, 0.0)))


def mc_mean(sample_fn: Callable[[np.random.Generator, int], np.ndarray],
            n_samples: int, seed, chunk: int = CHUNK) -> MeanResult:
    """Average the rows produced by ``sample_fn(rng, count)`` over ``n_samples`` draws."""
    seed = as_seed(seed)
    n_samples = int(n_samples)
    if n_samples < 2:
        raise ValueError("need at least two samples")
    total = 0
    mean = None
    scatter = None
    for c in range(math.ceil(n_samples / chunk)):
        count = min(chunk, n_samples - c * chunk)
        vals = np.asarray(sample_fn(seed.child(c).rng(), count), dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        m_c = vals.mean(axis=0)
        d = vals - m_c
        s_c = d.T @ d
        if mean is None:
            mean, scatter, total = m_c, s_c, count
            continue
        delta = m_c - mean
        new_total = total + count
        mean = mean + delta * (count / new_total)
        scatter = scatter + s_c + np.outer(delta, delta) * (total * count / new_total)
        total = new_total
    cov = scatter / (total - 1) / total
    return MeanResult(mean, cov, total, seed)
