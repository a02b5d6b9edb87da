"""Convex bodies given only by their support function or gauge.

These stand in for smooth bodies (balls, p-sums of polytopes) in quadrature
routines, which only ever evaluate ``support``/``gauge`` on direction stacks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class EuclideanBall:
    dim: int
    radius: float = 1.0

    def support(self, u):
        u = np.asarray(u, dtype=float)
        return self.radius * np.linalg.norm(u, axis=-1)

    def gauge(self, x):
        x = np.asarray(x, dtype=float)
        return np.linalg.norm(x, axis=-1) / self.radius

    def bounding_box(self):
        r = np.full(self.dim, self.radius)
        return -r, r

    def support_kinks(self) -> np.ndarray:
        return np.empty(0)

    gauge_kinks = support_kinks


@dataclass(frozen=True)
class Segment:
    """The symmetric segment [-d, d]; it has no interior, so only ``support`` exists."""

    direction: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.direction)

    def support(self, u):
        return np.abs(np.asarray(u, dtype=float) @ np.asarray(self.direction, dtype=float))

    def support_kinks(self) -> np.ndarray:
        d = np.asarray(self.direction, dtype=float)
        a = np.arctan2(d[0], -d[1])
        return np.array([a, a + np.pi])


@dataclass(frozen=True)
class GaugeBody:
    """Body ``{x : gauge_fn(x) <= 1}`` with a caller-supplied bounding box.

    ``kinks`` lists (2-D) angles where the gauge is not smooth, so that arc
    quadratures can split there.
    """

    dim: int
    gauge_fn: Callable[[np.ndarray], np.ndarray]
    lo: np.ndarray
    hi: np.ndarray
    kinks: np.ndarray = field(default_factory=lambda: np.empty(0))

    def gauge(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        vals = np.asarray(self.gauge_fn(np.atleast_2d(x)), dtype=float)
        return float(vals[0]) if single else vals

    def contains(self, x, tol: float = 1e-12):
        return self.gauge(x) <= 1.0 + tol

    def bounding_box(self):
        return np.asarray(self.lo, dtype=float), np.asarray(self.hi, dtype=float)

    def gauge_kinks(self) -> np.ndarray:
        return np.asarray(self.kinks, dtype=float)
