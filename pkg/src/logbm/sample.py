"""Seeded randomness: hierarchical seeds, sphere and Grassmannian draws,
random body generators and uniform sampling inside bodies.

Every random stream is addressed by a root seed plus an integer path; the
stream for ``(root, path)`` is ``SeedSequence(root, spawn_key=path)``, so it
does not depend on how many other streams were drawn before it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from logbm.errors import AcceptanceTooLow, DegenerateBody, GeometryError
from logbm.geom_core.body import Body, Subspace, make_hpoly, make_vpoly

MAX_RETRIES = 100
MIN_ACCEPTANCE = 1e-3


@dataclass(frozen=True)
class SeedSpec:
    root_seed: int
    stream_path: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "root_seed", int(self.root_seed))
        object.__setattr__(self, "stream_path", tuple(int(k) for k in self.stream_path))

    def child(self, *keys: int) -> "SeedSpec":
        return SeedSpec(self.root_seed, self.stream_path + tuple(keys))

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.root_seed, spawn_key=self.stream_path)
        return np.random.Generator(np.random.PCG64(ss))

    def to_json(self) -> dict:
        return {"root_seed": self.root_seed, "stream_path": list(self.stream_path)}


def as_seed(seed) -> SeedSpec:
    if isinstance(seed, SeedSpec):
        return seed
    return SeedSpec(int(seed))


def rng_for(seed, *path: int) -> np.random.Generator:
    return as_seed(seed).child(*path).rng()


# --------------------------------------------------------------------------
# directions and subspaces
# --------------------------------------------------------------------------
def sphere_uniform(n: int, count: int, seed) -> np.ndarray:
    """``count`` independent uniform points on S^{n-1}."""
    g = rng_for(seed).standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def haar_frame(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Rows of a Haar-random orthonormal k-frame in R^n."""
    q, r = np.linalg.qr(rng.standard_normal((n, k)))
    q = q * np.sign(np.diag(r))
    return q.T


def grassmann_subspace(n: int, k: int, seed) -> Subspace:
    if not 1 <= k <= n - 1:
        raise ValueError("subspace dimension must satisfy 1 <= k <= n - 1")
    return Subspace(haar_frame(rng_for(seed), n, k))


# --------------------------------------------------------------------------
# random bodies
# --------------------------------------------------------------------------
def _radii(rng, count, radius_law):
    if radius_law == "sphere":
        return np.ones(count)
    lo, hi = radius_law if isinstance(radius_law, tuple) else (0.5, 1.5)
    return rng.uniform(lo, hi, count)


def _retry(build, seed):
    base = as_seed(seed)
    last = None
    for attempt in range(MAX_RETRIES):
        try:
            return build(base.child(attempt).rng())
        except GeometryError as exc:
            last = exc
    raise DegenerateBody(f"generator failed {MAX_RETRIES} times: {last}")


def random_sym_vpoly(n: int, m: int, seed, radius_law=(0.5, 1.5)) -> Body:
    """conv{±w_j} for ``m`` random points ``w_j`` (up to 2m vertices)."""

    def build(rng):
        w = rng.standard_normal((m, n))
        w *= (_radii(rng, m, radius_law) / np.linalg.norm(w, axis=1))[:, None]
        return make_vpoly(np.vstack([w, -w]))

    return _retry(build, seed)


def random_sym_hpoly(n: int, m: int, seed) -> Body:
    """Intersection of ``m`` random symmetric slabs ``|x . v| <= b``."""

    def build(rng):
        v = rng.standard_normal((m, n))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return make_hpoly(v, rng.uniform(0.5, 1.5, m), symmetrize=True)

    return _retry(build, seed)


def random_unconditional(n: int, m: int, seed) -> Body:
    """Hull of all coordinate reflections of ``m`` random points."""
    signs = np.array(np.meshgrid(*[[1.0, -1.0]] * n, indexing="ij")).reshape(n, -1).T

    def build(rng):
        w = np.abs(rng.standard_normal((m, n)))
        w *= (rng.uniform(0.5, 1.5, m) / np.linalg.norm(w, axis=1))[:, None]
        return make_vpoly((signs[:, None, :] * w[None, :, :]).reshape(-1, n))

    return _retry(build, seed)


def random_triangle_centroid(seed) -> Body:
    """A random triangle translated so that its centroid is the origin."""

    def build(rng):
        p = rng.standard_normal((3, 2))
        p = p - p.mean(axis=0)
        return make_vpoly(p)

    return _retry(build, seed)


def random_vpoly(n: int, m: int, seed) -> Body:
    """Random (generally non-symmetric) origin-interior V-polytope."""

    def build(rng):
        w = rng.standard_normal((m, n))
        w *= (rng.uniform(0.5, 1.5, m) / np.linalg.norm(w, axis=1))[:, None]
        return make_vpoly(w)

    return _retry(build, seed)


def random_hpoly(n: int, m: int, seed) -> Body:
    """Random (generally non-symmetric) bounded H-polytope."""

    def build(rng):
        v = rng.standard_normal((m, n))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return make_hpoly(v, rng.uniform(0.5, 1.5, m))

    return _retry(build, seed)


def random_vertex_flow(n: int, m: int, seed, symmetric: bool = True, window=(-1.0, 1.0),
                       exponent_scale: float = 1.0):
    """Random ``VertexFlow``; symmetric flows pair each ``x_i`` with ``-x_i``."""
    from logbm.combine import VertexFlow

    def build(rng):
        k = m // 2 if symmetric else m
        x = rng.standard_normal((k, n))
        x *= (rng.uniform(0.5, 1.5, k) / np.linalg.norm(x, axis=1))[:, None]
        a = rng.uniform(-exponent_scale, exponent_scale, k)
        if symmetric:
            x, a = np.vstack([x, -x]), np.concatenate([a, a])
        return VertexFlow(x, a, window)

    return _retry(build, seed)


# --------------------------------------------------------------------------
# points inside bodies
# --------------------------------------------------------------------------
def sample_box(rng, lo, hi, count) -> np.ndarray:
    return lo + (hi - lo) * rng.random((count, len(lo)))


def sample_in_body(body, count: int, seed, max_rounds: int = 1000) -> np.ndarray:
    """``count`` uniform points in ``body``.

    Rejection from the bounding box; if the acceptance rate measured on a
    pilot batch is below ``1e-3`` a hit-and-run chain is used instead.
    """
    rng = rng_for(seed)
    lo, hi = body.bounding_box()
    pilot = sample_box(rng, lo, hi, 4096)
    rate = float(np.mean(body.gauge(pilot) <= 1.0))
    if rate < MIN_ACCEPTANCE:
        return hit_and_run(body, count, rng)
    out = [pilot[body.gauge(pilot) <= 1.0]]
    have = len(out[0])
    rounds = 0
    while have < count:
        rounds += 1
        if rounds > max_rounds:
            raise AcceptanceTooLow("rejection sampler did not reach the requested count")
        batch = sample_box(rng, lo, hi, max(4096, int(1.2 * (count - have) / rate)))
        acc = batch[body.gauge(batch) <= 1.0]
        out.append(acc)
        have += len(acc)
    return np.vstack(out)[:count]


def hit_and_run(body, count: int, rng: np.random.Generator, steps_per_sample: int | None = None) -> np.ndarray:
    """Hit-and-run chain from the origin with ``50 n`` steps between outputs."""
    if body.normals is None:
        raise AcceptanceTooLow("hit-and-run needs the halfspace representation")
    n = body.dim
    steps = steps_per_sample or 50 * n
    V, b = body.normals, body.offsets
    x = np.zeros(n)
    out = np.empty((count, n))
    for k in range(count):
        for _ in range(steps):
            d = rng.standard_normal(n)
            d /= np.linalg.norm(d)
            vd = V @ d
            slack = b - V @ x
            with np.errstate(divide="ignore"):
                ratios = slack / vd
            hi = ratios[vd > 0].min()
            lo = ratios[vd < 0].max()
            x = x + rng.uniform(lo, hi) * d
        out[k] = x
    return out
