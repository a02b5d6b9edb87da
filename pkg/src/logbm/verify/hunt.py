"""Randomized search for the worst-margin instances of a check.

Every trial draws its instance from the stream ``(seed, trial)``, serializes
the bodies to JSON and rebuilds them from that JSON before running the check,
so replaying a stored instance reproduces its report exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from logbm.combine import DirectionGrid
from logbm.geom_core.body import Subspace, body_from_json
from logbm.sample import (
    SeedSpec,
    as_seed,
    haar_frame,
    random_hpoly,
    random_sym_vpoly,
    random_triangle_centroid,
    random_vertex_flow,
    random_vpoly,
)
from logbm.verify import checks, scans

CONFIRM_SIGMAS = 6.0


def _canon(body):
    return body_from_json(body.to_json())


def _pair(gen, dim, rng_seed: SeedSpec, m):
    return _canon(gen(dim, m, rng_seed.child(0))), _canon(gen(dim, m, rng_seed.child(1)))


def _mixed_body(dim, m, seed: SeedSpec):
    """Random origin-interior body: V-polytope, H-polytope or (planar) triangle."""
    kind = int(seed.child(9).rng().integers(3))
    if kind == 0:
        return random_vpoly(dim, m, seed)
    if kind == 1:
        return random_hpoly(dim, m, seed)
    if dim == 2:
        return random_triangle_centroid(seed)
    return random_vpoly(dim, dim + 1, seed)


def _lam(seed: SeedSpec) -> float:
    return float(seed.child(7).rng().uniform(0.1, 0.9))


def _grid(dim, size):
    return DirectionGrid.default(dim, size)


def _run_log_bm(dim, seed, opts):
    K, L = _pair(random_sym_vpoly, dim, seed, opts.get("m", 5))
    lam = _lam(seed)
    rep = checks.check_log_bm(K, L, lam, grid=_grid(dim, opts.get("dirs")))
    return rep, {"K": K.to_json(), "L": L.to_json(), "lambda": lam}


def _run_dual_log_bm(dim, seed, opts):
    m = opts.get("m", 6)
    K, L = _canon(_mixed_body(dim, m, seed.child(0))), _canon(_mixed_body(dim, m, seed.child(1)))
    lam = _lam(seed)
    rep = checks.check_dual_log_bm(K, L, lam, grid=_grid(dim, opts.get("dirs")))
    return rep, {"K": K.to_json(), "L": L.to_json(), "lambda": lam}


def _run_triangle(dim, seed, opts):
    t1 = _canon(random_triangle_centroid(seed.child(0)))
    t2 = _canon(random_triangle_centroid(seed.child(1)))
    lam = _lam(seed)
    rep = checks.check_triangle_logbm(t1, t2, lam, grid=_grid(2, opts.get("dirs")))
    return rep, {"K": t1.to_json(), "L": t2.to_json(), "lambda": lam}


def _run_dual_quermass(dim, seed, opts, dim_form=False):
    m = opts.get("m", 6)
    K, L = _canon(_mixed_body(dim, m, seed.child(0))), _canon(_mixed_body(dim, m, seed.child(1)))
    lam = _lam(seed)
    choices = (1.0, 2.0) if dim_form else (0.0, 1.0, 2.0)
    p = float(choices[int(seed.child(8).rng().integers(len(choices)))])
    i = int(opts.get("i", 1))
    fn = checks.check_dual_quermass_dim if dim_form else checks.check_dual_quermass
    rep = fn(K, L, lam, p, i, grid=_grid(dim, opts.get("dirs")), seed=seed.child(2))
    return rep, {"K": K.to_json(), "L": L.to_json(), "lambda": lam, "p": p, "i": i}


def _run_simplex(dim, seed, opts):
    flow = random_vertex_flow(dim, opts.get("m", 6), seed.child(0), symmetric=True)
    r = float(seed.child(7).rng().uniform(-0.3, 0.3))
    rep = checks.check_simplex_lower_bound(flow, 0.0, r)
    return rep, {"flow": flow.to_json(), "s": 0.0, "r": r}


def _run_dual_b(dim, seed, opts):
    flow = random_vertex_flow(dim, opts.get("m", 6), seed.child(0), symmetric=True)
    t = np.linspace(*flow.window, opts.get("steps", 21))
    rep = scans.scan_dual_b(flow, t)
    return rep, {"flow": flow.to_json()}


def _run_section(dim, seed, opts):
    K, L = _pair(random_sym_vpoly, dim, seed, opts.get("m", 5))
    lam = _lam(seed)
    k = int(opts.get("k", dim - 1))
    H = Subspace(haar_frame(seed.child(3).rng(), dim, k))
    rep = checks.check_section_containment(K, L, lam, H, grid=_grid(dim, opts.get("dirs")),
                                           n_probes=opts.get("probes", 200), seed=seed.child(4))
    return rep, {"K": K.to_json(), "L": L.to_json(), "lambda": lam, "subspace": H.basis.tolist()}


HUNTABLE = {
    "log-bm": _run_log_bm,
    "dual-log-bm": _run_dual_log_bm,
    "triangle-logbm": _run_triangle,
    "dual-quermass": _run_dual_quermass,
    "dual-quermass-dim": lambda d, s, o: _run_dual_quermass(d, s, o, dim_form=True),
    "simplex-lower-bound": _run_simplex,
    "dual-b": _run_dual_b,
    "section-containment": _run_section,
}


@dataclass
class HuntResult:
    check_name: str
    dim: int
    n_trials: int
    seed: SeedSpec
    worst: list = field(default_factory=list)     # (trial, report) pairs, worst first
    confirmed: list = field(default_factory=list)  # trials with an exact-path violation

    @property
    def min_margin(self) -> float:
        return min(r.margin for _, r in self.worst) if self.worst else float("nan")

    def to_json(self) -> dict:
        return {
            "check_name": self.check_name,
            "dim": self.dim,
            "n_trials": self.n_trials,
            "seed": self.seed.to_json(),
            "min_margin": self.min_margin,
            "confirmed_violations": list(self.confirmed),
            "worst": [dict(trial=t, report=r.to_json()) for t, r in self.worst],
        }


def is_confirmed_violation(report) -> bool:
    """Exact-path reports only; Monte-Carlo margins are never promoted to counterexamples."""
    stochastic = getattr(report, "stderr", None) or getattr(report, "second_diff_stderr", None) is not None
    if stochastic:
        return False
    return report.margin < -report.tolerance


def hunt(check_name: str, dim: int, n_trials: int, seed=0, keep: int = 10, **opts) -> HuntResult:
    if check_name not in HUNTABLE:
        raise KeyError(f"no instance generator for check {check_name!r}")
    if check_name == "triangle-logbm" and dim != 2:
        raise ValueError("triangles are planar")
    seed = as_seed(seed)
    run = HUNTABLE[check_name]
    results = []
    confirmed = []
    for trial in range(int(n_trials)):
        rep, instance = run(dim, seed.child(trial), opts)
        rep.params["instance"] = instance
        rep.params["trial"] = trial
        results.append((rep.margin, trial, rep))
        if dim <= 3 and is_confirmed_violation(rep):
            confirmed.append(trial)
    results.sort(key=lambda x: (x[0], x[1]))
    worst = [(t, r) for _, t, r in results[:keep]]
    return HuntResult(check_name, dim, int(n_trials), seed, worst, confirmed)
