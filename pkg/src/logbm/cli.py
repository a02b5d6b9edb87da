"""Command-line interface: ``gen``, ``check``, ``scan``, ``hunt`` and ``report merge``.

Exit codes: 0 pass, 1 fail (or a confirmed violation for ``hunt``), 2 invalid
input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from logbm import sample
from logbm.combine import DirectionGrid, FlowSpec, VertexFlow
from logbm.errors import GeometryError, NumericalFailure
from logbm.geom_core.body import (
    Subspace,
    body_from_json,
    box,
    cross_polytope,
    cube,
    in_out_radius,
    regular_polygon,
)
from logbm.geom_core.functional import EuclideanBall, Segment
from logbm.measure.density import DensitySpec
from logbm.verify import checks, scans
from logbm.verify.hunt import HUNTABLE, hunt
from logbm.verify.reports import atomic_write, dump_json

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_SAMPLES = 10**6


class InputError(Exception):
    """Invalid command-line input (exit code 2)."""


@dataclass
class RunConfig:
    """Validated parameters shared by ``check``/``scan``/``hunt``."""

    command: str
    name: str
    k: str | None = None
    l: str | None = None
    body: str | None = None
    flow: str | None = None
    density: str = "lebesgue"
    sigma: float = 1.0
    lam: float = 0.5
    p: float = 1.0
    i: int = 1
    a: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    t_min: float | None = None
    t_max: float | None = None
    steps: int = 21
    dirs: int | None = None
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    out: str | None = None
    csv: str | None = None
    tol: float | None = None
    extra: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# input helpers
# --------------------------------------------------------------------------
def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"cannot read {path}: file not found") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_body(spec: str | None, dim: int | None = None):
    """Body from a JSON file, or ``ball`` / ``segment:x,y,...`` for smooth/degenerate bodies."""
    if spec is None:
        raise InputError("a body argument is required")
    if spec == "ball":
        if dim is None:
            raise InputError("'ball' needs a reference body for its dimension")
        return EuclideanBall(dim)
    if spec.startswith("segment:"):
        return Segment(np.array(_floats(spec.split(":", 1)[1])))
    data = _load_json(spec)
    if not isinstance(data, dict) or "rep" not in data:
        raise InputError(f"{spec} does not describe a body")
    try:
        return body_from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{spec}: malformed body ({exc})") from exc


def load_flow(spec: str):
    data = _load_json(spec)
    try:
        return VertexFlow.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{spec}: malformed vertex flow ({exc})") from exc


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from exc


def _flow_spec(text: str) -> FlowSpec:
    if text.endswith(".json"):
        return FlowSpec.from_json(_load_json(text))
    return FlowSpec(_floats(text))


def _density(cfg: RunConfig) -> DensitySpec:
    kind = cfg.density.replace("-", "_")
    if kind == "lebesgue":
        return DensitySpec.lebesgue()
    if kind == "gaussian":
        return DensitySpec.gaussian(cfg.sigma)
    if kind in ("gauge_exp", "uniform_on"):
        M = load_body(cfg.extra.get("density_body"))
        return DensitySpec.gauge_exp(M, cfg.extra.get("density_p") or 1.0) if kind == "gauge_exp" \
            else DensitySpec.uniform_on(M)
    raise InputError(f"unknown density {cfg.density!r}")


def _grid(dim: int, size: int | None):
    return DirectionGrid.default(dim, size)


def _emit(obj, out: str | None):
    if out:
        dump_json(obj, out)
    else:
        json.dump(obj.to_json() if hasattr(obj, "to_json") else obj, sys.stdout, indent=2)
        sys.stdout.write("\n")


# --------------------------------------------------------------------------
# gen
# --------------------------------------------------------------------------
GEN_KINDS = ("cube", "cross", "ball-polygon", "strip-box", "sym-vpoly", "sym-hpoly",
             "unconditional", "triangle-centroid", "vertex-flow")


def cmd_gen(args) -> int:
    kind, n, m, seed = args.kind, args.dim, args.m, args.seed
    if kind == "cube":
        obj = cube(n)
    elif kind == "cross":
        obj = cross_polytope(n)
    elif kind == "ball-polygon":
        obj = regular_polygon(m or 64)
    elif kind == "strip-box":
        obj = box(_floats(args.half_widths) if args.half_widths else [1.0] * n)
    elif kind == "sym-vpoly":
        obj = sample.random_sym_vpoly(n, m or 2 * n, seed)
    elif kind == "sym-hpoly":
        obj = sample.random_sym_hpoly(n, m or 2 * n, seed)
    elif kind == "unconditional":
        obj = sample.random_unconditional(n, m or 2, seed)
    elif kind == "triangle-centroid":
        obj = sample.random_triangle_centroid(seed)
    else:
        obj = sample.random_vertex_flow(n, m or 2 * (n + 1), seed,
                                        window=(args.t_min, args.t_max))
    if args.out:
        dump_json(obj.to_json(), args.out)
    else:
        json.dump(obj.to_json(), sys.stdout)
        sys.stdout.write("\n")
    if kind == "vertex-flow":
        summary = f"vertex flow: n={obj.dim} points={len(obj.points)} window={obj.window}"
    else:
        nf = "?" if obj.normals is None else len(obj.normals)
        nv = "?" if obj.vertices is None else len(obj.vertices)
        radii = in_out_radius(obj) if obj.normals is not None and obj.vertices is not None else (float("nan"),) * 2
        summary = (f"n={obj.dim} rep={obj.rep} vertices={nv} facets={nf} "
                   f"inradius={radii[0]:.6g} outradius={radii[1]:.6g}")
    print(summary, file=sys.stderr)
    return EXIT_PASS


# --------------------------------------------------------------------------
# check
# --------------------------------------------------------------------------
def _subspace(cfg: RunConfig, n: int) -> Subspace:
    if cfg.extra.get("subspace"):
        text = cfg.extra["subspace"]
        if text.endswith(".json"):
            return Subspace(_load_json(text))
        return Subspace.coordinate(n, [int(x) for x in _floats(text)])
    return Subspace.coordinate(n, range(n - 1))


def run_check(cfg: RunConfig):
    name = cfg.name
    if name in ("log-bm", "dual-log-bm", "dual-quermass", "dual-quermass-dim", "section-containment",
                "triangle-logbm"):
        K = load_body(cfg.k)
        L = load_body(cfg.l, K.dim)
        g = _grid(K.dim, cfg.dirs)
        if name == "log-bm":
            return checks.check_log_bm(K, L, cfg.lam, _density(cfg), g, cfg.samples, cfg.seed,
                                       method=cfg.extra["method"], tolerance=cfg.tol)
        if name == "dual-log-bm":
            return checks.check_dual_log_bm(K, L, cfg.lam, g, tolerance=cfg.tol)
        if name == "dual-quermass":
            return checks.check_dual_quermass(K, L, cfg.lam, cfg.p, cfg.i, g, seed=cfg.seed,
                                              tolerance=cfg.tol)
        if name == "dual-quermass-dim":
            return checks.check_dual_quermass_dim(K, L, cfg.lam, cfg.p, cfg.i, g, seed=cfg.seed,
                                                  tolerance=cfg.tol)
        if name == "section-containment":
            return checks.check_section_containment(K, L, cfg.lam, _subspace(cfg, K.dim), g,
                                                    seed=cfg.seed, tolerance=cfg.tol or 1e-9)
        return checks.check_triangle_logbm(K, L, cfg.lam, g, tolerance=cfg.tol or 1e-9)
    if name == "simplex-lower-bound":
        flow = load_flow(cfg.flow)
        return checks.check_simplex_lower_bound(flow, cfg.extra.get("s", 0.0), cfg.extra.get("r", 0.1))
    if name == "gaussian-dilates":
        M = load_body(cfg.body or cfg.k)
        return checks.check_gaussian_dilates(_density(cfg), M, cfg.alpha, cfg.beta, cfg.lam,
                                             cfg.samples, cfg.seed, method=cfg.extra["method"],
                                             tolerance=cfg.tol)
    if name == "moment-gap":
        K = load_body(cfg.k)
        L = load_body(cfg.l, K.dim)
        return checks.check_moment_gap(K, L, cfg.p, cfg.a, cfg.samples, cfg.seed, tolerance=cfg.tol)
    if name == "isotropy-derivative":
        K = load_body(cfg.k or cfg.body)
        v = _floats(cfg.extra.get("v") or ",".join(["1"] + ["0"] * (K.dim - 1)))
        return checks.check_isotropy_derivative(K, cfg.a, v, cfg.extra.get("h") or 1e-2, tolerance=cfg.tol)
    if name == "variance-bound":
        K = load_body(cfg.k or cfg.body)
        return checks.check_variance_bound(K, cfg.a, cfg.samples, cfg.seed, tolerance=cfg.tol)
    raise InputError(f"unknown check {name!r}")


CHECKS = ("log-bm", "dual-log-bm", "simplex-lower-bound", "dual-quermass", "dual-quermass-dim",
          "gaussian-dilates", "section-containment", "triangle-logbm", "moment-gap",
          "isotropy-derivative", "variance-bound")
SCANS = ("b", "dual-b", "dual-family", "strip-b")


def cmd_check(cfg: RunConfig) -> int:
    rep = run_check(cfg)
    _emit(rep, cfg.out)
    return EXIT_PASS if rep.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# scan
# --------------------------------------------------------------------------
def run_scan(cfg: RunConfig):
    explicit = cfg.t_min is not None or cfg.t_max is not None
    t = np.linspace(-1.0 if cfg.t_min is None else cfg.t_min,
                    1.0 if cfg.t_max is None else cfg.t_max, cfg.steps)
    if cfg.name == "b":
        K = load_body(cfg.body or cfg.k)
        A = _flow_spec(cfg.flow) if cfg.flow else FlowSpec(np.ones(K.dim))
        return scans.scan_b(_density(cfg), K, A, t, cfg.samples, cfg.seed, method=cfg.extra["method"])
    if cfg.name == "dual-b":
        flow = load_flow(cfg.flow)
        if not explicit:
            t = np.linspace(*flow.window, cfg.steps)
        return scans.scan_dual_b(flow, t)
    if cfg.name == "dual-family":
        K = load_body(cfg.k)
        L = load_body(cfg.l, K.dim)
        return scans.scan_dual_family(K, L, cfg.p, cfg.a, t)
    if cfg.name == "strip-b":
        K = load_body(cfg.body or cfg.k)
        u = _floats(cfg.extra.get("u") or ",".join(["1"] + ["0"] * (K.dim - 1)))
        return scans.check_strip_b(K, u, cfg.a, t)
    raise InputError(f"unknown scan {cfg.name!r}")


def cmd_scan(cfg: RunConfig) -> int:
    rep = run_scan(cfg)
    _emit(rep, cfg.out)
    csv_path = cfg.csv or (cfg.out.rsplit(".", 1)[0] + ".csv" if cfg.out else None)
    if csv_path:
        atomic_write(csv_path, rep.to_csv())
    return EXIT_PASS if rep.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# hunt and report merge
# --------------------------------------------------------------------------
def cmd_hunt(args) -> int:
    if args.check not in HUNTABLE:
        raise InputError(f"no instance generator for {args.check!r}")
    opts = {}
    if args.dirs:
        opts["dirs"] = args.dirs
    if args.m:
        opts["m"] = args.m
    res = hunt(args.check, args.dim, args.trials, args.seed, keep=args.keep, **opts)
    _emit(res, args.out)
    print(f"{args.check}: {res.n_trials} trials, worst margin {res.min_margin:.3e}, "
          f"confirmed violations {len(res.confirmed)}", file=sys.stderr)
    return EXIT_FAIL if res.confirmed else EXIT_PASS


def cmd_report(args) -> int:
    if args.action != "merge":
        raise InputError(f"unknown report action {args.action!r}")
    merged = []
    for path in args.files:
        data = _load_json(path)
        merged.extend(data if isinstance(data, list) else [data])
    if args.out:
        dump_json(merged, args.out)
    else:
        json.dump(merged, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_PASS


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------
def _add_common(p):
    p.add_argument("--k", help="body K (JSON file, 'ball' or 'segment:x,y')")
    p.add_argument("--l", help="body L")
    p.add_argument("--body", help="single body for scans and dilate checks")
    p.add_argument("--flow", help="flow: comma-separated exponents or a JSON file")
    p.add_argument("--density", default="lebesgue",
                   help="lebesgue | gaussian | gauge-exp | uniform-on")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--method", choices=["radial", "indicator"], default="radial",
                   help="Gaussian estimator")
    p.add_argument("--density-body")
    p.add_argument("--density-p", type=float)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--t-min", type=float, help="default -1 (dual-b: the flow window)")
    p.add_argument("--t-max", type=float, help="default 1 (dual-b: the flow window)")
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--dirs", type=int)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float)
    p.add_argument("--subspace", help="coordinate axes (e.g. 0,1) or a JSON basis file")
    p.add_argument("--v", help="unit direction for isotropy-derivative")
    p.add_argument("--h", type=float, help="finite-difference step")
    p.add_argument("--u", help="strip normal for strip-b")
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--r", type=float, default=0.1)
    p.add_argument("--out")
    p.add_argument("--csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logbm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a body or vertex flow")
    g.add_argument("kind", choices=GEN_KINDS)
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--m", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--half-widths")
    g.add_argument("--t-min", type=float, default=-1.0)
    g.add_argument("--t-max", type=float, default=1.0)
    g.add_argument("--out")

    c = sub.add_parser("check", help="run one inequality check")
    c.add_argument("name", choices=CHECKS)
    _add_common(c)

    s = sub.add_parser("scan", help="run a log-concavity/log-convexity scan")
    s.add_argument("name", choices=SCANS)
    _add_common(s)

    h = sub.add_parser("hunt", help="search random instances for the worst margins")
    h.add_argument("--check", required=True)
    h.add_argument("--dim", type=int, default=2)
    h.add_argument("--trials", type=int, default=100)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--keep", type=int, default=10)
    h.add_argument("--dirs", type=int)
    h.add_argument("--m", type=int)
    h.add_argument("--out")

    r = sub.add_parser("report", help="combine report files")
    r.add_argument("action", choices=["merge"])
    r.add_argument("files", nargs="+")
    r.add_argument("--out")
    return parser


def _config(args) -> RunConfig:
    extra = {k: getattr(args, k) for k in ("density_body", "density_p", "subspace", "v", "h", "u", "s", "r",
                                           "method")}
    if args.steps < 3:
        raise InputError("--steps must be at least 3")
    if not 0 <= args.lam <= 1:
        raise InputError("--lambda must lie in [0, 1]")
    if args.samples < 2:
        raise InputError("--samples must be at least 2")
    cfg = RunConfig(args.command, args.name, args.k, args.l, args.body, args.flow, args.density,
                    args.sigma, args.lam, args.p, args.i, args.a, args.alpha, args.beta, args.t_min,
                    args.t_max, args.steps, args.dirs, args.samples, args.seed, args.out, args.csv,
                    args.tol, extra)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_PASS
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "check":
            return cmd_check(_config(args))
        if args.command == "scan":
            return cmd_scan(_config(args))
        if args.command == "hunt":
            return cmd_hunt(args)
        return cmd_report(args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, GeometryError, ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
