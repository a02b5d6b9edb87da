"""Structured results of inequality checks and log-concavity scans."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from logbm.errors import NumericalFailure
from logbm.sample import SeedSpec

EXACT_TOL = 1e-9
MC_SIGMAS = 4.0
USABLE_SIGMAS = 10.0


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return _jsonable(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, SeedSpec):
        return obj.to_json()
    if hasattr(obj, "to_json"):
        return _jsonable(obj.to_json())
    return obj


@dataclass
class CheckReport:
    """``margin >= 0`` means the inequality holds; ``passed`` allows ``tolerance`` slack."""

    check_name: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    passed: bool
    stderr: float | None = None
    seed: SeedSpec | None = None
    n_samples: int = 0
    params: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return not self.stderr

    def to_json(self) -> dict:
        return _jsonable({
            "check_name": self.check_name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "stderr": self.stderr,
            "seed": self.seed,
            "n_samples": self.n_samples,
            "params": self.params,
        })


def inequality_report(name, lhs, rhs, relation, *, tolerance=None, stderr=None, seed=None,
                      n_samples=0, params=None, scale=None) -> CheckReport:
    """Report for ``lhs <= rhs`` (``relation="le"``) or ``lhs >= rhs`` (``"ge"``).

    Exact results use log-scale margins with default tolerance ``EXACT_TOL``;
    Monte-Carlo results use linear margins with tolerance ``4 stderr``.
    """
    lhs, rhs = float(lhs), float(rhs)
    if scale is None:
        scale = "log" if not stderr else "linear"
    if scale == "log":
        diff = math.log(rhs) - math.log(lhs) if lhs > 0 and rhs > 0 else rhs - lhs
    else:
        diff = rhs - lhs
    margin = diff if relation == "le" else -diff
    if tolerance is None:
        tolerance = MC_SIGMAS * stderr if stderr else EXACT_TOL
    return CheckReport(name, lhs, rhs, float(margin), float(tolerance),
                       bool(margin >= -tolerance), None if stderr is None else float(stderr),
                       seed, int(n_samples), dict(params or {}))


def dump_json(obj, path) -> None:
    """Write JSON atomically (temporary file in the target directory, then rename)."""
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=False)
    atomic_write(path, text + "\n")


def atomic_write(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------------
# scans
# --------------------------------------------------------------------------
SECOND_DIFF = np.array([1.0, -2.0, 1.0])


@dataclass
class ScanReport:
    """Second differences of ``log_values`` on a uniform ``t_grid``.

    ``second_diffs[j]`` belongs to the interior point ``t_grid[j + 1]``. With
    ``orientation="concave"`` the scan passes when every ``-second_diff`` is at
    least ``-(tolerance_j)``, where ``tolerance_j = abs_tol + sigmas * stderr_j``;
    ``tolerance`` reports the bound at the worst point.
    """

    check_name: str
    t_grid: np.ndarray
    values: np.ndarray
    log_values: np.ndarray
    second_diffs: np.ndarray
    min_second_diff: float
    orientation: str
    tolerance: float
    passed: bool
    stderr_per_point: np.ndarray | None = None
    second_diff_stderr: np.ndarray | None = None
    sigmas: float = 0.0
    window: tuple = (0, 0)
    seed: SeedSpec | None = None
    n_samples: int = 0
    params: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.min_second_diff

    def to_json(self) -> dict:
        return _jsonable({
            "check_name": self.check_name,
            "orientation": self.orientation,
            "t_grid": self.t_grid,
            "values": self.values,
            "log_values": self.log_values,
            "second_diffs": self.second_diffs,
            "min_second_diff": self.min_second_diff,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "stderr_per_point": self.stderr_per_point,
            "second_diff_stderr": self.second_diff_stderr,
            "sigmas": self.sigmas,
            "window": list(self.window),
            "seed": self.seed,
            "n_samples": self.n_samples,
            "params": self.params,
        })

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value", "log_value", "second_diff"])
        sd = np.full(len(self.t_grid), np.nan)
        lo, hi = self.window
        if hi - lo >= 3:
            sd[lo + 1:hi - 1] = self.second_diffs
        for t, v, lv, d in zip(self.t_grid, self.values, self.log_values, sd):
            w.writerow([repr(float(t)), repr(float(v)), repr(float(lv)), "" if np.isnan(d) else repr(float(d))])
        return buf.getvalue()


def _usable_window(values, stderr) -> tuple[int, int]:
    if stderr is None:
        ok = values > 0
    else:
        ok = values > USABLE_SIGMAS * stderr
    best, start = (0, 0), None
    for j, good in enumerate(list(ok) + [False]):
        if good and start is None:
            start = j
        elif not good and start is not None:
            if j - start > best[1] - best[0]:
                best = (start, j)
            start = None
    return best


def scan_report(name, t_grid, values, orientation, *, abs_tol=EXACT_TOL, stderr=None, cov=None,
                sigmas=MC_SIGMAS, seed=None, n_samples=0, params=None) -> ScanReport:
    """Build a :class:`ScanReport` from values and (optionally) their stderrs or
    full covariance (common random numbers make neighbouring points correlated)."""
    t = np.asarray(t_grid, dtype=float)
    v = np.asarray(values, dtype=float)
    if len(t) < 3:
        raise ValueError("a scan needs at least three grid points")
    steps = np.diff(t)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
        raise ValueError("scans need a uniform t-grid")
    se = None
    if cov is not None:
        cov = np.asarray(cov, dtype=float)
        se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    elif stderr is not None:
        se = np.asarray(stderr, dtype=float)
    lo, hi = _usable_window(v, se)
    if hi - lo < 3:
        raise NumericalFailure("fewer than three usable scan points")
    with np.errstate(divide="ignore", invalid="ignore"):
        logv = np.where(v > 0, np.log(np.where(v > 0, v, 1.0)), -np.inf)
    seg = logv[lo:hi]
    d2 = seg[:-2] - 2 * seg[1:-1] + seg[2:]
    sign = -1.0 if orientation == "concave" else 1.0
    oriented = sign * d2
    d2_se = None
    if se is not None:
        m = hi - lo
        if cov is not None:
            inv = 1.0 / v[lo:hi]
            C = cov[lo:hi, lo:hi] * np.outer(inv, inv)
            d2_se = np.array([
                math.sqrt(max(float(SECOND_DIFF @ C[j:j + 3, j:j + 3] @ SECOND_DIFF), 0.0))
                for j in range(m - 2)
            ])
        else:
            r = (se[lo:hi] / v[lo:hi]) ** 2
            d2_se = np.sqrt(r[:-2] + 4 * r[1:-1] + r[2:])
        tol_j = abs_tol + sigmas * d2_se
    else:
        tol_j = np.full(len(d2), abs_tol)
    slack = oriented + tol_j
    worst = int(np.argmin(slack))
    return ScanReport(
        check_name=name,
        t_grid=t,
        values=v,
        log_values=logv,
        second_diffs=d2,
        min_second_diff=float(oriented.min()),
        orientation=orientation,
        tolerance=float(tol_j[worst]),
        passed=bool(slack.min() >= 0),
        stderr_per_point=se,
        second_diff_stderr=d2_se,
        sigmas=float(sigmas) if se is not None else 0.0,
        window=(int(lo), int(hi)),
        seed=seed,
        n_samples=int(n_samples),
        params=dict(params or {}),
    )
