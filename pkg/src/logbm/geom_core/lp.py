"""Dense tableau simplex for ``max c.x  s.t.  A x <= b`` with ``b >= 0``.

Only the problems that arise from origin-interior polytopes are handled:
the origin is always feasible, so the slack basis is a valid starting point
and no phase one is needed. Pivoting follows Bland's rule, which keeps the
result independent of floating-point ties.
"""
from __future__ import annotations

import numpy as np

_EPS = 1e-12


def maximize(c, A, b, max_iter: int = 10_000) -> tuple[float, np.ndarray | None]:
    """Return ``(value, x)``; ``value`` is ``inf`` (and ``x`` None) when unbounded."""
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if np.any(b < -_EPS):
        raise ValueError("right-hand side must be nonnegative")
    # columns: x+ (n), x- (n), slack (m), rhs
    T = np.zeros((m, 2 * n + m + 1))
    T[:, :n] = A
    T[:, n:2 * n] = -A
    T[:, 2 * n:2 * n + m] = np.eye(m)
    T[:, -1] = np.maximum(b, 0.0)
    cost = np.concatenate([c, -c, np.zeros(m)])
    basis = list(range(2 * n, 2 * n + m))

    for _ in range(max_iter):
        cb = cost[basis]
        reduced = cost - cb @ T[:, :-1]
        entering = next((j for j in range(2 * n + m) if reduced[j] > _EPS), None)
        if entering is None:
            break
        col = T[:, entering]
        rows = np.flatnonzero(col > _EPS)
        if rows.size == 0:
            return float("inf"), None
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + _EPS * max(1.0, abs(best))]
        leave = min(ties, key=lambda r: basis[r])
        T[leave] /= T[leave, entering]
        others = np.arange(m) != leave
        T[others] -= np.outer(T[others, entering], T[leave])
        basis[leave] = entering
    else:
        raise RuntimeError("simplex iteration limit reached")

    z = np.zeros(2 * n + m)
    z[basis] = T[:, -1]
    x = z[:n] - z[n:2 * n]
    return float(c @ x), x
