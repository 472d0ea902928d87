"""Tables that trace a bound or a family of divergences along a parameter."""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from .. import bounds, classical, quantum
from ..kernel import DomainError

FANNES_COLUMNS = ["tau", "fannes", "yanagi", "relative_difference"]
ALPHA_LIMIT_COLUMNS = ["alpha", "distance", "tsallis", "renyi", "limit", "tsallis_error", "renyi_error",
                       "error_ratio"]
PINSKER_COLUMNS = ["tau", "divergence", "bound", "series_quadratic", "ratio"]

# ln_{1/2}(2) = 2(sqrt 2 - 1), so at d = 2, alpha = 1/2 the two bounds are
# 2 sqrt(2 tau) - tau and 4 sqrt(tau) - 4 tau: their ratio tends to sqrt 2
LIMITING_RELATIVE_DIFFERENCE = math.sqrt(2.0) - 1.0


def default_tau_grid(top: float = 0.125, n: int = 41) -> np.ndarray:
    """Log-spaced grid from 1e-8 up to ``top``."""
    return np.geomspace(1e-8, top, n)


def fannes_comparison_scan(d: int, alpha: float, tau_grid: Optional[Sequence[float]] = None) -> List[Dict]:
    """Fannes-type bound next to the earlier comparison bound.

    ``relative_difference`` is ``(comparison - fannes) / fannes``; it is left
    empty where the comparison bound does not apply or at ``tau = 0``.
    """
    if not 0 < alpha < 1:
        raise DomainError("the comparison scan needs 0 < alpha < 1")
    grid = default_tau_grid() if tau_grid is None else tau_grid
    rows = []
    for tau in grid:
        tau = float(tau)
        f = bounds.fannes_bound(tau, d, alpha)
        y = bounds.yanagi_comparison_bound(tau, d, alpha)
        rel = (y - f) / f if y is not None and f > 0 else None
        rows.append({"tau": tau, "fannes": f, "yanagi": y, "relative_difference": rel})
    return rows


def alpha_limit_scan(P, Q, quantum_inputs: bool = False, ks: Sequence[int] = (2, 3, 4, 5, 6)) -> List[Dict]:
    """Tsallis and Renyi divergences at ``alpha = 1 -+ 10**-k`` against the
    standard relative entropy.

    ``error_ratio`` compares the Tsallis error with that of the previous
    (ten times farther) order on the same side; values near 10 mean the
    error shrinks linearly in ``|alpha - 1|``.
    """
    if quantum_inputs:
        limit = quantum.quantum_relative_entropy(P, Q)
        ts = lambda a: quantum.quantum_tsallis_rel_entropy(P, Q, a)  # noqa: E731
        rn = lambda a: quantum.quantum_renyi_rel_entropy(P, Q, a)  # noqa: E731
    else:
        limit = classical.tsallis_rel_entropy(P, Q, 1.0)
        ts = lambda a: classical.tsallis_rel_entropy(P, Q, a)  # noqa: E731
        rn = lambda a: classical.renyi_rel_entropy(P, Q, a)  # noqa: E731
    rows = []
    for side in (-1, 1):
        prev = None
        for k in ks:
            delta = 10.0 ** -k
            a = 1 + side * delta
            t, r = ts(a), rn(a)
            et, er = abs(t - limit), abs(r - limit)
            if prev is None:
                ratio = None
            else:
                ratio = prev / et if et > 0 else math.inf
            rows.append({"alpha": a, "distance": delta, "tsallis": t, "renyi": r, "limit": limit,
                         "tsallis_error": et, "renyi_error": er, "error_ratio": ratio})
            prev = et
    return rows


def observed_order(rows: List[Dict]) -> float:
    """Least-squares slope of log error against log ``|alpha - 1|``."""
    x = [math.log10(r["distance"]) for r in rows if r["tsallis_error"] > 0]
    y = [math.log10(r["tsallis_error"]) for r in rows if r["tsallis_error"] > 0]
    if len(x) < 2:
        return math.nan
    return float(np.polyfit(x, y, 1)[0])


def pinsker_tightness_scan(alpha: float, tau_grid: Optional[Sequence[float]] = None) -> List[Dict]:
    """Pinsker-type bound on the symmetric two-point pair
    ``((1+t)/2, (1-t)/2)`` against ``((1-t)/2, (1+t)/2)``.

    ``ratio`` is bound over divergence; it equals one at ``alpha = 1/2``.
    """
    if not 0 < alpha < 1:
        raise DomainError("the Pinsker scan needs 0 < alpha < 1")
    grid = np.linspace(0.05, 0.95, 19) if tau_grid is None else tau_grid
    rows = []
    for tau in grid:
        tau = float(tau)
        P = np.array([(1 + tau) / 2, (1 - tau) / 2])
        H = classical.tsallis_rel_entropy(P, P[::-1].copy(), alpha)
        b = bounds.pinsker_lower_bound(1.0, tau, alpha)
        rows.append({"tau": tau, "divergence": H, "bound": b,
                     "series_quadratic": bounds.pinsker_series_bound(1.0, tau, alpha, 1),
                     "ratio": b / H if H > 0 else None})
    return rows
