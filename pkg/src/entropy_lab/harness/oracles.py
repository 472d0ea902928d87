"""Independent checks for the minimal-probability upper bound.

The bound maximizes a separable convex function of the positive and
negative parts of ``P - Qbar`` over a simplex.  :func:`brute_force_min_prob_oracle`
searches that simplex on a rational grid without using the closed form;
:func:`extremal_min_prob_instance` builds explicit distributions that reach
the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from .. import bounds, classical
from ..kernel import DomainError


def _phi(q0: float, alpha: float, delta: np.ndarray) -> np.ndarray:
    """Contribution ``((q0+d)^a q0^(1-a) - (q0+d)) / (a-1)`` of one coordinate."""
    base = q0 + delta
    return (base**alpha * q0 ** (1 - alpha) - base) / (alpha - 1)


@lru_cache(maxsize=256)
def _best_splits(q0: float, tau: float, alpha: float, sign: int, steps: int, max_parts: int):
    """``best[k]`` is the largest sum of ``phi(sign * tau * m_i / steps)`` over
    ``k`` nonnegative integers ``m_i`` adding up to ``steps``, with one
    maximizing composition.  Exact dynamic program over the grid."""
    grid = np.arange(steps + 1)
    vals = _phi(q0, alpha, sign * tau * grid / steps)
    best = [0.0] * (max_parts + 1)
    # cur[m]: best value for parts summing to m, with back-pointers
    cur = vals.copy()
    back: List[np.ndarray] = [grid.copy()]
    best[1] = float(cur[steps])
    for k in range(2, max_parts + 1):
        # new[m] = max_j cur[m - j] + vals[j]
        mm, jj = np.meshgrid(grid, grid, indexing="ij")
        ok = jj <= mm
        cand = np.where(ok, cur[np.clip(mm - jj, 0, None)] + vals[jj], -np.inf)
        arg = np.argmax(cand, axis=1)
        cur = cand[grid, arg]
        back.append(arg)
        best[k] = float(cur[steps])
    parts = {}
    for k in range(1, max_parts + 1):
        # rebuild the composition for k parts
        m, comp = steps, []
        for level in range(k - 1, 0, -1):
            j = int(back[level][m])
            comp.append(j)
            m -= j
        comp.append(m)
        parts[k] = tuple(sorted(comp, reverse=True))
    return tuple(best[1:]), parts


@dataclass(frozen=True)
class OracleResult:
    value: float
    x_parts: Tuple[float, ...]
    y_parts: Tuple[float, ...]


def _oracle_search(q0, tau, alpha, N, grid_steps) -> OracleResult:
    if not alpha > 1:
        raise DomainError("the oracle needs alpha > 1")
    if grid_steps < 20 or int(grid_steps) != grid_steps:
        raise DomainError("grid_steps must be an integer >= 20")
    if not 2 <= N <= 6:
        raise DomainError("the oracle supports 2 <= N <= 6")
    if not 0 < q0 <= 1 / N + 1e-15:
        raise DomainError(f"infeasible: need 0 < q0 <= 1/N, got q0 = {q0}")
    if not 0 <= tau <= 1 - q0 + 1e-15:
        raise DomainError(f"infeasible: need 0 <= tau <= 1 - q0, got tau = {tau}")
    if tau == 0:
        return OracleResult(0.0, (), ())
    s = int(grid_steps)
    xs, xparts = _best_splits(float(q0), float(tau), float(alpha), 1, s, N - 1)
    scale = tau / s
    if tau <= q0:
        # both the raised and the lowered coordinates are free
        ys, yparts = _best_splits(float(q0), float(tau), float(alpha), -1, s, N - 1)
        best = None
        for kx in range(1, N):
            for ky in range(1, N - kx + 1):
                v = xs[kx - 1] + ys[ky - 1]
                if best is None or v > best[0]:
                    best = (v, kx, ky)
        v, kx, ky = best
        return OracleResult(v, tuple(m * scale for m in xparts[kx]), tuple(m * scale for m in yparts[ky]))
    # lowered coordinates are relaxed away; only the raised part remains
    kx = int(np.argmax(xs)) + 1
    return OracleResult(xs[kx - 1], tuple(m * scale for m in xparts[kx]), ())


def brute_force_min_prob_oracle(q0: float, tau: float, alpha: float, N: int,
                                grid_steps: int = 40) -> float:
    """Grid maximum of the objective behind :func:`bounds.min_prob_upper_bound`.

    Coordinates take values ``tau * m / grid_steps``; the maximum over
    every split into raised and lowered coordinates is found exactly by a
    dynamic program.  The closed-form maximizer is a grid point.
    """
    return _oracle_search(q0, tau, alpha, N, grid_steps).value


def oracle_maximizer(q0, tau, alpha, N, grid_steps=40) -> OracleResult:
    """Like :func:`brute_force_min_prob_oracle` but also returns the
    maximizing raised (``x``) and lowered (``y``) coordinates."""
    return _oracle_search(q0, tau, alpha, N, grid_steps)


@dataclass(frozen=True)
class ExtremalConstruction:
    """Explicit pair for the minimal-probability bound.

    ``attained`` says whether ``H_alpha(P_extremal || Q_base)`` equals the
    closed-form bound; the construction needs enough room in the alphabet.
    """

    q0: float
    tau: float
    alpha: float
    P_extremal: np.ndarray
    Q_base: np.ndarray
    attained: bool

    @property
    def value(self) -> float:
        return classical.tsallis_rel_entropy(self.P_extremal, self.Q_base, self.alpha)

    @property
    def bound(self) -> float:
        return bounds.min_prob_upper_bound(self.q0, self.tau, self.alpha)


def extremal_min_prob_instance(q0: float, tau: float, alpha: float, N: int) -> ExtremalConstruction:
    """Distributions ``P, Q`` on ``N`` points with ``min_{p_j>0} q_j = q0``
    and ``D(P, Q) = tau`` chosen to meet the bound.

    For ``tau <= q0``: ``Q`` has ``q0`` in two places, ``P`` moves ``tau``
    from one to the other.  For ``tau > q0``: ``Q = (q0, tau, rest)`` and
    ``P`` moves the whole ``tau`` onto the first point, with the rest
    spread in pieces no smaller than ``q0``.
    """
    if not alpha > 1:
        raise DomainError("the construction needs alpha > 1")
    if N < 2 or int(N) != N:
        raise DomainError("N must be an integer >= 2")
    if not 0 < q0 or q0 * N > 1 + 1e-12:
        raise DomainError(f"infeasible: need 0 < q0 <= 1/N, got q0 = {q0}, N = {N}")
    if not 0 <= tau <= 1 - q0 + 1e-12:
        raise DomainError(f"infeasible: need 0 <= tau <= 1 - q0, got {tau}")
    N = int(N)
    Q = np.zeros(N)
    P = np.zeros(N)
    attained = True
    if tau <= q0:
        if N >= 3:
            Q[:2] = q0
            Q[2:] = (1 - 2 * q0) / (N - 2)
        else:
            Q[:] = (q0, 1 - q0)
            attained = math.isclose(q0, 0.5)
        P[:] = Q
        P[0] += tau
        P[1] -= tau
    else:
        r = max(1 - q0 - tau, 0.0)
        m = min(N - 2, math.floor(r / q0 * (1 + 1e-12))) if r > 0 else 0
        if r == 0 or m >= 1:
            Q[0], Q[1] = q0, tau
            if m:
                Q[2:2 + m] = r / m
            P[:] = Q
            P[0] += tau
            P[1] = 0.0
        else:
            # not enough room for the rest in pieces >= q0
            Q[0], Q[1] = q0, tau + r
            P[0], P[1] = q0 + tau, r
            attained = False
    return ExtremalConstruction(float(q0), float(tau), float(alpha), P, Q, attained)
