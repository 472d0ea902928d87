"""Finite-alphabet distributions, weight sets and their entropies.

Distributions and weight sets are plain 1-D numpy arrays; joint
distributions are 2-D arrays indexed ``J[x, y]``.  The ``as_*`` helpers
validate input and are applied by every public function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernel
from .kernel import DomainError, OrderLike, ShapeError, as_order

# entries at or below SUPPORT_CUTOFF * max_entry count as zero
SUPPORT_CUTOFF = 1e-14
NORM_TOL = 1e-12


def as_weights(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ShapeError("weight set must be a non-empty 1-D array")
    if not np.all(np.isfinite(a)):
        raise DomainError("weights must be finite")
    if np.any(a < 0):
        raise DomainError("weights must be nonnegative")
    return a


def as_distribution(p) -> np.ndarray:
    p = as_weights(p)
    if abs(p.sum() - 1.0) > NORM_TOL:
        raise DomainError(f"probabilities sum to {p.sum()!r}, not 1")
    return p


def as_joint(J) -> np.ndarray:
    J = np.asarray(J, dtype=float)
    if J.ndim != 2 or J.size == 0:
        raise ShapeError("joint distribution must be a non-empty 2-D array")
    as_distribution(J.ravel())
    return J


def support(a) -> np.ndarray:
    """Boolean mask of the entries that count as nonzero."""
    a = np.asarray(a, dtype=float)
    top = a.max() if a.size else 0.0
    if top <= 0:
        return np.zeros(a.shape, dtype=bool)
    return a > SUPPORT_CUTOFF * top


def _same_shape(a, b):
    if a.shape != b.shape:
        raise ShapeError(f"alphabet mismatch: {a.shape} vs {b.shape}")


# ---------------------------------------------------------------------------
# array-level kernels (no validation, shared with the quantum module)


def _tsallis_power_entropy(p: np.ndarray, o) -> float:
    p = p[support(p)]
    return float(np.sum(p * kernel.alpha_log(1.0 / p, o)))


def _renyi_power_entropy(p: np.ndarray, o) -> float:
    p = p[support(p)]
    if o.near_one:
        return float(-np.sum(p * np.log(p)))
    # ln sum p^a, with sum p^a - 1 formed without cancellation
    excess = np.sum(p * np.expm1((o.alpha - 1.0) * np.log(p)))
    return float(math.log1p(excess) / (1.0 - o.alpha))


# ---------------------------------------------------------------------------
# single distributions


def trace_distance_classical(P, Q) -> float:
    """Half the l1 distance between two distributions."""
    P, Q = as_weights(P), as_weights(Q)
    _same_shape(P, Q)
    return 0.5 * float(np.abs(P - Q).sum())


def tsallis_entropy(P, order: OrderLike) -> float:
    """Tsallis entropy ``(sum p^a - 1)/(1 - a)``; Shannon entropy near a = 1."""
    return _tsallis_power_entropy(as_distribution(P), as_order(order))


def renyi_entropy(P, order: OrderLike) -> float:
    """Renyi entropy ``ln(sum p^a)/(1 - a)``; Shannon entropy near a = 1."""
    return _renyi_power_entropy(as_distribution(P), as_order(order))


# ---------------------------------------------------------------------------
# divergences


def tsallis_rel_entropy(A, B, order: OrderLike) -> float:
    """Tsallis relative entropy of weight set ``A`` to weight set ``B``.

    Sums run over the support of ``A``.  For orders >= 1 the value is
    ``math.inf`` unless ``supp(A)`` lies inside ``supp(B)``; for orders
    below one a zero of ``B`` simply contributes ``a/(1-alpha)``.
    Inputs need not be normalized.
    """
    A, B = as_weights(A), as_weights(B)
    _same_shape(A, B)
    o = as_order(order)
    sa, sb = support(A), support(B)
    a = A[sa]
    b = B[sa]
    hole = ~sb[sa]
    if np.any(hole):
        if o.alpha >= 1 or o.near_one:
            return math.inf
    total = 0.0
    if np.any(hole):
        total += float(a[hole].sum()) / (1.0 - o.alpha)
    keep = ~hole
    if np.any(keep):
        total -= float(np.sum(a[keep] * kernel.alpha_log(b[keep] / a[keep], o)))
    return total


def renyi_rel_entropy(P, Q, order: OrderLike) -> float:
    """Renyi relative entropy ``ln(sum p^a q^(1-a)) / (a - 1)``."""
    P, Q = as_distribution(P), as_distribution(Q)
    _same_shape(P, Q)
    o = as_order(order)
    sp, sq = support(P), support(Q)
    p = P[sp]
    q = Q[sp]
    hole = ~sq[sp]
    if np.any(hole) and (o.alpha >= 1 or o.near_one):
        return math.inf
    if o.near_one:
        return float(np.sum(p * np.log(p / q)))
    keep = ~hole
    # sum p^a q^(1-a) - 1, formed termwise
    excess = float(np.sum(p[keep] * np.expm1((1.0 - o.alpha) * np.log(q[keep] / p[keep]))))
    excess -= float(p[hole].sum())
    if excess <= -1.0:
        return math.inf
    return math.log1p(excess) / (o.alpha - 1.0)


@dataclass(frozen=True)
class FDivergenceSpec:
    """A convex generator ``f`` on [0, inf) for an f-divergence.

    ``f`` must accept numpy arrays.  ``slope_at_infinity`` is
    ``lim f(z)/z`` as z grows, needed where the second argument vanishes;
    leave it ``None`` when unknown.  ``operator_convex`` is the caller's
    assertion and is only recorded.
    """

    f: Callable[[np.ndarray], np.ndarray]
    slope_at_infinity: Optional[float] = None
    operator_convex: bool = False
    name: str = "f"

    def __call__(self, z):
        return np.asarray(self.f(np.asarray(z, dtype=float)), dtype=float)


def tsallis_f(order: OrderLike) -> FDivergenceSpec:
    """Generator ``z**a / (a - 1)`` linking f-divergences to Tsallis entropies."""
    o = as_order(order)
    if o.near_one:
        raise DomainError("tsallis_f needs alpha != 1")
    a = o.alpha

    def f(z):
        return np.where(z > 0, np.abs(z) ** a, 0.0) / (a - 1.0)

    return FDivergenceSpec(
        f=f,
        slope_at_infinity=math.inf if a > 1 else 0.0,
        operator_convex=0 < a < 1 or 1 < a <= 2,
        name=f"tsallis[{a:g}]",
    )


def _as_fspec(f, slope_at_infinity=None) -> FDivergenceSpec:
    if isinstance(f, FDivergenceSpec):
        return f
    return FDivergenceSpec(f=f, slope_at_infinity=slope_at_infinity)


def _f_divergence(p: np.ndarray, q: np.ndarray, spec: FDivergenceSpec) -> float:
    sq = support(q)
    total = 0.0
    if np.any(sq):
        total += float(np.sum(q[sq] * spec(p[sq] / q[sq])))
    lost = p[~sq]
    lost = lost[lost > 0]
    if lost.size:
        slope = spec.slope_at_infinity
        if slope is None or math.isnan(slope):
            raise DomainError("f-divergence needs lim f(z)/z where the second argument vanishes")
        if math.isinf(slope):
            return math.inf
        total += slope * float(lost.sum())
    if math.isnan(total):
        raise DomainError("f is undefined at a point the divergence needs")
    return total


def f_divergence(P, Q, f, slope_at_infinity: Optional[float] = None) -> float:
    """Csiszar f-divergence ``sum q f(p/q)``.

    ``P`` and ``Q`` may be unnormalized weight sets.  Terms with ``q = 0``
    and ``p > 0`` contribute ``p * lim f(z)/z``; ``f`` may be a callable or
    an :class:`FDivergenceSpec`.
    """
    P, Q = as_weights(P), as_weights(Q)
    _same_shape(P, Q)
    return _f_divergence(P, Q, _as_fspec(f, slope_at_infinity))


# ---------------------------------------------------------------------------
# minimal probability and the shifted comparison set


def minimal_probability(Q, support_of) -> float:
    """Smallest ``q_j`` over the support of ``support_of``."""
    Q, P = as_weights(Q), as_weights(support_of)
    _same_shape(Q, P)
    sp = support(P)
    if not np.any(sp):
        raise DomainError("support is empty")
    return float(Q[sp].min())


def qbar_construction(P, Q) -> np.ndarray:
    """Weight set ``max(q0, q_j - p_j)`` on the support of ``P``, zero elsewhere.

    Both ``P - Q + Qbar`` and ``Q - Qbar`` are nonnegative on that support.
    """
    P, Q = as_distribution(P), as_distribution(Q)
    _same_shape(P, Q)
    q0 = minimal_probability(Q, P)
    if q0 <= 0:
        raise DomainError("minimal probability is zero; the construction needs q0 > 0")
    sp = support(P)
    out = np.zeros_like(Q)
    out[sp] = np.maximum(q0, Q[sp] - P[sp])
    return out


# ---------------------------------------------------------------------------
# joint distributions


def joint_tsallis_entropy(J, order: OrderLike) -> float:
    return _tsallis_power_entropy(as_joint(J).ravel(), as_order(order))


def conditional_tsallis_entropy(J, order: OrderLike) -> float:
    """``sum_y p_Y(y)^a H_a(X | Y=y)`` for ``J[x, y] = p_XY(x, y)``.

    Note the weights are ``p_Y(y)**a``, not ``p_Y(y)``.
    """
    J = as_joint(J)
    o = as_order(order)
    pY = J.sum(axis=0)
    sy = support(pY)
    total = 0.0
    for y in np.flatnonzero(sy):
        cond = J[:, y] / pY[y]
        total += pY[y] ** o.alpha * _tsallis_power_entropy(cond, o)
    return float(total)


def error_probability(J) -> float:
    """Probability that X differs from Y, i.e. ``1 - sum_y p_XY(y, y)``."""
    J = as_joint(J)
    if J.shape[0] != J.shape[1]:
        raise ShapeError("X and Y must share one alphabet")
    return float(max(0.0, 1.0 - np.trace(J)))


def maximal_coupling(P, Q) -> np.ndarray:
    """Joint distribution with marginals ``P`` (rows) and ``Q`` (columns)
    whose error probability equals the trace distance.

    Diagonal mass is ``min(p, q)``; the residual ``(p - m) (q - m)^T / D``
    lands off the diagonal because the two residuals have disjoint supports.
    """
    P, Q = as_distribution(P), as_distribution(Q)
    _same_shape(P, Q)
    m = np.minimum(P, Q)
    J = np.diag(m)
    rp, rq = P - m, Q - m
    D = rp.sum()
    if D > 0:
        J = J + np.outer(rp, rq) / D
    return J
