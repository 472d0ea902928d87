"""Quantum entropies, relative entropies and the quantum f-divergence.

All divergences of two operators reduce to one double sum over the
eigenpairs ``(a_i, |a_i>)`` of ``A`` and ``(b_j, |b_j>)`` of ``B`` weighted
by the overlaps ``W_ij = |<a_i|b_j>|**2``.  Powers of an operator are taken
on its support, so ``B**(1-a)`` with ``a > 1`` is a generalized inverse
power.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernel
from .classical import (
    FDivergenceSpec,
    _f_divergence,
    _renyi_power_entropy,
    _tsallis_power_entropy,
    tsallis_f,
)
from .kernel import DomainError, NumericalFailure, OrderLike, as_order
from .operators import (
    TRACE_TOL,
    _positive_spectrum,
    _same_dim,
    as_hermitian,
    coarse_grain_two_point,
    jordan_projectors,
)

__all__ = [
    "FDivergenceSpec",
    "tsallis_f",
    "quantum_tsallis_entropy",
    "quantum_renyi_entropy",
    "quantum_relative_entropy",
    "quantum_tsallis_rel_entropy",
    "quantum_renyi_rel_entropy",
    "quantum_f_divergence",
    "quantum_f_divergence_limit",
    "jordan_classical_floor",
    "kernel_included",
]

KERNEL_TOL = 1e-12
K_MAX = 60


class SingularPairError(DomainError):
    """``kr(B)`` is not inside ``kr(A)``; use the regularized limit instead."""


# Positivity is checked by _positive_spectrum, so the validators below only
# look at shape, Hermiticity and trace and spare a second eigensolve.


def _positive(A) -> np.ndarray:
    return as_hermitian(A)


def _density(rho) -> np.ndarray:
    rho = as_hermitian(rho)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise DomainError(f"density operator has trace {tr!r}, not 1")
    return rho


def _pair(A, B):
    wa, Va, _ = _positive_spectrum(A)
    wb, Vb, _ = _positive_spectrum(B)
    W = np.abs(Va.conj().T @ Vb) ** 2
    return wa, wb, W


def _kernel_ok(wa, wb, W) -> bool:
    # tr((1 - B^0) A) against tr(A)
    leak = float(wa @ W[:, wb == 0].sum(axis=1))
    return leak <= KERNEL_TOL * max(float(wa.sum()), 0.0)


def kernel_included(A, B) -> bool:
    """True when the kernel of ``B`` lies inside the kernel of ``A``."""
    A, B = _positive(A), _positive(B)
    _same_dim(A, B)
    return _kernel_ok(*_pair(A, B))


def _tsallis_rel_core(wa, wb, W, o) -> float:
    rows = wa > 0
    a = wa[rows][:, None]
    Wr = W[rows]
    on = wb > 0
    off = ~on
    total = 0.0
    if on.any():
        b = wb[on][None, :]
        total -= float(np.sum(Wr[:, on] * a * kernel.alpha_log(b / a, o)))
    if off.any() and not o.near_one:
        # ln_a(0) = -1/(1-a): for a > 1 this is the "- tr A" part that the
        # generalized inverse power leaves behind
        total += float(np.sum(Wr[:, off] * a)) / (1.0 - o.alpha)
    return total


def quantum_tsallis_entropy(rho, order: OrderLike) -> float:
    """``(tr rho^a - 1)/(1 - a)``; von Neumann entropy near a = 1."""
    w, _, _ = _positive_spectrum(_density(rho))
    return _tsallis_power_entropy(w, as_order(order))


def quantum_renyi_entropy(rho, order: OrderLike) -> float:
    """``ln(tr rho^a)/(1 - a)``; von Neumann entropy near a = 1."""
    w, _, _ = _positive_spectrum(_density(rho))
    return _renyi_power_entropy(w, as_order(order))


def quantum_relative_entropy(rho, sigma) -> float:
    """Umegaki relative entropy ``tr(rho ln rho - rho ln sigma)``.

    ``math.inf`` when the support of ``rho`` is not inside that of ``sigma``.
    """
    rho, sigma = _density(rho), _density(sigma)
    _same_dim(rho, sigma)
    wa, wb, W = _pair(rho, sigma)
    if not _kernel_ok(wa, wb, W):
        return math.inf
    return _tsallis_rel_core(wa, wb, W, kernel.Order(1.0))


def quantum_tsallis_rel_entropy(A, B, order: OrderLike) -> float:
    """Tsallis relative entropy of positive operators.

    ``(tr A - tr(A^a B^(1-a)))/(1 - a)``.  For ``a > 1`` (and near one) the
    value is ``math.inf`` unless ``kr(B)`` lies inside ``kr(A)``.
    """
    A, B = _positive(A), _positive(B)
    _same_dim(A, B)
    o = as_order(order)
    wa, wb, W = _pair(A, B)
    if (o.alpha >= 1 or o.near_one) and not _kernel_ok(wa, wb, W):
        return math.inf
    return _tsallis_rel_core(wa, wb, W, o)


def quantum_renyi_rel_entropy(rho, sigma, order: OrderLike) -> float:
    """Renyi relative entropy ``ln tr(rho^a sigma^(1-a)) / (a - 1)``."""
    rho, sigma = _density(rho), _density(sigma)
    _same_dim(rho, sigma)
    o = as_order(order)
    wa, wb, W = _pair(rho, sigma)
    if (o.alpha >= 1 or o.near_one) and not _kernel_ok(wa, wb, W):
        return math.inf
    if o.near_one:
        return _tsallis_rel_core(wa, wb, W, o)
    rows, on = wa > 0, wb > 0
    a = wa[rows][:, None]
    Wr = W[rows]
    # tr(rho^a sigma^(1-a)) - 1 as a sum of small terms
    excess = float(np.sum(Wr[:, on] * a * np.expm1((1 - o.alpha) * np.log(wb[on][None, :] / a))))
    excess -= float(np.sum(Wr[:, ~on] * a))
    if excess <= -1.0:
        return math.inf
    return math.log1p(excess) / (o.alpha - 1.0)


def _fdiv_core(wa, wb, W, spec: FDivergenceSpec) -> float:
    on = wb > 0
    b = wb[on][None, :]
    vals = b * spec(wa[:, None] / b)
    return float(np.sum(W[:, on] * vals))


def quantum_f_divergence(A, B, spec: FDivergenceSpec) -> float:
    """Quantum f-divergence ``<B^(1/2), f(L_A R_B^-1) B^(1/2)>``.

    Expands to ``sum_{a, b>0} b f(a/b) tr(P_a Q_b)``.  Requires ``kr(B)``
    inside ``kr(A)``; otherwise :class:`SingularPairError` is raised and
    :func:`quantum_f_divergence_limit` is the right tool.
    """
    A, B = _positive(A), _positive(B)
    _same_dim(A, B)
    wa, wb, W = _pair(A, B)
    if not _kernel_ok(wa, wb, W):
        raise SingularPairError("kr(B) is not contained in kr(A); use quantum_f_divergence_limit")
    return _fdiv_core(wa, wb, W, spec)


def _limit_tol(v: float) -> float:
    return 1e-11 * (1.0 + abs(v))


def quantum_f_divergence_limit(A, B, spec: FDivergenceSpec) -> float:
    """``lim S_f(A || B + eps 1)`` as eps decreases to zero.

    Walks ``eps = 2**-k`` for k = 4..60.  A value is accepted once two
    successive increments fall below ``1e-11 (1 + |value|)``, either in the
    raw sequence or in its Aitken-accelerated version (the latter only
    while raw increments shrink).  Once eps is well below the smallest
    positive eigenvalue of ``B``, growth with four non-shrinking positive
    increments in a row is reported as ``math.inf``; large but settling
    values are not.  Anything else raises :class:`NumericalFailure`.
    """
    A, B = _positive(A), _positive(B)
    _same_dim(A, B)
    wa, wb, W = _pair(A, B)
    pos = wb[wb > 0]
    # below this eps only the kernel of B drives the sequence
    settled = 1e-2 * float(pos.min()) if pos.size else math.inf
    raw, acc = [], []
    raw_hits = acc_hits = 0
    for k in range(4, K_MAX + 1):
        eps = 2.0**-k
        v = _fdiv_core(wa, wb + eps, W, spec)
        if math.isnan(v):
            raise NumericalFailure("f-divergence evaluated to nan along the regularization")
        if v == math.inf:
            return math.inf
        raw.append(v)
        if len(raw) < 2:
            continue
        d = np.diff(raw)
        raw_hits = raw_hits + 1 if abs(d[-1]) < _limit_tol(v) else 0
        if raw_hits >= 2:
            return v
        if len(d) >= 2 and abs(d[-1]) < abs(d[-2]):
            den = d[-1] - d[-2]
            a = v - d[-1] ** 2 / den if den != 0 else v
            if acc and abs(a - acc[-1]) < _limit_tol(a):
                acc_hits += 1
                if acc_hits >= 2:
                    return a
            else:
                acc_hits = 0
            acc.append(a)
        else:
            acc, acc_hits = [], 0
        tail = d[-4:]
        if eps < settled and len(tail) == 4 and np.all(tail > 0) \
                and np.all(tail[1:] >= tail[:-1] * (1 - 1e-9)):
            return math.inf
    raise NumericalFailure("regularized f-divergence neither converged nor diverged")


def jordan_classical_floor(A, B, spec: FDivergenceSpec) -> float:
    """Two-outcome classical f-divergence of ``(tr P+ A, tr P- A)`` from
    ``(tr P+ B, tr P- B)`` where ``P+-`` split the spectrum of ``A - B``.

    For operator convex ``f`` this never exceeds the quantum f-divergence.
    """
    A, B = _positive(A), _positive(B)
    _same_dim(A, B)
    _positive_spectrum(A)
    _positive_spectrum(B)
    plus, minus = jordan_projectors(A, B)
    u = np.array(coarse_grain_two_point(A, plus, minus))
    v = np.array(coarse_grain_two_point(B, plus, minus))
    return _f_divergence(np.clip(u, 0, None), np.clip(v, 0, None), spec)
