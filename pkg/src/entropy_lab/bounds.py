"""Closed-form continuity bounds and a uniform report type for checking them.

Every bound takes a trace distance ``tau`` (or an error probability) and an
order.  ``kernel.kappa`` and ``kernel.pinsker_series_coeff`` are looked up
at call time, so patching them in the kernel module changes these bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from . import classical, kernel, operators, quantum
from .kernel import DomainError, OrderLike, as_order

DEFAULT_TOLERANCE = 1e-9


def _slack(measured: float, bound: float, direction: str) -> float:
    hi, lo = (bound, measured) if direction == "upper" else (measured, bound)
    if math.isinf(hi) and math.isinf(lo):
        return 0.0 if hi == lo else -math.inf
    return hi - lo


@dataclass
class BoundReport:
    """A measured quantity compared with a bound.

    ``direction`` is ``"lower"`` when the bound should sit below the
    measured value and ``"upper"`` when above.  Outside the hypotheses of
    the bound (``in_domain`` false) ``satisfied`` is ``None``.
    """

    kind: str
    measured: Optional[float]
    bound: Optional[float]
    direction: str
    in_domain: bool
    tolerance: float = DEFAULT_TOLERANCE
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.direction not in ("lower", "upper"):
            raise ValueError(f"direction must be 'lower' or 'upper', got {self.direction!r}")

    @property
    def slack(self) -> Optional[float]:
        if not self.in_domain or self.measured is None or self.bound is None:
            return None
        return _slack(self.measured, self.bound, self.direction)

    @property
    def satisfied(self) -> Optional[bool]:
        s = self.slack
        if s is None:
            return None
        return s >= -self.tolerance

    def to_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"kind": self.kind}
        row.update(self.params)
        row.update(measured=self.measured, bound=self.bound, slack=self.slack,
                   in_domain=self.in_domain)
        return row


# ---------------------------------------------------------------------------
# Pinsker type


def _pinsker_args(theta, tau, order):
    o = as_order(order)
    kappa = kernel.kappa(o)
    theta, tau = float(theta), float(tau)
    if not theta > 0:
        raise DomainError(f"theta must be positive, got {theta}")
    if not 0 <= tau <= theta * (1 + 1e-12):
        raise DomainError(f"tau must lie in [0, theta], got {tau}")
    return kappa, theta, min(tau, theta)


def pinsker_lower_bound(theta, tau, order: OrderLike) -> float:
    """``kappa_a * theta * g(tau/theta)`` for operators of common trace theta."""
    kappa, theta, tau = _pinsker_args(theta, tau, order)
    return kappa * theta * kernel.g_of_t(tau / theta)


def pinsker_series_bound(theta, tau, order: OrderLike, n_terms: int) -> float:
    """Partial sum of the power series of :func:`pinsker_lower_bound`."""
    kappa, theta, tau = _pinsker_args(theta, tau, order)
    if int(n_terms) != n_terms or n_terms < 1:
        raise DomainError(f"n_terms must be a positive integer, got {n_terms!r}")
    t = tau / theta
    total = sum(kernel.pinsker_series_coeff(n) * t ** (2 * n) for n in range(1, int(n_terms) + 1))
    return kappa * theta * total


def renyi_pinsker_bound(tau, order: OrderLike) -> float:
    """``ln[1 - (1-a) kappa_a g(tau)] / (a - 1)`` for normalized states."""
    o = as_order(order)
    kappa = kernel.kappa(o)
    tau = float(tau)
    if not 0 <= tau <= 1 + 1e-12:
        raise DomainError(f"tau must lie in [0, 1], got {tau}")
    x = (1 - o.alpha) * kappa * kernel.g_of_t(min(tau, 1.0))
    if x >= 1.0:
        return math.inf
    return math.log1p(-x) / (o.alpha - 1)


# ---------------------------------------------------------------------------
# upper bound through the minimal probability


def _use_near_branch(q0: float, tau: float) -> bool:
    return tau <= q0


def _min_prob_args(q0, tau, order):
    o = as_order(order)
    if not o.alpha > 1 or o.near_one:
        raise DomainError(f"the minimal-probability bound needs alpha > 1, got {o.alpha}")
    q0, tau = float(q0), float(tau)
    if not 0 < q0 <= 1:
        raise DomainError(f"q0 must lie in (0, 1], got {q0}")
    if not 0 <= tau <= 1 - q0 + 1e-12:
        raise DomainError(f"tau must lie in [0, 1 - q0] = [0, {1 - q0}], got {tau}")
    return o, q0, min(tau, 1 - q0)


def min_prob_upper_bound(q0, tau, order: OrderLike) -> float:
    """Upper bound on ``H_a(P||Q)`` (a > 1) from ``q0 = min_{p_j>0} q_j``
    and ``tau = D(P, Q)``.

    Two branches: ``tau <= q0`` and ``q0 < tau <= 1 - q0``; they meet
    continuously at ``tau = q0``.
    """
    o, q0, tau = _min_prob_args(q0, tau, order)
    if tau == 0:
        return 0.0
    a = o.alpha
    up = (q0 + tau) ** a * q0 ** (1 - a)
    if _use_near_branch(q0, tau):
        val = up + (q0 - tau) ** a * q0 ** (1 - a) - 2 * q0
    else:
        val = up - (q0 + tau)
    return val / (a - 1)


def _neg_x_lna(q0, x, o):
    # -x ln_a(q0/x), which tends to 0 with x
    return 0.0 if x == 0 else -x * kernel.alpha_log(q0 / x, o)


def min_prob_upper_bound_log_form(q0, tau, order: OrderLike) -> float:
    """:func:`min_prob_upper_bound` written with alpha-logarithms.

    The same numbers also bound the Renyi relative entropy.
    """
    o, q0, tau = _min_prob_args(q0, tau, order)
    val = _neg_x_lna(q0, q0 + tau, o)
    if _use_near_branch(q0, tau):
        val += _neg_x_lna(q0, q0 - tau, o)
    return val


# ---------------------------------------------------------------------------
# Fano and Fannes type


def _power(x: float, a: float) -> float:
    return 0.0 if x == 0 else x**a


def _ln_a(z: float, o) -> float:
    return float(kernel.alpha_log(z, o))


def fano_intermediate(J, order: OrderLike) -> float:
    """``sum_y p_Y^a [h_a(q(e|y)) + q(e|y)^a ln_a(N-1)]`` for ``J[x, y]``.

    ``q(e|y)`` is the conditional probability that X differs from y.
    """
    J = classical.as_joint(J)
    N = J.shape[0]
    if J.shape[1] != N:
        raise DomainError("X and Y must share one alphabet")
    if N < 2:
        raise DomainError("alphabet size must be at least 2")
    o = as_order(order)
    pY = J.sum(axis=0)
    lnN1 = _ln_a(N - 1, o)
    total = 0.0
    for y in np.flatnonzero(classical.support(pY)):
        qe = min(max(1.0 - J[y, y] / pY[y], 0.0), 1.0)
        total += _power(pY[y], o.alpha) * (kernel.binary_tsallis(qe, o) + _power(qe, o.alpha) * lnN1)
    return float(total)


def _unit_interval(x, name):
    x = float(x)
    if not 0 <= x <= 1 + 1e-12:
        raise DomainError(f"{name} must lie in [0, 1], got {x}")
    return min(x, 1.0)


def _alphabet(N, name):
    if int(N) != N or N < 2:
        raise DomainError(f"{name} must be an integer >= 2, got {N!r}")
    return int(N)


def fano_bound(Pe, N: int, order: OrderLike) -> float:
    """Upper bound on ``H_a(X|Y)`` from the error probability ``Pe``.

    ``(Pe^a - a Pe)/(1-a) + Pe^a ln_a[N(N-1)]`` for a < 1 and
    ``h_a(Pe) + Pe^a ln_a(N-1)`` for a > 1; the ordinary Fano bound
    ``h(Pe) + Pe ln(N-1)`` near a = 1.
    """
    Pe = _unit_interval(Pe, "Pe")
    N = _alphabet(N, "N")
    o = as_order(order)
    a = o.alpha
    if o.near_one:
        return float(kernel.binary_tsallis(Pe, o)) + Pe * math.log(N - 1)
    pa = _power(Pe, a)
    if a < 1:
        return (pa - a * Pe) / (1 - a) + pa * _ln_a(N * (N - 1), o)
    return float(kernel.binary_tsallis(Pe, o)) + pa * _ln_a(N - 1, o)


def fano_monotone_limit(N: int) -> float:
    """Largest ``Pe`` up to which the a > 1 Fano bound is nondecreasing.

    The derivative in ``Pe`` has the sign of ``(1 - Pe)(N - 1) - Pe``, so the
    limit is ``(N - 1)/N`` for every a > 1.
    """
    N = _alphabet(N, "N")
    return (N - 1) / N


def fannes_domain(d: int, order: OrderLike) -> float:
    """Largest admissible ``tau`` for :func:`fannes_bound`."""
    d = _alphabet(d, "d")
    o = as_order(order)
    return 1.0 if o.alpha < 1 and not o.near_one else d / (d + 1)


def fannes_bound(tau, d: int, order: OrderLike) -> float:
    """Upper bound on ``|H_a(rho) - H_a(sigma)|`` from ``tau = D(rho, sigma)``.

    Same closed forms as :func:`fano_bound` with ``N = d``.  For a >= 1 only
    ``0 <= tau <= d/(d+1)`` is admissible.
    """
    d = _alphabet(d, "d")
    o = as_order(order)
    tau = float(tau)
    top = fannes_domain(d, o)
    if not 0 <= tau <= top:
        raise DomainError(f"tau must lie in [0, {top!r}] for alpha = {o.alpha:g} and d = {d}, got {tau}")
    return fano_bound(tau, d, o)


def yanagi_comparison_bound(tau, d: int, order: OrderLike) -> Optional[float]:
    """Earlier continuity bound ``((2t)^a - 2t)/(1-a) + (2t)^a ln_a d``.

    Valid only for 0 < a < 1 and ``2 tau <= a**(1/(1-a))``; outside that
    range ``None`` is returned.
    """
    d = _alphabet(d, "d")
    o = as_order(order)
    if not o.alpha < 1 or o.near_one:
        raise DomainError(f"the comparison bound needs 0 < alpha < 1, got {o.alpha}")
    a = o.alpha
    t2 = 2 * float(tau)
    if t2 < 0:
        raise DomainError(f"tau must be nonnegative, got {tau}")
    if t2 > a ** (1 / (1 - a)):
        return None
    pa = _power(t2, a)
    return (pa - t2) / (1 - a) + pa * _ln_a(d, o)


# ---------------------------------------------------------------------------
# report builders used by the command line and the harness


def _alpha_params(o, **extra):
    return {"alpha": o.alpha, **extra}


def check_pinsker(A, B, order: OrderLike, n_terms: Optional[int] = None,
                  tolerance: float = DEFAULT_TOLERANCE) -> BoundReport:
    """Tsallis relative entropy of equal-trace positive operators against
    the Pinsker-type bound (or its ``n_terms`` partial sum)."""
    o = as_order(order)
    A, B = operators.as_positive(A), operators.as_positive(B)
    theta = float(np.trace(A).real)
    tau = operators.trace_distance_quantum(A, B)
    kind = "pinsker" if n_terms is None else "pinsker-series"
    params = _alpha_params(o, theta=theta, tau=tau)
    if n_terms is not None:
        params["n_terms"] = n_terms
    in_domain = (0 < o.alpha < 1 and not o.near_one and theta > 0
                 and abs(float(np.trace(B).real) - theta) <= 1e-9 * theta)
    if not in_domain:
        return BoundReport(kind, None, None, "lower", False, tolerance, params)
    measured = quantum.quantum_tsallis_rel_entropy(A, B, o)
    if n_terms is None:
        bound = pinsker_lower_bound(theta, tau, o)
    else:
        bound = pinsker_series_bound(theta, tau, o, n_terms)
    return BoundReport(kind, measured, bound, "lower", True, tolerance, params)


def check_renyi_pinsker(rho, sigma, order: OrderLike,
                        tolerance: float = DEFAULT_TOLERANCE) -> BoundReport:
    o = as_order(order)
    rho, sigma = operators.as_density(rho), operators.as_density(sigma)
    tau = operators.trace_distance_quantum(rho, sigma)
    params = _alpha_params(o, tau=tau)
    if not (0 < o.alpha < 1 and not o.near_one):
        return BoundReport("renyi-pinsker", None, None, "lower", False, tolerance, params)
    measured = quantum.quantum_renyi_rel_entropy(rho, sigma, o)
    return BoundReport("renyi-pinsker", measured, renyi_pinsker_bound(tau, o), "lower",
                       True, tolerance, params)


def check_min_prob(P, Q, order: OrderLike, tolerance: float = DEFAULT_TOLERANCE) -> BoundReport:
    """Classical ``H_a(P||Q)`` against :func:`min_prob_upper_bound`."""
    o = as_order(order)
    P, Q = classical.as_distribution(P), classical.as_distribution(Q)
    q0 = classical.minimal_probability(Q, P)
    tau = classical.trace_distance_classical(P, Q)
    params = _alpha_params(o, q0=q0, tau=tau)
    in_domain = o.alpha > 1 and not o.near_one and q0 > 0 and tau <= 1 - q0 + 1e-12
    if not in_domain:
        return BoundReport("thm3-upper", None, None, "upper", False, tolerance, params)
    measured = classical.tsallis_rel_entropy(P, Q, o)
    return BoundReport("thm3-upper", measured, min_prob_upper_bound(q0, tau, o), "upper",
                       True, tolerance, params)


def check_fano(J, order: OrderLike, tolerance: float = DEFAULT_TOLERANCE) -> BoundReport:
    o = as_order(order)
    J = classical.as_joint(J)
    N = J.shape[0]
    Pe = classical.error_probability(J)
    params = _alpha_params(o, N=N, Pe=Pe)
    if N < 2:
        return BoundReport("fano", None, None, "upper", False, tolerance, params)
    measured = classical.conditional_tsallis_entropy(J, o)
    return BoundReport("fano", measured, fano_bound(Pe, N, o), "upper", True, tolerance, params)


def _entropy_gap(rho, sigma, o):
    return abs(quantum.quantum_tsallis_entropy(rho, o) - quantum.quantum_tsallis_entropy(sigma, o))


def check_fannes(order: OrderLike, rho=None, sigma=None, tau=None, d=None,
                 tolerance: float = DEFAULT_TOLERANCE) -> BoundReport:
    """Entropy gap of two states against :func:`fannes_bound`.

    Either a pair of states or an explicit ``tau`` and ``d`` (with no
    measured value) may be given.
    """
    o = as_order(order)
    measured = None
    if rho is not None:
        rho, sigma = operators.as_density(rho), operators.as_density(sigma)
        operators._same_dim(rho, sigma)
        d = rho.shape[0]
        tau = operators.trace_distance_quantum(rho, sigma)
        measured = _entropy_gap(rho, sigma, o)
    if tau is None or d is None:
        raise DomainError("fannes check needs two states or both tau and d")
    d = _alphabet(d, "d")
    params = _alpha_params(o, d=d, tau=float(tau))
    if not 0 <= tau <= fannes_domain(d, o):
        return BoundReport("fannes", measured, None, "upper", False, tolerance, params)
    bound = fannes_bound(tau, d, o)
    return BoundReport("fannes", measured, bound, "upper", True, tolerance, params)


def check_yanagi(order: OrderLike, rho=None, sigma=None, tau=None, d=None,
                 tolerance: float = DEFAULT_TOLERANCE) -> BoundReport:
    o = as_order(order)
    measured = None
    if rho is not None:
        rho, sigma = operators.as_density(rho), operators.as_density(sigma)
        operators._same_dim(rho, sigma)
        d = rho.shape[0]
        tau = operators.trace_distance_quantum(rho, sigma)
        measured = _entropy_gap(rho, sigma, o)
    if tau is None or d is None:
        raise DomainError("yanagi check needs two states or both tau and d")
    d = _alphabet(d, "d")
    params = _alpha_params(o, d=d, tau=float(tau))
    bound = None
    if 0 < o.alpha < 1 and not o.near_one:
        bound = yanagi_comparison_bound(tau, d, o)
    return BoundReport("yanagi", measured, bound, "upper", bound is not None, tolerance, params)
