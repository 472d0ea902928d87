"""Scalar functions shared by the classical and quantum code.

Everything here is vectorized over numpy arrays where that makes sense and
returns plain floats for scalar input.  Relative entropies that can be
infinite are returned as ``math.inf``; no quantity in this package is ever
``-inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

# |alpha - 1| below this routes to the natural-log / Shannon limit
NEAR_ONE = 1e-6


class DomainError(ValueError):
    """Argument outside the domain where a quantity or bound is defined."""


class ShapeError(ValueError):
    """Alphabet sizes or operator dimensions do not match."""


class NumericalFailure(ArithmeticError):
    """A limiting procedure neither converged nor diverged cleanly."""


@dataclass(frozen=True)
class Order:
    """Entropic order alpha > 0."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (a > 0 and math.isfinite(a)):
            raise DomainError(f"order must be a positive finite number, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def near_one(self) -> bool:
        return abs(self.alpha - 1.0) < NEAR_ONE


OrderLike = Union[Order, float, int]


def as_order(order: OrderLike) -> Order:
    return order if isinstance(order, Order) else Order(order)


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def alpha_log(z, order: OrderLike):
    """The alpha-logarithm ``(z**(1-alpha) - 1) / (1 - alpha)``.

    Evaluated as ``expm1((1-alpha) ln z) / (1-alpha)`` so that orders close
    to one keep full relative precision; inside the ``NEAR_ONE`` band the
    natural logarithm is returned.
    """
    o = as_order(order)
    z = np.asarray(z, dtype=float)
    if not (z > 0).all():
        raise DomainError("alpha_log requires z > 0")
    lz = np.log(z)
    if o.near_one:
        return _out(lz)
    s = 1.0 - o.alpha
    return _out(np.expm1(s * lz) / s)


def binary_tsallis(u, order: OrderLike):
    """Tsallis entropy of the two-point distribution ``{u, 1-u}``."""
    o = as_order(order)
    u = np.asarray(u, dtype=float)
    if np.any((u < 0) | (u > 1)) or np.any(np.isnan(u)):
        raise DomainError("binary_tsallis requires 0 <= u <= 1")
    total = np.zeros_like(u)
    for p in (u, 1.0 - u):
        pos = p > 0
        if np.any(pos):
            pp = p[pos]
            # -p^a ln_a p == p ln_a(1/p)
            total[pos] += pp * np.asarray(alpha_log(1.0 / pp, o))
    return _out(total)


def g_of_t(t):
    """``1 - sqrt(1 - t**2)``, computed without cancellation for small t."""
    if isinstance(t, float):
        if not 0.0 <= t <= 1.0:
            raise DomainError("g_of_t requires 0 <= t <= 1")
        return t * t / (1.0 + math.sqrt(1.0 - t * t))
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > 1)) or np.any(np.isnan(t)):
        raise DomainError("g_of_t requires 0 <= t <= 1")
    return _out(t * t / (1.0 + np.sqrt(1.0 - t * t)))


def kappa(order: OrderLike) -> float:
    """Pinsker factor: ``2a/(1-a)`` for a <= 1/2 and 2 for 1/2 <= a < 1."""
    a = as_order(order).alpha
    if not 0 < a < 1:
        raise DomainError(f"kappa is defined for 0 < alpha < 1, got {a}")
    return 2.0 * a / (1.0 - a) if a <= 0.5 else 2.0


def phi_uv(u, v, alpha):
    """Auxiliary function ``u^a v^(1-a) + (1-u)^a (1-v)^(1-a) + 2a g(|u-v|) - 1``.

    Nonpositive for every ``u, v`` in [0, 1] and ``0 <= a <= 1/2``.  At
    ``a = 0`` the factor ``u**0`` is the support indicator of ``u``.
    """
    a = np.asarray(alpha.alpha if isinstance(alpha, Order) else alpha, dtype=float)
    if np.any((a < 0) | (a > 0.5)) or np.any(np.isnan(a)):
        raise DomainError("phi_uv requires 0 <= alpha <= 1/2")
    u, v, a = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float), a)
    for x in (u, v):
        if np.any((x < 0) | (x > 1)) or np.any(np.isnan(x)):
            raise DomainError("phi_uv requires u, v in [0, 1]")

    def pw(x, e):
        out = np.zeros(np.shape(x))
        pos = x > 0
        out[pos] = x[pos] ** e[pos]
        # 0**0 is the support indicator, which is 0 here
        return out

    val = pw(u, a) * pw(v, 1 - a) + pw(1 - u, a) * pw(1 - v, 1 - a)
    val = val + 2 * a * np.asarray(g_of_t(np.abs(u - v))) - 1.0
    return _out(val)


def pinsker_series_coeff(n: int) -> float:
    """Coefficient ``binom(1/2, n) * (-1)**(n+1)`` of the expansion of g.

    Uses the closed form ``C(2n, n) / ((2n - 1) 4**n)`` in exact integer
    arithmetic, so every coefficient is strictly positive.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"series index must be a positive integer, got {n!r}")
    n = int(n)
    return math.comb(2 * n, n) / ((2 * n - 1) * 4**n)
