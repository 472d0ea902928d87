"""Deliberate corruptions used to show that the property suite has teeth.

Each mutation patches one module attribute for the duration of a ``with``
block; a correct suite reports violations while it is active.
"""

from __future__ import annotations

import contextlib
from typing import Callable, Dict, Iterator
from unittest import mock

from .. import bounds, kernel

_true_coeff = kernel.pinsker_series_coeff


def _kappa_three(order) -> float:
    kernel.kappa.__wrapped__(order)  # keep the domain checks
    return 3.0


def _doubled_first_coeff(n: int) -> float:
    c = _true_coeff(n)
    return 2 * c if n == 1 else c


def _flipped_branch(q0: float, tau: float) -> bool:
    return tau > q0


def _patch(target, attr, replacement):
    if attr == "kappa":
        replacement.__wrapped__ = getattr(target, attr)  # type: ignore[attr-defined]
    return mock.patch.object(target, attr, replacement)


MUTATIONS: Dict[str, Callable[[], contextlib.AbstractContextManager]] = {
    "kappa": lambda: _patch(kernel, "kappa", _kappa_three),
    "series-coefficient": lambda: _patch(kernel, "pinsker_series_coeff", _doubled_first_coeff),
    "branch": lambda: _patch(bounds, "_use_near_branch", _flipped_branch),
}
MUTATION_HELP = {
    "kappa": "kappa_alpha replaced by the constant 3",
    "series-coefficient": "first series coefficient doubled",
    "branch": "branch condition of the minimal-probability bound flipped",
}


@contextlib.contextmanager
def mutated(name: str) -> Iterator[None]:
    """Run the body with the named corruption in place."""
    try:
        factory = MUTATIONS[name]
    except KeyError:
        raise ValueError(f"unknown mutation {name!r}; choose from {', '.join(MUTATIONS)}") from None
    with factory():
        yield
