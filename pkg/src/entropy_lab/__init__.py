"""Tsallis and Renyi entropies and divergences for finite distributions and
density operators, with continuity bounds and a randomized checker."""

from .kernel import DomainError, NumericalFailure, Order, ShapeError, alpha_log, kappa
from .classical import (
    f_divergence,
    renyi_entropy,
    renyi_rel_entropy,
    trace_distance_classical,
    tsallis_entropy,
    tsallis_f,
    tsallis_rel_entropy,
)
from .quantum import (
    quantum_f_divergence,
    quantum_f_divergence_limit,
    quantum_relative_entropy,
    quantum_renyi_entropy,
    quantum_renyi_rel_entropy,
    quantum_tsallis_entropy,
    quantum_tsallis_rel_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NumericalFailure",
    "Order",
    "ShapeError",
    "alpha_log",
    "kappa",
    "f_divergence",
    "renyi_entropy",
    "renyi_rel_entropy",
    "trace_distance_classical",
    "tsallis_entropy",
    "tsallis_f",
    "tsallis_rel_entropy",
    "quantum_f_divergence",
    "quantum_f_divergence_limit",
    "quantum_relative_entropy",
    "quantum_renyi_entropy",
    "quantum_renyi_rel_entropy",
    "quantum_tsallis_entropy",
    "quantum_tsallis_rel_entropy",
]
