"""Randomized property suites, oracles and scans."""

from .oracles import (
    ExtremalConstruction,
    brute_force_min_prob_oracle,
    extremal_min_prob_instance,
    oracle_maximizer,
)
from .properties import (
    REGISTRY,
    ConfigError,
    SamplerConfig,
    SuiteResult,
    ViolationRecord,
    run_property_suite,
)
from .sampling import sample_density, sample_distribution, sample_joint, substream

__all__ = [
    "ExtremalConstruction",
    "brute_force_min_prob_oracle",
    "extremal_min_prob_instance",
    "oracle_maximizer",
    "REGISTRY",
    "ConfigError",
    "SamplerConfig",
    "SuiteResult",
    "ViolationRecord",
    "run_property_suite",
    "sample_density",
    "sample_distribution",
    "sample_joint",
    "substream",
]
