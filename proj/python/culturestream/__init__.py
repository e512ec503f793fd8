"""Socio-cultural measures over group-attributed reference streams."""

from ._core import (
    ConfigError,
    DataError,
    burst_costs,
    burst_episodes,
    extract_facts,
    focus,
    institutionness,
    pair_similarity,
    rank,
    rbo_depth_weight,
    reproduction,
    run_pipeline,
    selftest,
    synth_fixture,
)

__all__ = [
    "ConfigError",
    "DataError",
    "burst_costs",
    "burst_episodes",
    "extract_facts",
    "focus",
    "institutionness",
    "pair_similarity",
    "rank",
    "rbo_depth_weight",
    "reproduction",
    "run_pipeline",
    "selftest",
    "synth_fixture",
]
