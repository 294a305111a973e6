"""Curvature flow of spoon-shaped networks."""

from ._spoonflow import (
    FlowConfig,
    Network,
    SpoonflowError,
    flat_density,
    generate,
    generator_names,
    run,
    shoot_brakke_spoon,
    singular_time,
)

__all__ = [
    "FlowConfig",
    "Network",
    "SpoonflowError",
    "flat_density",
    "generate",
    "generator_names",
    "run",
    "shoot_brakke_spoon",
    "singular_time",
]
