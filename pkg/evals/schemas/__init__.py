"""Experiment configuration schemas."""

from evals.schemas.config import Command, ExperimentConfig

__all__ = [
    "Command",
    "ExperimentConfig",
]
