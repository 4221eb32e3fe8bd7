"""Python bindings for the demonstration-to-plan pipeline."""

from ._imitate import (
    PRIMITIVES,
    BenchResult,
    Model,
    Pose,
    centroid,
    estimate_pose,
    principal_angle,
    run_bench,
    synthesize_stream,
    window_filter,
)

__all__ = [
    "PRIMITIVES",
    "BenchResult",
    "Model",
    "Pose",
    "centroid",
    "estimate_pose",
    "principal_angle",
    "run_bench",
    "synthesize_stream",
    "window_filter",
]
