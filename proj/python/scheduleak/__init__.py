"""Schedule inference from busy intervals of fixed-priority task sets."""

from ._core import (
    BusyInterval,
    Error,
    TaskSet,
    TaskSpec,
    busy_intervals,
    enumerate_matches,
    generate_taskset,
    job_count_candidates,
    run_pipeline,
    simulate,
    sweep_csv,
)

__all__ = [
    "BusyInterval",
    "Error",
    "TaskSet",
    "TaskSpec",
    "busy_intervals",
    "enumerate_matches",
    "generate_taskset",
    "job_count_candidates",
    "run_pipeline",
    "simulate",
    "sweep_csv",
]
