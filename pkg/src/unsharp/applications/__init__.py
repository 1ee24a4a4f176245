"""Monte-Carlo experiments built on unsharp measurements."""

from .estimation import (
    EstimationConfig,
    TimescaleWarning,
    check_timescales,
    collapse_measurements,
    estimate_fidelities,
    estimation_records,
    ramsey_dephasing,
    run_estimation_trajectory,
    simulate_batch,
    sweep_estimation,
)
from .preparation import (
    PSI0,
    PreparationConfig,
    ResetError,
    preparation_records,
    preparation_statistics,
    reset_to_psi0,
    run_preparation,
    sweep_preparation,
    wrap_angle,
)
from .sweep import (
    CSV_HEADER,
    SweepPoint,
    SweepResult,
    TrajectoryRecord,
    dump_jsonl,
    monotone_within,
    trajectory_rng,
)

__all__ = [
    "CSV_HEADER",
    "EstimationConfig",
    "PSI0",
    "PreparationConfig",
    "ResetError",
    "SweepPoint",
    "SweepResult",
    "TimescaleWarning",
    "TrajectoryRecord",
    "check_timescales",
    "collapse_measurements",
    "dump_jsonl",
    "estimate_fidelities",
    "estimation_records",
    "monotone_within",
    "preparation_records",
    "preparation_statistics",
    "ramsey_dephasing",
    "reset_to_psi0",
    "run_estimation_trajectory",
    "run_preparation",
    "simulate_batch",
    "sweep_estimation",
    "sweep_preparation",
    "trajectory_rng",
    "wrap_angle",
]
