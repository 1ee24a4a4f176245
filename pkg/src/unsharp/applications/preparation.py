"""Steering a qubit to a target state with unsharp measurements only.

Starting from ``|psi0> = (|0> + |1>)/sqrt(2)`` the protocol runs two stages:

1. repeated unsharp y measurements move the azimuth ``phi`` (the state stays
   on the equator) until it is within ``tol_phi`` of the target;
2. repeated unsharp z measurements move the polar angle at fixed ``phi``
   until it is within ``tol_theta``.

Each stage may drift the wrong way.  If the distance to the stage target grows
beyond its value at stage entry plus ``guard_band`` the qubit is reset to
``|psi0>`` by alternating projective x and y measurements, and stage 1
restarts.

The controller acts on its believed state, updated with the reported
outcomes.  Outcome flips and spontaneous collapses act on the true state only,
so the two can diverge; the reported fidelity is that of the true state with
the target.  Error channels act on the unsharp measurements, not on resets,
and a channel with probability zero draws no random numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..noise import NoiseConfig, flip_outcome, spontaneous_collapse
from ..qubit import (
    MeasurementAxis,
    apply_measurement,
    as_state,
    bloch_angles,
    build_symmetric_povm,
    fidelity,
    measure,
    target_state,
)
from .sweep import SWEEP_VARIABLES, SweepPoint, SweepResult, TrajectoryRecord, chunk_ranges, run_chunks, trajectory_rng

PSI0 = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
RESET_MAX_STEPS = 1000
RESET_FIDELITY = 1 - 1e-9
BATCH = 64


class ResetError(RuntimeError):
    """The reset loop hit its iteration guard."""


def wrap_angle(x: float) -> float:
    """Map an angle difference into ``(-pi, pi]``."""
    y = (x + np.pi) % (2 * np.pi) - np.pi
    return np.pi if y == -np.pi else float(y)


@dataclass(frozen=True)
class PreparationConfig:
    theta_target: float = np.pi / 4
    phi_target: float = np.pi / 2
    p0: float = 0.15
    tol_phi: float = 0.05
    tol_theta: float = 0.05
    guard_band: float | None = None  # default 2 * tolerance of the stage
    max_measurements: int = 1000
    n_trajectories: int = 1000
    seed: int = 0
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    count_resets: bool = True

    def __post_init__(self) -> None:
        if not (np.isfinite(self.theta_target) and 0.0 <= self.theta_target <= np.pi):
            raise ValueError(f"theta_target={self.theta_target!r} outside [0, pi]")
        if not np.isfinite(self.phi_target):
            raise ValueError(f"phi_target={self.phi_target!r} is not finite")
        if not 0.0 <= self.p0 <= 0.5:
            raise ValueError(f"p0={self.p0!r} outside [0, 0.5]")
        for name in ("tol_theta", "tol_phi"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.guard_band is not None and not self.guard_band > 0:
            raise ValueError("guard_band must be positive")
        for name in ("max_measurements", "n_trajectories"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")

    def guard(self, tol: float) -> float:
        return 2.0 * tol if self.guard_band is None else self.guard_band

    @property
    def target(self) -> np.ndarray:
        return target_state(self.theta_target, self.phi_target)


def reset_to_psi0(state, rng: np.random.Generator, max_steps: int = RESET_MAX_STEPS) -> tuple[np.ndarray, int]:
    """Alternate projective x and y measurements until the outcome is ``+x``.

    Returns ``(|psi0>, steps)``.  The starting state is measured first along x.
    """
    psi = as_state(state, normalize=True)
    sharp_x = build_symmetric_povm(0.0, MeasurementAxis.x())
    sharp_y = build_symmetric_povm(0.0, MeasurementAxis.y())
    for step in range(1, max_steps + 1):
        povm = sharp_x if step % 2 == 1 else sharp_y
        _, psi = measure(psi, povm, rng)
        if povm is sharp_x and fidelity(psi, PSI0) > RESET_FIDELITY:
            return PSI0.copy(), step
    raise ResetError(f"reset did not reach |psi0> within {max_steps} measurements")


def _stage_distance(stage: str, psi: np.ndarray, cfg: PreparationConfig) -> float:
    theta, phi = bloch_angles(psi)
    if stage == "phi":
        return abs(wrap_angle(phi - cfg.phi_target))
    return abs(theta - cfg.theta_target)


def run_preparation(cfg: PreparationConfig, rng: np.random.Generator) -> TrajectoryRecord:
    """One preparation attempt from ``|psi0>``; never raises on non-convergence."""
    povms = {"phi": build_symmetric_povm(cfg.p0, MeasurementAxis.y()),
             "theta": build_symmetric_povm(cfg.p0, MeasurementAxis.z())}
    tols = {"phi": cfg.tol_phi, "theta": cfg.tol_theta}
    target = cfg.target
    true, believed = PSI0.copy(), PSI0.copy()

    hist = {k: [] for k in ("t", "true", "est", "out", "rep", "col", "fid")}
    total, unsharp, resets = 0, 0, 0
    stage = "phi"
    entry = _stage_distance(stage, believed, cfg)
    converged = False

    while total < cfg.max_measurements:
        if _stage_distance(stage, believed, cfg) < tols[stage]:
            if stage == "theta":
                converged = True
                break
            stage = "theta"
            entry = _stage_distance(stage, believed, cfg)
            continue

        collapsed = False
        if cfg.noise.p_sp > 0:
            true, collapsed = spontaneous_collapse(true, cfg.noise.spontaneous, rng)
        outcome, true = measure(true, povms[stage], rng)
        reported = flip_outcome(outcome, cfg.noise.mapping, rng) if cfg.noise.p_wrong > 0 else outcome
        try:
            believed, _ = apply_measurement(believed, povms[stage], reported)
        except ValueError:
            pass  # impossible report under the believed state: keep the belief
        total += 1
        unsharp += 1
        hist["t"].append(total)
        hist["true"].append(true)
        hist["est"].append(believed)
        hist["out"].append(outcome)
        hist["rep"].append(reported)
        hist["col"].append(collapsed)
        hist["fid"].append(fidelity(true, target))

        if _stage_distance(stage, believed, cfg) > entry + cfg.guard(tols[stage]):
            true, steps = reset_to_psi0(true, rng)
            believed = PSI0.copy()
            total += steps
            resets += 1
            stage = "phi"
            entry = _stage_distance(stage, believed, cfg)

    final_fid = fidelity(true, target)
    theta_b, phi_b = bloch_angles(believed)
    return TrajectoryRecord(
        times=np.asarray(hist["t"], dtype=float),
        true_states=np.asarray(hist["true"], dtype=complex).reshape(-1, 2),
        estimate_states=np.asarray(hist["est"], dtype=complex).reshape(-1, 2),
        outcomes=np.asarray(hist["out"], dtype=np.int8),
        reported_outcomes=np.asarray(hist["rep"], dtype=np.int8),
        collapse_flags=np.asarray(hist["col"], dtype=bool),
        fidelities=np.asarray(hist["fid"], dtype=float),
        mean_fidelity=final_fid,
        measurement_count=total if cfg.count_resets else unsharp,
        summary={
            "converged": converged,
            "count_with_resets": total,
            "count_unsharp_only": unsharp,
            "resets": resets,
            "final_theta": theta_b,
            "final_phi": phi_b,
            "guard_band_phi": cfg.guard(cfg.tol_phi),
            "guard_band_theta": cfg.guard(cfg.tol_theta),
        },
    )


def _prep_chunk(cfg: PreparationConfig, sweep_index: int, lo: int, hi: int, record: bool = False):
    recs = [run_preparation(cfg, trajectory_rng(cfg.seed, sweep_index, i)) for i in range(lo, hi)]
    arr = np.array([[r.mean_fidelity, r.measurement_count, r.summary["converged"]] for r in recs], dtype=float)
    return arr, (recs if record else None)


def preparation_statistics(cfg: PreparationConfig, sweep_index: int = 0, jobs: int = 1) -> SweepPoint:
    """Final fidelities, counts and convergence flags of ``cfg.n_trajectories`` runs."""
    tasks = [(cfg, sweep_index, lo, hi) for lo, hi in chunk_ranges(cfg.n_trajectories, BATCH)]
    arr = np.concatenate([r[0] for r in run_chunks(_prep_chunk, tasks, jobs)])
    return SweepPoint(float("nan"), arr[:, 0], arr[:, 1], arr[:, 2].astype(bool))


def preparation_records(cfg: PreparationConfig, sweep_index: int = 0, limit: int | None = None) -> list[TrajectoryRecord]:
    n = cfg.n_trajectories if limit is None else min(limit, cfg.n_trajectories)
    return [run_preparation(cfg, trajectory_rng(cfg.seed, sweep_index, i)) for i in range(n)]


def sweep_preparation(cfg: PreparationConfig, variable: str, grid, jobs: int = 1) -> SweepResult:
    """Fidelity and measurement-count curves versus ``P_sp`` or ``P_w``."""
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError("sweep grid is empty")
    if variable not in SWEEP_VARIABLES:
        raise ValueError(f"unknown sweep variable {variable!r}; use one of {SWEEP_VARIABLES}")
    cfgs = [replace(cfg, noise=cfg.noise.with_error(variable, g)) for g in grid]
    tasks, owners = [], []
    for i, c in enumerate(cfgs):
        for lo, hi in chunk_ranges(c.n_trajectories, BATCH):
            tasks.append((c, i, lo, hi))
            owners.append(i)
    results = run_chunks(_prep_chunk, tasks, jobs)
    points = []
    for i, g in enumerate(grid):
        arr = np.concatenate([r[0] for r, o in zip(results, owners) if o == i])
        points.append(SweepPoint(g, arr[:, 0], arr[:, 1], arr[:, 2].astype(bool)))
    return SweepResult(variable, cfg.seed, points)
