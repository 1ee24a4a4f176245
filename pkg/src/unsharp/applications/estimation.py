"""Real-time estimation of a Rabi-oscillating qubit from unsharp z measurements.

A true qubit evolves under ``(Omega_R/2) X`` plus dephasing noise and is
measured ``measurements_per_period`` times per Rabi period.  An observer who
knows the drive but not the noise propagates an estimate with the noiseless
Hamiltonian and updates it with the reported outcome.  The figure of merit is
``|<estimate|true>|^2`` averaged over the recorded window.

Each trajectory draws, from its own generator and in this order:

* uniforms of shape ``(n_epochs, 4)``: collapse event, collapse level,
  outcome, outcome flip;
* standard normals for the dephasing: one per trajectory (quasi-static) or one
  per integration step (white), scaled by ``delta_beta``.

Trajectories are simulated in fixed-size batches so results do not depend on
the number of worker processes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from ..noise import DephasingConfig, NoiseConfig, delta_beta_from_ramsey, rabi_step_unitaries, rabi_unitary
from ..qubit import MeasurementAxis, as_state, basis_state, build_symmetric_povm
from .sweep import (
    SWEEP_VARIABLES,
    SweepPoint,
    SweepResult,
    TrajectoryRecord,
    chunk_ranges,
    run_chunks,
    trajectory_rng,
)

BATCH = 64


class TimescaleWarning(UserWarning):
    pass


@dataclass(frozen=True)
class EstimationConfig:
    p0: float = 0.45
    measurements_per_period: int = 10
    rabi_period: float = 0.1  # s
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    n_trajectories: int = 1000
    duration_periods: int = 30  # recorded window
    transient_skip_periods: int = 100  # burn-in before the window
    seed: int = 0
    initial_state: str = "g"
    estimator_state: str = "+x"

    def __post_init__(self) -> None:
        if not 0.0 <= self.p0 <= 0.5:
            raise ValueError(f"p0={self.p0!r} outside [0, 0.5]")
        if not self.rabi_period > 0:
            raise ValueError("rabi_period must be positive")
        for name in ("measurements_per_period", "n_trajectories", "duration_periods"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.transient_skip_periods < 0:
            raise ValueError("transient_skip_periods must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        basis_state(self.initial_state)
        basis_state(self.estimator_state)

    @property
    def epoch_dt(self) -> float:
        return self.rabi_period / self.measurements_per_period

    @property
    def rabi_freq(self) -> float:
        return 2 * np.pi / self.rabi_period

    @property
    def n_skip(self) -> int:
        return self.transient_skip_periods * self.measurements_per_period

    @property
    def n_record(self) -> int:
        return self.duration_periods * self.measurements_per_period

    @property
    def n_epochs(self) -> int:
        return self.n_skip + self.n_record

    @property
    def white_steps(self) -> int:
        """Integration steps per epoch for the white model (``step_dt`` rounded to divide the epoch)."""
        d = self.noise.dephasing
        if d is None or d.model != "white":
            return 1
        return max(1, int(round(self.epoch_dt / d.step_dt)))


def collapse_measurements(p0: float, level: float = 0.99) -> float:
    """Expected number of z measurements taking ``|+x>`` to a z population of ``level``.

    After ``m`` more 0-outcomes than 1-outcomes the population ratio is
    ``(p0/(1-p0))^m``, so the record is a birth-death chain on ``m`` absorbed at
    ``|m| = L``; the expected absorption time is solved exactly.
    """
    if not 0.0 <= p0 <= 0.5:
        raise ValueError("p0 outside [0, 0.5]")
    if p0 == 0.5:
        return float("inf")
    if p0 == 0.0:
        return 1.0
    rho = p0 / (1 - p0)
    big_l = int(np.ceil(np.log(level / (1 - level)) / -np.log(rho) - 1e-12))
    ms = np.arange(-big_l + 1, big_l)
    pg = 1.0 / (1.0 + rho ** (-ms.astype(float)))
    q0 = p0 * pg + (1 - p0) * (1 - pg)  # outcome 0 pushes m up
    n = ms.size
    a = np.eye(n)
    for i in range(n):
        if i + 1 < n:
            a[i, i + 1] -= q0[i]
        if i - 1 >= 0:
            a[i, i - 1] -= 1 - q0[i]
    e = np.linalg.solve(a, np.ones(n))
    return float(e[big_l - 1])


def check_timescales(cfg: EstimationConfig) -> list[str]:
    """Warn if the ordering ``epoch < tau_R < tau_m < tau_N`` is violated; return the messages."""
    msgs = []
    tau_m = collapse_measurements(cfg.p0) * cfg.epoch_dt
    if not cfg.epoch_dt < cfg.rabi_period:
        msgs.append("measurement spacing is not shorter than the Rabi period")
    if not cfg.rabi_period < tau_m:
        msgs.append(f"collapse time {tau_m:.3g} s is not longer than the Rabi period")
    db = cfg.noise.delta_beta
    if db > 0:
        tau_n = 1.0 / (np.sqrt(2.0) * db)
        if not tau_m < tau_n:
            msgs.append(f"collapse time {tau_m:.3g} s is not shorter than the noise time {tau_n:.3g} s")
    for m in msgs:
        warnings.warn(m, TimescaleWarning, stacklevel=2)
    return msgs


def _draws(cfg: EstimationConfig, rng: np.random.Generator):
    u = rng.random((cfg.n_epochs, 4))
    d = cfg.noise.dephasing
    if d is None or d.delta_beta == 0:
        return u, None
    n = 1 if d.model == "quasi_static" else cfg.n_epochs * cfg.white_steps
    return u, d.delta_beta * rng.standard_normal(n)


def _apply(m, a, b):
    return m[0, 0] * a + m[0, 1] * b, m[1, 0] * a + m[1, 1] * b


def simulate_batch(cfg: EstimationConfig, rngs, record: bool = False):
    """Run one trajectory per generator in ``rngs``.

    Returns per-trajectory window-averaged fidelities and, with ``record``,
    a list of :class:`TrajectoryRecord`.
    """
    draws = [_draws(cfg, r) for r in rngs]
    nb = len(draws)
    u = np.stack([d[0] for d in draws], axis=1)  # (n_epochs, nb, 4)
    povm = build_symmetric_povm(cfg.p0, MeasurementAxis.z())
    ops = (povm.m0, povm.m1)
    p_sp, p_w = cfg.noise.p_sp, cfg.noise.p_wrong

    u_free = rabi_unitary(cfg.rabi_freq, 0.0, cfg.epoch_dt)
    dephasing = draws[0][1] is not None
    steps = cfg.white_steps
    if dephasing:
        # per-trajectory arrays keep each trajectory's arithmetic independent of the batch
        dt = cfg.epoch_dt / steps
        ent = [rabi_step_unitaries(cfg.rabi_freq, d[1], dt) for d in draws]
        tu = [np.stack([e[k] for e in ent], axis=-1) for k in range(4)]  # (n_beta, nb)
        quasi = tu[0].shape[0] == 1

    ta, tb = (np.full(nb, c, dtype=complex) for c in as_state(basis_state(cfg.initial_state)))
    ea, eb = (np.full(nb, c, dtype=complex) for c in as_state(basis_state(cfg.estimator_state)))
    fid_sum = np.zeros(nb)
    hist = None
    if record:
        n = cfg.n_epochs
        hist = {"true": np.empty((n, nb, 2), complex), "est": np.empty((n, nb, 2), complex),
                "out": np.empty((n, nb), np.int8), "rep": np.empty((n, nb), np.int8),
                "col": np.empty((n, nb), bool), "fid": np.empty((n, nb))}

    for k in range(cfg.n_epochs):
        # free evolution over one epoch
        if not dephasing:
            ta, tb = _apply(u_free, ta, tb)
        elif quasi:
            ta, tb = tu[0][0] * ta + tu[1][0] * tb, tu[2][0] * ta + tu[3][0] * tb
        else:
            for s in range(k * steps, (k + 1) * steps):
                ta, tb = tu[0][s] * ta + tu[1][s] * tb, tu[2][s] * ta + tu[3][s] * tb
        ea, eb = _apply(u_free, ea, eb)

        uk = u[k]
        collapsed = uk[:, 0] < p_sp
        if collapsed.any():
            to_g = uk[:, 1] < 0.5
            ta = np.where(collapsed, np.where(to_g, 1.0 + 0j, 0j), ta)
            tb = np.where(collapsed, np.where(to_g, 0j, 1.0 + 0j), tb)

        a0, b0 = _apply(ops[0], ta, tb)
        prob0 = (a0.real**2 + a0.imag**2) + (b0.real**2 + b0.imag**2)
        outcome = (uk[:, 2] >= prob0).astype(np.int8)
        a1, b1 = _apply(ops[1], ta, tb)
        pa, pb = np.where(outcome == 0, a0, a1), np.where(outcome == 0, b0, b1)
        norm = np.sqrt((pa.real**2 + pa.imag**2) + (pb.real**2 + pb.imag**2))
        ta, tb = pa / norm, pb / norm

        reported = np.where(uk[:, 3] < p_w, 1 - outcome, outcome).astype(np.int8)
        qa0, qb0 = _apply(ops[0], ea, eb)
        qa1, qb1 = _apply(ops[1], ea, eb)
        qa, qb = np.where(reported == 0, qa0, qa1), np.where(reported == 0, qb0, qb1)
        qn = np.sqrt((qa.real**2 + qa.imag**2) + (qb.real**2 + qb.imag**2))
        # an impossible reported outcome (projective limit) leaves the estimate unchanged
        ok = qn > 0
        safe = np.where(ok, qn, 1.0)
        ea, eb = np.where(ok, qa / safe, ea), np.where(ok, qb / safe, eb)

        ov = np.conj(ea) * ta + np.conj(eb) * tb
        fid = np.minimum(ov.real**2 + ov.imag**2, 1.0)
        if k >= cfg.n_skip:
            fid_sum += fid
        if record:
            hist["true"][k, :, 0], hist["true"][k, :, 1] = ta, tb
            hist["est"][k, :, 0], hist["est"][k, :, 1] = ea, eb
            hist["out"][k], hist["rep"][k], hist["col"][k], hist["fid"][k] = outcome, reported, collapsed, fid

    mean_fid = fid_sum / cfg.n_record
    if not record:
        return mean_fid, None
    times = cfg.epoch_dt * np.arange(1, cfg.n_epochs + 1)
    recs = [
        TrajectoryRecord(
            times=times,
            true_states=hist["true"][:, i],
            estimate_states=hist["est"][:, i],
            outcomes=hist["out"][:, i],
            reported_outcomes=hist["rep"][:, i],
            collapse_flags=hist["col"][:, i],
            fidelities=hist["fid"][:, i],
            mean_fidelity=float(mean_fid[i]),
            measurement_count=cfg.n_record,
            summary={"recorded_from_epoch": cfg.n_skip},
        )
        for i in range(nb)
    ]
    return mean_fid, recs


def run_estimation_trajectory(cfg: EstimationConfig, rng: np.random.Generator) -> TrajectoryRecord:
    """Simulate a single trajectory with the given generator and keep its full history."""
    _, recs = simulate_batch(cfg, [rng], record=True)
    return recs[0]


def _estimate_chunk(cfg: EstimationConfig, sweep_index: int, lo: int, hi: int, record: bool = False):
    rngs = [trajectory_rng(cfg.seed, sweep_index, i) for i in range(lo, hi)]
    return simulate_batch(cfg, rngs, record=record)


def estimate_fidelities(cfg: EstimationConfig, sweep_index: int = 0, jobs: int = 1) -> np.ndarray:
    """Window-averaged fidelity of each of ``cfg.n_trajectories`` trajectories."""
    tasks = [(cfg, sweep_index, lo, hi) for lo, hi in chunk_ranges(cfg.n_trajectories, BATCH)]
    return np.concatenate([r[0] for r in run_chunks(_estimate_chunk, tasks, jobs)])


def estimation_records(cfg: EstimationConfig, sweep_index: int = 0, limit: int | None = None) -> list[TrajectoryRecord]:
    """Full histories of the first ``limit`` trajectories (all by default), batched as in a sweep."""
    n = cfg.n_trajectories if limit is None else min(limit, cfg.n_trajectories)
    out = []
    for lo, hi in chunk_ranges(cfg.n_trajectories, BATCH):
        if lo >= n:
            break
        out.extend(_estimate_chunk(cfg, sweep_index, lo, hi, record=True)[1])
    return out[:n]


def sweep_estimation(cfg: EstimationConfig, variable: str, grid, jobs: int = 1) -> SweepResult:
    """Fidelity versus ``P_w`` or ``P_sp``; grid point ``i`` uses sweep index ``i``."""
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
    results = run_chunks(_estimate_chunk, tasks, jobs)
    points = []
    for i, g in enumerate(grid):
        fids = np.concatenate([r[0] for r, o in zip(results, owners) if o == i])
        points.append(SweepPoint(g, fids, np.full(fids.size, float(cfgs[i].n_record))))
    return SweepResult(variable, cfg.seed, points)


def ramsey_dephasing(tau_ramsey: float, model: str = "quasi_static", step_dt: float | None = None):
    """Dephasing config whose Ramsey 1/e time is ``tau_ramsey``."""
    return DephasingConfig(delta_beta_from_ramsey(tau_ramsey), model, step_dt)
