"""Tracking a driven qubit from a record of weak measurements.

Run: python3 demos/04_state_estimation.py   (about ten seconds)
"""

# %% One trajectory: the estimate starts wrong and locks on within a few periods.
from unsharp.applications import (
    EstimationConfig,
    estimate_fidelities,
    ramsey_dephasing,
    run_estimation_trajectory,
    sweep_estimation,
    trajectory_rng,
)
from unsharp.noise import NoiseConfig

cfg = EstimationConfig(n_trajectories=200, duration_periods=10, transient_skip_periods=100)
rec = run_estimation_trajectory(cfg, trajectory_rng(cfg.seed, 0, 0))
per_period = cfg.measurements_per_period
for period in (0, 2, 5, 10, 30, 60, 100):
    i = min(period * per_period, len(rec.fidelities) - 1)
    print(f"period {period:3d}: fidelity {rec.fidelities[i]:.3f}")

# %% Readout mistakes (P_w) feed the filter wrong information.
res = sweep_estimation(cfg, "P_w", [0.0, 0.05, 0.1, 0.2])
for g, f, se in zip(res.grid(), *res.fidelity_curve()):
    print(f"P_w={g:<5} F={f:.3f} +- {se:.3f}")

# %% Spontaneous emission jumps the true state; the filter has to re-acquire it.
res = sweep_estimation(cfg, "P_sp", [0.0, 0.001, 0.005])
for g, f, se in zip(res.grid(), *res.fidelity_curve()):
    print(f"P_sp={g:<6} F={f:.3f} +- {se:.3f}")

# %% Dephasing from a 2.5 s Ramsey time barely matters at a 0.1 s Rabi period.
for label, noise in (("none", NoiseConfig()), ("tau_R = 2.5 s", NoiseConfig(dephasing=ramsey_dephasing(2.5)))):
    f = estimate_fidelities(EstimationConfig(n_trajectories=200, duration_periods=10, transient_skip_periods=100,
                                             noise=noise))
    print(f"dephasing {label:<14} F={f.mean():.4f}")
