"""Preparing a target state with nothing but measurements.

Run: python3 demos/05_state_preparation.py   (about ten seconds)
"""

# %% Aim for theta = pi/4, phi = pi/2 starting from |+x>.
import numpy as np

from unsharp.applications import PreparationConfig, run_preparation, sweep_preparation, trajectory_rng

cfg = PreparationConfig(n_trajectories=300)
rec = run_preparation(cfg, trajectory_rng(cfg.seed, 0, 0))
s = rec.summary
print(f"converged={s['converged']} after {s['count_with_resets']} measurements "
      f"({s['count_unsharp_only']} unsharp, {s['resets']} resets)")
print(f"final angles: theta={s['final_theta']:.3f} (target {np.pi / 4:.3f}), phi={s['final_phi']:.3f} "
      f"(target {np.pi / 2:.3f})")

# %% Errors make the walk longer but the end point stays good.
for variable in ("P_sp", "P_w"):
    res = sweep_preparation(cfg, variable, [0.0, 0.05, 0.1])
    f, _ = res.fidelity_curve()
    c, cse = res.count_curve()
    for g, fi, ci, si in zip(res.grid(), f, c, cse):
        print(f"{variable}={g:<5} F={fi:.3f}  N={ci:5.1f} +- {si:.1f}")

# %% Projective steps cannot land on a generic phase: the walk never converges.
sharp = PreparationConfig(p0=0.0, phi_target=np.pi / 4, n_trajectories=10, max_measurements=200)
print("projective, converged fraction:", sweep_preparation(sharp, "P_w", [0.0]).points[0].converged.mean())
