"""How laboratory parameters turn into per-measurement error probabilities.

Run: python3 demos/03_error_budget.py
"""

# %% Shelving on a quadrupole transition: field, coupling and decay.
from unsharp.budget import LaserParams, dipole_force_budget, shelving_budget

laser = LaserParams(power=5e-3, spot_radius=50e-6, wavelength=435.5e-9)
print(f"intensity {laser.intensity:.3g} W/m^2")
for line in shelving_budget(laser=laser).as_lines():
    print("  ", line)

# %% A geometric phase gate driven by an optical dipole force.
for line in dipole_force_budget().as_lines():
    print("  ", line)

# %% More laser power means a faster sideband pulse and fewer decays per measurement.
for power in (1e-3, 5e-3, 2e-2):
    v = shelving_budget(laser=LaserParams(power, 50e-6, 435.5e-9)).values
    print(f"P={power * 1e3:5.1f} mW: tau_rsb={v['tau_rsb_standard_s'] * 1e6:7.2f} us, "
          f"N_half={v['N_half_standard']:.0f}")
