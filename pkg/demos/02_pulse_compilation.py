"""Compiling a measurement into trapped-ion pulses and checking the result.

Run: python3 demos/02_pulse_compilation.py
"""

# %% Scheme I: carrier and sideband pulses, then a quantum-logic readout.
import numpy as np

from unsharp.compiler import compile_scheme1, compile_scheme2, verify_compilation
from unsharp.compiler.scheme2 import branch_deviation, chi_for_p0, effective_p0, scheme2_effective_povm
from unsharp.qubit import MeasurementAxis, basis_state, build_symmetric_povm

program = compile_scheme1(0.45)
print(program.dumps())
report = verify_compilation(program, build_symmetric_povm(0.45))
print(f"largest deviation from the abstract measurement: {report.max_deviation:.1e}")

# %% An oblique axis adds basis-change pulses on both sides.
axis = MeasurementAxis(1.1, 2.3)
oblique = compile_scheme1(0.2, axis)
print(f"oblique axis: {len(oblique.pulses)} pulses, "
      f"deviation {verify_compilation(oblique, build_symmetric_povm(0.2, axis)).max_deviation:.1e}")

# %% Scheme II: a weak spin-spin interaction of strength chi sets p0.
for p0 in (0.45, 0.3, 0.1):
    chi = chi_for_p0(p0)
    prog = compile_scheme2(p0)
    dev = verify_compilation(prog, scheme2_effective_povm(chi)).max_deviation
    print(f"p0={p0}: chi={chi:.4f}, p0 back={effective_p0(chi):.4f}, deviation {dev:.1e}")

# %% The first-order description of the branch states is off by O(chi^2).
for chi in (1e-1, 1e-2, 1e-3):
    print(f"chi={chi:g}: branch deviation {branch_deviation(basis_state('+x'), chi):.2e}")
print("ratio per decade:", np.round(branch_deviation(basis_state("+x"), 1e-2) / branch_deviation(basis_state("+x"), 1e-3)))
