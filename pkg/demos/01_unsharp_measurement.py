"""Symmetric unsharp measurements on a single qubit.

Run: python3 demos/01_unsharp_measurement.py
"""

# %% A measurement is fixed by one number, p0, and an axis on the Bloch sphere.
import numpy as np

from unsharp.qubit import (
    MeasurementAxis,
    apply_measurement,
    basis_state,
    bloch_vector,
    build_symmetric_povm,
    outcome_probability,
    sample_outcome,
)

for p0 in (0.0, 0.15, 0.45, 0.5):
    povm = build_symmetric_povm(p0)
    print(f"p0={p0:<5} sharpness={povm.delta_p:.2f}  P(0 | g)={outcome_probability(basis_state('g'), povm, 0):.2f}")

# %% A weak z measurement on |+x> nudges the Bloch vector toward a pole.
povm = build_symmetric_povm(0.45)
psi = basis_state("+x")
for outcome in (0, 1):
    post, prob = apply_measurement(psi, povm, outcome)
    print(f"outcome {outcome} (p={prob:.2f}): Bloch vector {np.round(bloch_vector(post), 3)}")

# %% Repeated, the outcomes random-walk the state until it settles on a pole.
rng = np.random.default_rng(7)
psi = basis_state("+x")
for step in range(1, 401):
    psi, _ = apply_measurement(psi, povm, sample_outcome(psi, povm, rng))
    if step in (1, 10, 50, 100, 200, 400):
        print(f"after {step:3d} measurements: z = {bloch_vector(psi)[2]:+.3f}")

# %% Any axis works; the operators are rotated copies of the z case.
tilted = build_symmetric_povm(0.3, MeasurementAxis(np.pi / 3, np.pi / 4))
e0, e1 = tilted.effects()
print("E0 + E1 = I:", np.allclose(e0 + e1, np.eye(2)))
