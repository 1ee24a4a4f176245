"""Scheme II: weak Ising coupling between target and auxiliary.

The preparation is ``U = exp(i pi/4 Ybar) exp(i chi Z Zbar) exp(i pi/4 Xbar)``
acting on ``target (x) |up>``, after which the auxiliary is read out
projectively.  Both branches are diagonal in ``{g, e}``; up to a phase per
branch the auxiliary ``|down>`` branch is ``M0`` and ``|up>`` is ``M1`` of the
symmetric z measurement with

    p0_eff = (1 - sin 2 chi) / 2,    delta_p = sin 2 chi.

To first order in chi this is the familiar ``(1 -/+ chi) / sqrt(2)``
branch structure.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import expm

from ..qubit import (
    IDENTITY,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    MeasurementAxis,
    SymmetricPovm,
    as_state,
    build_symmetric_povm,
)
from .composite import SCHEME2_LABELS, CompositeState, pulse_unitary, scheme2_initial
from .program import Pulse, PulseKind, PulseProgram, Scheme, Transition

WEAK_CHI = 0.2


def _check_chi(chi: float) -> float:
    chi = float(chi)
    if not (np.isfinite(chi) and chi >= 0.0):
        raise ValueError(f"chi={chi!r} must be a finite non-negative number")
    return chi


def ising_unitary(chi: float) -> np.ndarray:
    """``exp(i chi sigma_z (x) sigma_z)`` by matrix exponential."""
    return expm(1j * chi * np.kron(SIGMA_Z, SIGMA_Z))


def kitagawa_unitary(chi: float) -> np.ndarray:
    """``exp(i (chi/2) J_z^2)`` with ``J_z = sigma_z (x) I + I (x) sigma_z``."""
    jz = np.kron(SIGMA_Z, IDENTITY) + np.kron(IDENTITY, SIGMA_Z)
    return expm(0.5j * chi * (jz @ jz))


def scheme2_unitary(chi: float) -> np.ndarray:
    """The full 4x4 preparation unitary on ``target (x) aux``."""
    chi = _check_chi(chi)
    first = expm(0.25j * np.pi * np.kron(IDENTITY, SIGMA_X))
    last = expm(0.25j * np.pi * np.kron(IDENTITY, SIGMA_Y))
    return last @ ising_unitary(chi) @ first


def scheme2_evolve(target, chi: float) -> CompositeState:
    """Exact (all orders in chi) state after the preparation."""
    chi = _check_chi(chi)
    if chi > WEAK_CHI:
        warnings.warn(f"chi={chi} is not small; the measurement is no longer weak", stacklevel=2)
    return scheme2_initial(target).evolve(scheme2_unitary(chi))


def first_order_state(target, chi: float) -> CompositeState:
    """The textbook first-order final state, normalized by 1/sqrt(2).

    Its auxiliary labels are those of the displayed small-chi expansion,
    which are exchanged relative to :func:`scheme2_evolve` (see
    :func:`branch_deviation`).
    """
    c1, c2 = as_state(target)
    pref = np.exp(0.25j * np.pi) / np.sqrt(2)
    amps = pref * np.array([
        1j * c1 * (1 + chi),  # g, down
        c1 * (1 - chi),       # g, up
        1j * c2 * (1 - chi),  # e, down
        c2 * (1 + chi),       # e, up
    ])
    return CompositeState(amps, SCHEME2_LABELS)


def branch_vectors(state: CompositeState) -> dict[str, np.ndarray]:
    """Unnormalized target vectors conditioned on each auxiliary level."""
    t = state.tensor()
    return {"down": t[:, 0].copy(), "up": t[:, 1].copy()}


def _phase_aligned_distance(a: np.ndarray, b: np.ndarray) -> float:
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def branch_deviation(target, chi: float) -> float:
    """Largest per-branch distance between the exact and first-order states.

    Each branch is compared after removing its own global phase, and the
    first-order ``down``/``up`` branches are matched to the exact ``up``/``down``
    ones.  The result is O(chi^2).
    """
    exact = branch_vectors(scheme2_evolve(target, chi))
    approx = branch_vectors(first_order_state(target, chi))
    return max(
        _phase_aligned_distance(exact["up"], approx["down"]),
        _phase_aligned_distance(exact["down"], approx["up"]),
    )


def branch_operators(chi: float) -> tuple[np.ndarray, np.ndarray]:
    """Target operators ``(<down|U|up>, <up|U|up>)`` for the two readout results."""
    u = scheme2_unitary(chi).reshape(2, 2, 2, 2)
    # indices: (target_out, aux_out, target_in, aux_in)
    return u[:, 0, :, 1].copy(), u[:, 1, :, 1].copy()


def effective_p0(chi: float) -> float:
    return 0.5 * (1.0 - np.sin(2.0 * _check_chi(chi)))


def chi_for_p0(p0: float) -> float:
    """Coupling that realizes ``p0``; ``chi`` ranges over ``[0, pi/4]``."""
    p0 = float(p0)
    if not 0.0 <= p0 <= 0.5:
        raise ValueError(f"p0={p0!r} outside [0, 0.5]")
    return 0.5 * np.arcsin(1.0 - 2.0 * p0)


def scheme2_effective_povm(chi: float, atol: float = 1e-12) -> SymmetricPovm:
    """Symmetric z measurement realized by coupling ``chi`` and auxiliary readout.

    The exact branch operators are checked to equal ``M0``/``M1`` up to a phase
    each before the equivalent :class:`SymmetricPovm` is returned.
    """
    chi = _check_chi(chi)
    if chi > np.pi / 4:
        raise ValueError("chi beyond pi/4 reverses the measurement; use chi in [0, pi/4]")
    povm = build_symmetric_povm(effective_p0(chi))
    for k, m in zip(branch_operators(chi), (povm.m0, povm.m1)):
        phase = k[1, 1] / abs(k[1, 1])
        if np.max(np.abs(k - phase * m)) > atol:
            raise RuntimeError("scheme II branch operators are not a symmetric measurement")
    return povm


def compile_scheme2(p0: float, axis: MeasurementAxis | None = None) -> PulseProgram:
    """Three-pulse scheme II program: aux rotation, squeeze, aux rotation.

    Only the z axis is supported; the coupling is fixed by ``p0`` through
    :func:`chi_for_p0`.
    """
    axis = MeasurementAxis.z() if axis is None else axis
    if not axis.is_z:
        raise ValueError("scheme II realizes z-axis measurements only")
    chi = chi_for_p0(p0)
    pulses = (
        # exp(i pi/4 Xbar): area pi/2 about -x
        Pulse(PulseKind.AUX_ROTATION, Transition.AUX, np.pi / 2, np.pi),
        Pulse(PulseKind.SQUEEZE, Transition.TA, chi, 0.0),
        # exp(i pi/4 Ybar): area pi/2 about -y
        Pulse(PulseKind.AUX_ROTATION, Transition.AUX, np.pi / 2, 1.5 * np.pi),
    )
    return PulseProgram(pulses, Scheme.SCHEME_II, float(p0), axis)


def run_scheme2(program: PulseProgram, target) -> CompositeState:
    if program.scheme is not Scheme.SCHEME_II:
        raise ValueError(f"run_scheme2 needs a scheme II program, got {program.scheme.value}")
    state = scheme2_initial(target)
    for pulse in program.pulses:
        state = state.evolve(pulse_unitary(pulse))
    return state
