"""Scheme I: shelving pulses plus red sidebands entangle the target with a phonon.

For the z axis the program is the four pulses

    carrier(G-R, 2 acos sqrt(p0)), rsb(G-R), carrier(E-R, 2 acos sqrt(1-p0)), rsb(E-R)

which leave ``(sqrt(p0) c1|g> + sqrt(1-p0) c2|e>)|0> + (sqrt(1-p0) c1|g> + sqrt(p0) c2|e>)|1>``.

For an arbitrary axis the target is first rotated so the axis maps onto z,
the four-pulse core runs, and the inverse rotation is applied.  Each qubit
rotation is built from three carriers: a pi pulse shelving ``g`` in ``r``, a
rotation on ``e-r``, and a pi pulse bringing ``r`` back to ``g``.
"""

from __future__ import annotations

import numpy as np

from ..qubit import MeasurementAxis, as_state, rotation_to_axis
from .composite import CompositeState, pulse_unitary, scheme1_initial
from .program import Pulse, PulseKind, PulseProgram, Scheme, Transition

TWO_PI = 2 * np.pi
_HALF_PI = np.pi / 2


def _check_p0(p0: float) -> float:
    p0 = float(p0)
    if not (np.isfinite(p0) and 0.0 <= p0 <= 0.5):
        raise ValueError(f"p0={p0!r} outside [0, 0.5]")
    return p0


def core_pulses(p0: float) -> list[Pulse]:
    """The four-pulse z-axis preparation."""
    p0 = _check_p0(p0)
    return [
        Pulse(PulseKind.CARRIER, Transition.GR, 2 * np.arccos(np.sqrt(p0)), _HALF_PI),
        Pulse(PulseKind.RED_SIDEBAND, Transition.GR, np.pi, _HALF_PI),
        Pulse(PulseKind.CARRIER, Transition.ER, 2 * np.arccos(np.sqrt(1 - p0)), _HALF_PI),
        Pulse(PulseKind.RED_SIDEBAND, Transition.ER, np.pi, _HALF_PI),
    ]


def qubit_rotation_pulses(u: np.ndarray) -> list[Pulse]:
    """Three carrier pulses whose action on ``span{g, e}`` equals ``u`` up to a global phase.

    Writing ``u`` with a real non-negative ``u_ee``, the composite
    ``pi(G-R, a) . A(E-R, 0) . pi(G-R, a')`` has ``u_ee = cos(A/2)``,
    ``u_eg = -exp(i a) sin(A/2)`` and ``u_ge = -exp(-i a') sin(A/2)``, so all
    three parameters follow in closed form.  ``r`` starts and ends empty.
    """
    u = np.asarray(u, dtype=complex)
    if abs(u[1, 1]) > 0:
        u = u * np.exp(-1j * np.angle(u[1, 1]))
    cos_half = float(np.clip(np.real(u[1, 1]), 0.0, 1.0))
    angle = 2 * np.arccos(cos_half)
    sin_half = np.sin(angle / 2)
    if sin_half < 1e-14:
        # diagonal u: only the relative phase of g needs fixing
        # the two pi pulses contribute -exp(i(a_in - a_out)), which must equal u_gg
        a_in = np.pi
        a_out = (a_in - np.angle(-u[0, 0])) % TWO_PI
        angle = 0.0
    else:
        a_in = np.angle(-u[1, 0] / sin_half) % TWO_PI
        a_out = (-np.angle(-u[0, 1] / sin_half)) % TWO_PI
    return [
        Pulse(PulseKind.CARRIER, Transition.GR, np.pi, a_in),
        Pulse(PulseKind.CARRIER, Transition.ER, angle, 0.0),
        Pulse(PulseKind.CARRIER, Transition.GR, np.pi, a_out),
    ]


def compile_scheme1(p0: float, axis: MeasurementAxis | None = None) -> PulseProgram:
    """Pulse program realizing the symmetric measurement ``(p0, axis)``.

    The z axis yields exactly the four core pulses; other axes are wrapped in
    target rotations (3 carriers each side).
    """
    p0 = _check_p0(p0)
    axis = MeasurementAxis.z() if axis is None else axis
    pulses = core_pulses(p0)
    if not axis.is_z:
        rot = rotation_to_axis(axis)
        pulses = qubit_rotation_pulses(rot.conj().T) + pulses + qubit_rotation_pulses(rot)
    return PulseProgram(tuple(pulses), Scheme.SCHEME_I, p0, axis)


def program_unitary(program: PulseProgram) -> np.ndarray:
    """Product of the pulse unitaries, first pulse rightmost."""
    dim = 12 if program.scheme is Scheme.SCHEME_I else 4
    u = np.eye(dim, dtype=complex)
    for pulse in program.pulses:
        u = pulse_unitary(pulse) @ u
    return u


def run_scheme1(program: PulseProgram, target) -> CompositeState:
    """Apply a scheme I program to ``target (x) |0> (x) |down>``."""
    if program.scheme is not Scheme.SCHEME_I:
        raise ValueError(f"run_scheme1 needs a scheme I program, got {program.scheme.value}")
    state = scheme1_initial(as_state(target))
    for pulse in program.pulses:
        state = state.evolve(pulse_unitary(pulse))
    return state


def appendix_coefficients(p0: float, axis: MeasurementAxis) -> tuple[complex, complex, complex, complex]:
    """Coefficients ``(a1, a2, b1, b2)`` of the regrouped pre-measurement state

        c1 (a1|0> + a2|1>)|g> + c2 (b1|0> + b2|1>)|e>

    read off the closed-form preparation with ``p_pm = sqrt(p0) pm sqrt(1-p0)``.

    Labels follow this package's readout convention (phonon ``|0>`` is
    outcome 0), so the z axis reproduces the four-pulse amplitudes
    ``a1 = sqrt(p0)``, ``b1 = sqrt(1-p0)``.  The induced maps
    ``diag(a1, b1)``, ``diag(a2, b2)`` are diagonal in ``{g, e}``; they match
    the symmetric measurement only for the z axis and are complete only when
    ``sin(2 theta) cos(phi) = 0``.  See :func:`appendix_completeness_defect`.
    """
    p0 = _check_p0(p0)
    pp = np.sqrt(p0) + np.sqrt(1 - p0)
    pm = np.sqrt(p0) - np.sqrt(1 - p0)
    w_g = np.cos(axis.theta) - np.sin(axis.theta) * np.exp(-1j * axis.phi)
    w_e = np.cos(axis.theta) + np.sin(axis.theta) * np.exp(1j * axis.phi)
    a1 = 0.5 * (pp + pm * w_g)
    a2 = 0.5 * (pp - pm * w_g)
    b1 = 0.5 * (pp - pm * w_e)
    b2 = 0.5 * (pp + pm * w_e)
    return complex(a1), complex(a2), complex(b1), complex(b2)


def appendix_branch_maps(p0: float, axis: MeasurementAxis) -> tuple[np.ndarray, np.ndarray]:
    """Target maps induced on ``(c1, c2)`` by the two phonon branches."""
    a1, a2, b1, b2 = appendix_coefficients(p0, axis)
    return np.diag([a1, b1]), np.diag([a2, b2])


def appendix_completeness_defect(p0: float, axis: MeasurementAxis) -> np.ndarray:
    """``K0^dag K0 + K1^dag K1 - I`` for the appendix branch maps."""
    k0, k1 = appendix_branch_maps(p0, axis)
    return k0.conj().T @ k0 + k1.conj().T @ k1 - np.eye(2)
