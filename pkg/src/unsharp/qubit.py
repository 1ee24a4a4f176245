"""Qubit states, projectors and symmetric two-outcome measurements.

Pure states are plain ``complex128`` arrays of shape ``(2,)`` in the basis
``(|g>, |e>) == (|0>, |1>)``.  The Pauli convention is ``sigma_z |g> = +|g>``,
so ``P_+`` for the z axis projects onto ``|g>``.

A symmetric measurement along the unit vector ``r`` with parameter
``0 <= p0 <= 1/2`` has Kraus operators::

    M0 = sqrt(p0) P_+ + sqrt(1 - p0) P_-
    M1 = sqrt(1 - p0) P_+ + sqrt(p0) P_-

with ``P_pm = (I pm r.sigma) / 2``.  ``p0 = 0`` is a projective measurement and
``p0 = 1/2`` leaves every state untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

STATE_ATOL = 1e-12
TWO_PI = 2.0 * np.pi


class ZeroProbabilityOutcome(ValueError):
    """Raised when conditioning a state on an outcome it can never produce."""


@dataclass(frozen=True)
class MeasurementAxis:
    """Direction ``r = (sin t cos p, sin t sin p, cos t)`` on the Bloch sphere.

    ``theta`` must lie in ``[0, pi]``; ``phi`` is wrapped into ``[0, 2 pi)``.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        theta, phi = float(self.theta), float(self.phi)
        if not (np.isfinite(theta) and np.isfinite(phi)):
            raise ValueError("axis angles must be finite")
        if not 0.0 <= theta <= np.pi:
            raise ValueError(f"theta={theta!r} outside [0, pi]")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi % TWO_PI)

    @classmethod
    def x(cls) -> MeasurementAxis:
        return cls(np.pi / 2, 0.0)

    @classmethod
    def y(cls) -> MeasurementAxis:
        return cls(np.pi / 2, np.pi / 2)

    @classmethod
    def z(cls) -> MeasurementAxis:
        return cls(0.0, 0.0)

    @property
    def unit_vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    @property
    def is_z(self) -> bool:
        return self.theta == 0.0

    def pauli(self) -> np.ndarray:
        """``r . sigma`` as a 2x2 matrix."""
        rx, ry, rz = self.unit_vector
        return rx * SIGMA_X + ry * SIGMA_Y + rz * SIGMA_Z


@dataclass(frozen=True, eq=False)
class SymmetricPovm:
    """Kraus pair ``(m0, m1)`` of a symmetric unsharp measurement."""

    p0: float
    axis: MeasurementAxis
    m0: np.ndarray = field(repr=False)
    m1: np.ndarray = field(repr=False)

    @property
    def delta_p(self) -> float:
        """Sharpness ``1 - 2 p0``: 1 is projective, 0 carries no information."""
        return 1.0 - 2.0 * self.p0

    @property
    def is_zero_information(self) -> bool:
        return self.delta_p == 0.0

    def operator(self, outcome: int) -> np.ndarray:
        if outcome == 0:
            return self.m0
        if outcome == 1:
            return self.m1
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")

    def effects(self) -> tuple[np.ndarray, np.ndarray]:
        """POVM elements ``(M0^dag M0, M1^dag M1)``."""
        return self.m0.conj().T @ self.m0, self.m1.conj().T @ self.m1


def as_state(psi, normalize: bool = False) -> np.ndarray:
    """Validate (and optionally normalize) a qubit state vector."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (2,):
        raise ValueError(f"qubit state must have 2 amplitudes, got shape {psi.shape}")
    if not np.all(np.isfinite(psi)):
        raise ValueError("state contains NaN or Inf")
    norm = np.linalg.norm(psi)
    if normalize:
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return psi / norm
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"state is not normalized (norm={norm:.15g})")
    return psi


def basis_state(label: str) -> np.ndarray:
    """Named single-qubit states: ``g``/``0``, ``e``/``1``, ``+x``, ``-x``, ``+y``, ``-y``."""
    s = 1 / np.sqrt(2)
    table = {
        "g": (1, 0), "0": (1, 0),
        "e": (0, 1), "1": (0, 1),
        "+x": (s, s), "-x": (s, -s),
        "+y": (s, 1j * s), "-y": (s, -1j * s),
    }
    try:
        return np.array(table[label], dtype=complex)
    except KeyError:
        raise ValueError(f"unknown basis label {label!r}") from None


def projectors(axis: MeasurementAxis) -> tuple[np.ndarray, np.ndarray]:
    """Spin projectors ``(P_+, P_-)`` along ``axis``."""
    rs = axis.pauli()
    return 0.5 * (IDENTITY + rs), 0.5 * (IDENTITY - rs)


def build_symmetric_povm(p0: float, axis: MeasurementAxis | None = None) -> SymmetricPovm:
    """Symmetric unsharp measurement of strength ``p0`` along ``axis`` (default z)."""
    p0 = float(p0)
    if not (np.isfinite(p0) and 0.0 <= p0 <= 0.5):
        raise ValueError(f"p0={p0!r} outside [0, 0.5]")
    axis = MeasurementAxis.z() if axis is None else axis
    if p0 == 0.5:
        m = IDENTITY / np.sqrt(2)
        return SymmetricPovm(p0, axis, m.copy(), m.copy())
    a, b = np.sqrt(p0), np.sqrt(1.0 - p0)
    plus, minus = projectors(axis)
    return SymmetricPovm(p0, axis, a * plus + b * minus, b * plus + a * minus)


def outcome_probability(state, povm: SymmetricPovm, outcome: int) -> float:
    """Born probability ``<psi|M_i^dag M_i|psi>``."""
    v = povm.operator(outcome) @ as_state(state)
    return float(np.real(np.vdot(v, v)))


def apply_measurement(state, povm: SymmetricPovm, outcome: int) -> tuple[np.ndarray, float]:
    """Condition ``state`` on ``outcome``; returns ``(post_state, probability)``."""
    v = povm.operator(outcome) @ as_state(state)
    prob = float(np.real(np.vdot(v, v)))
    if prob <= 0.0:
        raise ZeroProbabilityOutcome(f"outcome {outcome} has zero probability for this state")
    return v / np.sqrt(prob), prob


def sample_outcome(state, povm: SymmetricPovm, rng: np.random.Generator) -> int:
    """Draw an outcome; one uniform variate per call, outcome 0 iff ``u < P(0)``."""
    return 0 if rng.random() < outcome_probability(state, povm, 0) else 1


def measure(state, povm: SymmetricPovm, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    """Sample an outcome and return it together with the post-measurement state."""
    outcome = sample_outcome(state, povm, rng)
    post, _ = apply_measurement(state, povm, outcome)
    return outcome, post


def target_state(theta: float, phi: float) -> np.ndarray:
    """``sin(theta/2) e^{i phi/2}|0> + cos(theta/2) e^{-i phi/2}|1>``.

    Note ``theta = 0`` is ``|1>`` in this parametrization.
    """
    return np.array(
        [np.sin(theta / 2) * np.exp(0.5j * phi), np.cos(theta / 2) * np.exp(-0.5j * phi)],
        dtype=complex,
    )


def bloch_angles(state) -> tuple[float, float]:
    """Inverse of :func:`target_state` up to global phase.

    ``phi`` is reported in ``[0, 2 pi)`` and set to 0 at the poles.
    """
    a0, a1 = as_state(state)
    r0, r1 = abs(a0), abs(a1)
    theta = 2.0 * np.arctan2(r0, r1)
    if r0 < STATE_ATOL or r1 < STATE_ATOL:
        return float(theta), 0.0
    phi = (np.angle(a0) - np.angle(a1)) % TWO_PI
    # a value of exactly 2 pi can survive the modulo through rounding
    return float(theta), float(phi if phi < TWO_PI else 0.0)


def bloch_vector(state) -> np.ndarray:
    psi = as_state(state)
    return np.real([np.vdot(psi, s @ psi) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)])


def fidelity(a, b) -> float:
    """``|<a|b>|^2`` for pure states."""
    return float(abs(np.vdot(as_state(a), as_state(b))) ** 2)


def rotation_to_axis(axis: MeasurementAxis) -> np.ndarray:
    """Unitary ``R = exp(-i phi Z/2) exp(-i theta Y/2)`` taking z to ``axis``.

    ``R P_pm(z) R^dag = P_pm(axis)``.
    """
    ct, st = np.cos(axis.theta / 2), np.sin(axis.theta / 2)
    em, ep = np.exp(-0.5j * axis.phi), np.exp(0.5j * axis.phi)
    return np.array([[em * ct, -em * st], [ep * st, ep * ct]], dtype=complex)


def appendix_measurement_matrices(p0: float, axis: MeasurementAxis) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form ``(M0, M1)`` written with ``p_pm = sqrt(p0) pm sqrt(1 - p0)``.

    An independent route to the same operators as :func:`build_symmetric_povm`;
    the tests use it as an oracle.
    """
    pp = np.sqrt(p0) + np.sqrt(1 - p0)
    pm = np.sqrt(p0) - np.sqrt(1 - p0)
    c, s = np.cos(axis.theta), np.sin(axis.theta)
    e_m, e_p = np.exp(-1j * axis.phi), np.exp(1j * axis.phi)
    m0 = 0.5 * np.array([[pp + pm * c, pm * s * e_m], [pm * s * e_p, pp - pm * c]])
    m1 = 0.5 * np.array([[pp - pm * c, -pm * s * e_m], [-pm * s * e_p, pp + pm * c]])
    return m0, m1


def equal_up_to_phase(a, b, atol: float = 1e-10) -> bool:
    """True when two normalized states differ only by a global phase."""
    return 1.0 - fidelity(a, b) <= atol
