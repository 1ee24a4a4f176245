"""Composite Hilbert spaces and the ideal pulse unitaries acting on them.

Scheme I lives on ``target (g, e, r) (x) phonon (0, 1) (x) aux (down, up)``,
12 dimensions with flat index ``4 t + 2 n + a``.  The phonon mode is
truncated at one quantum; the ideal sequences never populate ``|2>``.

Scheme II lives on ``target (g, e) (x) aux (down, up)``.

Rotation convention for a pulse of area ``A`` and phase ``phi`` coupling
``|a> <-> |b>``::

    |a> -> cos(A/2)|a> - i e^{+i phi} sin(A/2)|b>
    |b> -> cos(A/2)|b> - i e^{-i phi} sin(A/2)|a>

With ``phi = pi/2`` the transferred amplitude is real and positive, which is
the phase choice the compiler makes throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..qubit import as_state
from .program import Pulse, PulseKind, Transition

TARGET3 = ("g", "e", "r")
TARGET2 = ("g", "e")
PHONON = ("0", "1")
AUX = ("down", "up")

SCHEME1_LABELS = (TARGET3, PHONON, AUX)
SCHEME2_LABELS = (TARGET2, AUX)


@dataclass(frozen=True, eq=False)
class CompositeState:
    """State vector over a labeled tensor-product basis."""

    amplitudes: np.ndarray
    labels: tuple[tuple[str, ...], ...] = SCHEME1_LABELS

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != int(np.prod(self.dims)):
            raise ValueError(f"{amps.size} amplitudes do not fit dims {self.dims}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state contains NaN or Inf")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.labels)

    def index(self, *labels: str) -> int:
        idx = 0
        for factor, lab in zip(self.labels, labels, strict=True):
            idx = idx * len(factor) + factor.index(lab)
        return idx

    def amplitude(self, *labels: str) -> complex:
        return complex(self.amplitudes[self.index(*labels)])

    def basis_labels(self) -> list[tuple[str, ...]]:
        return list(product(*self.labels))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def population(self, factor: int, label: str) -> float:
        """Probability that tensor factor ``factor`` is found in ``label``."""
        t = np.moveaxis(self.tensor(), factor, 0)
        sub = t[self.labels[factor].index(label)]
        return float(np.sum(np.abs(sub) ** 2))

    def evolve(self, unitary: np.ndarray) -> CompositeState:
        return CompositeState(unitary @ self.amplitudes, self.labels)


def scheme1_initial(target) -> CompositeState:
    """``target (x) |0>_phonon (x) |down>_aux`` with ``r`` unpopulated."""
    c = as_state(target)
    t3 = np.array([c[0], c[1], 0.0], dtype=complex)
    return CompositeState(np.kron(t3, np.kron([1.0, 0.0], [1.0, 0.0])), SCHEME1_LABELS)


def scheme2_initial(target) -> CompositeState:
    """``target (x) |up>_aux``: the auxiliary is pumped to its upper level."""
    return CompositeState(np.kron(as_state(target), [0.0, 1.0]), SCHEME2_LABELS)


def two_level_rotation(angle: float, phase: float) -> np.ndarray:
    """2x2 rotation in the module convention, basis ``(|a>, |b>)``."""
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array(
        [[c, -1j * np.exp(-1j * phase) * s], [-1j * np.exp(1j * phase) * s, c]],
        dtype=complex,
    )


def _level(transition: Transition) -> int:
    return {Transition.GR: 0, Transition.ER: 1}[transition]


def carrier_unitary(transition: Transition, angle: float, phase: float) -> np.ndarray:
    """12x12 carrier rotation on ``g-r`` or ``e-r``, identity on phonon and aux."""
    a, r = _level(Transition(transition)), 2
    u3 = np.eye(3, dtype=complex)
    rot = two_level_rotation(angle, phase)
    u3[np.ix_([a, r], [a, r])] = rot
    return np.kron(u3, np.eye(4))


def rsb_unitary(transition: Transition, angle: float = np.pi, phase: float = np.pi / 2) -> np.ndarray:
    """12x12 red-sideband rotation coupling ``|r,0> <-> |a,1>``.

    ``|a,0>`` has no partner (``|r,-1>`` does not exist) and ``|r,1>`` would
    couple to ``|a,2>``, outside the truncated space; both are left alone.
    """
    a = _level(Transition(transition))
    u = np.eye(12, dtype=complex)
    rot = two_level_rotation(angle, phase)
    for aux in (0, 1):
        i_r0 = 4 * 2 + 2 * 0 + aux
        i_a1 = 4 * a + 2 * 1 + aux
        u[np.ix_([i_r0, i_a1], [i_r0, i_a1])] = rot
    return u


def qls_unitary() -> np.ndarray:
    """Auxiliary-ion sideband swap ``|down,1> <-> |up,0>`` on every target level."""
    u = np.eye(12, dtype=complex)
    for t in range(3):
        i_d1 = 4 * t + 2 * 1 + 0
        i_u0 = 4 * t + 2 * 0 + 1
        u[np.ix_([i_d1, i_u0], [i_d1, i_u0])] = [[0, 1], [1, 0]]
    return u


def aux_rotation_unitary(angle: float, phase: float) -> np.ndarray:
    """4x4 rotation of the scheme II auxiliary qubit."""
    return np.kron(np.eye(2), two_level_rotation(angle, phase))


def squeeze_unitary(chi: float) -> np.ndarray:
    """``exp(i chi sigma_z (x) sigma_z)``, diagonal in the product basis."""
    zz = np.array([1.0, -1.0, -1.0, 1.0])
    return np.diag(np.exp(1j * chi * zz))


def pulse_unitary(pulse: Pulse) -> np.ndarray:
    kind = pulse.kind
    if kind is PulseKind.CARRIER:
        return carrier_unitary(pulse.transition, pulse.angle, pulse.phase)
    if kind is PulseKind.RED_SIDEBAND:
        return rsb_unitary(pulse.transition, pulse.angle, pulse.phase)
    if kind is PulseKind.AUX_ROTATION:
        return aux_rotation_unitary(pulse.angle, pulse.phase)
    return squeeze_unitary(pulse.angle)


def carrier_pulse(state: CompositeState, transition, angle: float, phase: float = np.pi / 2) -> CompositeState:
    return state.evolve(carrier_unitary(Transition(transition), angle, phase))


def rsb_pulse(state: CompositeState, transition, phase: float = np.pi / 2) -> CompositeState:
    return state.evolve(rsb_unitary(Transition(transition), np.pi, phase))


def qls_map(state: CompositeState, atol: float = 1e-12) -> CompositeState:
    """Map the phonon register onto the auxiliary spin: ``|down,1> -> |up,0>``.

    Only defined from the prepared configuration, so any ``|up>`` amplitude on
    input is rejected.
    """
    if state.labels != SCHEME1_LABELS:
        raise ValueError("QLS mapping acts on the scheme I composite space")
    up = state.population(2, "up")
    if up > atol:
        raise ValueError(f"auxiliary ion not in |down> before mapping (|up> population {up:.3g})")
    return state.evolve(qls_unitary())


def branch_states(state: CompositeState) -> dict[int, tuple[float, np.ndarray | None]]:
    """Deterministic readout branches of a post-mapping scheme I state.

    Returns ``{outcome: (probability, normalized target qubit state or None)}``
    with ``|down> -> 0`` (bright) and ``|up> -> 1`` (dark).
    """
    t = state.tensor()
    out = {}
    for outcome, aux in ((0, 0), (1, 1)):
        sub = t[:, :, aux]
        prob = float(np.sum(np.abs(sub) ** 2))
        if prob == 0.0:
            out[outcome] = (0.0, None)
            continue
        # phonon register must be |0> after mapping; r must be empty
        qubit = sub[:2, 0]
        out[outcome] = (prob, qubit / np.linalg.norm(qubit))
    return out


def fluorescence_readout(
    state: CompositeState, rng: np.random.Generator, atol: float = 1e-10
) -> tuple[int, np.ndarray]:
    """Projective auxiliary readout: bright ``|down>`` is outcome 0, dark ``|up>`` outcome 1."""
    if state.population(1, "1") > atol:
        raise ValueError("phonon register not in |0>; run qls_map first")
    if state.population(0, "r") > atol:
        raise ValueError("target has population in the shelving level r")
    branches = branch_states(state)
    outcome = 0 if rng.random() < branches[0][0] else 1
    return outcome, branches[outcome][1]
