"""Error channels: classical dephasing, wrong readout mapping, spontaneous collapse.

Dephasing enters as ``H = (Omega_R/2) sigma_x + beta(t) sigma_z`` with a
zero-mean Gaussian ``beta`` of rms ``delta_beta``.  Two noise processes are
offered:

``quasi_static``
    one ``beta`` per trajectory, held for the whole run.  The ensemble
    Ramsey coherence is then exactly ``exp(-2 delta_beta^2 t^2)``.
``white``
    a fresh ``beta`` every ``step_dt``.  Coherence decays exponentially with
    rate ``2 delta_beta^2 step_dt`` once ``t >> step_dt``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .qubit import as_state

NOISE_MODELS = ("quasi_static", "white")


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not (np.isfinite(value) and 0.0 <= value <= 1.0):
        raise ValueError(f"{name}={value!r} outside [0, 1]")
    return value


@dataclass(frozen=True)
class DephasingConfig:
    delta_beta: float = 0.0  # rad/s
    model: str = "quasi_static"
    step_dt: float | None = None  # s; required for the white model

    def __post_init__(self) -> None:
        if not (np.isfinite(self.delta_beta) and self.delta_beta >= 0):
            raise ValueError(f"delta_beta={self.delta_beta!r} must be >= 0")
        if self.model not in NOISE_MODELS:
            raise ValueError(f"unknown dephasing model {self.model!r}; choose from {NOISE_MODELS}")
        if self.step_dt is not None and not self.step_dt > 0:
            raise ValueError("step_dt must be positive")
        if self.model == "white" and self.step_dt is None:
            raise ValueError("the white dephasing model needs step_dt")


@dataclass(frozen=True)
class MappingErrorConfig:
    p_wrong: float = 0.0

    def __post_init__(self) -> None:
        _check_probability("p_wrong", self.p_wrong)


@dataclass(frozen=True)
class SpontaneousEmissionConfig:
    p_sp: float = 0.0

    def __post_init__(self) -> None:
        _check_probability("p_sp", self.p_sp)


def ramsey_coherence(delta_beta: float, t: float) -> float:
    """Short-time Ramsey contrast ``exp(-2 delta_beta^2 t^2)``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return float(np.exp(-2.0 * delta_beta**2 * t**2))


def delta_beta_from_ramsey(tau_ramsey: float) -> float:
    """rms noise strength whose Ramsey 1/e time is ``tau_ramsey``."""
    if not tau_ramsey > 0:
        raise ValueError("tau_ramsey must be positive")
    if np.isinf(tau_ramsey):
        return 0.0
    return 1.0 / (np.sqrt(2.0) * tau_ramsey)


def noise_to_rabi_ratio(tau_ramsey: float, tau_rabi: float, angular: bool = True) -> float:
    """Separation of the Rabi and noise timescales.

    ``angular=True`` returns ``Omega_R / (sqrt(2) delta_beta) = 2 pi tau_N / tau_R``;
    ``angular=False`` returns the bare period ratio ``tau_N / tau_R``.  The two
    differ by ``2 pi``.
    """
    ratio = tau_ramsey / tau_rabi
    return 2 * np.pi * ratio if angular else ratio


def rabi_step_unitaries(rabi_freq: float, beta, dt: float):
    """Exact ``exp(-i dt [(Omega/2) X + beta Z])`` for scalar or array ``beta``.

    Returns the four matrix entries ``(u00, u01, u10, u11)`` broadcast over
    ``beta`` so batched callers avoid BLAS and stay bit-reproducible.
    """
    beta = np.asarray(beta, dtype=float)
    hx = 0.5 * rabi_freq
    w = np.sqrt(hx * hx + beta * beta)
    c = np.cos(w * dt)
    # sin(w dt)/w, finite as w -> 0
    s = np.where(w > 0, np.sin(w * dt) / np.where(w > 0, w, 1.0), dt)
    u00 = c - 1j * s * beta
    u11 = c + 1j * s * beta
    u01 = -1j * s * hx
    return u00, u01, u01, u11


def rabi_unitary(rabi_freq: float, beta: float, dt: float) -> np.ndarray:
    u00, u01, u10, u11 = rabi_step_unitaries(rabi_freq, beta, dt)
    return np.array([[u00, u01], [u10, u11]], dtype=complex)


def draw_beta(cfg: DephasingConfig, rng: np.random.Generator, size=None):
    return rng.normal(0.0, cfg.delta_beta, size=size) if cfg.delta_beta > 0 else np.zeros(size or ())


def evolve_with_dephasing(
    state,
    rabi_freq: float,
    cfg: DephasingConfig,
    duration: float,
    rng: np.random.Generator,
    beta: float | None = None,
) -> np.ndarray:
    """Evolve a qubit under the Rabi drive plus dephasing noise.

    For the quasi-static model ``beta`` is the trajectory's noise value; pass it
    to keep it fixed across calls, otherwise one is drawn for this call.  The
    white model integrates in steps of ``step_dt`` (the last step shortened),
    each with its own exact 2x2 unitary.
    """
    psi = as_state(state)
    if duration < 0:
        raise ValueError("duration must be >= 0")
    if duration == 0:
        return psi.copy()
    if cfg.model == "quasi_static":
        b = float(draw_beta(cfg, rng)) if beta is None else float(beta)
        psi = rabi_unitary(rabi_freq, b, duration) @ psi
    else:
        n_full, rest = divmod(duration, cfg.step_dt)
        steps = [cfg.step_dt] * int(n_full) + ([rest] if rest > 1e-15 * duration else [])
        betas = draw_beta(cfg, rng, size=len(steps))
        for dt, b in zip(steps, betas):
            psi = rabi_unitary(rabi_freq, b, dt) @ psi
    return psi / np.linalg.norm(psi)


def flip_outcome(outcome: int, cfg: MappingErrorConfig, rng: np.random.Generator) -> int:
    """Report the opposite outcome with probability ``p_wrong``."""
    return 1 - outcome if rng.random() < cfg.p_wrong else outcome


def spontaneous_collapse(
    state, cfg: SpontaneousEmissionConfig, rng: np.random.Generator
) -> tuple[np.ndarray, bool]:
    """With probability ``p_sp`` replace the state by ``|g>`` or ``|e>`` (each 1/2).

    Always consumes two uniform variates so trajectories stay aligned.
    """
    psi = as_state(state)
    u_event, u_level = rng.random(), rng.random()
    if u_event < cfg.p_sp:
        level = 0 if u_level < 0.5 else 1
        out = np.zeros(2, dtype=complex)
        out[level] = 1.0
        return out, True
    return psi, False


@dataclass(frozen=True)
class NoiseConfig:
    """The three optional error channels of a Monte-Carlo run."""

    dephasing: DephasingConfig | None = None
    mapping: MappingErrorConfig | None = None
    spontaneous: SpontaneousEmissionConfig | None = None

    @property
    def p_wrong(self) -> float:
        return self.mapping.p_wrong if self.mapping else 0.0

    @property
    def p_sp(self) -> float:
        return self.spontaneous.p_sp if self.spontaneous else 0.0

    @property
    def delta_beta(self) -> float:
        return self.dephasing.delta_beta if self.dephasing else 0.0

    def with_error(self, variable: str, value: float) -> "NoiseConfig":
        """Copy with ``P_w`` or ``P_sp`` replaced by ``value``."""
        if variable == "P_w":
            return replace(self, mapping=MappingErrorConfig(value))
        if variable == "P_sp":
            return replace(self, spontaneous=SpontaneousEmissionConfig(value))
        raise ValueError(f"unknown sweep variable {variable!r}; use 'P_w' or 'P_sp'")
