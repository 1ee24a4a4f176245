"""Pulse and program value types plus the line-oriented text format.

Text format, one record per line::

    <scheme> <p0> <theta> <phi>
    <kind> <transition> <angle> <phase>
    ...

Reals are written with 17 significant digits so a parse/serialize round
trip is bit exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..qubit import MeasurementAxis


class Scheme(str, Enum):
    SCHEME_I = "scheme1"
    SCHEME_II = "scheme2"


class PulseKind(str, Enum):
    CARRIER = "carrier"
    RED_SIDEBAND = "rsb"
    # scheme II only: single-qubit rotation on the auxiliary ion
    AUX_ROTATION = "aux"
    # scheme II only: exp(i angle sigma_z (x) sigma_z) on target and auxiliary
    SQUEEZE = "squeeze"


class Transition(str, Enum):
    GR = "G-R"
    ER = "E-R"
    AUX = "AUX"
    TA = "T-A"


_ALLOWED = {
    PulseKind.CARRIER: {Transition.GR, Transition.ER},
    PulseKind.RED_SIDEBAND: {Transition.GR, Transition.ER},
    PulseKind.AUX_ROTATION: {Transition.AUX},
    PulseKind.SQUEEZE: {Transition.TA},
}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class Pulse:
    """An instantaneous ideal rotation; ``angle`` is the pulse area ``Omega t``."""

    kind: PulseKind
    transition: Transition
    angle: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        kind, transition = PulseKind(self.kind), Transition(self.transition)
        if transition not in _ALLOWED[kind]:
            raise ValueError(f"{kind.value} pulse cannot drive {transition.value}")
        angle, phase = float(self.angle), float(self.phase)
        if not (np.isfinite(angle) and np.isfinite(phase)):
            raise ValueError("pulse angle and phase must be finite")
        if not 0.0 <= angle <= 2 * np.pi:
            raise ValueError(f"pulse angle {angle!r} outside [0, 2 pi]")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "transition", transition)
        object.__setattr__(self, "angle", angle)
        object.__setattr__(self, "phase", phase)

    def to_line(self) -> str:
        return f"{self.kind.value} {self.transition.value} {_fmt(self.angle)} {_fmt(self.phase)}"

    @classmethod
    def from_line(cls, line: str) -> Pulse:
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"malformed pulse line: {line!r}")
        kind, transition, angle, phase = parts
        return cls(PulseKind(kind), Transition(transition), float(angle), float(phase))


@dataclass(frozen=True)
class PulseProgram:
    """Ordered pulses realizing one symmetric measurement."""

    pulses: tuple[Pulse, ...]
    scheme: Scheme
    p0: float
    axis: MeasurementAxis

    def __post_init__(self) -> None:
        object.__setattr__(self, "pulses", tuple(self.pulses))
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        kinds = {p.kind for p in self.pulses}
        if self.scheme is Scheme.SCHEME_I and kinds - {PulseKind.CARRIER, PulseKind.RED_SIDEBAND}:
            raise ValueError("scheme I programs contain only carrier and red-sideband pulses")
        if self.scheme is Scheme.SCHEME_II and kinds - {PulseKind.AUX_ROTATION, PulseKind.SQUEEZE}:
            raise ValueError("scheme II programs contain only auxiliary rotations and squeezing")

    def __len__(self) -> int:
        return len(self.pulses)

    def with_pulse(self, index: int, pulse: Pulse) -> PulseProgram:
        """Copy with one pulse replaced (used to probe verification sensitivity)."""
        pulses = list(self.pulses)
        pulses[index] = pulse
        return PulseProgram(tuple(pulses), self.scheme, self.p0, self.axis)

    def dumps(self) -> str:
        header = f"{self.scheme.value} {_fmt(self.p0)} {_fmt(self.axis.theta)} {_fmt(self.axis.phi)}"
        return "\n".join([header, *(p.to_line() for p in self.pulses)]) + "\n"

    @classmethod
    def loads(cls, text: str) -> PulseProgram:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty pulse program")
        head = lines[0].split()
        if len(head) != 4:
            raise ValueError(f"malformed program header: {lines[0]!r}")
        scheme, p0, theta, phi = head
        pulses = tuple(Pulse.from_line(ln) for ln in lines[1:])
        return cls(pulses, Scheme(scheme), float(p0), MeasurementAxis(float(theta), float(phi)))
