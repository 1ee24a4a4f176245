"""Check a compiled program against the abstract measurement it should realize."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..qubit import (
    SymmetricPovm,
    ZeroProbabilityOutcome,
    apply_measurement,
    as_state,
    basis_state,
    outcome_probability,
)
from .composite import qls_map
from .program import PulseProgram, Scheme
from .scheme1 import run_scheme1
from .scheme2 import run_scheme2

VERIFY_INPUTS = ("g", "e", "+x", "+y")


def physical_branches(program: PulseProgram, target) -> dict[int, np.ndarray]:
    """Unnormalized target-side branch vectors after the full physical pipeline.

    Scheme I: pulses, QLS mapping, then readout of the auxiliary ion
    (``|down>`` is outcome 0).  Each branch vector spans every target level
    and phonon number so leakage shows up as infidelity.
    Scheme II: pulses, then readout of the auxiliary (``|down>`` is outcome 0).
    """
    if program.scheme is Scheme.SCHEME_I:
        t = qls_map(run_scheme1(program, target)).tensor()
        return {0: t[:, :, 0].reshape(-1), 1: t[:, :, 1].reshape(-1)}
    t = run_scheme2(program, target).tensor()
    return {0: t[:, 0].copy(), 1: t[:, 1].copy()}


def _embed(qubit: np.ndarray, scheme: Scheme) -> np.ndarray:
    if scheme is Scheme.SCHEME_II:
        return qubit
    # levels (g, e, r) x phonon (0, 1), conditional state sits on phonon 0
    out = np.zeros(6, dtype=complex)
    out[0], out[2] = qubit
    return out


@dataclass
class BranchCheck:
    input_label: str
    outcome: int
    expected_probability: float
    physical_probability: float
    infidelity: float


@dataclass
class CompilationReport:
    scheme: str
    p0: float
    theta: float
    phi: float
    checks: list[BranchCheck] = field(default_factory=list)

    @property
    def max_probability_deviation(self) -> float:
        return max(abs(c.expected_probability - c.physical_probability) for c in self.checks)

    @property
    def max_infidelity(self) -> float:
        return max(c.infidelity for c in self.checks)

    @property
    def max_deviation(self) -> float:
        return max(self.max_probability_deviation, self.max_infidelity)

    @property
    def zero_information(self) -> bool:
        return self.p0 == 0.5

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_deviation < tol

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "p0": self.p0,
            "theta": self.theta,
            "phi": self.phi,
            "zero_information": self.zero_information,
            "max_probability_deviation": self.max_probability_deviation,
            "max_infidelity": self.max_infidelity,
            "max_deviation": self.max_deviation,
            "checks": [vars(c) for c in self.checks],
        }


def verify_compilation(
    program: PulseProgram,
    povm: SymmetricPovm,
    inputs: dict[str, np.ndarray] | None = None,
) -> CompilationReport:
    """Run each input through the physical pipeline and compare with ``povm``.

    Probabilities are compared directly; post-states up to a global phase via
    ``1 - |<expected|physical>|^2``.  Deviations are reported, never raised.
    """
    if inputs is None:
        inputs = {label: basis_state(label) for label in VERIFY_INPUTS}
    report = CompilationReport(program.scheme.value, program.p0, program.axis.theta, program.axis.phi)
    for label, target in inputs.items():
        target = as_state(target)
        branches = physical_branches(program, target)
        for outcome in (0, 1):
            vec = branches[outcome]
            p_phys = float(np.real(np.vdot(vec, vec)))
            p_exp = outcome_probability(target, povm, outcome)
            try:
                expected, _ = apply_measurement(target, povm, outcome)
            except ZeroProbabilityOutcome:
                infid = 0.0 if p_phys <= 1e-24 else 1.0
            else:
                if p_phys == 0.0:
                    infid = 1.0
                else:
                    overlap = np.vdot(_embed(expected, program.scheme), vec)
                    infid = max(0.0, 1.0 - float(abs(overlap) ** 2) / p_phys)
            report.checks.append(BranchCheck(label, outcome, p_exp, p_phys, infid))
    return report
