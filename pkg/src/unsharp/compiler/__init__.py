"""Physical realizations of symmetric measurements on two trapped ions."""

from .composite import (
    CompositeState,
    branch_states,
    carrier_pulse,
    fluorescence_readout,
    qls_map,
    rsb_pulse,
    scheme1_initial,
    scheme2_initial,
)
from .program import Pulse, PulseKind, PulseProgram, Scheme, Transition
from .scheme1 import appendix_coefficients, compile_scheme1, program_unitary, run_scheme1
from .scheme2 import (
    branch_deviation,
    chi_for_p0,
    compile_scheme2,
    kitagawa_unitary,
    run_scheme2,
    scheme2_effective_povm,
    scheme2_evolve,
)
from .verify import CompilationReport, verify_compilation

__all__ = [
    "CompilationReport",
    "CompositeState",
    "Pulse",
    "PulseKind",
    "PulseProgram",
    "Scheme",
    "Transition",
    "appendix_coefficients",
    "branch_deviation",
    "branch_states",
    "carrier_pulse",
    "chi_for_p0",
    "compile_scheme1",
    "compile_scheme2",
    "fluorescence_readout",
    "kitagawa_unitary",
    "program_unitary",
    "qls_map",
    "rsb_pulse",
    "run_scheme1",
    "run_scheme2",
    "scheme1_initial",
    "scheme2_effective_povm",
    "scheme2_evolve",
    "scheme2_initial",
    "verify_compilation",
]
