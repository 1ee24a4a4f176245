import math

import pytest

from unsharp.budget import (
    CODATA,
    LaserParams,
    angular_frequency,
    cumulative_sp_probability,
    dipole_force,
    dipole_force_budget,
    excited_population,
    field_strength,
    gate_time,
    geometric_phase,
    ground_state_width,
    half_decay_measurements,
    n_half,
    quadrupole_moment,
    rsb_rabi_frequency,
    shelving_budget,
    standing_wave_k,
    width_from_lamb_dicke,
)


def test_constants_are_codata():
    assert CODATA.c == 299792458.0
    assert CODATA.hbar == pytest.approx(1.054571817e-34, rel=1e-10)
    assert CODATA.epsilon0 == pytest.approx(8.8541878128e-12, rel=1e-10)


class TestField:
    def test_reference_value(self):
        assert field_strength(LaserParams(5e-3, 50e-6, 435.5e-9)) == pytest.approx(2.19e4, rel=5e-3)

    def test_square_root_law(self):
        a = field_strength(LaserParams(1e-3, 50e-6, 1e-6))
        b = field_strength(LaserParams(4e-3, 50e-6, 1e-6))
        assert b == pytest.approx(2 * a)

    def test_validation(self):
        with pytest.raises(ValueError):
            LaserParams(0.0, 50e-6, 1e-6)


class TestCoupling:
    def test_sqrt_scaling(self):
        w = angular_frequency(435.5e-9)
        a, b = quadrupole_moment(1.0, w), quadrupole_moment(2.0, w)
        assert b.standard == pytest.approx(math.sqrt(2) * a.standard)
        assert b.printed == pytest.approx(math.sqrt(2) * a.printed)
        assert quadrupole_moment(0.0, w).standard == 0.0

    def test_einstein_inversion(self):
        w, gamma = 3e15, 1e8
        mu = quadrupole_moment(gamma, w).standard
        back = w**3 * mu**2 / (3 * math.pi * CODATA.epsilon0 * CODATA.hbar * CODATA.c**3)
        assert back == pytest.approx(gamma)

    def test_rsb_linear(self):
        assert rsb_rabi_frequency(0.0, 1e-30, 1e4) == 0.0
        assert rsb_rabi_frequency(0.2, 1e-30, 2e4) == pytest.approx(2 * rsb_rabi_frequency(0.2, 1e-30, 1e4))


class TestCounts:
    def test_n_half(self):
        assert n_half(0.0007) == pytest.approx(990, abs=0.5)
        assert n_half(0.0) == math.inf
        assert n_half(1e-6) > n_half(1e-5) > n_half(1e-4)

    def test_time_form(self):
        assert half_decay_measurements(52.7e-3, 15e-6) == pytest.approx(2435, abs=1)

    def test_cumulative(self):
        assert cumulative_sp_probability(2e-5, 23) == pytest.approx(4.6e-4, rel=1e-3)
        assert cumulative_sp_probability(0.0, 23) == 0.0
        with pytest.raises(ValueError):
            cumulative_sp_probability(1.5, 1)


class TestForceChain:
    def test_widths(self):
        k = standing_wave_k(313e-9)
        assert width_from_lamb_dicke(0.2, k) == pytest.approx(7.04e-9, rel=1e-3)
        assert ground_state_width(9.012182 * CODATA.amu, 2 * math.pi * 6e6) == pytest.approx(9.67e-9, rel=1e-3)

    def test_force_rejects_zero_detuning(self):
        with pytest.raises(ValueError):
            dipole_force(1e-29, 2e4, 2.8e7, 0.0)
        with pytest.raises(ValueError):
            excited_population(1.0, 0.0)

    def test_gate_time_inverts_phase(self):
        f0, z0 = 8e-21, 7e-9
        tau = gate_time(f0, z0)
        assert geometric_phase(f0, z0, tau) == pytest.approx(math.pi / 2)

    def test_dipole_chain(self):
        v = dipole_force_budget().values
        assert v["P_u"] == pytest.approx(2e-5)
        assert v["P_sp"] == pytest.approx(4.6e-4, rel=1e-3)
        assert v["F0_N"] == pytest.approx(8.0e-21, rel=0.01)
        assert v["tau_g_s"] == pytest.approx(1.87e-6, rel=0.01)

    def test_shelving_chain(self):
        v = shelving_budget().values
        assert v["E0_V_per_m"] == pytest.approx(21901, rel=1e-4)
        assert v["N_half_quoted_p_sp"] == pytest.approx(989.9, abs=0.1)
        assert v["omega_rsb_standard_rad_per_s"] == pytest.approx(7.74e4, rel=1e-2)
        assert v["omega_rsb_printed_rad_per_s"] > 1e12

    def test_report_lines(self):
        lines = shelving_budget().as_lines()
        assert lines[0].startswith("E0_V_per_m=")


def test_quoted_force_and_gate_time():
    f0 = dipole_force_budget().values["F0_N"]
    assert 16e-21 / 3 <= f0 <= 16e-21 * 3
    tau = gate_time(16e-21, 7e-9)
    assert tau == pytest.approx(0.94e-6, rel=0.01)
    # the quoted force and width give a gate 3.2x faster than the quoted 3 us
    assert 3e-6 / tau == pytest.approx(3.19, abs=0.01)
