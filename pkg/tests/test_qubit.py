import numpy as np
import pytest
from hypothesis import given, settings

from unsharp.qubit import (
    IDENTITY,
    SIGMA_Z,
    MeasurementAxis,
    ZeroProbabilityOutcome,
    appendix_measurement_matrices,
    apply_measurement,
    as_state,
    basis_state,
    bloch_angles,
    bloch_vector,
    build_symmetric_povm,
    equal_up_to_phase,
    fidelity,
    measure,
    outcome_probability,
    projectors,
    rotation_to_axis,
    sample_outcome,
    target_state,
)

from .conftest import axes, p0s, random_axis, random_state, states


class TestAxis:
    def test_phi_wrapped(self):
        assert MeasurementAxis(1.0, 2 * np.pi + 0.5).phi == pytest.approx(0.5)

    @pytest.mark.parametrize("theta", [-0.1, np.pi + 1e-9, np.nan])
    def test_bad_theta(self, theta):
        with pytest.raises(ValueError):
            MeasurementAxis(theta, 0.0)

    def test_named_axes(self):
        np.testing.assert_allclose(MeasurementAxis.x().unit_vector, [1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(MeasurementAxis.y().unit_vector, [0, 1, 0], atol=1e-15)
        assert MeasurementAxis.z().is_z


class TestProjectors:
    def test_z(self):
        plus, minus = projectors(MeasurementAxis.z())
        np.testing.assert_allclose(plus, [[1, 0], [0, 0]])
        np.testing.assert_allclose(minus, [[0, 0], [0, 1]])

    def test_x(self):
        plus, _ = projectors(MeasurementAxis.x())
        np.testing.assert_allclose(plus, 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_oblique_entry(self):
        plus, _ = projectors(MeasurementAxis(np.pi / 4, np.pi / 3))
        assert plus[0, 0].real == pytest.approx(0.85355339, abs=1e-8)

    @given(axes)
    def test_projector_algebra(self, axis):
        plus, minus = projectors(axis)
        np.testing.assert_allclose(plus @ plus, plus, atol=1e-12)
        np.testing.assert_allclose(plus @ minus, 0, atol=1e-12)
        np.testing.assert_allclose(plus + minus, IDENTITY, atol=1e-12)


class TestPovm:
    def test_zero_information(self):
        for axis in (MeasurementAxis.z(), MeasurementAxis(1.2, 0.3)):
            povm = build_symmetric_povm(0.5, axis)
            np.testing.assert_allclose(povm.m0, IDENTITY / np.sqrt(2))
            np.testing.assert_allclose(povm.m1, IDENTITY / np.sqrt(2))
            assert povm.delta_p == 0 and povm.is_zero_information

    def test_projective_z(self):
        povm = build_symmetric_povm(0.0)
        np.testing.assert_allclose(povm.m0, np.diag([0, 1]))
        np.testing.assert_allclose(povm.m1, np.diag([1, 0]))
        assert povm.delta_p == 1

    def test_p045_values(self):
        povm = build_symmetric_povm(0.45)
        assert povm.delta_p == pytest.approx(0.1)
        np.testing.assert_allclose(np.diag(povm.m0).real, [0.67082039, 0.74161985], atol=1e-8)

    @pytest.mark.parametrize("p0", [-0.01, 0.51, np.nan])
    def test_invalid_p0(self, p0):
        with pytest.raises(ValueError):
            build_symmetric_povm(p0)

    def test_bad_outcome(self):
        with pytest.raises(ValueError):
            build_symmetric_povm(0.2).operator(2)

    @given(p0s, axes)
    def test_completeness(self, p0, axis):
        e0, e1 = build_symmetric_povm(p0, axis).effects()
        assert np.max(np.abs(e0 + e1 - IDENTITY)) < 1e-12

    @given(p0s, axes)
    def test_matches_closed_form_oracle(self, p0, axis):
        povm = build_symmetric_povm(p0, axis)
        m0, m1 = appendix_measurement_matrices(p0, axis)
        np.testing.assert_allclose(povm.m0, m0, atol=1e-12)
        np.testing.assert_allclose(povm.m1, m1, atol=1e-12)

    @given(p0s, axes)
    def test_axis_covariance(self, p0, axis):
        r = rotation_to_axis(axis)
        z = build_symmetric_povm(p0)
        rotated = build_symmetric_povm(p0, axis)
        np.testing.assert_allclose(r @ z.m0 @ r.conj().T, rotated.m0, atol=1e-12)
        np.testing.assert_allclose(r @ z.m1 @ r.conj().T, rotated.m1, atol=1e-12)

    @given(states, p0s)
    def test_nonselective_z_keeps_populations(self, psi, p0):
        povm = build_symmetric_povm(p0)
        rho = np.outer(psi, psi.conj())
        out = povm.m0 @ rho @ povm.m0.conj().T + povm.m1 @ rho @ povm.m1.conj().T
        assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(np.diag(out), np.diag(rho), atol=1e-12)

    def test_sharpness_monotone(self):
        psi = target_state(2.0, 0.0)  # tilted toward |0>
        devs = [abs(outcome_probability(psi, build_symmetric_povm(p0), 0) - 0.5) for p0 in np.linspace(0.5, 0, 11)]
        assert all(b > a for a, b in zip(devs, devs[1:]))


class TestMeasurement:
    def test_probabilities(self):
        g = basis_state("g")
        assert outcome_probability(g, build_symmetric_povm(0.45), 0) == pytest.approx(0.45)
        assert outcome_probability(basis_state("+x"), build_symmetric_povm(0.3), 0) == pytest.approx(0.5)
        assert outcome_probability([0.6, 0.8], build_symmetric_povm(0.15), 0) == pytest.approx(0.598)

    def test_post_states(self):
        p0 = 0.3
        post, prob = apply_measurement(basis_state("+x"), build_symmetric_povm(p0), 0)
        assert prob == pytest.approx(0.5)
        np.testing.assert_allclose(post, [np.sqrt(p0), np.sqrt(1 - p0)])
        post, prob = apply_measurement(basis_state("g"), build_symmetric_povm(0.2), 1)
        assert prob == pytest.approx(0.8) and equal_up_to_phase(post, basis_state("g"))
        post, prob = apply_measurement([0.6, 0.8], build_symmetric_povm(0.15), 0)
        expected = np.array([0.6 * np.sqrt(0.15), 0.8 * np.sqrt(0.85)]) / np.sqrt(0.598)
        np.testing.assert_allclose(post, expected, atol=1e-12)

    def test_zero_probability(self):
        with pytest.raises(ZeroProbabilityOutcome):
            apply_measurement(basis_state("g"), build_symmetric_povm(0.0), 0)

    @given(states, axes)
    def test_projective_limit(self, psi, axis):
        povm = build_symmetric_povm(0.0, axis)
        plus, minus = projectors(axis)
        for outcome, proj in ((1, plus), (0, minus)):
            v = proj @ psi
            if np.linalg.norm(v) < 1e-6:
                continue
            post, _ = apply_measurement(psi, povm, outcome)
            assert equal_up_to_phase(post, v / np.linalg.norm(v))

    def test_sampling_statistics(self, rng):
        povm = build_symmetric_povm(0.45)
        n = 100_000
        assert abs(np.mean([sample_outcome(basis_state("+x"), povm, rng) == 0 for _ in range(n)]) - 0.5) < 0.005
        assert abs(np.mean([sample_outcome(basis_state("g"), povm, rng) == 0 for _ in range(n)]) - 0.45) < 0.005
        assert all(sample_outcome(basis_state("g"), build_symmetric_povm(0.0), rng) == 1 for _ in range(100))

    def test_measure_reproducible(self):
        povm = build_symmetric_povm(0.2, MeasurementAxis.x())
        a = [measure(basis_state("g"), povm, np.random.default_rng(7))[0] for _ in range(3)]
        assert len(set(a)) == 1


class TestStates:
    def test_as_state_checks(self):
        with pytest.raises(ValueError):
            as_state([1, 1])
        with pytest.raises(ValueError):
            as_state([1, 0, 0])
        np.testing.assert_allclose(as_state([3, 4], normalize=True), [0.6, 0.8])

    def test_bloch_angles_examples(self):
        assert bloch_angles(basis_state("1")) == (0.0, 0.0)
        theta, phi = bloch_angles(basis_state("+x"))
        assert theta == pytest.approx(np.pi / 2) and phi == pytest.approx(0.0)
        theta, phi = bloch_angles(target_state(np.pi / 4, np.pi / 2))
        assert abs(theta - np.pi / 4) < 1e-12 and abs(phi - np.pi / 2) < 1e-12

    def test_bloch_roundtrip_grid(self):
        for theta in np.linspace(0.05, np.pi - 0.05, 10):
            for phi in np.linspace(0, 2 * np.pi, 10, endpoint=False):
                t, p = bloch_angles(target_state(theta, phi))
                assert abs(t - theta) < 1e-12
                assert abs((p - phi + np.pi) % (2 * np.pi) - np.pi) < 1e-12

    def test_bloch_angles_phase_invariant(self, rng):
        psi = random_state(rng)
        a = bloch_angles(psi)
        b = bloch_angles(np.exp(0.7j) * psi)
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_fidelity(self):
        g, e = basis_state("g"), basis_state("e")
        assert fidelity(g, g) == 1 and fidelity(g, e) == 0
        assert fidelity(basis_state("+x"), g) == pytest.approx(0.5)

    def test_bloch_vector_matches_axis(self, rng):
        axis = random_axis(rng)
        plus_state = rotation_to_axis(axis) @ basis_state("g")
        np.testing.assert_allclose(bloch_vector(plus_state), axis.unit_vector, atol=1e-12)
        np.testing.assert_allclose(np.real(np.vdot(plus_state, SIGMA_Z @ plus_state)), np.cos(axis.theta), atol=1e-12)


@settings(max_examples=50)
@given(states, p0s, axes)
def test_probabilities_sum_to_one(psi, p0, axis):
    povm = build_symmetric_povm(p0, axis)
    assert outcome_probability(psi, povm, 0) + outcome_probability(psi, povm, 1) == pytest.approx(1.0, abs=1e-12)
