"""Truncated photon-number constructions against closed-form spectra."""

import math

import numpy as np
import pytest

from correxp.errors import DomainError, ResourceGuardError, UsageError
from correxp.fock import (
    FockOperator,
    coherent_ket,
    correlated_spectrum,
    correlated_state,
    dump_fock_operator,
    load_fock_operator,
    mean_photon_number,
    occupations,
    quantum_relative_entropy,
    tensor,
    thermal_state,
    truncation_tail_coherent,
    truncation_tail_thermal,
    von_neumann_entropy,
)
from correxp.scalars import EnergyParams, LogBase, symplectic_mode_entropy, gordon_g

NATS = LogBase.NATS
BITS = LogBase.BITS


class TestCoherentKet:
    def test_poisson_weights(self):
        ket = coherent_ket(1.3, 20)
        weights = np.abs(ket.amplitudes) ** 2
        z = 1.3**2
        expected = np.exp(-z) * z ** np.arange(21) / [math.factorial(n) for n in range(21)]
        np.testing.assert_allclose(weights, expected, rtol=1e-12)

    def test_complex_amplitude_phases(self):
        alpha = 0.8 * np.exp(1j * 0.7)
        ket = coherent_ket(alpha, 6)
        # c_n carries phase alpha^n
        phases = np.angle(ket.amplitudes[1:]) - np.angle(ket.amplitudes[:-1])
        np.testing.assert_allclose(np.mod(phases, 2 * np.pi), 0.7, atol=1e-12)

    def test_severe_truncation_flag(self):
        assert not coherent_ket(0.5, 20).severe_truncation
        assert coherent_ket(3.0, 4).severe_truncation

    def test_vacuum(self):
        ket = coherent_ket(0.0, 5)
        np.testing.assert_array_equal(ket.amplitudes, [1, 0, 0, 0, 0, 0])


class TestThermalState:
    def test_trace_complement_is_tail(self):
        op = thermal_state(0.7, 30)
        assert op.discarded_mass == pytest.approx(
            truncation_tail_thermal(0.7, 30).exact, rel=1e-12
        )
        assert op.trace() + op.discarded_mass == pytest.approx(1.0, abs=1e-13)

    def test_entropy_matches_closed_form(self):
        op = thermal_state(0.3, 40)
        assert von_neumann_entropy(op, NATS) == pytest.approx(
            0.70226538510551917, abs=1e-10
        )

    def test_vacuum(self):
        op = thermal_state(0.0, 4)
        assert op.matrix[0, 0] == pytest.approx(1.0)
        assert op.discarded_mass == 0.0
        assert von_neumann_entropy(op, NATS) == pytest.approx(0.0, abs=1e-14)

    def test_mean_photon_number(self):
        assert mean_photon_number(thermal_state(0.4, 60)) == pytest.approx(0.4, abs=1e-10)


class TestCorrelatedState:
    def test_valid_state(self):
        op = correlated_state(EnergyParams(2, 0.1), 10)
        assert op.modes == 2 and op.cutoff == 10
        np.testing.assert_allclose(op.matrix, op.matrix.conj().T, atol=1e-14)
        lam = np.linalg.eigvalsh(op.matrix)
        assert lam[0] > -1e-12
        assert op.trace() == pytest.approx(1.0 - op.discarded_mass, rel=1e-12)

    def test_entropy_matches_closed_form(self):
        op = correlated_state(EnergyParams(2, 0.1), 12)
        assert von_neumann_entropy(op, NATS) == pytest.approx(
            0.54067345063956563, abs=1e-9
        )

    def test_spectrum_route_agrees_with_eigensolver(self):
        p = EnergyParams(2, 0.15)
        op = correlated_state(p, 9)
        lam_direct = np.linalg.eigvalsh(op.matrix)[::-1]
        lam_analytic = correlated_spectrum(p, 9)
        np.testing.assert_allclose(
            lam_direct[: lam_analytic.size], lam_analytic, atol=1e-12
        )
        np.testing.assert_allclose(lam_direct[lam_analytic.size :], 0.0, atol=1e-12)

    def test_block_structure(self):
        # elements between different total photon numbers vanish
        op = correlated_state(EnergyParams(2, 0.2), 5)
        totals = occupations(2, 5).sum(axis=1)
        off = totals[:, None] != totals[None, :]
        assert np.max(np.abs(op.matrix[off])) == 0.0

    def test_mean_photon_per_mode(self):
        op = correlated_state(EnergyParams(3, 0.08), 7)
        for mode in range(3):
            assert mean_photon_number(op, mode) == pytest.approx(0.08, abs=1e-8)

    def test_zero_energy_is_vacuum(self):
        op = correlated_state(EnergyParams(2, 0.0), 3)
        expected = np.zeros((16, 16))
        expected[0, 0] = 1.0
        np.testing.assert_allclose(op.matrix, expected, atol=0)

    def test_dimension_guard(self):
        with pytest.raises(ResourceGuardError):
            correlated_state(EnergyParams(3, 0.1), 40)

    def test_quad_nodes_floor(self):
        with pytest.raises(UsageError):
            correlated_state(EnergyParams(2, 0.1), 8, quad_nodes=8)


class TestRelativeEntropy:
    def test_correlated_vs_product_closed_form(self):
        p = EnergyParams(2, 0.1)
        rho = correlated_state(p, 12)
        single = thermal_state(0.1, 12)
        sigma = tensor(single, single)
        sigma = FockOperator(
            modes=2, cutoff=12, matrix=sigma.matrix / sigma.trace(),
            discarded_mass=sigma.discarded_mass,
        )
        got = quantum_relative_entropy(rho, sigma, NATS)
        assert got == pytest.approx(0.12952596352875820, abs=1e-8)

    def test_thermal_pair_closed_form(self):
        # KL between thermal states of different temperature, diagonal case
        rho = thermal_state(0.2, 60)
        sigma = thermal_state(0.5, 60)
        got = quantum_relative_entropy(rho, sigma, NATS)
        assert got == pytest.approx(0.08451411520222069, abs=1e-9)

    def test_zero_on_identical(self):
        op = thermal_state(0.3, 40)
        assert quantum_relative_entropy(op, op, NATS) == pytest.approx(0.0, abs=1e-12)

    def test_support_violation_returns_inf(self):
        # cutoff 8 keeps the excited state's trace within the tolerance the
        # function enforces, so the failure reported is genuinely about support
        vacuum = thermal_state(0.0, 8)
        excited = thermal_state(0.2, 8)
        assert quantum_relative_entropy(excited, vacuum, NATS) == math.inf

    def test_basis_mismatch(self):
        with pytest.raises(UsageError):
            quantum_relative_entropy(thermal_state(0.1, 5), thermal_state(0.1, 6), NATS)

    def test_trace_precondition(self):
        op = thermal_state(0.1, 8)
        doubled = FockOperator(1, 8, 2.0 * op.matrix)
        with pytest.raises(DomainError):
            quantum_relative_entropy(doubled, op, NATS)


class TestEntropyValidation:
    def test_trace_tolerance(self):
        op = thermal_state(0.1, 8)
        with pytest.raises(DomainError):
            von_neumann_entropy(FockOperator(1, 8, 3.0 * op.matrix), NATS)

    def test_negative_eigenvalue_rejected(self):
        bad = np.diag([1.2, -0.2, 0.0]).astype(complex)
        with pytest.raises(DomainError):
            von_neumann_entropy(FockOperator(1, 2, bad), NATS)

    def test_hermiticity_enforced_on_construction(self):
        m = np.eye(3, dtype=complex)
        m[0, 1] = 0.5j
        with pytest.raises(DomainError):
            FockOperator(1, 2, m)


class TestTensor:
    def test_trace_multiplies(self):
        a = thermal_state(0.2, 6)
        b = thermal_state(0.4, 6)
        assert tensor(a, b).trace() == pytest.approx(a.trace() * b.trace(), rel=1e-12)

    def test_entropy_adds(self):
        a = thermal_state(0.2, 40)
        b = thermal_state(0.4, 40)
        s = von_neumann_entropy(tensor(a, b), NATS)
        expected = gordon_g(0.2, NATS) + gordon_g(0.4, NATS)
        assert s == pytest.approx(expected, abs=1e-8)

    def test_cutoff_mismatch(self):
        with pytest.raises(UsageError):
            tensor(thermal_state(0.1, 4), thermal_state(0.1, 5))


class TestTruncationTails:
    def test_coherent_exact_frozen(self):
        assert truncation_tail_coherent(0.5, 3).exact == pytest.approx(
            1.33369650514062383e-4, rel=1e-12
        )
        assert truncation_tail_coherent(1.0, 6).exact == pytest.approx(
            8.32411492880231077e-5, rel=1e-12
        )
        assert truncation_tail_coherent(2.0, 12).exact == pytest.approx(
            2.73716822855503000e-4, rel=1e-12
        )

    def test_guaranteed_region_boundary(self):
        # 8 e max(2, z) = 43.5 for z <= 2
        assert not truncation_tail_coherent(1.0, 43).in_guaranteed_region
        assert truncation_tail_coherent(1.0, 44).in_guaranteed_region

    def test_bound_holds_in_guaranteed_region(self):
        for alpha_sq in (0.5, 1.0, 2.0, 4.0):
            alpha = math.sqrt(alpha_sq)
            start = math.ceil(8.0 * math.e * max(2.0, alpha_sq))
            for cutoff in range(start, 65):
                tail = truncation_tail_coherent(alpha, cutoff)
                assert tail.in_guaranteed_region
                assert tail.bound_holds

    def test_thermal_exact_and_target(self):
        tail = truncation_tail_thermal(1.0, 10)
        assert tail.exact == pytest.approx(2.0**-11, rel=1e-12)
        assert tail.within_target

    def test_thermal_target_fails_above_unit_energy(self):
        # for E > 1 the geometric ratio exceeds 1/2 and the 2^-N target is lost
        assert not truncation_tail_thermal(3.0, 20).within_target

    def test_validation(self):
        with pytest.raises(DomainError):
            truncation_tail_coherent(1.0, 0)
        with pytest.raises(DomainError):
            truncation_tail_thermal(-0.5, 4)


class TestSerialization:
    def test_roundtrip(self, tmp_path):
        op = correlated_state(EnergyParams(2, 0.3), 6)
        path = tmp_path / "state.cxf"
        dump_fock_operator(op, path)
        back = load_fock_operator(path)
        assert back.modes == op.modes
        assert back.cutoff == op.cutoff
        assert back.discarded_mass == op.discarded_mass
        np.testing.assert_array_equal(back.matrix, op.matrix)

    def test_dump_is_deterministic(self, tmp_path):
        op = thermal_state(0.2, 9)
        p1, p2 = tmp_path / "a.cxf", tmp_path / "b.cxf"
        dump_fock_operator(op, p1)
        dump_fock_operator(op, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_bad_magic_rejected(self, tmp_path):
        op = thermal_state(0.2, 4)
        path = tmp_path / "state.cxf"
        dump_fock_operator(op, path)
        raw = bytearray(path.read_bytes())
        raw[:2] = b"ZZ"
        path.write_bytes(bytes(raw))
        with pytest.raises(DomainError):
            load_fock_operator(path)

    def test_truncated_payload_rejected(self, tmp_path):
        op = thermal_state(0.2, 4)
        path = tmp_path / "state.cxf"
        dump_fock_operator(op, path)
        path.write_bytes(path.read_bytes()[:-16])
        with pytest.raises(DomainError):
            load_fock_operator(path)
