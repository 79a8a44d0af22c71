import numpy as np
import pytest
from numpy.testing import assert_allclose

from qcapdet import (
    QuantumChannel,
    apply_channel,
    apply_extended_channel,
    depolarizing_channel,
    erasure_channel,
    pauli_channel,
    weyl_unitary,
)
from qcapdet.errors import DimensionMismatchError, InvalidStateError
from qcapdet.linalg import partial_trace_system
from randinst import random_channel, random_density, random_probe

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def brute_force_apply(kraus, rho):
    out = np.zeros((kraus[0].shape[0],) * 2, dtype=complex)
    for k in kraus:
        out += k @ rho @ k.conj().T
    return out


class TestWeyl:
    def test_identity(self):
        assert_allclose(weyl_unitary(2, 0, 0), np.eye(2))

    def test_qubit_pauli(self):
        assert_allclose(weyl_unitary(2, 1, 0), Z, atol=1e-15)
        assert_allclose(weyl_unitary(2, 0, 1), X, atol=1e-15)

    def test_unitarity(self):
        for d in (2, 3, 5):
            for m in range(d):
                for n in range(d):
                    u = weyl_unitary(d, m, n)
                    assert np.max(np.abs(u @ u.conj().T - np.eye(d))) < 1e-12

    def test_orthogonality_d3(self):
        d = 3
        for m in range(d):
            for n in range(d):
                for mp in range(d):
                    for np_ in range(d):
                        tr = np.trace(weyl_unitary(d, m, n).conj().T @ weyl_unitary(d, mp, np_))
                        expected = d if (m, n) == (mp, np_) else 0.0
                        assert abs(tr - expected) < 1e-12

    def test_index_range(self):
        with pytest.raises(ValueError):
            weyl_unitary(2, 2, 0)
        with pytest.raises(ValueError):
            weyl_unitary(2, 0, -1)


class TestPauliChannel:
    def test_identity_weights(self):
        grid = np.zeros((2, 2))
        grid[0, 0] = 1.0
        ch = pauli_channel(grid)
        rho = random_density(np.random.default_rng(1), 2)
        assert_allclose(apply_channel(ch, rho), rho, atol=1e-12)

    def test_uniform_is_completely_depolarizing(self):
        ch = pauli_channel(np.full((2, 2), 0.25))
        rng = np.random.default_rng(2)
        for _ in range(20):
            rho = random_density(rng, 2)
            assert_allclose(apply_channel(ch, rho), np.eye(2) / 2, atol=1e-12)

    def test_invalid_grids(self):
        with pytest.raises(InvalidStateError):
            pauli_channel(np.array([[0.5, 0.6], [0.0, 0.0]]))
        with pytest.raises(InvalidStateError):
            pauli_channel(np.array([[1.5, -0.5], [0.0, 0.0]]))


class TestDepolarizing:
    def test_p_zero_identity(self):
        ch = depolarizing_channel(3, 0.0)
        rho = random_density(np.random.default_rng(3), 3)
        assert_allclose(apply_channel(ch, rho), rho, atol=1e-12)

    def test_p_one_is_cptp_pauli_mix(self):
        ch = depolarizing_channel(2, 1.0)
        total = sum(k.conj().T @ k for k in ch.kraus)
        assert_allclose(total, np.eye(2), atol=1e-12)
        rho = np.diag([1.0, 0.0]).astype(complex)
        expected = (X @ rho @ X + Z @ rho @ Z + (X @ Z) @ rho @ (X @ Z).conj().T) / 3
        assert_allclose(apply_channel(ch, rho), expected, atol=1e-12)

    def test_three_quarters_fully_mixes_qubit(self):
        ch = depolarizing_channel(2, 0.75)
        rng = np.random.default_rng(4)
        for _ in range(10):
            assert_allclose(apply_channel(ch, random_density(rng, 2)), np.eye(2) / 2, atol=1e-12)

    def test_pure_state_output(self):
        # brute-force Kraus application oracle for diag(1 - 2p/3, 2p/3)
        for p in (0.1, 0.35, 0.8):
            ch = depolarizing_channel(2, p)
            rho = np.diag([1.0, 0.0]).astype(complex)
            assert_allclose(
                brute_force_apply(ch.kraus, rho), np.diag([1 - 2 * p / 3, 2 * p / 3]), atol=1e-12
            )
            assert_allclose(apply_channel(ch, rho), np.diag([1 - 2 * p / 3, 2 * p / 3]), atol=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            depolarizing_channel(2, -0.1)
        with pytest.raises(ValueError):
            depolarizing_channel(2, 1.1)


class TestErasure:
    def test_p_zero_embeds(self):
        ch = erasure_channel(2, 0.0)
        rho = random_density(np.random.default_rng(5), 2)
        out = apply_channel(ch, rho)
        assert_allclose(out[:2, :2], rho, atol=1e-12)
        assert abs(out[2, 2]) < 1e-12

    def test_p_one_flags_everything(self):
        ch = erasure_channel(2, 1.0)
        rho = random_density(np.random.default_rng(6), 2)
        out = apply_channel(ch, rho)
        expected = np.zeros((3, 3))
        expected[2, 2] = 1.0
        assert_allclose(out, expected, atol=1e-12)

    def test_flag_population(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            p = rng.uniform(0, 1)
            d = int(rng.integers(2, 4))
            out = apply_channel(erasure_channel(d, p), random_density(rng, d))
            assert out[d, d].real == pytest.approx(p, abs=1e-12)

    def test_maximally_mixed_output(self):
        out = apply_channel(erasure_channel(2, 0.2), np.eye(2) / 2)
        assert_allclose(out, np.diag([0.4, 0.4, 0.2]), atol=1e-12)

    def test_output_dimension(self):
        ch = erasure_channel(3, 0.5)
        assert ch.dim_in == 3 and ch.dim_out == 4


class TestApply:
    def test_cptp_preserved_on_random_inputs(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            d = int(rng.integers(2, 4))
            ch = random_channel(rng, d, d + int(rng.integers(0, 2)))
            out = apply_channel(ch, random_density(rng, d))
            assert abs(np.trace(out).real - 1.0) < 1e-10
            assert np.linalg.eigvalsh(out).min() > -1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            apply_channel(depolarizing_channel(2, 0.1), np.eye(3) / 3)

    def test_non_tp_kraus_rejected(self):
        with pytest.raises(InvalidStateError):
            QuantumChannel(2, 2, (np.eye(2) * 0.9,))
        with pytest.raises(InvalidStateError):
            QuantumChannel(2, 2, ())


class TestExtended:
    def test_identity_channel(self):
        rng = np.random.default_rng(9)
        sigma = random_density(rng, 6)
        ch = QuantumChannel(3, 3, (np.eye(3, dtype=complex),), label="identity")
        assert_allclose(apply_extended_channel(ch, sigma, 2), sigma, atol=1e-12)

    def test_erasure_block_structure(self):
        # isotropic input: top block keeps weight 1-p, flag block carries p
        from qcapdet import isotropic_probe

        d, p, fid = 2, 0.3, 0.9
        probe = isotropic_probe(d, fid)
        out = apply_extended_channel(erasure_channel(d, p), probe.sigma, d)
        kept = out.reshape(d, d + 1, d, d + 1)[:, :d, :, :d].reshape(d * d, d * d)
        assert np.trace(kept).real == pytest.approx(1 - p, abs=1e-12)
        assert_allclose(kept, (1 - p) * probe.sigma, atol=1e-12)
        flag = out.reshape(d, d + 1, d, d + 1)[:, d, :, d]
        assert_allclose(flag, p * np.eye(d) / d, atol=1e-12)

    def test_reference_marginal_unchanged(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            d = int(rng.integers(2, 4))
            probe = random_probe(rng, d)
            ch = random_channel(rng, d, d + int(rng.integers(0, 2)))
            out = apply_extended_channel(ch, probe.sigma, d)
            before = partial_trace_system(probe.sigma, d, d)
            after = partial_trace_system(out, d, ch.dim_out)
            assert np.max(np.abs(before - after)) < 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            apply_extended_channel(depolarizing_channel(2, 0.1), np.eye(6) / 6, 2)
