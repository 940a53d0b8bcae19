import math

import numpy as np
import pytest

from microbench import sim
from microbench.corpus import build_qft, build_random_clifford, corpus_all
from microbench.ir import Circuit, ccx, cx, h, rz, swap, x
from microbench.transpile import decompose_to_basis

from _circuits import explicit_unitary, random_circuit


class TestRun:
    def test_hadamard_on_zero(self):
        out = sim.run(Circuit(1, [h(0)]))
        assert np.allclose(out, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)

    def test_endianness_qubit0_is_lsb(self):
        # X on qubit 0 of 3 qubits sets index 1; X on qubit 2 sets index 4
        assert np.argmax(np.abs(sim.run(Circuit(3, [x(0)])))) == 1
        assert np.argmax(np.abs(sim.run(Circuit(3, [x(2)])))) == 4

    def test_cx_control_q0(self):
        # index 1 = q0 set; CX(q0 -> q1) maps it to index 3 = |11>
        out = sim.run(Circuit(2, [cx(0, 1)]), sim.basis_state(2, 1))
        assert np.allclose(out, sim.basis_state(2, 3))
        # control clear: nothing happens
        out = sim.run(Circuit(2, [cx(0, 1)]), sim.basis_state(2, 2))
        assert np.allclose(out, sim.basis_state(2, 2))

    def test_ccx_operand_order(self):
        c = Circuit(3, [ccx(2, 1, 0)])
        assert np.argmax(np.abs(sim.run(c, sim.basis_state(3, 0b110)))) == 0b111
        assert np.argmax(np.abs(sim.run(c, sim.basis_state(3, 0b011)))) == 0b011

    def test_qft3_on_zero_is_uniform(self):
        out = sim.run(build_qft(3))
        assert np.allclose(out, np.full(8, 1 / math.sqrt(8)), atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_qft_matches_dft(self, n):
        # QFT|x> = N^-1/2 sum_y exp(2 pi i x y / N) |y>, i.e. the unitary inverse DFT
        dim = 2**n
        expected = np.array([[np.exp(2j * np.pi * r * c / dim) for c in range(dim)] for r in range(dim)]) / np.sqrt(dim)
        assert np.allclose(sim.unitary(build_qft(n)), expected, atol=1e-12)

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_explicit_kron_construction(self, seed):
        c = random_circuit(seed, n=4, m=15)
        assert np.allclose(sim.unitary(c), explicit_unitary(c), atol=1e-12)

    @pytest.mark.parametrize("seed", range(20))
    def test_norm_preserved(self, seed):
        c = random_circuit(seed, n=5, m=40)
        psi = sim.random_product_states(5, 1, seed)[:, 0]
        assert abs(np.linalg.norm(sim.run(c, psi)) ** 2 - 1) < 1e-10

    @pytest.mark.parametrize("seed", range(20))
    def test_composition(self, seed):
        a = random_circuit(seed, n=4, m=10)
        b = random_circuit(seed + 1000, n=4, m=10)
        psi = sim.random_product_states(4, 1, seed)[:, 0]
        assert np.array_equal(sim.run(a + b, psi), sim.run(b, sim.run(a, psi)))

    def test_capacity(self):
        with pytest.raises(sim.CapacityError):
            sim.run(Circuit(13))

    def test_state_shape_checked(self):
        with pytest.raises(ValueError):
            sim.run(Circuit(2), np.ones(3))

    @pytest.mark.parametrize("seed", range(5))
    def test_clifford_amplitudes_are_stabilizer_like(self, seed):
        c = build_random_clifford(8, 15, seed)
        for idx in (0, 1, 77, 255):
            probs = np.abs(sim.run(c, sim.basis_state(8, idx))) ** 2
            nz = probs[probs > 1e-9]
            k = np.log2(1 / nz)
            assert np.allclose(k, np.round(k), atol=1e-9)
            assert np.allclose(nz, nz[0], atol=1e-9)


class TestEquivalent:
    def test_reflexive(self):
        for c in corpus_all():
            assert sim.equivalent(c, c, tol=1e-14)

    def test_hh_vs_empty(self):
        assert sim.equivalent(Circuit(1, [h(0), h(0)]), Circuit(1), tol=1e-10)

    def test_ccx_vs_decomposition(self):
        c = Circuit(3, [ccx(0, 1, 2)])
        low = decompose_to_basis(c)
        assert len(low) == 15
        assert sim.equivalent(c, low, tol=1e-10)

    def test_global_phase_ignored(self):
        # RZ(2 pi) = -I
        assert sim.equivalent(Circuit(1), Circuit(1, [rz(2 * math.pi, 0)]))

    def test_relative_phase_detected(self):
        assert not sim.equivalent(Circuit(1), Circuit(1, [rz(0.01, 0)]), tol=1e-9)

    def test_permutation_alignment(self):
        # SWAP then relabel back is the identity
        c2 = Circuit(2, [swap(0, 1)])
        assert sim.equivalent(Circuit(2), c2, perm=[1, 0])
        assert not sim.equivalent(Circuit(2, [x(0)]), c2, perm=[0, 1])

    def test_initial_layout(self):
        c1 = Circuit(2, [x(0)])
        c2 = Circuit(2, [x(1)])
        assert sim.equivalent(c1, c2, perm=[1, 0], initial=[1, 0])

    def test_sampled_mode(self):
        c = random_circuit(3, n=8, m=40)
        assert sim.equivalent(c, c + Circuit(8, [h(5), h(5)]))
        assert not sim.equivalent(c, c + Circuit(8, [x(7)]))

    def test_width_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            sim.equivalent(Circuit(1), Circuit(2))

    def test_permutation_indices(self):
        # logical 0 -> physical 2: logical index 1 lives at physical index 4
        idx = sim.permutation_indices([2, 0, 1], 3)
        assert idx[1] == 4 and idx[2] == 1 and idx[4] == 2
