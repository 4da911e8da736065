import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

import oracles
from qauthcc import qsim
from qauthcc.errors import ArgumentError, InvalidSizeError, QubitIndexError
from qauthcc.qsim import (
    CNOT,
    H,
    X,
    Z,
    BellKind,
    Computational,
    Diagonal,
    Rotated,
    Ry,
    StateVector,
    apply_gate,
    basis_state,
    bell_state,
    measure,
    measure_bell,
    new_register,
    prepare_pair,
    split_qubits,
    tensor,
)
from qauthcc.seeding import generator

SAMPLES = 10_000
ALPHA = 0.001


def random_state(n: int, seed: int) -> StateVector:
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector.from_amplitudes(amps, normalize=True)


def same_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    k = int(np.argmax(np.abs(b)))
    phase = a[k] / b[k]
    return np.allclose(a, phase * b, atol=tol) and abs(abs(phase) - 1) < tol


angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestRegister:
    def test_single_qubit_ground_state(self):
        assert np.allclose(new_register(1).amplitudes, [1, 0])

    def test_two_qubit_ground_state(self):
        amps = new_register(2).amplitudes
        assert amps[0] == 1 and not amps[1:].any()

    @pytest.mark.parametrize("n", [0, -1, 25])
    def test_invalid_sizes(self, n):
        with pytest.raises(InvalidSizeError):
            new_register(n)

    def test_wrong_amplitude_length(self):
        with pytest.raises(InvalidSizeError):
            StateVector(2, np.ones(3, dtype=complex))


class TestGates:
    def test_hadamard_on_zero(self):
        out = apply_gate(new_register(1), H, [0])
        assert np.allclose(out.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-12)

    def test_cnot_truth_table(self):
        for bits, expected in [((0, 0), (0, 0)), ((0, 1), (0, 1)), ((1, 0), (1, 1)), ((1, 1), (1, 0))]:
            out = apply_gate(basis_state(bits), CNOT, [0, 1])
            assert np.allclose(out.amplitudes, basis_state(expected).amplitudes)

    def test_cnot_reversed_control(self):
        out = apply_gate(basis_state((0, 1)), CNOT, [1, 0])
        assert np.allclose(out.amplitudes, basis_state((1, 1)).amplitudes)

    def test_ry_convention(self):
        out = apply_gate(new_register(1), Ry(math.pi / 3), [0])
        assert np.allclose(out.amplitudes, [math.cos(math.pi / 6), math.sin(math.pi / 6)])

    def test_index_out_of_range(self):
        with pytest.raises(QubitIndexError):
            apply_gate(new_register(2), X, [2])

    def test_duplicate_targets(self):
        with pytest.raises(ArgumentError):
            apply_gate(new_register(2), X, [1, 1])

    def test_cnot_same_control_and_target(self):
        with pytest.raises(ArgumentError):
            apply_gate(new_register(2), CNOT, [0, 0])

    def test_gate_matches_dense_operator(self):
        psi = random_state(3, 11)
        dense = oracles.cnot(3, 2, 0) @ oracles.on(3, 1, oracles.ry(0.7)) @ psi.amplitudes
        out = apply_gate(apply_gate(psi, Ry(0.7), [1]), CNOT, [2, 0])
        assert np.allclose(out.amplitudes, dense, atol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(seed=seeds, n=st.integers(1, 5), data=st.data())
    def test_norm_preserved(self, seed, n, data):
        psi = random_state(n, seed)
        for _ in range(data.draw(st.integers(1, 12))):
            kind = data.draw(st.sampled_from(["X", "Z", "H", "RY", "CNOT"]))
            if kind == "CNOT":
                if n < 2:
                    continue
                c, t = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
                psi = apply_gate(psi, CNOT, [c, t])
            else:
                gate = Ry(data.draw(angles)) if kind == "RY" else qsim.Gate(kind)
                psi = apply_gate(psi, gate, [data.draw(st.integers(0, n - 1))])
            assert abs(psi.norm() - 1) < 1e-10

    @settings(max_examples=60, deadline=None)
    @given(seed=seeds, theta=angles, q=st.integers(0, 2))
    def test_inverses(self, seed, theta, q):
        psi = random_state(3, seed)
        for gate in (X, Z, H):
            assert np.allclose(apply_gate(apply_gate(psi, gate, [q]), gate, [q]).amplitudes, psi.amplitudes, atol=1e-10)
        back = apply_gate(apply_gate(psi, Ry(theta), [q]), Ry(-theta), [q])
        assert np.allclose(back.amplitudes, psi.amplitudes, atol=1e-10)
        t = (q + 1) % 3
        twice = apply_gate(apply_gate(psi, CNOT, [q, t]), CNOT, [q, t])
        assert np.allclose(twice.amplitudes, psi.amplitudes, atol=1e-10)

    def test_polarization_doubles_the_angle(self):
        out = apply_gate(new_register(1), qsim.polarization(math.pi / 6), [0])
        assert np.allclose(out.amplitudes, [math.cos(math.pi / 6), math.sin(math.pi / 6)])


class TestBellPairs:
    def test_phi_plus(self):
        out = prepare_pair(new_register(2), 0, 1, BellKind.PHI_PLUS)
        assert np.allclose(out.amplitudes, oracles.BELL["phi+"])

    @pytest.mark.parametrize("kind,name", [
        (BellKind.PHI_MINUS, "phi-"), (BellKind.PSI_PLUS, "psi+"), (BellKind.PSI_MINUS, "psi-"),
    ])
    def test_other_kinds(self, kind, name):
        assert np.allclose(bell_state(kind).amplitudes, oracles.BELL[name])

    def test_singlet_designation(self):
        assert BellKind.singlet() is BellKind.PSI_MINUS

    def test_same_qubit_rejected(self):
        with pytest.raises(ArgumentError):
            prepare_pair(new_register(2), 1, 1, BellKind.PHI_PLUS)

    def test_non_fresh_qubits_rejected(self):
        with pytest.raises(ArgumentError):
            prepare_pair(basis_state((1, 0)), 0, 1, BellKind.PHI_PLUS)

    def test_pair_on_distant_qubits(self):
        out = prepare_pair(new_register(3), 2, 0, BellKind.PHI_PLUS)
        assert split_qubits(out, [1])[0].probabilities()[0] == pytest.approx(1.0)

    def test_singlet_computational_anticorrelation(self):
        rng = generator(5)
        for _ in range(200):
            bits, _ = measure(bell_state(BellKind.PSI_MINUS), [0, 1], Computational, rng)
            assert bits[0] != bits[1]

    @settings(max_examples=50, deadline=None)
    @given(theta=st.floats(0, math.pi, exclude_max=True), seed=seeds)
    def test_singlet_anticorrelates_in_every_shared_basis(self, theta, seed):
        basis = Rotated(theta)
        rng = generator(seed)
        for _ in range(20):
            bits, _ = measure(bell_state(BellKind.PSI_MINUS), [0, 1], basis, rng)
            assert bits[0] != bits[1]

    @pytest.mark.parametrize("theta", np.linspace(0, math.pi, 17))
    def test_singlet_equal_outcome_probability_is_zero(self, theta):
        # direct 4x4 linear algebra: projector onto equal outcomes in the rotated basis
        v0 = np.array([math.cos(theta), math.sin(theta)])
        v1 = np.array([-math.sin(theta), math.cos(theta)])
        same = np.outer(np.kron(v0, v0), np.kron(v0, v0)) + np.outer(np.kron(v1, v1), np.kron(v1, v1))
        assert oracles.prob(oracles.BELL["psi-"], same) == pytest.approx(0.0, abs=1e-15)


class TestMeasurement:
    def test_zero_in_computational(self):
        rng = generator(0)
        for _ in range(100):
            bits, post = measure(new_register(1), [0], Computational, rng)
            assert bits == (0,)
            assert np.allclose(post.amplitudes, [1, 0])

    def test_diagonal_is_rotated_quarter_pi(self):
        assert Diagonal == Rotated(math.pi / 4)

    def test_collapse_renormalizes(self):
        psi = random_state(3, 2)
        bits, post = measure(psi, [1], Computational, generator(3))
        assert abs(post.norm() - 1) < 1e-10
        assert post.probabilities().reshape(2, 2, 2)[:, 1 - bits[0], :].sum() == pytest.approx(0.0, abs=1e-15)

    def test_hadamard_frequency(self):
        rng = generator(17)
        plus = apply_gate(new_register(1), H, [0])
        ones = sum(measure(plus, [0], Computational, rng)[0][0] for _ in range(SAMPLES))
        assert 0.47 <= ones / SAMPLES <= 0.53

    def test_rotated_closed_form(self):
        # |0> in Rotated(pi/6): P(0) = cos^2(pi/6) = 0.75
        rng = generator(23)
        zeros = sum(1 - measure(new_register(1), [0], Rotated(math.pi / 6), rng)[0][0] for _ in range(SAMPLES))
        assert abs(zeros / SAMPLES - 0.75) < 0.02

    @pytest.mark.parametrize("case,seed", [("hadamard", 1), ("rotated-pi/6", 2), ("rotated-1.1-on-state", 3), ("two-qubit", 4)])
    def test_born_rule_chi_square(self, case, seed):
        rng = generator(seed)
        if case == "hadamard":
            psi, targets, basis = apply_gate(new_register(1), H, [0]), [0], Computational
            expected = [0.5, 0.5]
        elif case == "rotated-pi/6":
            psi, targets, basis = new_register(1), [0], Rotated(math.pi / 6)
            expected = [0.75, 0.25]
        elif case == "rotated-1.1-on-state":
            psi = apply_gate(new_register(1), Ry(0.4), [0])
            targets, basis = [0], Rotated(1.1)
            expected = [math.cos(0.2 - 1.1) ** 2, math.sin(0.2 - 1.1) ** 2]
        else:
            psi = StateVector.from_amplitudes([0.1, 0.5j, 0.7, -0.2 + 0.3j], normalize=True)
            targets, basis = [0, 1], Computational
            expected = list(psi.probabilities())
        counts = np.zeros(len(expected))
        for _ in range(SAMPLES):
            bits, _ = measure(psi, targets, basis, rng)
            counts[int("".join(map(str, bits)), 2)] += 1
        _, p = chisquare(counts, np.array(expected) * SAMPLES)
        assert p > ALPHA

    def test_determinism(self):
        psi = random_state(4, 9)

        def sequence(seed):
            rng = generator(seed)
            return [measure(psi, [0, 1, 2, 3], Diagonal, rng)[0] for _ in range(50)]

        assert sequence(42) == sequence(42)
        assert sequence(42) != sequence(43)

    def test_measure_out_of_range(self):
        with pytest.raises(QubitIndexError):
            measure(new_register(1), [1], Computational, generator(0))


class TestBellMeasurement:
    def test_eigenstate(self):
        rng = generator(1)
        for kind in BellKind:
            for _ in range(20):
                got, post = measure_bell(bell_state(kind), 0, 1, rng)
                assert got is kind
                assert same_up_to_phase(post.amplitudes, bell_state(kind).amplitudes)

    def test_computational_zero_splits_over_phi(self):
        rng = generator(2)
        counts = {k: 0 for k in BellKind}
        for _ in range(SAMPLES):
            counts[measure_bell(new_register(2), 0, 1, rng)[0]] += 1
        assert counts[BellKind.PSI_PLUS] == counts[BellKind.PSI_MINUS] == 0
        _, p = chisquare([counts[BellKind.PHI_PLUS], counts[BellKind.PHI_MINUS]])
        assert p > ALPHA

    def test_same_qubit_rejected(self):
        with pytest.raises(ArgumentError):
            measure_bell(new_register(2), 1, 1, generator(0))

    def test_entanglement_swapping_matches_oracle(self):
        names = {BellKind.PHI_PLUS: "phi+", BellKind.PHI_MINUS: "phi-", BellKind.PSI_PLUS: "psi+", BellKind.PSI_MINUS: "psi-"}
        expected = oracles.swap_post_states()
        pairs = tensor(bell_state(BellKind.PHI_PLUS), bell_state(BellKind.PHI_PLUS))
        assert np.allclose(pairs.amplitudes, oracles.kron(oracles.BELL["phi+"], oracles.BELL["phi+"]), atol=1e-12)
        rng = generator(77)
        seen = {}
        for _ in range(4000):
            kind, post = measure_bell(pairs, 1, 2, rng)
            seen[kind] = seen.get(kind, 0) + 1
            p, oracle_post = expected[names[kind]]
            assert p == pytest.approx(0.25, abs=1e-12)
            assert same_up_to_phase(post.amplitudes, oracle_post)
            # outer qubits (0, 3) end in the same Bell state as the measured pair
            outer = split_qubits(post, [0, 3])[0]
            assert oracles.prob(outer.amplitudes, np.outer(oracles.BELL[names[kind]], oracles.BELL[names[kind]])) == pytest.approx(1.0, abs=1e-10)
        assert set(seen) == set(BellKind)
        _, pval = chisquare(list(seen.values()))
        assert pval > ALPHA


class TestFactoring:
    def test_split_product(self):
        a, b = random_state(1, 1), random_state(2, 2)
        group, rest = split_qubits(tensor(a, b), [0])
        assert abs(qsim.fidelity(group, a) - 1) < 1e-10
        assert abs(qsim.fidelity(rest, b) - 1) < 1e-10

    def test_split_entangled_raises(self):
        from qauthcc.errors import EntangledError

        with pytest.raises(EntangledError):
            split_qubits(bell_state(BellKind.PHI_PLUS), [0])
