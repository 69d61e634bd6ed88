import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from qsplit import Circuit, Gate, GateKind, NoiseModel, CountDist
from qsplit import accuracy, distribution_tvd, exact_distribution, run_statevector, sample_counts, tvd, unitary
from qsplit.sim import counts_to_distribution

from conftest import random_circuit


def g(spec):
    name, *ops = spec.split()
    return Gate(GateKind(name), tuple(int(x) for x in ops))


def circ(n, *specs):
    return Circuit(n, tuple(g(s) for s in specs))


class TestStatevector:
    def test_empty_circuit_keeps_basis_state(self):
        sv = run_statevector(Circuit(3), 0)
        assert sv[0] == 1.0 and np.count_nonzero(sv) == 1

    def test_hadamard_superposition(self):
        sv = run_statevector(circ(1, "h 0"), 0)
        assert np.allclose(sv, [1 / np.sqrt(2)] * 2, atol=1e-12)

    def test_x_on_lsb_qubit(self):
        # qubit 0 is the least significant bit
        sv = run_statevector(circ(2, "x 0"), 0)
        assert sv[0b01] == 1.0

    def test_x_on_msb_qubit(self):
        sv = run_statevector(circ(2, "x 1"), 0)
        assert sv[0b10] == 1.0

    def test_ccx_needs_both_controls(self):
        c = circ(3, "x 0", "x 1", "ccx 0 1 2")
        sv = run_statevector(c, 0)
        assert sv[0b111] == 1.0
        sv = run_statevector(circ(3, "x 0", "ccx 0 1 2"), 0)
        assert sv[0b001] == 1.0

    def test_swap(self):
        sv = run_statevector(circ(2, "x 0", "swap 0 1"), 0)
        assert sv[0b10] == 1.0

    def test_input_state_offset(self):
        sv = run_statevector(circ(2, "x 0"), 0b10)
        assert sv[0b11] == 1.0

    def test_norm_conserved_over_long_random_circuit(self):
        rng = np.random.default_rng(3)
        gates = []
        while len(gates) < 10_000:
            gates.extend(random_circuit(rng, 6, 30).gates)
        c = Circuit(6, tuple(gates[:10_000]))
        sv = run_statevector(c, 0)
        assert abs(np.linalg.norm(sv) - 1.0) < 1e-9

    def test_size_limit(self):
        with pytest.raises(ValueError, match="limited"):
            run_statevector(Circuit(21))


class TestUnitary:
    def test_empty_unitary_is_identity(self):
        assert np.array_equal(unitary(Circuit(1)), np.eye(2))

    def test_hadamard_matrix(self):
        expected = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        assert np.allclose(unitary(circ(1, "h 0")), expected, atol=1e-12)

    def test_x_squared_is_identity(self):
        assert np.allclose(unitary(circ(1, "x 0", "x 0")), np.eye(2), atol=1e-12)

    def test_program_order(self):
        # X then H: matrix product H @ X
        u = unitary(circ(1, "x 0", "h 0"))
        assert np.allclose(u, GateKind.H.matrix @ GateKind.X.matrix, atol=1e-12)

    def test_result_unitary_within_tolerance(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            c = random_circuit(rng, 4, 30)
            u = unitary(c)
            assert np.max(np.abs(u @ u.conj().T - np.eye(16))) < 1e-10

    def test_size_limit(self):
        with pytest.raises(ValueError, match="limited"):
            unitary(Circuit(11))


class TestNoiseModel:
    def test_range_validation(self):
        with pytest.raises(ValueError):
            NoiseModel(p1=0.6)
        with pytest.raises(ValueError):
            NoiseModel(pm=-0.1)

    def test_all_zero_is_noiseless(self):
        assert NoiseModel(0, 0, 0).is_noiseless
        assert not NoiseModel(0, 0, 0.01).is_noiseless


class TestCountDist:
    def test_sum_must_match_shots(self):
        with pytest.raises(ValueError, match="sum"):
            CountDist({"0": 5}, 10)

    def test_width_consistency(self):
        with pytest.raises(ValueError, match="width"):
            CountDist({"0": 5, "01": 5}, 10)

    def test_json_round_trip(self):
        d = CountDist({"01": 40, "10": 60}, 100)
        assert CountDist.from_json_dict(d.to_json_dict()) == d


class TestSampling:
    def test_deterministic_circuit_single_outcome(self):
        d = sample_counts(circ(2, "x 0"), shots=500, seed=1)
        assert d.counts == {"01": 500}

    def test_seed_determinism(self):
        c = circ(2, "h 0", "cx 0 1")
        a = sample_counts(c, shots=1000, seed=42)
        b = sample_counts(c, shots=1000, seed=42)
        assert a == b

    def test_all_zero_noise_matches_noiseless_path(self):
        c = circ(2, "h 0")
        a = sample_counts(c, shots=200, noise=None, seed=9)
        b = sample_counts(c, shots=200, noise=NoiseModel(0, 0, 0), seed=9)
        assert a == b

    def test_matches_exact_distribution_chi_square(self):
        # oracle: exact amplitudes from the statevector
        c = circ(3, "h 0", "cx 0 1", "h 2")
        shots = 100_000
        d = sample_counts(c, shots=shots, seed=123)
        probs = exact_distribution(c, 0)
        support = np.nonzero(probs > 1e-12)[0]
        observed = [d.counts.get(format(i, "03b"), 0) for i in support]
        expected = [probs[i] * shots for i in support]
        assert sum(observed) == shots  # nothing sampled off-support
        _, p_value = stats.chisquare(observed, expected)
        assert p_value > 1e-3

    def test_one_bit_noisy_shape(self):
        # 1-bit circuit with noise gives a {"0": ~95, "1": ~5}-shaped histogram
        d = sample_counts(circ(1, "x 0", "x 0"), shots=100,
                          noise=NoiseModel(p1=0.02, p2=0.0, pm=0.01), seed=7)
        assert set(d.counts) <= {"0", "1"}
        assert d.counts.get("0", 0) > 80

    def test_noisy_trajectories_deterministic(self):
        c = circ(3, "x 0", "cx 0 1", "ccx 0 1 2")
        nm = NoiseModel()
        a = sample_counts(c, shots=400, noise=nm, seed=5)
        b = sample_counts(c, shots=400, noise=nm, seed=5)
        assert a == b

    def test_measurement_flip_rate(self):
        # pm only: deterministic |0> with per-bit flip 0.25
        d = sample_counts(Circuit(1), shots=40_000,
                          noise=NoiseModel(0, 0, 0.25), seed=11)
        rate = d.counts.get("1", 0) / d.shots
        assert abs(rate - 0.25) < 0.01

    def test_gate_flip_rate(self):
        # single X gate with p1=0.3: outcome flips back to 0 with prob 0.3
        d = sample_counts(circ(1, "x 0"), shots=40_000,
                          noise=NoiseModel(0.3, 0, 0), seed=13)
        rate = d.counts.get("0", 0) / d.shots
        assert abs(rate - 0.3) < 0.01


class TestTvd:
    def test_identical_distributions(self):
        d = CountDist({"00": 40, "11": 60}, 100)
        assert tvd(d, d) == 0.0

    def test_disjoint_supports(self):
        a = CountDist({"00": 100}, 100)
        b = CountDist({"11": 100}, 100)
        assert tvd(a, b) == 1.0

    def test_worked_example(self):
        # direct formula evaluation: (|95-100| + |5-0|) / 200 = 0.05
        a = CountDist({"0": 95, "1": 5}, 100)
        b = CountDist({"0": 100}, 100)
        assert tvd(a, b) == pytest.approx(0.05)

    def test_shot_mismatch_rejected(self):
        with pytest.raises(ValueError, match="shot-count"):
            tvd(CountDist({"0": 10}, 10), CountDist({"0": 20}, 20))

    def test_width_mismatch_rejected(self):
        with pytest.raises(ValueError, match="width"):
            tvd(CountDist({"0": 10}, 10), CountDist({"00": 10}, 10))

    @given(st.integers(1, 4), st.data())
    @settings(max_examples=60, deadline=None)
    def test_metric_properties(self, bits, data):
        outcomes = [format(i, f"0{bits}b") for i in range(2**bits)]

        def dist():
            # fixed shot count: tvd is a metric on same-N distributions
            draws = data.draw(st.lists(st.sampled_from(outcomes),
                                       min_size=40, max_size=40))
            counts: dict[str, int] = {}
            for o in draws:
                counts[o] = counts.get(o, 0) + 1
            return CountDist(counts, 40)

        a, b, c = dist(), dist(), dist()
        assert tvd(a, b) == pytest.approx(tvd(b, a))
        assert tvd(a, a) == 0.0
        assert (tvd(a, b) == 0.0) == (a.counts == b.counts)
        assert tvd(a, c) <= tvd(a, b) + tvd(b, c) + 1e-12
        assert 0.0 <= tvd(a, b) <= 1.0

    def test_sampled_tvd_converges_to_exact(self):
        c1 = circ(2, "h 0")
        c2 = circ(2, "h 0", "x 1")
        shots = 100_000
        sampled = tvd(sample_counts(c1, shots=shots, seed=1),
                      sample_counts(c2, shots=shots, seed=2))
        exact = distribution_tvd(exact_distribution(c1), exact_distribution(c2))
        assert abs(sampled - exact) < 0.01


class TestAccuracy:
    def test_all_correct(self):
        assert accuracy(CountDist({"00": 100}, 100), "00") == 1.0

    def test_fraction_of_correct_shots(self):
        d = CountDist({"0": 974, "1": 26}, 1000)
        assert accuracy(d, "0") == pytest.approx(0.974)

    def test_ideal_absent(self):
        assert accuracy(CountDist({"01": 10}, 10), "10") == 0.0

    def test_width_mismatch(self):
        with pytest.raises(ValueError, match="width"):
            accuracy(CountDist({"00": 10}, 10), "0")


def test_counts_to_distribution_round():
    d = CountDist({"01": 25, "11": 75}, 100)
    p = counts_to_distribution(d)
    assert p[0b01] == 0.25 and p[0b11] == 0.75 and p.sum() == 1.0


class TestExactNoisyChannel:
    def test_matches_heavy_sampling(self):
        from qsplit.sim import exact_noisy_distribution
        c = circ(4, "x 0", "cx 0 1", "ccx 0 1 2", "swap 2 3")
        nm = NoiseModel(0.03, 0.05, 0.04)
        exact = exact_noisy_distribution(c, 0, nm)
        assert abs(exact.sum() - 1.0) < 1e-12
        sampled = counts_to_distribution(sample_counts(c, 0, 200_000, nm, seed=5))
        assert distribution_tvd(exact, sampled) < 0.005

    def test_zero_noise_reduces_to_exact_distribution(self):
        from qsplit.sim import exact_noisy_distribution
        c = circ(3, "x 0", "cx 0 1", "ccx 0 1 2")
        assert np.allclose(exact_noisy_distribution(c, 0, NoiseModel(0, 0, 0)),
                           exact_distribution(c, 0))

    def test_rejects_non_permutation_circuits(self):
        from qsplit.sim import exact_noisy_distribution
        with pytest.raises(ValueError, match="permutation"):
            exact_noisy_distribution(circ(1, "h 0"), 0, NoiseModel())
