"""Singlet state, joint distributions, expectation values, and sampling."""

import math

import numpy as np
import pytest

from qctx import bundled, linalg
from qctx.experiment import (
    ALLOWED_CROSS_CELLS,
    FORBIDDEN_CELLS,
    JointDistribution,
    contextuality_report,
    derive_stream_seed,
    expectation_closed_form,
    expectation_trace,
    interlinked_distribution,
    joint_distribution,
    opposite_outcomes_check,
    rotation_invariance_check,
    sample,
    sample_split,
    shared_outcome_uniqueness,
    singlet_state,
)
from qctx.ks import KSLabels, c_prime_blue, c_red, context_from_matrix, context_of
from qctx.spin import Direction

SQ3 = math.sqrt(3.0)

# chi-square 99.9% quantile at 4 degrees of freedom
CHI2_999_DOF4 = 18.46682695290317


def amplitude_oracle(c1, c2, state):
    """Per-cell |<u (x) v | s>|^2, independent of the projector route."""
    probs = np.zeros((3, 3))
    for i, u in enumerate(c1.rays):
        for j, v in enumerate(c2.rays):
            amp = np.vdot(np.kron(u, v), state)
            probs[i, j] = abs(amp) ** 2
    return probs


def random_labels(rng, min_gap=0.1):
    while True:
        vals = rng.uniform(-2, 2, size=3)
        if (
            min(
                abs(vals[0] - vals[1]),
                abs(vals[0] - vals[2]),
                abs(vals[1] - vals[2]),
            )
            >= min_gap
        ):
            return KSLabels(*vals)


def random_direction(rng):
    return Direction(math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi))


class TestSingletState:
    def test_amplitudes(self):
        s = singlet_state()
        expected = np.array([0, 0, 1, 0, -1, 0, 1, 0, 0], dtype=complex) / SQ3
        assert np.max(np.abs(s - expected)) < 1e-15

    def test_norm(self):
        assert abs(np.linalg.norm(singlet_state()) - 1.0) < 1e-15

    def test_assembly_from_product_kets(self):
        plus = np.array([1, 0, 0], dtype=complex)
        zero = np.array([0, 1, 0], dtype=complex)
        minus = np.array([0, 0, 1], dtype=complex)
        assembled = (
            -linalg.kron(zero, zero)
            + linalg.kron(minus, plus)
            + linalg.kron(plus, minus)
        ) / SQ3
        assert np.max(np.abs(assembled - singlet_state())) < 1e-15


class TestJointDistribution:
    def test_interlinked_contexts_against_amplitude_oracle(self):
        c1 = context_of(c_red(KSLabels(1, 2, 3)))
        c2 = context_of(c_prime_blue(KSLabels(4, 5, 6)))
        d = joint_distribution(c1, c2, singlet_state())
        oracle = amplitude_oracle(c1, c2, singlet_state())
        assert np.max(np.abs(d.probabilities - oracle)) < 1e-14

        assert d.cell(0, 0) == pytest.approx(1 / 3, abs=1e-12)
        for i, j in FORBIDDEN_CELLS:
            assert d.cell(i, j) < 1e-12
        for i, j in ALLOWED_CROSS_CELLS:
            assert d.cell(i, j) == pytest.approx(1 / 6, abs=1e-12)

    def test_forbidden_amplitudes_vanish_identically(self):
        c1 = context_of(c_red(KSLabels(1, 2, 3)))
        c2 = context_of(c_prime_blue(KSLabels(4, 5, 6)))
        s = singlet_state()
        for i, j in FORBIDDEN_CELLS:
            amp = np.vdot(np.kron(c1.rays[i], c2.rays[j]), s)
            assert abs(amp) < 1e-13

    def test_same_basis_both_sides(self):
        ctx = context_from_matrix(np.diag([1.0, 0.0, -1.0]).astype(complex))
        d = joint_distribution(ctx, ctx, singlet_state())
        # labels ascend (-1, 0, +1); only opposite pairs fire, each 1/3
        expected = np.array(
            [[0, 0, 1 / 3], [0, 1 / 3, 0], [1 / 3, 0, 0]]
        )
        assert np.max(np.abs(d.probabilities - expected)) < 1e-12

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(137)
        for _ in range(10):
            c1 = context_of(c_red(random_labels(rng)))
            c2 = context_of(c_prime_blue(random_labels(rng)))
            d = joint_distribution(c1, c2, singlet_state())
            assert abs(d.probabilities.sum() - 1.0) < 1e-10

    def test_marginals_are_uniform(self):
        d = interlinked_distribution(KSLabels(1, 2, 3), KSLabels(4, 5, 6))
        assert np.max(np.abs(d.marginal_side1() - 1 / 3)) < 1e-10
        assert np.max(np.abs(d.marginal_side2() - 1 / 3)) < 1e-10

    def test_swap_transposes(self):
        base = interlinked_distribution(KSLabels(1, 2, 3), KSLabels(4, 5, 6))
        swapped = interlinked_distribution(
            KSLabels(1, 2, 3), KSLabels(4, 5, 6), swap=True
        )
        assert swapped.side1_labels == base.side2_labels
        assert np.max(np.abs(swapped.probabilities - base.probabilities.T)) < 1e-12

    def test_csv_emission(self):
        d = interlinked_distribution(KSLabels(1, 2, 3), KSLabels(4, 5, 6))
        lines = d.to_csv().splitlines()
        assert lines[0] == "side1_label,side2_label,probability"
        assert len(lines) == 10
        first = lines[1].split(",")
        assert float(first[0]) == 1.0
        assert float(first[1]) == 4.0
        assert float(first[2]) == pytest.approx(1 / 3, abs=1e-12)


class TestExpectation:
    def test_reference_labels(self):
        value = expectation_trace(
            c_red(KSLabels(1, 2, 3)), c_prime_blue(KSLabels(4, 5, 6)), singlet_state()
        )
        assert value == pytest.approx(10.5, abs=1e-10)
        assert expectation_closed_form(KSLabels(1, 2, 3), KSLabels(4, 5, 6)) == 10.5

    def test_closed_form_examples(self):
        assert expectation_closed_form(KSLabels(1, 1.5, 2.5), KSLabels(2, -1, 3)) == pytest.approx(2.0)
        assert expectation_closed_form(KSLabels(0, 1, -1), KSLabels(0, 1, -1)) == 0.0
        assert expectation_closed_form(KSLabels(5, -3, 7), KSLabels(0, 0.5, -0.5)) == 0.0

    def test_near_degenerate_labels_stay_consistent(self):
        l1 = KSLabels(1.0, 1.0 + 1e-3, 1.0 + 2e-3)
        l2 = KSLabels(2.0, 2.0 + 1e-3, 2.0 + 2e-3)
        trace = expectation_trace(c_red(l1), c_prime_blue(l2), singlet_state())
        assert trace == pytest.approx(expectation_closed_form(l1, l2), abs=1e-10)

    def test_trace_equals_closed_form_sweep(self):
        rng = np.random.default_rng(139)
        worst = 0.0
        for _ in range(100):
            l1 = random_labels(rng)
            l2 = random_labels(rng)
            trace = expectation_trace(c_red(l1), c_prime_blue(l2), singlet_state())
            worst = max(worst, abs(trace - expectation_closed_form(l1, l2)))
        assert worst < 1e-10

    def test_distribution_consistency(self):
        rng = np.random.default_rng(149)
        for _ in range(10):
            l1 = random_labels(rng)
            l2 = random_labels(rng)
            d = interlinked_distribution(l1, l2)
            trace = expectation_trace(c_red(l1), c_prime_blue(l2), singlet_state())
            assert abs(d.label_expectation() - trace) < 1e-10


class TestContextualityReport:
    def test_exact_distribution_confirms(self):
        d = interlinked_distribution(KSLabels(1, 2, 3), KSLabels(4, 5, 6))
        report = contextuality_report(d)
        assert report.confirmed
        assert report.verdict == "non-contextual prediction confirmed"
        assert max(report.forbidden_probabilities) < 1e-12
        assert report.shared_probability == pytest.approx(1 / 3, abs=1e-12)
        assert all(
            p == pytest.approx(1 / 6, abs=1e-12)
            for p in report.allowed_cross_probabilities
        )

    def test_uniform_distribution_violates(self):
        uniform = JointDistribution(
            side1_labels=(1.0, 2.0, 3.0),
            side2_labels=(4.0, 5.0, 6.0),
            probabilities=np.full((3, 3), 1 / 9),
        )
        report = contextuality_report(uniform)
        assert not report.confirmed
        assert report.verdict == "non-contextual prediction violated"
        assert all(p == pytest.approx(1 / 9) for p in report.forbidden_probabilities)

    def test_empirical_tally_confirms(self):
        d = interlinked_distribution(KSLabels(1, 2, 3), KSLabels(4, 5, 6))
        tally = sample(d, shots=100_000, seed=7)
        report = contextuality_report(tally.as_distribution())
        assert report.confirmed

    def test_shared_outcome_uniqueness(self):
        d = interlinked_distribution(KSLabels(1, 2, 3), KSLabels(4, 5, 6))
        report = shared_outcome_uniqueness(d)
        assert report.passed
        assert report.side1_conditional[0] == pytest.approx(1.0, abs=1e-12)
        assert report.side2_conditional[0] == pytest.approx(1.0, abs=1e-12)


class TestSampler:
    def setup_method(self):
        self.dist = interlinked_distribution(KSLabels(1, 2, 3), KSLabels(4, 5, 6))

    def test_counts_sum_to_shots(self):
        tally = sample(self.dist, shots=1000, seed=1)
        assert tally.counts.sum() == 1000

    def test_single_shot(self):
        tally = sample(self.dist, shots=1, seed=3)
        assert np.count_nonzero(tally.counts) == 1

    def test_rejects_zero_shots(self):
        with pytest.raises(ValueError, match="positive"):
            sample(self.dist, shots=0, seed=1)

    def test_deterministic(self):
        a = sample(self.dist, shots=10_000, seed=42)
        b = sample(self.dist, shots=10_000, seed=42)
        assert np.array_equal(a.counts, b.counts)
        assert a.to_json() == b.to_json()

    def test_seed_changes_counts(self):
        a = sample(self.dist, shots=10_000, seed=42)
        b = sample(self.dist, shots=10_000, seed=43)
        assert not np.array_equal(a.counts, b.counts)

    def test_million_shots_match_distribution(self):
        tally = sample(self.dist, shots=1_000_000, seed=42)
        freqs = tally.frequencies()
        for i, j in FORBIDDEN_CELLS:
            assert tally.counts[i, j] == 0
        assert abs(freqs[0, 0] - 1 / 3) < 0.005
        for i, j in ALLOWED_CROSS_CELLS:
            assert abs(freqs[i, j] - 1 / 6) < 0.005

    def test_chi_square_unbiasedness(self):
        tally = sample(self.dist, shots=1_000_000, seed=42)
        live = [(0, 0)] + list(ALLOWED_CROSS_CELLS)
        chi2 = 0.0
        for i, j in live:
            expected = self.dist.cell(i, j) * tally.shots
            chi2 += (tally.counts[i, j] - expected) ** 2 / expected
        assert chi2 < CHI2_999_DOF4

    def test_metadata_recorded(self):
        tally = sample(self.dist, shots=10, seed=11)
        payload = tally.to_dict()
        assert payload["algorithm"] == "splitmix64"
        assert payload["seed"] == 11
        assert payload["shots"] == 10

    def test_split_streams_merge_deterministically(self):
        merged = sample_split(self.dist, shots=9999, seed=42, streams=4)
        assert merged.counts.sum() == 9999
        again = sample_split(self.dist, shots=9999, seed=42, streams=4)
        assert np.array_equal(merged.counts, again.counts)
        # manual merge over the documented split schedule
        manual = np.zeros((3, 3), dtype=np.int64)
        for k, piece in enumerate([2500, 2500, 2500, 2499]):
            manual += sample(self.dist, piece, derive_stream_seed(42, k)).counts
        assert np.array_equal(merged.counts, manual)

    def test_csv_emission(self):
        tally = sample(self.dist, shots=100, seed=5)
        lines = tally.to_csv().splitlines()
        assert lines[0] == "side1_label,side2_label,count"
        assert len(lines) == 10
        assert sum(int(line.split(",")[2]) for line in lines[1:]) == 100


class TestGoldenFiles:
    def test_distribution_regression(self):
        golden = bundled.golden_distribution()
        d = interlinked_distribution(KSLabels(1, 2, 3), KSLabels(4, 5, 6))
        assert golden["side1_labels"] == list(d.side1_labels)
        assert golden["side2_labels"] == list(d.side2_labels)
        # last-ulp slack for libm differences between platforms
        assert np.max(np.abs(np.array(golden["probabilities"]) - d.probabilities)) < 1e-15

    def test_tally_regression(self):
        golden = bundled.golden_tally()
        d = interlinked_distribution(KSLabels(1, 2, 3), KSLabels(4, 5, 6))
        tally = sample(d, shots=golden["shots"], seed=golden["seed"])
        assert golden == tally.to_dict()


class TestOppositeOutcomes:
    def test_z_axis(self):
        report = opposite_outcomes_check(Direction(0.0, 0.0), singlet_state())
        assert report.passed
        assert report.non_opposite_mass < 1e-10
        assert all(
            p == pytest.approx(1 / 3, abs=1e-10)
            for p in report.opposite_probabilities
        )

    def test_generic_direction(self):
        report = opposite_outcomes_check(Direction(1.1, 4.2), singlet_state())
        assert report.passed
        assert all(
            p == pytest.approx(1 / 3, abs=1e-10)
            for p in report.opposite_probabilities
        )

    def test_direction_sweep(self):
        rng = np.random.default_rng(151)
        for _ in range(50):
            report = opposite_outcomes_check(random_direction(rng), singlet_state())
            assert report.passed


class TestRotationInvariance:
    def test_zero_angle(self):
        report = rotation_invariance_check(Direction(0.0, 0.0), 0.0, singlet_state())
        assert report.overlap_magnitude == pytest.approx(1.0, abs=1e-12)

    def test_generic_rotation(self):
        report = rotation_invariance_check(
            Direction(math.pi / 2, math.pi / 4), 2.3, singlet_state()
        )
        assert report.passed
        assert report.deviation < 1e-9

    def test_rotation_sweep(self):
        rng = np.random.default_rng(157)
        for _ in range(50):
            report = rotation_invariance_check(
                random_direction(rng), rng.uniform(0, 2 * math.pi), singlet_state()
            )
            assert report.passed

    def test_witness_breaks_invariance(self):
        report = rotation_invariance_check(Direction(0.0, 0.0), 1.0, singlet_state())
        assert report.witness_below_one
        # |<s|(V x V)|s>| = |2 + e^{2i}| / 3 for V = diag(1, e^{i}, 1)
        expected = abs(2 + np.exp(2j)) / 3
        assert report.witness_overlap == pytest.approx(expected, abs=1e-12)
