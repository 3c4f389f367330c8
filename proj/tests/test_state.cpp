#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rqkd/bases.hpp"
#include "rqkd/channel.hpp"
#include "rqkd/state.hpp"
#include "rqkd/teleport.hpp"

using namespace rqkd;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void expect_amplitudes(const StateVector& s, const std::vector<Amplitude>& want) {
    ASSERT_EQ(s.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(s.amplitudes()[i].real(), want[i].real(), 1e-12) << "index " << i;
        EXPECT_NEAR(s.amplitudes()[i].imag(), want[i].imag(), 1e-12) << "index " << i;
    }
}

}  // namespace

TEST(Tensor, basis_product) {
    const auto s = tensor({StateVector::basis("A", 2, 0), StateVector::basis("B", 2, 0)});
    EXPECT_EQ(s.labels(), (std::vector<std::string>{"A", "B"}));
    expect_amplitudes(s, {1, 0, 0, 0});
}

TEST(Tensor, bell_pair_with_ancilla) {
    const auto s = tensor({maximally_entangled(2, "A", "B"), StateVector::basis("C", 2, 0)});
    expect_amplitudes(s, {kInvSqrt2, 0, 0, 0, 0, 0, kInvSqrt2, 0});
}

TEST(Tensor, plus_plus_ghz_has_32_amplitudes) {
    const auto s = tensor({plus_state("C1"), plus_state("C2"), ghz_state("C", "A", "B")});
    ASSERT_EQ(s.size(), 32u);
    // |+>|+>(|000> + |111>)/sqrt2: amplitude 1/(2 sqrt 2) wherever C = A = B.
    for (std::size_t i = 0; i < 32; ++i) {
        const int c = (i >> 2) & 1, a = (i >> 1) & 1, b = i & 1;
        const double want = (c == a && a == b) ? 0.5 * kInvSqrt2 : 0.0;
        EXPECT_NEAR(s.amplitudes()[i].real(), want, 1e-12);
    }
}

TEST(Tensor, duplicate_label_rejected) {
    EXPECT_THROW(tensor({StateVector::basis("A", 2, 0), StateVector::basis("A", 2, 1)}), std::invalid_argument);
}

TEST(StateVector, rejects_bad_input) {
    EXPECT_THROW(StateVector({{"A", 2}}, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(StateVector({{"A", 2}}, {1.0}), std::invalid_argument);
    EXPECT_THROW(StateVector({{"A", 2}}, {Amplitude(NAN, 0), 0.0}), std::invalid_argument);
    EXPECT_THROW(StateVector({{"A", 2}, {"A", 2}}, {1.0, 0, 0, 0}), std::invalid_argument);
    EXPECT_THROW(StateVector::basis("A", 2, 2), std::invalid_argument);
}

TEST(StateVector, amplitude_cap) {
    std::vector<StateVector> parts;
    for (int i = 0; i < 17; ++i) parts.push_back(StateVector::basis("q" + std::to_string(i), 2, 0));
    EXPECT_THROW(tensor(parts), std::length_error);
}

TEST(UnitaryOp, rejects_non_unitary) {
    EXPECT_THROW(UnitaryOp(2, {1.0, 1.0, 0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(UnitaryOp(2, {1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(ApplyUnitary, identity_is_noop) {
    Rng rng(3);
    const auto s = haar_state({{"A", 3}, {"B", 2}}, rng);
    const auto out = apply_unitary(s, UnitaryOp::identity(3), {"A"});
    expect_amplitudes(out, s.amplitudes());
}

TEST(ApplyUnitary, bit_flip_on_bell_pair) {
    const auto out = apply_unitary(maximally_entangled(2, "A", "B"), pauli_matrix(2, 0, 1), {"B"});
    expect_amplitudes(out, {0, kInvSqrt2, kInvSqrt2, 0});
}

TEST(ApplyUnitary, ghz_a_to_g) {
    // (I (x) ZX (x) X)|a> = (|100> - |011>)/sqrt2
    auto s = ghz_state("q1", "q2", "q3");
    s = apply_unitary(s, pauli_matrix(2, 1, 1), {"q2"});
    s = apply_unitary(s, pauli_matrix(2, 0, 1), {"q3"});
    expect_amplitudes(s, {0, 0, 0, -kInvSqrt2, kInvSqrt2, 0, 0, 0});
}

TEST(ApplyUnitary, target_order_follows_operator_index) {
    // CNOT with control listed first; swapping the target list swaps roles.
    const auto cnot = controlled_shift(2);
    const auto s = tensor({StateVector::basis("A", 2, 1), StateVector::basis("B", 2, 0)});
    expect_amplitudes(apply_unitary(s, cnot, {"A", "B"}), {0, 0, 0, 1});
    expect_amplitudes(apply_unitary(s, cnot, {"B", "A"}), {0, 0, 1, 0});
}

TEST(ApplyUnitary, errors) {
    const auto s = maximally_entangled(2, "A", "B");
    EXPECT_THROW(apply_unitary(s, UnitaryOp::identity(3), {"A"}), std::invalid_argument);
    EXPECT_THROW(apply_unitary(s, UnitaryOp::identity(2), {"Z"}), std::invalid_argument);
}

TEST(Measure, eigenstate) {
    Rng rng(1);
    const auto r = measure(StateVector::basis("A", 3, 0), {"A"}, MeasurementBasis::computational(3), rng);
    EXPECT_EQ(r.outcome, 0);
    EXPECT_NEAR(r.probability, 1.0, 1e-12);
}

// Born-rule oracle written directly from the amplitude formula of
// |phi>_{A'} (x) |psi_00>_{AB} and the Bell vector definition.
TEST(Measure, bell_measurement_probabilities_match_direct_born_rule) {
    for (int d : {2, 3}) {
        Rng rng(17 + d);
        const auto phi = haar_state({{"Ain", d}}, rng);
        const auto joint = tensor({phi, maximally_entangled(d, "A", "B")});
        const std::string targets[] = {"Ain", "A"};
        const auto probs = outcome_probabilities(joint, targets, bell_basis(d).basis());
        const double pi2 = 2.0 * std::numbers::pi;
        double total = 0.0;
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                double p = 0.0;
                for (int b = 0; b < d; ++b) {
                    Amplitude acc = 0.0;
                    for (int j = 0; j < d; ++j) {
                        // bell(k,l) has amplitude w^{jk}/sqrt d at (j, j+l); state amplitude at (s=j, a=(j+l), b) is phi_j delta_{a b}/sqrt d
                        const int a = (j + l) % d;
                        if (a != b) continue;
                        const Amplitude bell = std::polar(1.0 / std::sqrt(d), pi2 * j * k / d);
                        acc += std::conj(bell) * phi.amplitudes()[static_cast<std::size_t>(j)] / std::sqrt(static_cast<double>(d));
                    }
                    p += std::norm(acc);
                }
                EXPECT_NEAR(probs[static_cast<std::size_t>(k * d + l)], p, 1e-12);
                EXPECT_NEAR(p, 1.0 / (d * d), 1e-12);
                total += p;
            }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Measure, ghz_basis_outcomes_uniform) {
    // Oracle: explicit inner products of each written-out S' ket with the
    // 32-amplitude |+>|+>|GHZ> vector, summed over the AB register.
    const int kets[8][2] = {{0b000, 0b111}, {0b001, 0b110}, {0b000, 0b111}, {0b001, 0b110},
                            {0b010, 0b101}, {0b011, 0b100}, {0b100, 0b011}, {0b101, 0b010}};
    const double signs[8] = {1, 1, -1, -1, 1, 1, -1, -1};
    auto joint_amplitude = [](int c1c2c, int ab) {
        const int c = c1c2c & 1, a = ab >> 1, b = ab & 1;
        return (c == a && a == b) ? 0.5 * kInvSqrt2 : 0.0;
    };
    const auto joint = tensor({plus_state("C1"), plus_state("C2"), ghz_state("C", "A", "B")});
    const std::string targets[] = {"C1", "C2", "C"};
    const auto probs = outcome_probabilities(joint, targets, ghz_basis());
    for (int o = 0; o < 8; ++o) {
        double p = 0.0;
        for (int ab = 0; ab < 4; ++ab) {
            const double v = kInvSqrt2 * (joint_amplitude(kets[o][0], ab) + signs[o] * joint_amplitude(kets[o][1], ab));
            p += v * v;
        }
        EXPECT_NEAR(p, 0.125, 1e-12);
        EXPECT_NEAR(probs[static_cast<std::size_t>(o)], p, 1e-12);
    }
}

TEST(MeasureForced, eigenstate_and_bell_branch) {
    const auto r = measure_forced(StateVector::basis("A", 2, 0), {"A"}, MeasurementBasis::computational(2), 0);
    EXPECT_NEAR(r.probability, 1.0, 1e-12);
    const auto joint = tensor({StateVector::basis("Ain", 2, 0), maximally_entangled(2, "A", "B")});
    const auto f = measure_forced(joint, {"Ain", "A"}, bell_basis(2).basis(), BellBasis::index(2, 1, 0));
    EXPECT_NEAR(f.probability, 0.25, 1e-12);
}

TEST(MeasureForced, impossible_outcome_rejected) {
    EXPECT_THROW(measure_forced(StateVector::basis("A", 2, 0), {"A"}, MeasurementBasis::computational(2), 1), std::domain_error);
}

TEST(MeasureForced, keeps_targets_collapsed) {
    const auto r = measure_forced(maximally_entangled(3, "A", "B"), {"A"}, MeasurementBasis::computational(3), 2);
    EXPECT_NEAR(r.probability, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(fidelity(r.post_state, tensor({StateVector::basis("A", 3, 2), StateVector::basis("B", 3, 2)})), 1.0, 1e-12);
}

TEST(Fidelity, basic_values) {
    const auto zero = StateVector::basis("A", 2, 0);
    EXPECT_NEAR(fidelity(zero, zero), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(zero, StateVector::basis("A", 2, 1)), 0.0, 1e-12);
    EXPECT_NEAR(fidelity(zero, plus_state("A")), 0.5, 1e-12);
    const auto phased = StateVector::single("A", {Amplitude(0, 1), 0.0});
    EXPECT_NEAR(fidelity(zero, phased), 1.0, 1e-12);
    EXPECT_THROW(fidelity(zero, StateVector::basis("B", 2, 0)), std::invalid_argument);
}

TEST(ProjectOut, drops_product_factor) {
    const auto joint = tensor({StateVector::basis("A", 2, 1), plus_state("B")});
    const std::string target[] = {"A"};
    const std::vector<Amplitude> one{0.0, 1.0};
    const auto r = project_out(joint, target, one);
    EXPECT_NEAR(r.probability, 1.0, 1e-12);
    EXPECT_NEAR(fidelity(r.post_state, plus_state("B")), 1.0, 1e-12);
}

TEST(Reorder, permutes_digits) {
    const auto s = tensor({StateVector::basis("A", 2, 1), StateVector::basis("B", 3, 2)});
    const std::string order[] = {"B", "A"};
    const auto r = reorder(s, order);
    EXPECT_EQ(r.labels(), (std::vector<std::string>{"B", "A"}));
    EXPECT_NEAR(std::abs(r.amplitudes()[2 * 2 + 1]), 1.0, 1e-12);
}

// ---------------------------------------------------------------------------
// Properties

TEST(StateProperties, norm_preserved_by_random_unitaries) {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const int d1 = 2 + static_cast<int>(rng.uniform_int(3));
        const int d2 = 2 + static_cast<int>(rng.uniform_int(3));
        auto s = haar_state({{"A", d1}, {"B", d2}, {"C", 2}}, rng);
        const bool two = rng.uniform_int(2) == 1;
        if (two) s = apply_unitary(s, haar_unitary(d2 * 2, rng), {"B", "C"});
        else s = apply_unitary(s, haar_unitary(d1, rng), {"A"});
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-9);
    }
}

TEST(StateProperties, born_probabilities_sum_to_one) {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform_int(4));
        const auto s = haar_state({{"A", d}, {"B", d}, {"C", 2}}, rng);
        const auto basis = MeasurementBasis::from_unitary(haar_unitary(d * 2, rng));
        const std::string targets[] = {"B", "C"};
        double total = 0.0;
        for (double p : outcome_probabilities(s, targets, basis)) total += p;
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(StateProperties, sampling_is_deterministic_per_seed) {
    auto run = [](std::uint64_t seed) {
        Rng rng(seed);
        std::vector<int> outcomes;
        const auto s = maximally_entangled(5, "A", "B");
        for (int i = 0; i < 50; ++i) outcomes.push_back(measure(s, {"A"}, fourier_basis(5), rng).outcome);
        return outcomes;
    };
    EXPECT_EQ(run(99), run(99));
    EXPECT_NE(run(99), run(100));
}

TEST(StateProperties, permuted_targets_give_same_probabilities) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = haar_state({{"A", 2}, {"B", 3}, {"C", 2}}, rng);
        const auto u = haar_unitary(6, rng);
        const auto basis = MeasurementBasis::from_unitary(u);
        // The same vectors re-indexed for target order (C, B): index c*3 + b.
        std::vector<std::vector<Amplitude>> swapped;
        for (const auto& v : basis.vectors()) {
            std::vector<Amplitude> w(6);
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 2; ++c) w[static_cast<std::size_t>(c * 3 + b)] = v[static_cast<std::size_t>(b * 2 + c)];
            swapped.push_back(w);
        }
        const std::string bc[] = {"B", "C"};
        const std::string cb[] = {"C", "B"};
        const auto p1 = outcome_probabilities(s, bc, basis);
        const auto p2 = outcome_probabilities(s, cb, MeasurementBasis(6, swapped));
        for (std::size_t i = 0; i < p1.size(); ++i) EXPECT_NEAR(p1[i], p2[i], 1e-12);
    }
}

TEST(Rng, child_streams_are_independent_and_stable) {
    Rng master(42);
    auto a = master.child("x");
    auto b = master.child("x");
    auto c = master.child("y");
    EXPECT_EQ(a.next_u64(), b.next_u64());
    EXPECT_NE(a.next_u64(), c.next_u64());
    EXPECT_EQ(master.counter(), 0u);
    // Frozen first output of seed 0; guards against silent generator changes.
    EXPECT_EQ(Rng(0).next_u64(), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, uniform_int_covers_range) {
    Rng rng(8);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 7000; ++i) ++counts[rng.uniform_int(7)];
    for (int c : counts) EXPECT_NEAR(c, 1000, 5 * std::sqrt(7000 * (1.0 / 7) * (6.0 / 7)));
}
