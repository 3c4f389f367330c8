#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rqkd/bases.hpp"
#include "rqkd/channel.hpp"
#include "rqkd/teleport.hpp"

using namespace rqkd;

namespace {

StateVector corrected(const TeleportOutcome& out, const std::string& label) {
    const int d = out.receiver_state.dim_of(label);
    return apply_unitary(out.receiver_state, correction_op(d, out.k, out.l), {label});
}

StateVector relabel_single(const StateVector& s, const std::string& label) {
    return rename(s, s.subsystems()[0].label, label);
}

double binomial_sigma(double p, int n) { return std::sqrt(p * (1 - p) / n); }

}  // namespace

TEST(Teleport, identity_outcome_leaves_input) {
    const auto out = teleport_forced(StateVector::basis("Ain", 2, 0), maximally_entangled(2, "A", "B"), 0, 0);
    EXPECT_EQ(out.receiver_state.labels(), std::vector<std::string>{"B"});
    EXPECT_NEAR(fidelity(out.receiver_state, StateVector::basis("B", 2, 0)), 1.0, 1e-12);
    EXPECT_NEAR(out.probability, 0.25, 1e-12);
}

TEST(Teleport, rotated_pair_delivers_rotated_shifted_dit) {
    const int d = 3;
    const auto family = mub_family(d, 4);
    for (int b = 0; b < family.size(); ++b) {
        const auto& u = family.unitaries[static_cast<std::size_t>(b)];
        const auto pair = apply_unitary(maximally_entangled(d, "A", "B"), u, {"B"});
        for (int s = 0; s < d; ++s)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const auto out = teleport_forced(StateVector::basis("Ain", d, s), pair, k, l);
                    const auto want = apply_unitary(StateVector::basis("B", d, (s + l) % d), u, {"B"});
                    EXPECT_NEAR(fidelity(out.receiver_state, want), 1.0, 1e-9);
                }
    }
}

// Oracle: the receiver's unnormalized amplitude for outcome (k, l) written out
// as (1/d) sum_s a_s w^{-sk} |s + l>, independent of the engine's projection.
TEST(Teleport, qubit_projection_matches_direct_computation) {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto input = haar_state({{"Ain", 2}}, rng);
        const auto& a = input.amplitudes();
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                std::vector<Amplitude> direct(2);
                for (int s = 0; s < 2; ++s) direct[static_cast<std::size_t>((s + l) % 2)] += 0.5 * a[static_cast<std::size_t>(s)] * (k * s % 2 ? -1.0 : 1.0);
                double p = 0.0;
                for (auto v : direct) p += std::norm(v);
                for (auto& v : direct) v /= std::sqrt(p);
                const auto out = teleport_forced(input, maximally_entangled(2, "A", "B"), k, l);
                EXPECT_NEAR(out.probability, p, 1e-12);
                EXPECT_NEAR(p, 0.25, 1e-12);
                EXPECT_NEAR(fidelity(out.receiver_state, StateVector::single("B", direct)), 1.0, 1e-12);
                EXPECT_NEAR(fidelity(corrected(out, "B"), relabel_single(input, "B")), 1.0, 1e-9);
            }
    }
}

TEST(Teleport, dimension_mismatch_rejected) {
    EXPECT_THROW(teleport_forced(StateVector::basis("Ain", 3, 0), maximally_entangled(2, "A", "B"), 0, 0), std::invalid_argument);
    EXPECT_THROW(teleport_forced(StateVector::basis("Ain", 2, 0), maximally_entangled(2, "A", "B"), 2, 0), std::invalid_argument);
}

TEST(Correction, identity_and_qubit_zx) {
    const auto id = correction_op(3, 0, 0);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(id(r, c) - (r == c ? 1.0 : 0.0)), 0.0, 1e-15);
    const auto zx = pauli_matrix(2, 1, 0) * pauli_matrix(2, 0, 1);
    const auto got = correction_op(2, 1, 1);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) EXPECT_NEAR(std::abs(got(r, c) - zx(r, c)), 0.0, 1e-15);
}

TEST(Correction, qutrit_all_outcomes_round_trip) {
    Rng rng(3);
    const auto input = haar_state({{"Ain", 3}}, rng);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
            const auto out = teleport_forced(input, maximally_entangled(3, "A", "B"), k, l);
            EXPECT_NEAR(fidelity(corrected(out, "B"), relabel_single(input, "B")), 1.0, 1e-9);
        }
}

TEST(Recycle, restores_standard_pair) {
    EXPECT_NEAR(fidelity(recycle(bell_basis(2).state(0, 0, "Ain", "A"), 0, 0), maximally_entangled(2, "Ain", "A")), 1.0, 1e-12);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const auto out = teleport_forced(StateVector::basis("Ain", 2, 1), maximally_entangled(2, "A", "B"), k, l);
            EXPECT_NEAR(fidelity(recycle(out.sender_residual, k, l), maximally_entangled(2, "Ain", "A")), 1.0, 1e-12);
        }
    Rng rng(5);
    const auto out = teleport(haar_state({{"Ain", 5}}, rng), maximally_entangled(5, "A", "B"), rng);
    EXPECT_NEAR(fidelity(recycle(out.sender_residual, out.k, out.l), maximally_entangled(5, "Ain", "A")), 1.0, 1e-9);
}

// ---------------------------------------------------------------------------
// GHZ-basis teleportation

namespace {

// Oracle: AB state left by S' outcome o, from explicit overlaps with the
// 32-amplitude |+>|+>|GHZ> vector. Returns +1 for Phi+, -1 for Phi-.
int eq1_sign(int o) {
    const int kets[8][2] = {{0b000, 0b111}, {0b001, 0b110}, {0b000, 0b111}, {0b001, 0b110},
                            {0b010, 0b101}, {0b011, 0b100}, {0b100, 0b011}, {0b101, 0b010}};
    const double signs[8] = {1, 1, -1, -1, 1, 1, -1, -1};
    double ab[4] = {0, 0, 0, 0};
    for (int a = 0; a < 4; ++a) {
        for (int t = 0; t < 2; ++t) {
            const int c = kets[o][t] & 1;
            const int abit = a >> 1, bbit = a & 1;
            const double amp = (c == abit && abit == bbit) ? 0.5 / std::numbers::sqrt2 : 0.0;
            ab[a] += (t ? signs[o] : 1.0) * amp / std::numbers::sqrt2;
        }
    }
    EXPECT_NEAR(ab[1], 0.0, 1e-15);
    EXPECT_NEAR(ab[2], 0.0, 1e-15);
    EXPECT_NEAR(std::abs(ab[0]), std::abs(ab[3]), 1e-15);
    return ab[0] * ab[3] > 0 ? 1 : -1;
}

StateVector phi(int sign) {
    const double s = 1.0 / std::numbers::sqrt2;
    return StateVector({{"A", 2}, {"B", 2}}, {s, 0, 0, sign * s});
}

const StateVector kFlying = tensor({plus_state("C1"), plus_state("C2")});

}  // namespace

TEST(TeleportGhz, outcome_a_gives_phi_plus) {
    const auto out = teleport_ghz_forced(kFlying, ghz_state("C", "A", "B"), 0);
    EXPECT_NEAR(fidelity(out.pair_state, phi(+1)), 1.0, 1e-12);
    EXPECT_NEAR(out.probability, 0.125, 1e-12);
}

TEST(TeleportGhz, outcome_d_gives_phi_minus) {
    const auto out = teleport_ghz_forced(kFlying, ghz_state("C", "A", "B"), 3);
    EXPECT_NEAR(fidelity(out.pair_state, phi(-1)), 1.0, 1e-12);
}

TEST(TeleportGhz, all_outcomes_match_bracket_structure) {
    for (int o = 0; o < 8; ++o) {
        const int sign = eq1_sign(o);
        EXPECT_EQ(sign > 0, ghz_outcome_is_phi_plus(o)) << kGhzOutcomeNames[static_cast<std::size_t>(o)];
        const auto out = teleport_ghz_forced(kFlying, ghz_state("C", "A", "B"), o);
        EXPECT_NEAR(out.probability, 0.125, 1e-9);
        EXPECT_NEAR(fidelity(out.pair_state, phi(sign)), 1.0, 1e-9);
        EXPECT_NEAR(fidelity(recycle_ghz(out.charlie_state, o), ghz_state("C1", "C2", "C")), 1.0, 1e-12);
    }
}

TEST(TeleportGhz, sampled_outcomes_uniform) {
    Rng rng(8000);
    std::vector<int> counts(8, 0);
    const int trials = 8000;
    for (int i = 0; i < trials; ++i) ++counts[static_cast<std::size_t>(teleport_ghz(kFlying, ghz_state("C", "A", "B"), rng).outcome)];
    for (int c : counts) EXPECT_LE(std::abs(c / double(trials) - 0.125), 5 * binomial_sigma(0.125, trials));
}

TEST(TeleportGhz, wrong_dimensions_rejected) {
    EXPECT_THROW(teleport_ghz_forced(tensor({StateVector::basis("C1", 3, 0), plus_state("C2")}), ghz_state("C", "A", "B"), 0),
                 std::invalid_argument);
    EXPECT_THROW(teleport_ghz_forced(kFlying, maximally_entangled(2, "C", "A"), 0), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Properties

TEST(TeleportProperties, round_trip_all_outcomes) {
    Rng rng(2718);
    for (int d : {2, 3, 5}) {
        for (int trial = 0; trial < 50; ++trial) {
            const auto input = haar_state({{"Ain", d}}, rng);
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const auto out = teleport_forced(input, maximally_entangled(d, "A", "B"), k, l);
                    ASSERT_GE(fidelity(corrected(out, "B"), relabel_single(input, "B")), 1.0 - 1e-9);
                    ASSERT_GE(fidelity(out.sender_residual, bell_basis(d).state(k, l, "Ain", "A")), 1.0 - 1e-9);
                }
        }
    }
}

TEST(TeleportProperties, outcomes_uniform) {
    Rng rng(31415);
    const int d = 3, trials = 10000;
    std::vector<int> counts(9, 0);
    for (int i = 0; i < trials; ++i) {
        const auto input = haar_state({{"Ain", d}}, rng);
        const auto out = teleport(input, maximally_entangled(d, "A", "B"), rng);
        ++counts[static_cast<std::size_t>(out.k * d + out.l)];
    }
    for (int c : counts) EXPECT_LE(std::abs(c / double(trials) - 1.0 / 9), 5 * binomial_sigma(1.0 / 9, trials));
}

TEST(TeleportProperties, rotated_pair_commutes_with_correction) {
    Rng rng(99);
    for (int d : {2, 3, 5}) {
        const auto family = mub_family(d, 3);
        for (int trial = 0; trial < 10; ++trial) {
            const auto& u = family.unitaries[rng.uniform_int(3)];
            const auto input = haar_state({{"Ain", d}}, rng);
            const auto pair = apply_unitary(maximally_entangled(d, "A", "B"), u, {"B"});
            const auto out = teleport(input, pair, rng);
            auto st = apply_unitary(out.receiver_state, u.adjoint(), {"B"});
            st = apply_unitary(st, correction_op(d, out.k, out.l), {"B"});
            EXPECT_NEAR(fidelity(st, relabel_single(input, "B")), 1.0, 1e-9);
        }
    }
}
