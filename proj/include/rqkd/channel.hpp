#pragma once

// Quantum channel models applied to the transmitted half of a pair, the
// eavesdropper's attack classes, and the statistics used to judge them.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rqkd/state.hpp"
#include "rqkd/transcript.hpp"

namespace rqkd {

// How Eve turns her registers into a key guess once b and l are public.
enum class EveDecode {
    none,
    // Undo U_b on the held register, measure in S, subtract l.
    unrotate_and_measure,
    // Measure the held register in the computational basis, subtract l.
    measure_computational,
};

struct EveStrategy {
    // Two-register state; the first register is sent on to Bob, the second
    // stays with Eve. Required for the substituted attack.
    std::optional<StateVector> substitute_state;
    EveDecode decode = EveDecode::unrotate_and_measure;
};

struct Ideal {};
struct Depolarizing {
    double p = 0.0;
};
struct Loss {
    double p = 0.0;
};
struct SubstitutedAttack {
    EveStrategy strategy;
};
struct PurifiedAttack {
    UnitaryOp u_e;  // acts on (B, E), B the more significant digit
    int e_dim = 2;
    EveStrategy eve_measurement;
};

using ChannelModel = std::variant<Ideal, Depolarizing, Loss, SubstitutedAttack, PurifiedAttack>;

// Throws std::invalid_argument describing the offending field.
void validate(const ChannelModel& model, int d);
std::string channel_name(const ChannelModel& model);

// Eve keeps the real half, Bob gets one half of her own |psi_{0,0}>.
SubstitutedAttack substituted_attack(int d);
// |x>_B |y>_E -> |x>_B |y + x mod d>_E.
UnitaryOp controlled_shift(int d);
// Controlled-shift coupling with a computational-basis measurement of E.
PurifiedAttack controlled_shift_attack(int d);

struct ChannelResult {
    StateVector state;
    // Registers now owned by Eve; the first one is what she decodes.
    std::vector<std::string> eve_registers;
    bool lost = false;
};

/// Sends `b_label` through `model`. Eve's registers are named with
/// `eve_prefix` so several attacked hops can coexist in one state.
ChannelResult apply_channel(const StateVector& state, const std::string& b_label, const ChannelModel& model,
                            Rng& rng, const std::string& eve_prefix = "eve");

const EveStrategy* eve_strategy(const ChannelModel& model);

// Eve's guess of one dit, or nothing when she has no decoding rule.
std::optional<int> eve_decode(const StateVector& state, const std::vector<std::string>& eve_registers,
                              EveDecode decode, const UnitaryOp& rotation, int l, int d, Rng& rng);

// Haar-random unitary: Gram-Schmidt on a complex Gaussian matrix.
UnitaryOp haar_unitary(int dim, Rng& rng);
// Haar-random pure state on the given subsystems.
StateVector haar_state(std::vector<Subsystem> subsystems, Rng& rng);

enum class PropositionStrategy {
    // Haar-random shared state, Haar-random projective measurements.
    haar,
    // Bob ignores his register and always guesses 0.
    always_zero,
};

/// Bob and Eve share |eta>_{BC}; Eve's dit s is uniform and Bob guesses it
/// with a local measurement. Returns Bob's pooled success rate over
/// n_strategies * trials_per samples.
double proposition_monte_carlo(int d, int n_strategies, int trials_per, Rng& rng,
                               PropositionStrategy strategy = PropositionStrategy::haar);

/// Fidelity between (a) Bob (x) Eve after teleporting |s> through a pair
/// rotated by U_i and attacked with u_e, Bell outcome forced to (k, l), and
/// (b) the prepare-and-measure form u_e [U_i |s + l>_B |0>_E].
double bb84_correspondence_check(const UnitaryOp& u_e, int e_dim, int s, int l, int i, int k);

struct AttackReport {
    double bob_alice_match_rate;
    double eve_alice_match_rate;
    bool detected;
};

AttackReport attack_report(const KeyResult& result, const std::vector<int>& eve_decoded_digits);

}  // namespace rqkd
