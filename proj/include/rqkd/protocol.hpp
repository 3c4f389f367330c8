#pragma once

// Session state machines: the two-party teleportation protocol, its
// pre-measurement check variant, the GHZ-based third-party variant and the
// multi-hop chain.
//
// Every session draws its randomness from child streams of config.seed
// ("basis-choice", "dits", "quantum", "channel", ...), so two modes run with
// the same seed see the same secret dits and basis choices.

#include <cstdint>
#include <vector>

#include "rqkd/channel.hpp"
#include "rqkd/transcript.hpp"

namespace rqkd {

enum class CheckMode { final_digits, pre_measurement };

struct SessionConfig {
    int d = 2;
    int m = 2;
    int n = 16;  // key length in dits; 2n pairs are distributed
    double abort_threshold = 0.05;
    CheckMode check_mode = CheckMode::final_digits;
    std::uint64_t seed = 0;
    ChannelModel channel = Ideal{};
};

struct ChainConfig {
    SessionConfig base;
    int hops = 1;
    std::vector<ChannelModel> per_hop_channel;
};

void validate(const SessionConfig& config);
void validate(const ChainConfig& config);

// Chain whose every hop uses base.channel.
ChainConfig uniform_chain(const SessionConfig& base, int hops);

/// Steps: agree on a MUB family, distribute 2n rotated pairs, teleport random
/// dits, publish l and b, Bob unrotates and decodes, then n random positions
/// are compared and the remaining n form the raw key.
KeyResult run_two_party(const SessionConfig& config);

/// Checks n of the 2n pairs directly by local measurements before any
/// teleportation; only the n surviving pairs carry key dits.
KeyResult run_pre_check(const SessionConfig& config);

// Dispatches on config.check_mode.
KeyResult run_session(const SessionConfig& config);

/// Qubit-only. Charlie distributes GHZ states, turns them into Alice-Bob Bell
/// pairs by teleporting |+>|+> in the GHZ basis, and recycles his side.
/// In trusted mode he additionally masks the A and B halves with H or I and
/// reveals the masks after delivery.
KeyResult run_third_party(const SessionConfig& config, bool trusted);

/// Alice teleports U_b|s> hop by hop through unrotated pairs; every sending
/// party publishes k and l, Bob undoes all byproducts in reverse hop order,
/// then U_b, and reads s directly.
KeyResult run_chain(const ChainConfig& config);

}  // namespace rqkd
