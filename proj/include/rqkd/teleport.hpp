#pragma once

// Bell-basis teleportation of a qudit, byproduct correction, and recycling
// of the sender's post-measurement pair.
//
// With the pair in |psi_{0,0}> and Bell outcome (k, l), the receiver holds
// X^l Z^-k |input>; correction_op(d, k, l) = Z^k X^-l undoes it exactly.

#include <string>

#include "rqkd/bases.hpp"
#include "rqkd/state.hpp"

namespace rqkd {

struct TeleportOutcome {
    int k;
    int l;
    double probability;
    // Collapsed (input, sender half) pair: Bell vector (k, l).
    StateVector sender_residual;
    // Every remaining register, receiver half included; uncorrected.
    StateVector receiver_state;
};

/// Bell measurement of (input_label, sender_half) inside an arbitrary joint state.
TeleportOutcome bell_measure(const StateVector& joint, const std::string& input_label,
                             const std::string& sender_half, Rng& rng);
TeleportOutcome bell_measure_forced(const StateVector& joint, const std::string& input_label,
                                    const std::string& sender_half, int k, int l);

/// Teleports a single-qudit `input` through `pair`, whose first subsystem is
/// the sender's half. Further subsystems of `pair` (the receiver half and any
/// registers entangled with it) end up in receiver_state.
TeleportOutcome teleport(const StateVector& input, const StateVector& pair, Rng& rng);
TeleportOutcome teleport_forced(const StateVector& input, const StateVector& pair, int k, int l);

UnitaryOp correction_op(int d, int k, int l);

/// Applies (I (x) X^-l Z^-k) to the residual, restoring |psi_{0,0}>.
StateVector recycle(const StateVector& sender_residual, int k, int l);

// (|000> + |111>)/sqrt 2 on the three labels, in order.
StateVector ghz_state(const std::string& c, const std::string& a, const std::string& b);
// |+> on one qubit.
StateVector plus_state(const std::string& label);

struct GhzTeleportOutcome {
    int outcome;  // 0..7 for |a>..|h>
    double probability;
    StateVector charlie_state;  // C1 C2 C collapsed onto the outcome vector
    StateVector pair_state;     // remaining registers (A, B, ...)
};

/// GHZ-basis measurement of (C1, C2, C) after joining |+>|+> with a GHZ state.
/// `flying` is the two-qubit product on C1 C2, `ghz` has C as its first subsystem.
GhzTeleportOutcome teleport_ghz(const StateVector& flying, const StateVector& ghz, Rng& rng);
GhzTeleportOutcome teleport_ghz_forced(const StateVector& flying, const StateVector& ghz, int outcome);

/// Applies the recycling Paulis for `outcome` to qubits 2 and 3 of Charlie's state.
StateVector recycle_ghz(const StateVector& charlie_state, int outcome);

}  // namespace rqkd
