#include "rqkd/protocol.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rqkd/bases.hpp"
#include "rqkd/teleport.hpp"

namespace rqkd {

namespace {

using MK = MessageKind;

int mod(int x, int d) { return ((x % d) + d) % d; }

struct Streams {
    Rng basis, dits, quantum, channel, check, check_basis, eve, mask;

    explicit Streams(std::uint64_t seed)
        : basis(Rng(seed).child("basis-choice")),
          dits(Rng(seed).child("dits")),
          quantum(Rng(seed).child("quantum")),
          channel(Rng(seed).child("channel")),
          check(Rng(seed).child("check-positions")),
          check_basis(Rng(seed).child("check-bases")),
          eve(Rng(seed).child("eve")),
          mask(Rng(seed).child("mask")) {}
};

struct HeldPair {
    StateVector state;
    std::vector<std::string> eve_registers;
};

std::vector<int> draw(Rng& rng, int count, int range) {
    std::vector<int> out(static_cast<std::size_t>(count));
    for (auto& v : out) v = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(range)));
    return out;
}

// Uniform `count`-subset of [0, total), sorted.
std::vector<int> choose_subset(Rng& rng, int total, int count) {
    std::vector<int> all(static_cast<std::size_t>(total));
    std::iota(all.begin(), all.end(), 0);
    for (int i = 0; i < count; ++i) {
        const auto j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(total - i)));
        std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
    }
    all.resize(static_cast<std::size_t>(count));
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<int> complement(int total, const std::vector<int>& subset) {
    std::vector<int> out;
    std::size_t next = 0;
    for (int i = 0; i < total; ++i) {
        if (next < subset.size() && subset[next] == i) {
            ++next;
            continue;
        }
        out.push_back(i);
    }
    return out;
}

std::vector<int> pick(const std::vector<int>& values, const std::vector<int>& positions) {
    std::vector<int> out;
    out.reserve(positions.size());
    for (int p : positions) out.push_back(values[static_cast<std::size_t>(p)]);
    return out;
}

KeyResult new_result(const SessionConfig& config) {
    KeyResult r;
    r.d = config.d;
    r.abort_threshold = config.abort_threshold;
    return r;
}

void record_recycle(KeyResult& result, double fid) {
    result.min_recycle_fidelity = std::min(result.min_recycle_fidelity, fid);
    if (fid >= 1.0 - kTolerance) ++result.recycled_pairs;
}

void recycle_residual(KeyResult& result, const TeleportOutcome& out) {
    const auto labels = out.sender_residual.labels();
    const auto standard = maximally_entangled(out.sender_residual.subsystems()[0].dim, labels[0], labels[1]);
    record_recycle(result, fidelity(recycle(out.sender_residual, out.k, out.l), standard));
}

/// Prepares `count` pairs and sends `b_label` of each through the channel.
/// Lost pairs are announced and replaced by fresh ones.
std::vector<HeldPair> distribute(int count, const std::function<StateVector(int)>& prepare,
                                 const std::string& b_label, const ChannelModel& channel, Rng& rng,
                                 KeyResult& result, const std::string& sender, const std::string& receiver,
                                 const std::string& eve_prefix) {
    std::vector<HeldPair> held;
    held.reserve(static_cast<std::size_t>(count));
    for (int r = 0; r < count; ++r) {
        for (;;) {
            auto sent = apply_channel(prepare(r), b_label, channel, rng, eve_prefix);
            if (sent.lost) {
                result.transcript.append(receiver, sender, MK::pair_lost, {r});
                result.transcript.append(sender, receiver, MK::pair_retransmitted, {r});
                ++result.retransmissions;
                continue;
            }
            held.push_back({std::move(sent.state), std::move(sent.eve_registers)});
            break;
        }
    }
    return held;
}

// Final-digit check: Alice picks n of the 2n positions, both sides publish
// their values there, and the remaining positions become the raw key.
void final_digit_check(const std::vector<int>& alice_digits, const std::vector<int>& bob_digits,
                       const std::vector<int>& eve_digits, int n, Streams& rng, KeyResult& result) {
    auto& tr = result.transcript;
    const int total = static_cast<int>(alice_digits.size());
    tr.append("alice", "all", MK::check_positions, choose_subset(rng.check, total, n));
    const auto& positions = tr.read(MK::check_positions, "alice");
    tr.append("alice", "all", MK::check_values, pick(alice_digits, positions));
    tr.append("bob", "all", MK::check_values, pick(bob_digits, positions));

    const auto& a = tr.read(MK::check_values, "alice");
    const auto& b = tr.read(MK::check_values, "bob");
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < a.size(); ++i) mismatches += a[i] != b[i] ? 1 : 0;
    result.checked = a.size();
    result.observed_error_rate = static_cast<double>(mismatches) / static_cast<double>(a.size());
    result.aborted = result.observed_error_rate > result.abort_threshold;
    tr.append("alice", "all", result.aborted ? MK::abort : MK::proceed);

    const auto key_positions = complement(total, positions);
    result.alice_key = pick(alice_digits, key_positions);
    result.bob_key = pick(bob_digits, key_positions);
    if (!eve_digits.empty()) result.eve_key = pick(eve_digits, key_positions);
}

// For every basis c and Alice outcome j on the ideal shared state, Bob's
// deterministic outcome when he measures in the conjugate basis.
std::vector<std::vector<int>> expected_check_outcomes(const StateVector& ideal, const std::vector<MeasurementBasis>& bases) {
    std::vector<std::vector<int>> table;
    for (const auto& basis : bases) {
        std::vector<int> row;
        const auto bob_basis = basis.conjugate();
        for (int j = 0; j < basis.dim(); ++j) {
            const auto after = measure_forced(ideal, {"A"}, basis, j);
            const std::string target[] = {"B"};
            const auto probs = outcome_probabilities(after.post_state, target, bob_basis);
            const auto best = std::max_element(probs.begin(), probs.end());
            if (*best < 1.0 - kTolerance) throw std::logic_error("check basis gives no deterministic correlation");
            row.push_back(static_cast<int>(best - probs.begin()));
        }
        table.push_back(std::move(row));
    }
    return table;
}

/// Local-measurement check of `n` random pairs. `bob_prepare` maps Bob's
/// state to the ideal frame (undoing any rotation) before he measures.
/// Measured pairs are consumed. Returns the positions left for key use.
std::vector<int> measurement_check(std::vector<HeldPair>& held, int n, const MubFamily& family,
                                   const StateVector& ideal, const std::function<StateVector(const StateVector&, int)>& bob_prepare,
                                   Streams& rng, KeyResult& result, const std::function<void()>& before_bob) {
    auto& tr = result.transcript;
    const int total = static_cast<int>(held.size());
    const auto expected = expected_check_outcomes(ideal, family.bases);

    const auto positions = choose_subset(rng.check, total, n);
    const auto bases = draw(rng.check_basis, n, family.size());
    std::vector<int> alice_values;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        auto& pair = held[static_cast<std::size_t>(positions[i])];
        const auto r = measure(pair.state, {"A"}, family.bases[static_cast<std::size_t>(bases[i])], rng.quantum);
        alice_values.push_back(r.outcome);
        pair.state = r.post_state;
    }
    tr.append("alice", "all", MK::check_positions, positions);
    tr.append("alice", "all", MK::check_bases, bases);
    before_bob();
    tr.append("alice", "all", MK::check_values, alice_values);

    const auto& pub_positions = tr.read(MK::check_positions, "alice");
    const auto& pub_bases = tr.read(MK::check_bases, "alice");
    std::vector<int> bob_values;
    for (std::size_t i = 0; i < pub_positions.size(); ++i) {
        const int r = pub_positions[i];
        const auto st = bob_prepare(held[static_cast<std::size_t>(r)].state, static_cast<int>(i));
        const auto& basis = family.bases[static_cast<std::size_t>(pub_bases[i])];
        bob_values.push_back(measure(st, {"B"}, basis.conjugate(), rng.quantum).outcome);
    }
    tr.append("bob", "all", MK::check_values, bob_values);

    const auto& pub_alice = tr.read(MK::check_values, "alice");
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < pub_alice.size(); ++i) {
        const int want = expected[static_cast<std::size_t>(pub_bases[i])][static_cast<std::size_t>(pub_alice[i])];
        mismatches += bob_values[i] != want ? 1 : 0;
    }
    result.checked = pub_alice.size();
    result.observed_error_rate = static_cast<double>(mismatches) / static_cast<double>(pub_alice.size());
    result.aborted = result.observed_error_rate > result.abort_threshold;
    tr.append("bob", "all", result.aborted ? MK::abort : MK::proceed);
    return complement(total, positions);
}

std::string party_name(int index, int last) {
    if (index == 0) return "alice";
    if (index == last) return "bob";
    return "e" + std::to_string(index);
}

}  // namespace

// ---------------------------------------------------------------------------

void validate(const SessionConfig& config) {
    if (!is_prime(config.d)) throw std::invalid_argument("d must be prime, got " + std::to_string(config.d));
    if (config.m < 2 || config.m > max_mub_count(config.d)) {
        throw std::invalid_argument("m must lie in [2, " + std::to_string(max_mub_count(config.d)) + "]");
    }
    if (config.n < 1) throw std::invalid_argument("n must be at least 1");
    if (!(config.abort_threshold >= 0.0 && config.abort_threshold <= 1.0)) {
        throw std::invalid_argument("abort_threshold must lie in [0, 1]");
    }
    validate(config.channel, config.d);
}

void validate(const ChainConfig& config) {
    validate(config.base);
    if (config.hops < 1) throw std::invalid_argument("hops must be at least 1");
    if (config.per_hop_channel.size() != static_cast<std::size_t>(config.hops)) {
        throw std::invalid_argument("per_hop_channel must list one channel per hop");
    }
    for (const auto& c : config.per_hop_channel) validate(c, config.base.d);
}

ChainConfig uniform_chain(const SessionConfig& base, int hops) {
    return {base, hops, std::vector<ChannelModel>(static_cast<std::size_t>(std::max(hops, 0)), base.channel)};
}

KeyResult run_session(const SessionConfig& config) {
    return config.check_mode == CheckMode::final_digits ? run_two_party(config) : run_pre_check(config);
}

KeyResult run_two_party(const SessionConfig& config) {
    validate(config);
    const int d = config.d;
    const int pairs = 2 * config.n;
    const auto family = mub_family(d, config.m);
    const auto& computational = family.bases[0];
    Streams rng(config.seed);
    KeyResult result = new_result(config);
    auto& tr = result.transcript;

    // Rotated pairs (I (x) U_b)|psi_00>; Bob's halves go through the channel.
    const auto b = draw(rng.basis, pairs, config.m);
    auto held = distribute(
        pairs,
        [&](int r) { return apply_unitary(maximally_entangled(d, "A", "B"), family.unitaries[static_cast<std::size_t>(b[r])], {"B"}); },
        "B", config.channel, rng.channel, result, "alice", "bob", "eve");
    tr.append("bob", "alice", MK::ack_received, {pairs});

    // Alice teleports random dits and keeps her residual pairs.
    const auto s = draw(rng.dits, pairs, d);
    std::vector<int> l(static_cast<std::size_t>(pairs));
    std::vector<StateVector> bob_side;
    bob_side.reserve(static_cast<std::size_t>(pairs));
    for (int r = 0; r < pairs; ++r) {
        const auto idx = static_cast<std::size_t>(r);
        const auto out = teleport(StateVector::basis("Ain", d, s[idx]), held[idx].state, rng.quantum);
        l[idx] = out.l;
        recycle_residual(result, out);
        bob_side.push_back(out.receiver_state);
    }
    tr.append("alice", "all", MK::publish_l, l);
    tr.append("alice", "all", MK::publish_b, b);

    // Bob works only from the published strings.
    const auto& pub_l = tr.read(MK::publish_l, "alice");
    const auto& pub_b = tr.read(MK::publish_b, "alice");
    const EveStrategy* eve = eve_strategy(config.channel);
    std::vector<int> bob(static_cast<std::size_t>(pairs));
    std::vector<int> eve_digits;
    for (int r = 0; r < pairs; ++r) {
        const auto idx = static_cast<std::size_t>(r);
        const auto& rotation = family.unitaries[static_cast<std::size_t>(pub_b[idx])];
        const auto st = apply_unitary(bob_side[idx], rotation.adjoint(), {"B"});
        const auto measured = measure(st, {"B"}, computational, rng.quantum);
        bob[idx] = mod(measured.outcome - pub_l[idx], d);
        if (eve) {
            if (auto guess = eve_decode(measured.post_state, held[idx].eve_registers, eve->decode, rotation, pub_l[idx], d, rng.eve)) {
                eve_digits.push_back(*guess);
            }
        }
    }
    if (eve_digits.size() != static_cast<std::size_t>(pairs)) eve_digits.clear();
    result.bob_digits = bob;
    final_digit_check(s, bob, eve_digits, config.n, rng, result);
    return result;
}

KeyResult run_pre_check(const SessionConfig& config) {
    validate(config);
    const int d = config.d;
    const int pairs = 2 * config.n;
    const auto family = mub_family(d, config.m);
    const auto& computational = family.bases[0];
    Streams rng(config.seed);
    KeyResult result = new_result(config);
    auto& tr = result.transcript;

    const auto b = draw(rng.basis, pairs, config.m);
    auto held = distribute(
        pairs,
        [&](int r) { return apply_unitary(maximally_entangled(d, "A", "B"), family.unitaries[static_cast<std::size_t>(b[r])], {"B"}); },
        "B", config.channel, rng.channel, result, "alice", "bob", "eve");
    tr.append("bob", "alice", MK::ack_received, {pairs});

    const auto key_positions = measurement_check(
        held, config.n, family, maximally_entangled(d, "A", "B"),
        [&](const StateVector& st, int i) {
            const auto& pub_b = tr.read(MK::publish_b, "alice");
            return apply_unitary(st, family.unitaries[static_cast<std::size_t>(pub_b[static_cast<std::size_t>(i)])].adjoint(), {"B"});
        },
        rng, result,
        [&] {
            const auto& positions = tr.read(MK::check_positions, "alice");
            tr.append("alice", "all", MK::publish_b, pick(b, positions));
        });
    if (result.aborted) return result;

    // Surviving pairs carry the key; no final-digit comparison.
    const auto s = draw(rng.dits, pairs, d);
    const auto n = key_positions.size();
    std::vector<int> l(n);
    std::vector<StateVector> bob_side;
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(key_positions[i]);
        const auto out = teleport(StateVector::basis("Ain", d, s[idx]), held[idx].state, rng.quantum);
        l[i] = out.l;
        recycle_residual(result, out);
        bob_side.push_back(out.receiver_state);
    }
    tr.append("alice", "all", MK::publish_l, l);
    tr.append("alice", "all", MK::publish_b, pick(b, key_positions));

    const auto& pub_l = tr.read(MK::publish_l, "alice");
    const auto& pub_b = tr.read(MK::publish_b, "alice");
    const EveStrategy* eve = eve_strategy(config.channel);
    std::vector<int> bob(n);
    std::vector<int> eve_digits;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& rotation = family.unitaries[static_cast<std::size_t>(pub_b[i])];
        const auto st = apply_unitary(bob_side[i], rotation.adjoint(), {"B"});
        const auto measured = measure(st, {"B"}, computational, rng.quantum);
        bob[i] = mod(measured.outcome - pub_l[i], d);
        if (eve) {
            const auto& regs = held[static_cast<std::size_t>(key_positions[i])].eve_registers;
            if (auto guess = eve_decode(measured.post_state, regs, eve->decode, rotation, pub_l[i], d, rng.eve)) {
                eve_digits.push_back(*guess);
            }
        }
    }
    result.alice_key = pick(s, key_positions);
    result.bob_key = bob;
    result.bob_digits = bob;
    if (eve_digits.size() == n) result.eve_key = std::move(eve_digits);
    return result;
}

KeyResult run_third_party(const SessionConfig& config, bool trusted) {
    validate(config);
    if (config.d != 2) throw std::invalid_argument("the third-party protocol is defined for qubits only (d = 2)");
    const int pairs = 2 * config.n;
    const auto family = mub_family(2, config.m);
    const auto hadamard = fourier_basis(2).to_unitary();
    const auto z = pauli_matrix(2, 1, 0);
    Streams rng(config.seed);
    KeyResult result = new_result(config);
    auto& tr = result.transcript;

    std::vector<int> masks;
    if (trusted) masks = draw(rng.mask, 2 * pairs, 2);  // (A, B) per GHZ state
    auto held = distribute(
        pairs,
        [&](int r) {
            auto g = ghz_state("C", "A", "B");
            if (trusted) {
                if (masks[static_cast<std::size_t>(2 * r)]) g = apply_unitary(g, hadamard, {"A"});
                if (masks[static_cast<std::size_t>(2 * r + 1)]) g = apply_unitary(g, hadamard, {"B"});
            }
            return g;
        },
        "B", config.channel, rng.channel, result, "charlie", "bob", "eve");
    tr.append("alice", "charlie", MK::ack_received, {pairs});
    tr.append("bob", "charlie", MK::ack_received, {pairs});

    if (trusted) {
        tr.append("charlie", "all", MK::charlie_mask_reveal, masks);
        const auto& revealed = tr.read(MK::charlie_mask_reveal, "charlie");
        for (int r = 0; r < pairs; ++r) {
            auto& st = held[static_cast<std::size_t>(r)].state;
            if (revealed[static_cast<std::size_t>(2 * r)]) st = apply_unitary(st, hadamard, {"A"});
            if (revealed[static_cast<std::size_t>(2 * r + 1)]) st = apply_unitary(st, hadamard, {"B"});
        }
    }

    // Charlie swaps his GHZ side out with |+>|+> and recycles it.
    std::vector<int> classes(static_cast<std::size_t>(pairs));
    const auto flying = tensor({plus_state("C1"), plus_state("C2")});
    const auto standard_ghz = ghz_state("C1", "C2", "C");
    for (int r = 0; r < pairs; ++r) {
        auto& pair = held[static_cast<std::size_t>(r)];
        auto out = teleport_ghz(flying, pair.state, rng.quantum);
        classes[static_cast<std::size_t>(r)] = ghz_outcome_is_phi_plus(out.outcome) ? 0 : 1;
        record_recycle(result, fidelity(recycle_ghz(out.charlie_state, out.outcome), standard_ghz));
        pair.state = std::move(out.pair_state);
    }
    tr.append("charlie", "all", MK::publish_class, classes);

    // Bob brings every Phi- pair to Phi+.
    const auto& pub_classes = tr.read(MK::publish_class, "charlie");
    for (int r = 0; r < pairs; ++r) {
        if (pub_classes[static_cast<std::size_t>(r)]) {
            auto& st = held[static_cast<std::size_t>(r)].state;
            st = apply_unitary(st, z, {"B"});
        }
    }

    const auto key_positions = measurement_check(
        held, config.n, family, maximally_entangled(2, "A", "B"), [](const StateVector& st, int) { return st; }, rng,
        result, [] {});
    if (result.aborted) return result;

    const auto s = draw(rng.dits, pairs, 2);
    const auto n = key_positions.size();
    std::vector<int> l(n);
    std::vector<StateVector> bob_side;
    KeyResult scratch;  // Alice's residual pairs are not part of the GHZ recycling count
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(key_positions[i]);
        const auto out = teleport(StateVector::basis("Ain", 2, s[idx]), held[idx].state, rng.quantum);
        l[i] = out.l;
        recycle_residual(scratch, out);
        bob_side.push_back(out.receiver_state);
    }
    result.min_recycle_fidelity = std::min(result.min_recycle_fidelity, scratch.min_recycle_fidelity);
    tr.append("alice", "all", MK::publish_l, l);

    const auto& pub_l = tr.read(MK::publish_l, "alice");
    const EveStrategy* eve = eve_strategy(config.channel);
    const auto identity = UnitaryOp::identity(2);
    std::vector<int> bob(n);
    std::vector<int> eve_digits;
    for (std::size_t i = 0; i < n; ++i) {
        const auto measured = measure(bob_side[i], {"B"}, family.bases[0], rng.quantum);
        bob[i] = mod(measured.outcome - pub_l[i], 2);
        if (eve) {
            const auto& regs = held[static_cast<std::size_t>(key_positions[i])].eve_registers;
            if (auto guess = eve_decode(measured.post_state, regs, eve->decode, identity, pub_l[i], 2, rng.eve)) {
                eve_digits.push_back(*guess);
            }
        }
    }
    result.alice_key = pick(s, key_positions);
    result.bob_key = bob;
    result.bob_digits = bob;
    if (eve_digits.size() == n) result.eve_key = std::move(eve_digits);
    return result;
}

KeyResult run_chain(const ChainConfig& config) {
    validate(config);
    const auto& base = config.base;
    const int d = base.d;
    const int hops = config.hops;
    const int pairs = 2 * base.n;
    const auto family = mub_family(d, base.m);
    Streams rng(base.seed);
    KeyResult result = new_result(base);
    auto& tr = result.transcript;

    auto pair_label = [](int hop, char side) { return "h" + std::to_string(hop) + side; };

    const auto b = draw(rng.basis, pairs, base.m);
    std::vector<std::vector<HeldPair>> links;
    for (int hop = 0; hop < hops; ++hop) {
        const auto first = pair_label(hop, 'a');
        const auto second = pair_label(hop, 'b');
        const auto sender = party_name(hop, hops);
        const auto receiver = party_name(hop + 1, hops);
        links.push_back(distribute(
            pairs, [&](int) { return maximally_entangled(d, first, second); }, second,
            config.per_hop_channel[static_cast<std::size_t>(hop)], rng.channel, result, sender, receiver,
            "eve" + std::to_string(hop)));
        tr.append(receiver, sender, MK::ack_received, {pairs});
    }

    // Alice sends U_b|s>; each party forwards what it received, uncorrected.
    const auto s = draw(rng.dits, pairs, d);
    std::vector<std::vector<int>> k(static_cast<std::size_t>(hops), std::vector<int>(static_cast<std::size_t>(pairs)));
    auto l = k;
    std::vector<StateVector> bob_side;
    bob_side.reserve(static_cast<std::size_t>(pairs));
    for (int r = 0; r < pairs; ++r) {
        const auto idx = static_cast<std::size_t>(r);
        auto current = apply_unitary(StateVector::basis("Ain", d, s[idx]), family.unitaries[static_cast<std::size_t>(b[idx])], {"Ain"});
        std::string carrier = "Ain";
        for (int hop = 0; hop < hops; ++hop) {
            const auto h = static_cast<std::size_t>(hop);
            const auto joint = tensor({current, links[h][idx].state});
            const auto out = bell_measure(joint, carrier, pair_label(hop, 'a'), rng.quantum);
            k[h][idx] = out.k;
            l[h][idx] = out.l;
            recycle_residual(result, out);
            current = out.receiver_state;
            carrier = pair_label(hop, 'b');
        }
        bob_side.push_back(std::move(current));
    }
    for (int hop = 0; hop < hops; ++hop) {
        const auto sender = party_name(hop, hops);
        tr.append(sender, "all", MK::publish_k, k[static_cast<std::size_t>(hop)]);
        tr.append(sender, "all", MK::publish_l, l[static_cast<std::size_t>(hop)]);
    }
    tr.append("alice", "all", MK::publish_b, b);

    const auto& pub_b = tr.read(MK::publish_b, "alice");
    const std::string bob_register = pair_label(hops - 1, 'b');
    std::vector<int> bob(static_cast<std::size_t>(pairs));
    for (int r = 0; r < pairs; ++r) {
        const auto idx = static_cast<std::size_t>(r);
        auto st = bob_side[idx];
        for (int hop = hops - 1; hop >= 0; --hop) {
            const auto sender = party_name(hop, hops);
            const int kk = tr.read(MK::publish_k, sender)[idx];
            const int ll = tr.read(MK::publish_l, sender)[idx];
            st = apply_unitary(st, correction_op(d, kk, ll), {bob_register});
        }
        st = apply_unitary(st, family.unitaries[static_cast<std::size_t>(pub_b[idx])].adjoint(), {bob_register});
        bob[idx] = measure(st, {bob_register}, family.bases[0], rng.quantum).outcome;
    }
    result.bob_digits = bob;
    final_digit_check(s, bob, {}, base.n, rng, result);
    return result;
}

}  // namespace rqkd
