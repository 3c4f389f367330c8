#include "rqkd/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "rqkd/bases.hpp"
#include "rqkd/teleport.hpp"

namespace rqkd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_probability(double p, const char* field) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(field) + " must lie in [0, 1]");
}

int mod(int x, int d) { return ((x % d) + d) % d; }

}  // namespace

void validate(const ChannelModel& model, int d) {
    std::visit(overloaded{
                   [](const Ideal&) {},
                   [](const Depolarizing& m) { require_probability(m.p, "depolarizing p"); },
                   [](const Loss& m) {
                       require_probability(m.p, "loss p");
                       if (m.p >= 1.0) throw std::invalid_argument("loss p must be below 1 or no pair is ever delivered");
                   },
                   [d](const SubstitutedAttack& m) {
                       const auto& sub = m.strategy.substitute_state;
                       if (!sub) throw std::invalid_argument("substituted attack needs a substitute state");
                       if (sub->subsystems().size() != 2 || sub->subsystems()[0].dim != d) {
                           throw std::invalid_argument("substitute state must be two registers, the first of dimension d");
                       }
                   },
                   [d](const PurifiedAttack& m) {
                       if (m.e_dim < 1) throw std::invalid_argument("purified attack e_dim must be positive");
                       if (m.u_e.dim() != d * m.e_dim) throw std::invalid_argument("purified attack u_e must have dimension d * e_dim");
                   },
               },
               model);
}

std::string channel_name(const ChannelModel& model) {
    return std::visit(overloaded{
                          [](const Ideal&) { return std::string("ideal"); },
                          [](const Depolarizing&) { return std::string("depolarizing"); },
                          [](const Loss&) { return std::string("loss"); },
                          [](const SubstitutedAttack&) { return std::string("substituted"); },
                          [](const PurifiedAttack&) { return std::string("purified"); },
                      },
                      model);
}

SubstitutedAttack substituted_attack(int d) {
    return {EveStrategy{maximally_entangled(d, "sub_b", "sub_c"), EveDecode::unrotate_and_measure}};
}

UnitaryOp controlled_shift(int d) {
    const int n = d * d;
    std::vector<Amplitude> e(static_cast<std::size_t>(n * n));
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) {
            const int col = x * d + y;
            const int row = x * d + mod(y + x, d);
            e[static_cast<std::size_t>(row * n + col)] = 1.0;
        }
    return UnitaryOp(n, std::move(e));
}

PurifiedAttack controlled_shift_attack(int d) {
    return {controlled_shift(d), d, EveStrategy{std::nullopt, EveDecode::measure_computational}};
}

ChannelResult apply_channel(const StateVector& state, const std::string& b_label, const ChannelModel& model,
                            Rng& rng, const std::string& eve_prefix) {
    const int d = state.dim_of(b_label);
    validate(model, d);
    return std::visit(
        overloaded{
            [&](const Ideal&) { return ChannelResult{state, {}, false}; },
            [&](const Depolarizing& m) {
                if (rng.uniform01() >= m.p) return ChannelResult{state, {}, false};
                const auto a = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d)));
                const auto b = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d)));
                return ChannelResult{apply_unitary(state, pauli_matrix(d, a, b), {b_label}), {}, false};
            },
            [&](const Loss& m) { return ChannelResult{state, {}, rng.uniform01() < m.p}; },
            [&](const SubstitutedAttack& m) {
                const std::string held = eve_prefix + "_held";
                const std::string kept = eve_prefix + "_c";
                auto stolen = rename(state, b_label, held);
                const auto& sub = *m.strategy.substitute_state;
                auto forged = rename(rename(sub, sub.subsystems()[0].label, b_label), sub.subsystems()[1].label, kept);
                return ChannelResult{tensor({stolen, forged}), {held, kept}, false};
            },
            [&](const PurifiedAttack& m) {
                const std::string e = eve_prefix + "_e";
                auto joined = tensor({state, StateVector::basis(e, m.e_dim, 0)});
                return ChannelResult{apply_unitary(joined, m.u_e, {b_label, e}), {e}, false};
            },
        },
        model);
}

const EveStrategy* eve_strategy(const ChannelModel& model) {
    if (const auto* s = std::get_if<SubstitutedAttack>(&model)) return &s->strategy;
    if (const auto* p = std::get_if<PurifiedAttack>(&model)) return &p->eve_measurement;
    return nullptr;
}

std::optional<int> eve_decode(const StateVector& state, const std::vector<std::string>& eve_registers,
                              EveDecode decode, const UnitaryOp& rotation, int l, int d, Rng& rng) {
    if (decode == EveDecode::none || eve_registers.empty()) return std::nullopt;
    const std::string& reg = eve_registers.front();
    StateVector working = state;
    if (decode == EveDecode::unrotate_and_measure) {
        working = apply_unitary(working, rotation.adjoint(), {reg});
    }
    const auto r = measure(working, {reg}, MeasurementBasis::computational(working.dim_of(reg)), rng);
    return mod(r.outcome - l, d);
}

UnitaryOp haar_unitary(int dim, Rng& rng) {
    std::vector<std::vector<Amplitude>> cols(static_cast<std::size_t>(dim), std::vector<Amplitude>(static_cast<std::size_t>(dim)));
    for (auto& c : cols)
        for (auto& a : c) a = Amplitude{rng.normal(), rng.normal()};
    // Modified Gram-Schmidt; equivalent to QR with a positive diagonal in R,
    // which makes the resulting Q Haar distributed.
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            Amplitude ip{0.0, 0.0};
            for (std::size_t r = 0; r < cols[j].size(); ++r) ip += std::conj(cols[i][r]) * cols[j][r];
            for (std::size_t r = 0; r < cols[j].size(); ++r) cols[j][r] -= ip * cols[i][r];
        }
        double n = 0.0;
        for (const auto& a : cols[j]) n += std::norm(a);
        n = std::sqrt(n);
        for (auto& a : cols[j]) a /= n;
    }
    return UnitaryOp::from_columns(cols);
}

StateVector haar_state(std::vector<Subsystem> subsystems, Rng& rng) {
    std::size_t n = 1;
    for (const auto& s : subsystems) n *= static_cast<std::size_t>(s.dim);
    std::vector<Amplitude> amps(n);
    double norm = 0.0;
    for (auto& a : amps) {
        a = Amplitude{rng.normal(), rng.normal()};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : amps) a /= norm;
    return StateVector(std::move(subsystems), std::move(amps));
}

double proposition_monte_carlo(int d, int n_strategies, int trials_per, Rng& rng, PropositionStrategy strategy) {
    if (d < 2 || n_strategies < 1 || trials_per < 1) throw std::invalid_argument("proposition_monte_carlo: bad sizes");
    std::size_t successes = 0;
    std::size_t total = 0;
    for (int n = 0; n < n_strategies; ++n) {
        Rng strategy_rng = rng.child(static_cast<std::uint64_t>(n));
        const auto eta = haar_state({{"bob", d}, {"eve", d}}, strategy_rng);
        const auto bob_basis = MeasurementBasis::from_unitary(haar_unitary(d, strategy_rng));
        const auto eve_basis = MeasurementBasis::from_unitary(haar_unitary(d, strategy_rng));
        for (int t = 0; t < trials_per; ++t) {
            const auto s = static_cast<int>(strategy_rng.uniform_int(static_cast<std::uint64_t>(d)));
            int guess = 0;
            if (strategy == PropositionStrategy::haar) {
                // Eve's local measurement; it cannot influence Bob's marginal.
                const auto eve = measure(eta, {"eve"}, eve_basis, strategy_rng);
                guess = measure(eve.post_state, {"bob"}, bob_basis, strategy_rng).outcome;
            }
            successes += guess == s ? 1 : 0;
            ++total;
        }
    }
    return static_cast<double>(successes) / static_cast<double>(total);
}

double bb84_correspondence_check(const UnitaryOp& u_e, int e_dim, int s, int l, int i, int k) {
    if (e_dim < 1 || u_e.dim() % e_dim != 0) throw std::invalid_argument("u_e dimension is not a multiple of e_dim");
    const int d = u_e.dim() / e_dim;
    const auto family = mub_family(d, max_mub_count(d));
    if (i < 0 || i >= family.size()) throw std::invalid_argument("basis index out of range");
    const UnitaryOp& rotation = family.unitaries[static_cast<std::size_t>(i)];

    // Protocol side.
    auto pair = apply_unitary(maximally_entangled(d, "A", "B"), rotation, {"B"});
    pair = tensor({pair, StateVector::basis("E", e_dim, 0)});
    pair = apply_unitary(pair, u_e, {"B", "E"});
    const auto out = teleport_forced(StateVector::basis("Ain", d, mod(s, d)), pair, k, l);

    // Prepare-and-measure side.
    auto bb84 = tensor({StateVector::basis("B", d, mod(s + l, d)), StateVector::basis("E", e_dim, 0)});
    bb84 = apply_unitary(bb84, rotation, {"B"});
    bb84 = apply_unitary(bb84, u_e, {"B", "E"});
    return fidelity(out.receiver_state, bb84);
}

AttackReport attack_report(const KeyResult& result, const std::vector<int>& eve_decoded_digits) {
    const double bob = match_rate(result.alice_key, result.bob_key);
    const double eve = eve_decoded_digits.empty() ? 1.0 / result.d : match_rate(result.alice_key, eve_decoded_digits);
    return {bob, eve, result.observed_error_rate > result.abort_threshold};
}

}  // namespace rqkd
