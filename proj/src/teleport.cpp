#include "rqkd/teleport.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rqkd {

namespace {

int same_dimension(const StateVector& joint, const std::string& a, const std::string& b) {
    const int d = joint.dim_of(a);
    if (joint.dim_of(b) != d) throw std::invalid_argument("teleportation registers have different dimensions");
    return d;
}

TeleportOutcome finish(const StateVector& collapsed, const std::string& input_label, const std::string& sender_half,
                       const BellBasis& bell, int k, int l, double probability) {
    const std::string targets[] = {input_label, sender_half};
    auto rest = project_out(collapsed, targets, bell.vector(k, l));
    return {k, l, probability, bell.state(k, l, input_label, sender_half), std::move(rest.post_state)};
}

void check_teleport_inputs(const StateVector& input, const StateVector& pair) {
    if (input.subsystems().size() != 1) throw std::invalid_argument("teleport input must be a single qudit");
    if (pair.subsystems().size() < 2) throw std::invalid_argument("teleport pair must have at least two subsystems");
    const int d = input.subsystems()[0].dim;
    if (pair.subsystems()[0].dim != d || pair.subsystems()[1].dim != d) {
        throw std::invalid_argument("teleport input and pair dimensions differ");
    }
}

std::vector<std::string> ghz_targets(const StateVector& flying, const StateVector& ghz) {
    if (flying.subsystems().size() != 2 || ghz.subsystems().size() < 3) {
        throw std::invalid_argument("teleport_ghz expects two flying qubits and a three-qubit GHZ state");
    }
    for (const auto& s : flying.subsystems())
        if (s.dim != 2) throw std::invalid_argument("teleport_ghz works on qubits only");
    if (ghz.subsystems()[0].dim != 2) throw std::invalid_argument("teleport_ghz works on qubits only");
    return {flying.subsystems()[0].label, flying.subsystems()[1].label, ghz.subsystems()[0].label};
}

GhzTeleportOutcome ghz_finish(const StateVector& joint, const std::vector<std::string>& targets,
                              const MeasurementBasis& basis, int outcome, double probability) {
    auto rest = project_out(joint, targets, basis.vector(outcome));
    std::vector<Subsystem> charlie;
    for (const auto& t : targets) charlie.push_back({t, 2});
    return {outcome, probability, StateVector(std::move(charlie), basis.vector(outcome)), std::move(rest.post_state)};
}

}  // namespace

TeleportOutcome bell_measure(const StateVector& joint, const std::string& input_label,
                             const std::string& sender_half, Rng& rng) {
    const int d = same_dimension(joint, input_label, sender_half);
    const BellBasis bell(d);
    const auto r = measure(joint, {input_label, sender_half}, bell.basis(), rng);
    return finish(r.post_state, input_label, sender_half, bell, r.outcome / d, r.outcome % d, r.probability);
}

TeleportOutcome bell_measure_forced(const StateVector& joint, const std::string& input_label,
                                    const std::string& sender_half, int k, int l) {
    const int d = same_dimension(joint, input_label, sender_half);
    if (k < 0 || k >= d || l < 0 || l >= d) throw std::invalid_argument("Bell outcome out of range");
    const BellBasis bell(d);
    const auto r = measure_forced(joint, {input_label, sender_half}, bell.basis(), BellBasis::index(d, k, l));
    return finish(r.post_state, input_label, sender_half, bell, k, l, r.probability);
}

TeleportOutcome teleport(const StateVector& input, const StateVector& pair, Rng& rng) {
    check_teleport_inputs(input, pair);
    return bell_measure(tensor({input, pair}), input.subsystems()[0].label, pair.subsystems()[0].label, rng);
}

TeleportOutcome teleport_forced(const StateVector& input, const StateVector& pair, int k, int l) {
    check_teleport_inputs(input, pair);
    return bell_measure_forced(tensor({input, pair}), input.subsystems()[0].label, pair.subsystems()[0].label, k, l);
}

UnitaryOp correction_op(int d, int k, int l) { return pauli_matrix(d, k, -l); }

StateVector recycle(const StateVector& sender_residual, int k, int l) {
    if (sender_residual.subsystems().size() != 2) throw std::invalid_argument("recycle expects a two-qudit residual");
    const int d = sender_residual.subsystems()[1].dim;
    const UnitaryOp undo = pauli_matrix(d, 0, -l) * pauli_matrix(d, -k, 0);
    return apply_unitary(sender_residual, undo, {sender_residual.subsystems()[1].label});
}

StateVector ghz_state(const std::string& c, const std::string& a, const std::string& b) {
    const double s = 1.0 / std::numbers::sqrt2;
    std::vector<Amplitude> amps(8);
    amps[0] = s;
    amps[7] = s;
    return StateVector({{c, 2}, {a, 2}, {b, 2}}, std::move(amps));
}

StateVector plus_state(const std::string& label) {
    const double s = 1.0 / std::numbers::sqrt2;
    return StateVector::single(label, {s, s});
}

GhzTeleportOutcome teleport_ghz(const StateVector& flying, const StateVector& ghz, Rng& rng) {
    const auto targets = ghz_targets(flying, ghz);
    const auto joint = tensor({flying, ghz});
    const auto basis = ghz_basis();
    const auto r = measure(joint, targets, basis, rng);
    return ghz_finish(r.post_state, targets, basis, r.outcome, r.probability);
}

GhzTeleportOutcome teleport_ghz_forced(const StateVector& flying, const StateVector& ghz, int outcome) {
    const auto targets = ghz_targets(flying, ghz);
    const auto joint = tensor({flying, ghz});
    const auto basis = ghz_basis();
    const auto r = measure_forced(joint, targets, basis, outcome);
    return ghz_finish(r.post_state, targets, basis, outcome, r.probability);
}

StateVector recycle_ghz(const StateVector& charlie_state, int outcome) {
    if (charlie_state.subsystems().size() != 3) throw std::invalid_argument("recycle_ghz expects three qubits");
    const auto ops = ghz_recycle_ops().at(static_cast<std::size_t>(outcome));
    auto out = apply_unitary(charlie_state, pauli_matrix(ops[0]), {charlie_state.subsystems()[1].label});
    return apply_unitary(out, pauli_matrix(ops[1]), {charlie_state.subsystems()[2].label});
}

}  // namespace rqkd
