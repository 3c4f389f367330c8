#include "rqkd/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace rqkd {

namespace {

std::size_t checked_product(const std::vector<Subsystem>& subs) {
    std::size_t total = 1;
    for (const auto& s : subs) {
        if (s.dim < 1) throw std::invalid_argument("subsystem '" + s.label + "' has non-positive dimension");
        total *= static_cast<std::size_t>(s.dim);
        if (total > kMaxAmplitudes) throw std::length_error("state exceeds the amplitude cap");
    }
    return total;
}

// Splits every full index into (target index, rest index) and back.
struct TargetLayout {
    std::size_t target_dim = 1;
    std::size_t rest_dim = 1;
    std::vector<std::size_t> target_of;  // full -> target
    std::vector<std::size_t> rest_of;    // full -> rest
    std::vector<std::size_t> full_of;    // rest * target_dim + target -> full
    std::vector<Subsystem> rest_subsystems;

    TargetLayout(const StateVector& state, std::span<const std::string> targets) {
        const auto& subs = state.subsystems();
        std::vector<int> target_slot(subs.size(), -1);
        std::unordered_set<std::string> seen;
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (!seen.insert(targets[t]).second) throw std::invalid_argument("duplicate target '" + targets[t] + "'");
            const std::size_t p = state.position(targets[t]);
            target_slot[p] = static_cast<int>(t);
            target_dim *= static_cast<std::size_t>(subs[p].dim);
        }
        // Weight of each subsystem digit inside the target index and the rest index.
        std::vector<std::size_t> target_weight(subs.size(), 0);
        std::vector<std::size_t> rest_weight(subs.size(), 0);
        {
            std::size_t w = 1;
            for (std::size_t t = targets.size(); t-- > 0;) {
                const std::size_t p = state.position(targets[t]);
                target_weight[p] = w;
                w *= static_cast<std::size_t>(subs[p].dim);
            }
            w = 1;
            for (std::size_t p = subs.size(); p-- > 0;) {
                if (target_slot[p] >= 0) continue;
                rest_weight[p] = w;
                w *= static_cast<std::size_t>(subs[p].dim);
            }
            rest_dim = w;
        }
        for (std::size_t p = 0; p < subs.size(); ++p) {
            if (target_slot[p] < 0) rest_subsystems.push_back(subs[p]);
        }

        const std::size_t n = state.size();
        target_of.resize(n);
        rest_of.resize(n);
        full_of.resize(n);
        std::vector<int> digits(subs.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t t = 0, r = 0;
            for (std::size_t p = 0; p < subs.size(); ++p) {
                const auto dg = static_cast<std::size_t>(digits[p]);
                if (target_slot[p] >= 0) t += dg * target_weight[p];
                else r += dg * rest_weight[p];
            }
            target_of[i] = t;
            rest_of[i] = r;
            full_of[r * target_dim + t] = i;
            // Increment mixed-radix counter, last subsystem fastest.
            for (std::size_t p = subs.size(); p-- > 0;) {
                if (++digits[p] < subs[p].dim) break;
                digits[p] = 0;
            }
        }
    }
};

// <v| applied to the target registers; result indexed by rest index.
std::vector<Amplitude> contract(const StateVector& state, const TargetLayout& layout,
                                std::span<const Amplitude> v) {
    std::vector<Amplitude> reduced(layout.rest_dim, Amplitude{0.0, 0.0});
    const auto& amps = state.amplitudes();
    for (std::size_t r = 0; r < layout.rest_dim; ++r) {
        Amplitude acc{0.0, 0.0};
        for (std::size_t t = 0; t < layout.target_dim; ++t) {
            acc += std::conj(v[t]) * amps[layout.full_of[r * layout.target_dim + t]];
        }
        reduced[r] = acc;
    }
    return reduced;
}

double squared_norm(std::span<const Amplitude> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return s;
}

void require_basis_matches(const TargetLayout& layout, const MeasurementBasis& basis) {
    if (static_cast<std::size_t>(basis.dim()) != layout.target_dim) {
        throw std::invalid_argument("basis dimension does not match the product of target dimensions");
    }
}

ForcedResult collapse(const StateVector& state, const TargetLayout& layout,
                      std::span<const Amplitude> v, int outcome) {
    auto reduced = contract(state, layout, v);
    const double p = squared_norm(reduced);
    if (p < kImpossible) {
        throw std::domain_error("outcome " + std::to_string(outcome) + " has zero probability");
    }
    const double scale = 1.0 / std::sqrt(p);
    std::vector<Amplitude> post(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        post[i] = v[layout.target_of[i]] * reduced[layout.rest_of[i]] * scale;
    }
    return {StateVector(state.subsystems(), std::move(post)), p};
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Subsystem> subsystems, std::vector<Amplitude> amplitudes)
    : subsystems_(std::move(subsystems)), amplitudes_(std::move(amplitudes)) {
    std::unordered_set<std::string> labels;
    for (const auto& s : subsystems_) {
        if (!labels.insert(s.label).second) throw std::invalid_argument("duplicate subsystem label '" + s.label + "'");
    }
    if (checked_product(subsystems_) != amplitudes_.size()) {
        throw std::invalid_argument("amplitude count does not match subsystem dimensions");
    }
    for (const auto& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw std::invalid_argument("non-finite amplitude");
    }
    if (std::abs(norm_squared() - 1.0) > kTolerance) throw std::invalid_argument("state is not normalized");
}

StateVector StateVector::basis(std::string label, int dim, int index) {
    if (dim < 1 || index < 0 || index >= dim) throw std::invalid_argument("basis index out of range");
    std::vector<Amplitude> amps(static_cast<std::size_t>(dim));
    amps[static_cast<std::size_t>(index)] = 1.0;
    return StateVector({{std::move(label), dim}}, std::move(amps));
}

StateVector StateVector::single(std::string label, std::vector<Amplitude> amplitudes) {
    const int dim = static_cast<int>(amplitudes.size());
    return StateVector({{std::move(label), dim}}, std::move(amplitudes));
}

bool StateVector::has(const std::string& label) const {
    return std::any_of(subsystems_.begin(), subsystems_.end(), [&](const Subsystem& s) { return s.label == label; });
}

std::size_t StateVector::position(const std::string& label) const {
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        if (subsystems_[i].label == label) return i;
    }
    throw std::invalid_argument("unknown subsystem label '" + label + "'");
}

int StateVector::dim_of(const std::string& label) const { return subsystems_[position(label)].dim; }

std::vector<std::string> StateVector::labels() const {
    std::vector<std::string> out;
    out.reserve(subsystems_.size());
    for (const auto& s : subsystems_) out.push_back(s.label);
    return out;
}

double StateVector::norm_squared() const { return squared_norm(amplitudes_); }

// ---------------------------------------------------------------------------
// UnitaryOp

UnitaryOp::UnitaryOp(int dim, std::vector<Amplitude> row_major) : dim_(dim), entries_(std::move(row_major)) {
    if (dim_ < 1) throw std::invalid_argument("unitary dimension must be positive");
    if (entries_.size() != static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_)) {
        throw std::invalid_argument("unitary entry count does not match dimension");
    }
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) {
            Amplitude acc{0.0, 0.0};
            for (int k = 0; k < dim_; ++k) acc += (*this)(r, k) * std::conj((*this)(c, k));
            const Amplitude expected = r == c ? 1.0 : 0.0;
            if (std::abs(acc - expected) > kTolerance) throw std::invalid_argument("matrix is not unitary");
        }
    }
}

UnitaryOp UnitaryOp::identity(int dim) {
    std::vector<Amplitude> e(static_cast<std::size_t>(dim * dim));
    for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i * dim + i)] = 1.0;
    return UnitaryOp(dim, std::move(e));
}

UnitaryOp UnitaryOp::from_columns(const std::vector<std::vector<Amplitude>>& columns) {
    const int dim = static_cast<int>(columns.size());
    std::vector<Amplitude> e(static_cast<std::size_t>(dim * dim));
    for (int c = 0; c < dim; ++c) {
        if (static_cast<int>(columns[static_cast<std::size_t>(c)].size()) != dim) {
            throw std::invalid_argument("column length does not match column count");
        }
        for (int r = 0; r < dim; ++r) {
            e[static_cast<std::size_t>(r * dim + c)] = columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
        }
    }
    return UnitaryOp(dim, std::move(e));
}

UnitaryOp UnitaryOp::adjoint() const {
    std::vector<Amplitude> e(entries_.size());
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) e[static_cast<std::size_t>(r * dim_ + c)] = std::conj((*this)(c, r));
    }
    return UnitaryOp(dim_, std::move(e));
}

UnitaryOp UnitaryOp::operator*(const UnitaryOp& rhs) const {
    if (rhs.dim_ != dim_) throw std::invalid_argument("unitary product dimension mismatch");
    std::vector<Amplitude> e(entries_.size());
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) {
            Amplitude acc{0.0, 0.0};
            for (int k = 0; k < dim_; ++k) acc += (*this)(r, k) * rhs(k, c);
            e[static_cast<std::size_t>(r * dim_ + c)] = acc;
        }
    }
    return UnitaryOp(dim_, std::move(e));
}

std::vector<Amplitude> UnitaryOp::apply(std::span<const Amplitude> v) const {
    if (v.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("vector length does not match unitary");
    std::vector<Amplitude> out(v.size());
    for (int r = 0; r < dim_; ++r) {
        Amplitude acc{0.0, 0.0};
        for (int c = 0; c < dim_; ++c) acc += (*this)(r, c) * v[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

UnitaryOp kron(const UnitaryOp& a, const UnitaryOp& b) {
    const int n = a.dim() * b.dim();
    std::vector<Amplitude> e(static_cast<std::size_t>(n * n));
    for (int ar = 0; ar < a.dim(); ++ar)
        for (int ac = 0; ac < a.dim(); ++ac)
            for (int br = 0; br < b.dim(); ++br)
                for (int bc = 0; bc < b.dim(); ++bc) {
                    const int r = ar * b.dim() + br;
                    const int c = ac * b.dim() + bc;
                    e[static_cast<std::size_t>(r * n + c)] = a(ar, ac) * b(br, bc);
                }
    return UnitaryOp(n, std::move(e));
}

// ---------------------------------------------------------------------------
// MeasurementBasis

MeasurementBasis::MeasurementBasis(int dim, std::vector<std::vector<Amplitude>> vectors)
    : dim_(dim), vectors_(std::move(vectors)) {
    if (dim_ < 1) throw std::invalid_argument("basis dimension must be positive");
    if (vectors_.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("basis must contain exactly dim vectors");
    for (const auto& v : vectors_) {
        if (v.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("basis vector has wrong length");
    }
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        for (std::size_t j = 0; j < vectors_.size(); ++j) {
            Amplitude ip{0.0, 0.0};
            for (std::size_t k = 0; k < vectors_[i].size(); ++k) ip += std::conj(vectors_[i][k]) * vectors_[j][k];
            const Amplitude expected = i == j ? 1.0 : 0.0;
            if (std::abs(ip - expected) > kTolerance) throw std::invalid_argument("basis is not orthonormal");
        }
    }
}

MeasurementBasis MeasurementBasis::from_unitary(const UnitaryOp& u) {
    std::vector<std::vector<Amplitude>> vs(static_cast<std::size_t>(u.dim()));
    for (int c = 0; c < u.dim(); ++c) {
        auto& v = vs[static_cast<std::size_t>(c)];
        v.resize(static_cast<std::size_t>(u.dim()));
        for (int r = 0; r < u.dim(); ++r) v[static_cast<std::size_t>(r)] = u(r, c);
    }
    return MeasurementBasis(u.dim(), std::move(vs));
}

MeasurementBasis MeasurementBasis::computational(int dim) { return from_unitary(UnitaryOp::identity(dim)); }

UnitaryOp MeasurementBasis::to_unitary() const { return UnitaryOp::from_columns(vectors_); }

MeasurementBasis MeasurementBasis::conjugate() const {
    auto vs = vectors_;
    for (auto& v : vs)
        for (auto& a : v) a = std::conj(a);
    return MeasurementBasis(dim_, std::move(vs));
}

// ---------------------------------------------------------------------------
// Operations

StateVector tensor(std::span<const StateVector> parts) {
    if (parts.empty()) throw std::invalid_argument("tensor of zero parts");
    std::vector<Subsystem> subs;
    std::vector<Amplitude> amps{Amplitude{1.0, 0.0}};
    for (const auto& part : parts) {
        subs.insert(subs.end(), part.subsystems().begin(), part.subsystems().end());
        checked_product(subs);
        std::vector<Amplitude> next;
        next.reserve(amps.size() * part.size());
        for (const auto& a : amps)
            for (const auto& b : part.amplitudes()) next.push_back(a * b);
        amps = std::move(next);
    }
    return StateVector(std::move(subs), std::move(amps));
}

StateVector tensor(std::initializer_list<StateVector> parts) {
    return tensor(std::span<const StateVector>(parts.begin(), parts.size()));
}

StateVector apply_unitary(const StateVector& state, const UnitaryOp& op, std::span<const std::string> targets) {
    const TargetLayout layout(state, targets);
    if (static_cast<std::size_t>(op.dim()) != layout.target_dim) {
        throw std::invalid_argument("operator dimension does not match the product of target dimensions");
    }
    const auto& in = state.amplitudes();
    std::vector<Amplitude> out(in.size(), Amplitude{0.0, 0.0});
    const std::size_t dim = layout.target_dim;
    for (std::size_t r = 0; r < layout.rest_dim; ++r) {
        const std::size_t base = r * dim;
        for (std::size_t row = 0; row < dim; ++row) {
            Amplitude acc{0.0, 0.0};
            for (std::size_t col = 0; col < dim; ++col) {
                acc += op(static_cast<int>(row), static_cast<int>(col)) * in[layout.full_of[base + col]];
            }
            out[layout.full_of[base + row]] = acc;
        }
    }
    return StateVector(state.subsystems(), std::move(out));
}

StateVector apply_unitary(const StateVector& state, const UnitaryOp& op, std::initializer_list<std::string> targets) {
    return apply_unitary(state, op, std::span<const std::string>(targets.begin(), targets.size()));
}

std::vector<double> outcome_probabilities(const StateVector& state, std::span<const std::string> targets,
                                          const MeasurementBasis& basis) {
    const TargetLayout layout(state, targets);
    require_basis_matches(layout, basis);
    std::vector<double> probs(static_cast<std::size_t>(basis.dim()));
    for (int o = 0; o < basis.dim(); ++o) {
        probs[static_cast<std::size_t>(o)] = squared_norm(contract(state, layout, basis.vector(o)));
    }
    return probs;
}

MeasureResult measure(const StateVector& state, std::span<const std::string> targets,
                      const MeasurementBasis& basis, Rng& rng) {
    const TargetLayout layout(state, targets);
    require_basis_matches(layout, basis);
    std::vector<double> probs(static_cast<std::size_t>(basis.dim()));
    for (int o = 0; o < basis.dim(); ++o) {
        probs[static_cast<std::size_t>(o)] = squared_norm(contract(state, layout, basis.vector(o)));
    }
    const double u = rng.uniform01();
    double cumulative = 0.0;
    int chosen = -1;
    for (int o = 0; o < basis.dim(); ++o) {
        const double p = probs[static_cast<std::size_t>(o)];
        if (p < kImpossible) continue;
        chosen = o;
        cumulative += p;
        if (u < cumulative) break;
    }
    // chosen falls back to the last possible outcome when rounding leaves u above the total.
    auto forced = collapse(state, layout, basis.vector(chosen), chosen);
    return {chosen, std::move(forced.post_state), forced.probability};
}

MeasureResult measure(const StateVector& state, std::initializer_list<std::string> targets,
                      const MeasurementBasis& basis, Rng& rng) {
    return measure(state, std::span<const std::string>(targets.begin(), targets.size()), basis, rng);
}

ForcedResult measure_forced(const StateVector& state, std::span<const std::string> targets,
                            const MeasurementBasis& basis, int outcome) {
    const TargetLayout layout(state, targets);
    require_basis_matches(layout, basis);
    if (outcome < 0 || outcome >= basis.dim()) throw std::invalid_argument("outcome index out of range");
    return collapse(state, layout, basis.vector(outcome), outcome);
}

ForcedResult measure_forced(const StateVector& state, std::initializer_list<std::string> targets,
                            const MeasurementBasis& basis, int outcome) {
    return measure_forced(state, std::span<const std::string>(targets.begin(), targets.size()), basis, outcome);
}

ForcedResult project_out(const StateVector& state, std::span<const std::string> targets,
                         std::span<const Amplitude> vector) {
    const TargetLayout layout(state, targets);
    if (vector.size() != layout.target_dim) throw std::invalid_argument("projection vector has wrong length");
    if (layout.rest_subsystems.empty()) throw std::invalid_argument("cannot project out every subsystem");
    auto reduced = contract(state, layout, vector);
    const double p = squared_norm(reduced);
    if (p < kImpossible) throw std::domain_error("projection has zero probability");
    const double scale = 1.0 / std::sqrt(p);
    for (auto& a : reduced) a *= scale;
    return {StateVector(layout.rest_subsystems, std::move(reduced)), p};
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
    if (a.subsystems() != b.subsystems()) throw std::invalid_argument("states have different subsystem layouts");
    Amplitude acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    return acc;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

StateVector rename(const StateVector& state, const std::string& from, const std::string& to) {
    auto subs = state.subsystems();
    subs[state.position(from)].label = to;
    return StateVector(std::move(subs), state.amplitudes());
}

StateVector reorder(const StateVector& state, std::span<const std::string> order) {
    if (order.size() != state.subsystems().size()) throw std::invalid_argument("reorder needs every label exactly once");
    const TargetLayout layout(state, order);
    std::vector<Subsystem> subs;
    for (const auto& label : order) subs.push_back(state.subsystems()[state.position(label)]);
    std::vector<Amplitude> amps(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) amps[layout.target_of[i]] = state.amplitudes()[i];
    return StateVector(std::move(subs), std::move(amps));
}

}  // namespace rqkd
