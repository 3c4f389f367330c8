#pragma once

// Dense pure-state simulation over labeled qudit subsystems.
//
// Index convention: amplitudes are stored in mixed-radix order with the
// first-listed subsystem as the most significant digit. The same convention
// applies to the target list of apply_unitary/measure: the first target is
// the most significant digit of the operator's (or basis vector's) index.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rqkd/rng.hpp"

namespace rqkd {

using Amplitude = std::complex<double>;

// Algebraic identities (norms, unitarity, orthonormality).
inline constexpr double kTolerance = 1e-9;
// Outcomes with probability below this are treated as impossible.
inline constexpr double kImpossible = 1e-12;
inline constexpr std::size_t kMaxAmplitudes = std::size_t{1} << 16;

struct Subsystem {
    std::string label;
    int dim = 0;

    bool operator==(const Subsystem&) const = default;
};

class StateVector {
public:
    StateVector(std::vector<Subsystem> subsystems, std::vector<Amplitude> amplitudes);

    // |index> on a single subsystem.
    static StateVector basis(std::string label, int dim, int index);
    // Single-subsystem state from raw amplitudes (must be normalized).
    static StateVector single(std::string label, std::vector<Amplitude> amplitudes);

    const std::vector<Subsystem>& subsystems() const { return subsystems_; }
    const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
    std::size_t size() const { return amplitudes_.size(); }

    bool has(const std::string& label) const;
    std::size_t position(const std::string& label) const;
    int dim_of(const std::string& label) const;
    std::vector<std::string> labels() const;

    double norm_squared() const;

private:
    std::vector<Subsystem> subsystems_;
    std::vector<Amplitude> amplitudes_;
};

class UnitaryOp {
public:
    UnitaryOp(int dim, std::vector<Amplitude> row_major);

    static UnitaryOp identity(int dim);
    // Columns are the images of |0>, |1>, ...
    static UnitaryOp from_columns(const std::vector<std::vector<Amplitude>>& columns);

    int dim() const { return dim_; }
    Amplitude operator()(int row, int col) const { return entries_[static_cast<std::size_t>(row * dim_ + col)]; }
    const std::vector<Amplitude>& entries() const { return entries_; }

    UnitaryOp adjoint() const;
    UnitaryOp operator*(const UnitaryOp& rhs) const;
    std::vector<Amplitude> apply(std::span<const Amplitude> v) const;

private:
    int dim_;
    std::vector<Amplitude> entries_;
};

UnitaryOp kron(const UnitaryOp& a, const UnitaryOp& b);

class MeasurementBasis {
public:
    MeasurementBasis(int dim, std::vector<std::vector<Amplitude>> vectors);

    // Basis given by the columns of a unitary, i.e. {U|j>}.
    static MeasurementBasis from_unitary(const UnitaryOp& u);
    static MeasurementBasis computational(int dim);

    int dim() const { return dim_; }
    const std::vector<Amplitude>& vector(int i) const { return vectors_[static_cast<std::size_t>(i)]; }
    const std::vector<std::vector<Amplitude>>& vectors() const { return vectors_; }

    UnitaryOp to_unitary() const;
    // Entrywise complex conjugate of every vector.
    MeasurementBasis conjugate() const;

private:
    int dim_;
    std::vector<std::vector<Amplitude>> vectors_;
};

StateVector tensor(std::span<const StateVector> parts);
StateVector tensor(std::initializer_list<StateVector> parts);

StateVector apply_unitary(const StateVector& state, const UnitaryOp& op,
                          std::span<const std::string> targets);
StateVector apply_unitary(const StateVector& state, const UnitaryOp& op,
                          std::initializer_list<std::string> targets);

struct MeasureResult {
    int outcome;
    StateVector post_state;
    double probability;
};

struct ForcedResult {
    StateVector post_state;
    double probability;
};

// Exact Born probabilities for every basis outcome.
std::vector<double> outcome_probabilities(const StateVector& state,
                                          std::span<const std::string> targets,
                                          const MeasurementBasis& basis);

MeasureResult measure(const StateVector& state, std::span<const std::string> targets,
                      const MeasurementBasis& basis, Rng& rng);
MeasureResult measure(const StateVector& state, std::initializer_list<std::string> targets,
                      const MeasurementBasis& basis, Rng& rng);

ForcedResult measure_forced(const StateVector& state, std::span<const std::string> targets,
                            const MeasurementBasis& basis, int outcome);
ForcedResult measure_forced(const StateVector& state, std::initializer_list<std::string> targets,
                            const MeasurementBasis& basis, int outcome);

// Projects `targets` onto `vector` and removes them, returning the normalized
// state of the remaining subsystems together with the projection probability.
// Used to drop registers that a measurement has left in a product state.
ForcedResult project_out(const StateVector& state, std::span<const std::string> targets,
                         std::span<const Amplitude> vector);

Amplitude inner_product(const StateVector& a, const StateVector& b);

// |<a|b>|^2. Both states must have identical subsystem lists.
double fidelity(const StateVector& a, const StateVector& b);

StateVector rename(const StateVector& state, const std::string& from, const std::string& to);

// Same state with subsystems listed in `order` (a permutation of the labels).
StateVector reorder(const StateVector& state, std::span<const std::string> order);

}  // namespace rqkd
