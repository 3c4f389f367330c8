#pragma once

// Generalized Pauli operators, mutually unbiased bases, the generalized Bell
// basis and the 3-qubit GHZ-type basis used by the third-party protocol.
//
// Phase convention: omega = exp(2*pi*i/d), X|j> = |j+1 mod d>, Z|j> = omega^j |j>.

#include <array>
#include <string>
#include <vector>

#include "rqkd/state.hpp"

namespace rqkd {

/// Z^a X^b in dimension d, exponents reduced mod d.
struct GeneralizedPauli {
    int d = 2;
    int a = 0;  // Z exponent
    int b = 0;  // X exponent

    GeneralizedPauli() = default;
    GeneralizedPauli(int dim, int z_exp, int x_exp);

    bool operator==(const GeneralizedPauli&) const = default;
};

Amplitude root_of_unity(int d, long long power);

UnitaryOp pauli_matrix(int d, int a, int b);
UnitaryOp pauli_matrix(const GeneralizedPauli& p);

bool is_prime(int n);

MeasurementBasis fourier_basis(int d);

struct MubFamily {
    int d;
    std::vector<MeasurementBasis> bases;
    // unitaries[i] maps the computational basis S onto bases[i]; unitaries[0] = I.
    std::vector<UnitaryOp> unitaries;

    int size() const { return static_cast<int>(bases.size()); }
};

// Largest family mub_family can build for prime d (d + 1).
int max_mub_count(int d);

/// m pairwise-unbiased bases for prime d: S, the Fourier basis, then the
/// quadratic-phase bases omega^(t i^2 + j i)/sqrt(d), t = 1..d-1 (odd d), or
/// the Y eigenbasis (|0> +- i|1>)/sqrt(2) for d = 2.
MubFamily mub_family(int d, int m);

/// Generalized Bell basis; vector k*d + l is (1/sqrt d) sum_j omega^(jk) |j>|j+l>.
class BellBasis {
public:
    explicit BellBasis(int d);

    int d() const { return d_; }
    static int index(int d, int k, int l) { return k * d + l; }
    const MeasurementBasis& basis() const { return basis_; }
    const std::vector<Amplitude>& vector(int k, int l) const { return basis_.vector(index(d_, k, l)); }
    StateVector state(int k, int l, const std::string& first, const std::string& second) const;

private:
    int d_;
    MeasurementBasis basis_;
};

BellBasis bell_basis(int d);

// |psi_{0,0}> = (1/sqrt d) sum_j |j>|j> on the two given labels.
StateVector maximally_entangled(int d, const std::string& first, const std::string& second);

/// The eight 3-qubit vectors |a>..|h>, in that order:
///   a = (000 + 111), b = (001 + 110), c = (000 - 111), d = (001 - 110),
///   e = (010 + 101), f = (011 + 100), g = (100 - 011), h = (101 - 010), all / sqrt 2.
MeasurementBasis ghz_basis();

inline constexpr std::array<char, 8> kGhzOutcomeNames{'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h'};

// Outcome classes of the GHZ-basis teleportation: a, b, e, f leave the other
// pair in Phi+; c, d, g, h leave it in Phi-.
bool ghz_outcome_is_phi_plus(int outcome);

/// Local Paulis (on qubits 2 and 3) that take GHZ-basis element `outcome`
/// back to |a> up to global phase.
std::array<std::array<GeneralizedPauli, 2>, 8> ghz_recycle_ops();

}  // namespace rqkd
