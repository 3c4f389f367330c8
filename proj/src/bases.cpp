#include "rqkd/bases.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rqkd {

namespace {

int mod(long long x, int d) {
    const long long r = x % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

void require_dimension(int d) {
    if (d < 2) throw std::invalid_argument("dimension must be at least 2");
}

}  // namespace

GeneralizedPauli::GeneralizedPauli(int dim, int z_exp, int x_exp) : d(dim) {
    require_dimension(dim);
    a = mod(z_exp, dim);
    b = mod(x_exp, dim);
}

Amplitude root_of_unity(int d, long long power) {
    const int p = mod(power, d);
    // Exact values for the common quarter turns keep d = 2 and d = 4 matrices free of 1e-17 residue.
    if (p == 0) return {1.0, 0.0};
    if (2 * p == d) return {-1.0, 0.0};
    if (4 * p == d) return {0.0, 1.0};
    if (4 * p == 3 * d) return {0.0, -1.0};
    return std::polar(1.0, 2.0 * std::numbers::pi * p / d);
}

UnitaryOp pauli_matrix(int d, int a, int b) {
    require_dimension(d);
    // (Z^a X^b)|j> = omega^(a (j + b)) |j + b>
    std::vector<Amplitude> e(static_cast<std::size_t>(d * d));
    for (int j = 0; j < d; ++j) {
        const int row = mod(j + b, d);
        e[static_cast<std::size_t>(row * d + j)] = root_of_unity(d, static_cast<long long>(a) * row);
    }
    return UnitaryOp(d, std::move(e));
}

UnitaryOp pauli_matrix(const GeneralizedPauli& p) { return pauli_matrix(p.d, p.a, p.b); }

bool is_prime(int n) {
    if (n < 2) return false;
    for (int f = 2; f * f <= n; ++f) {
        if (n % f == 0) return false;
    }
    return true;
}

MeasurementBasis fourier_basis(int d) {
    require_dimension(d);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<std::vector<Amplitude>> vs(static_cast<std::size_t>(d), std::vector<Amplitude>(static_cast<std::size_t>(d)));
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) vs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = s * root_of_unity(d, static_cast<long long>(i) * j);
    return MeasurementBasis(d, std::move(vs));
}

int max_mub_count(int d) { return d + 1; }

MubFamily mub_family(int d, int m) {
    if (!is_prime(d)) throw std::invalid_argument("mub_family requires a prime dimension, got " + std::to_string(d));
    if (m < 2 || m > max_mub_count(d)) {
        throw std::invalid_argument("mub_family: m must lie in [2, " + std::to_string(max_mub_count(d)) + "]");
    }
    MubFamily family{d, {}, {}};
    family.bases.push_back(MeasurementBasis::computational(d));
    family.bases.push_back(fourier_basis(d));
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    if (d == 2) {
        if (m == 3) {
            family.bases.emplace_back(2, std::vector<std::vector<Amplitude>>{{s, Amplitude{0.0, s}}, {s, Amplitude{0.0, -s}}});
        }
    } else {
        for (int t = 1; static_cast<int>(family.bases.size()) < m; ++t) {
            std::vector<std::vector<Amplitude>> vs(static_cast<std::size_t>(d), std::vector<Amplitude>(static_cast<std::size_t>(d)));
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < d; ++i) {
                    const long long phase = static_cast<long long>(t) * i * i + static_cast<long long>(j) * i;
                    vs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = s * root_of_unity(d, phase);
                }
            family.bases.emplace_back(d, std::move(vs));
        }
    }
    for (const auto& b : family.bases) family.unitaries.push_back(b.to_unitary());
    return family;
}

namespace {

MeasurementBasis build_bell(int d) {
    require_dimension(d);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    const auto n = static_cast<std::size_t>(d * d);
    std::vector<std::vector<Amplitude>> vs(n, std::vector<Amplitude>(n));
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            auto& v = vs[static_cast<std::size_t>(BellBasis::index(d, k, l))];
            for (int j = 0; j < d; ++j) {
                v[static_cast<std::size_t>(j * d + mod(j + l, d))] = s * root_of_unity(d, static_cast<long long>(j) * k);
            }
        }
    return MeasurementBasis(d * d, std::move(vs));
}

}  // namespace

BellBasis::BellBasis(int d) : d_(d), basis_(build_bell(d)) {}

StateVector BellBasis::state(int k, int l, const std::string& first, const std::string& second) const {
    return StateVector({{first, d_}, {second, d_}}, vector(k, l));
}

BellBasis bell_basis(int d) { return BellBasis(d); }

StateVector maximally_entangled(int d, const std::string& first, const std::string& second) {
    return bell_basis(d).state(0, 0, first, second);
}

MeasurementBasis ghz_basis() {
    const double s = 1.0 / std::numbers::sqrt2;
    auto ket = [s](int plus, int other, double sign) {
        std::vector<Amplitude> v(8);
        v[static_cast<std::size_t>(plus)] = s;
        v[static_cast<std::size_t>(other)] = sign * s;
        return v;
    };
    // Indices are the 3-bit strings read C1 C2 C, most significant first.
    return MeasurementBasis(8, {
                                   ket(0b000, 0b111, +1.0),  // a
                                   ket(0b001, 0b110, +1.0),  // b
                                   ket(0b000, 0b111, -1.0),  // c
                                   ket(0b001, 0b110, -1.0),  // d
                                   ket(0b010, 0b101, +1.0),  // e
                                   ket(0b011, 0b100, +1.0),  // f
                                   ket(0b100, 0b011, -1.0),  // g
                                   ket(0b101, 0b010, -1.0),  // h
                               });
}

bool ghz_outcome_is_phi_plus(int outcome) {
    if (outcome < 0 || outcome > 7) throw std::invalid_argument("GHZ outcome out of range");
    return outcome == 0 || outcome == 1 || outcome == 4 || outcome == 5;
}

std::array<std::array<GeneralizedPauli, 2>, 8> ghz_recycle_ops() {
    const GeneralizedPauli i(2, 0, 0), x(2, 0, 1), z(2, 1, 0), zx(2, 1, 1);
    // Each element is (I (x) P2 (x) P3)|a>; the inverse pair differs from
    // (P2, P3) only by a sign, which fidelity ignores.
    return {{
        {i, i},    // a
        {i, x},    // b
        {z, i},    // c
        {z, x},    // d
        {x, i},    // e
        {x, x},    // f
        {zx, x},   // g
        {zx, i},   // h
    }};
}

}  // namespace rqkd
