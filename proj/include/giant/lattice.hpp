// lattice.hpp — Bath geometries, momentum grids, dispersions and resonant contours

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace giant {

using Complex = std::complex<double>;
using IntVec = std::array<int, 3>;  // unused trailing components stay 0

enum class Model { square_tb, bcc_tb };

Model parse_model(std::string_view name);
const char* to_string(Model model) noexcept;

struct BathSpec {
    int dimension{2};
    int size{64};                    // N sites per axis, periodic boundaries
    Model model{Model::square_tb};
    double hopping{1.0};             // J
    double band_center{0.0};         // ω_a

    // Throws ConfigError on any invariant violation.
    void validate() const;
    std::size_t mode_count() const;  // N^d
};

// A grid momentum k_i = 2π m_i / N with integer m_i in [-N/2, N/2).
struct Momentum {
    int dimension{0};
    IntVec index{};
    std::array<double, 3> k{};
};

// Precomputed tables for one validated BathSpec. Immutable after construction.
//
// Momenta and real-space sites share one ordering: row-major over centered
// integer coordinates in [-N/2, N/2), last axis fastest.
class Lattice {
public:
    explicit Lattice(const BathSpec& spec);

    const BathSpec& spec() const noexcept { return spec_; }
    int size() const noexcept { return spec_.size; }
    int dimension() const noexcept { return spec_.dimension; }
    std::size_t mode_count() const noexcept { return count_; }

    IntVec coordinates(std::size_t linear) const;
    // Wraps each coordinate periodically before indexing.
    std::size_t linear_index(const IntVec& coords) const;
    Momentum momentum(std::size_t linear) const;

    // Trigonometric tables in units of a full turn over N: angle 2πj/N.
    // Symmetric by construction so cos(π - x) == -cos(x) bit-exactly.
    double cos_turn(long j) const noexcept { return cos_[wrap(j)]; }
    double sin_turn(long j) const noexcept { return sin_[wrap(j)]; }
    // e^{-2πi j/N}
    Complex phase(long j) const noexcept { return {cos_turn(j), -sin_turn(j)}; }
    // e^{-i k·n} for the momentum/site pair given by linear indices.
    Complex plane_wave(std::size_t k_linear, const IntVec& site) const;

    std::span<const double> energies() const noexcept { return energies_; }
    double energy(std::size_t linear) const noexcept { return energies_[linear]; }
    double dispersion(const IntVec& index) const;
    std::pair<double, double> band_edges() const noexcept;

    // sign = +1: out(n) = scale Σ_k in(k) e^{+ik·n}; sign = -1: out(k) = scale Σ_n in(n) e^{-ik·n}.
    std::vector<Complex> transform(std::span<const Complex> in, int sign, double scale) const;

private:
    std::size_t wrap(long j) const noexcept {
        const long n = spec_.size;
        long r = j % n;
        return static_cast<std::size_t>(r < 0 ? r + n : r);
    }
    BathSpec spec_;
    std::size_t count_{0};
    std::vector<double> cos_;
    std::vector<double> sin_;
    std::vector<double> energies_;
};

double dispersion(const BathSpec& spec, const Momentum& k);
std::vector<Momentum> momentum_grid(const BathSpec& spec);
std::vector<Momentum> resonant_modes(const BathSpec& spec, double omega_e, double tol);

} // namespace giant
