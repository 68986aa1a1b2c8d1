// support.hpp — Shared helpers and independent reference computations for the unit suite

#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "giant/coupling.hpp"
#include "giant/lattice.hpp"

namespace giant::testing {

inline constexpr double pi = std::numbers::pi;

inline Lattice square(int n, int dim = 2) { return Lattice(BathSpec{dim, n, Model::square_tb, 1.0, 0.0}); }
inline Lattice bcc(int n) { return Lattice(BathSpec{3, n, Model::bcc_tb, 1.0, 0.0}); }

// Plain std::cos evaluation of the dispersion, independent of the lattice tables.
inline double reference_energy(const Lattice& lattice, const IntVec& m) {
    const double n = lattice.size();
    const double j = lattice.spec().hopping;
    double k[3];
    for (int a = 0; a < 3; ++a) k[a] = 2.0 * pi * m[static_cast<std::size_t>(a)] / n;
    if (lattice.spec().model == Model::bcc_tb)
        return lattice.spec().band_center - 2.0 * j * (std::cos(k[0]) + std::cos(k[1]) + std::cos(k[2]) + std::cos(k[0] + k[1] + k[2]));
    double s = 0.0;
    for (int a = 0; a < lattice.dimension(); ++a) s += std::cos(k[a]);
    return lattice.spec().band_center - 2.0 * j * s;
}

// Direct O(sites) evaluation of Σ g e^{-ik·(center+offset)} with std::polar.
inline Complex reference_gk(const CouplingProfile& p, const Lattice& lattice, const IntVec& m) {
    Complex s{};
    const double n = lattice.size();
    for (const auto& site : p.sites) {
        double phase = 0.0;
        for (int a = 0; a < p.dimension; ++a) {
            const auto u = static_cast<std::size_t>(a);
            phase += 2.0 * pi * m[u] * (p.center[u] + site.offset[u]) / n;
        }
        s += site.amplitude * std::polar(1.0, -phase);
    }
    return s;
}

inline double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Random profile with `count` distinct offsets inside a box of half-width `reach`.
inline CouplingProfile random_profile(std::mt19937_64& rng, int count, int reach, double g_max, int dim = 2) {
    std::uniform_int_distribution<int> off(-reach, reach);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    CouplingProfile p;
    p.dimension = dim;
    while (static_cast<int>(p.sites.size()) < count) {
        IntVec o{};
        for (int a = 0; a < dim; ++a) o[static_cast<std::size_t>(a)] = off(rng);
        bool dup = false;
        for (const auto& s : p.sites) dup = dup || s.offset == o;
        if (dup) continue;
        Complex z{amp(rng), amp(rng)};
        if (std::abs(z) > 1.0) z /= std::abs(z);
        p.sites.push_back({o, g_max * z});
    }
    return p;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("giant_unit_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

} // namespace giant::testing
