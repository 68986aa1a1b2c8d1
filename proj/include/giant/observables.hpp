// observables.hpp — Emission patterns, spectral densities, decay rates and field export

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "giant/dynamics.hpp"

namespace giant {

// Momentum-space population shares: F1 (k_x>0, k_y>0), F2 (k_x<0, k_y>0),
// F3 (k_x<0, k_y<0), F4 (k_x>0, k_y<0). A mode on a quadrant boundary
// (k_x or k_y equal to 0 or -π) is split equally among the adjacent quadrants.
struct QuadrantFractions {
    std::array<double, 4> f{};
    double time{0.0};

    double operator[](int quadrant) const { return f.at(static_cast<std::size_t>(quadrant - 1)); }
    // 1 - Σ_{q in target} F_q, target quadrants numbered 1..4.
    double miss(const std::vector<int>& target) const;
};

QuadrantFractions quadrant_fractions(const ExcitationState& state, const Lattice& lattice);

// Quadrants a design leaves coupled on the ω_a resonance contour under this
// toolkit's transform conventions (chiral → {1}, vtype → {2, 3}).
std::vector<int> design_target_quadrants(Design design);

struct SpectralDensity {
    std::vector<double> bin_edges;  // n_bins + 1
    std::vector<double> values;     // per unit energy
    double total_weight{0.0};       // N^{-d} Σ_k |G(k)|² / g²

    double bin_width() const { return bin_edges[1] - bin_edges[0]; }
    std::size_t bin_of(double energy) const;
    // For even n_bins the band center is a bin edge; this is the bin just
    // below it, which excludes modes lying exactly on the resonance.
    double center_value() const;
};

// Histogram of ω(k) over the band weighted by |G(k)|², normalised by N^d g² Δ.
// g <= 0 uses max_k |G(k)|. Bins are half-open [lo, hi), the top edge closed.
SpectralDensity spectral_density(const MomentumCoupling& gk, const Lattice& lattice, int n_bins = 200, double g = 0.0);

// Lorentzian δ_η(x) = (η/π) / (x² + η²)
double lorentzian(double x, double eta);
double default_eta(const Lattice& lattice);  // 8πJ/N

// Γ_M = (2π/N^d) Σ_k |G(k)|² δ_η(ω_e - ω(k))
double golden_rule_rate(const MomentumCoupling& gk, const Lattice& lattice, double omega_e, double eta);

struct SurvivalFit {
    std::vector<double> times;
    std::vector<double> survival;  // |C_e|²
    double fitted_rate{0.0};
    double golden_rule_rate{0.0};
    std::vector<std::string> warnings;
};

// Least-squares slope of ln|C_e|² over the window (from the trajectory's emitter series).
SurvivalFit survival_and_rate(const Trajectory& trajectory, double window_start, double window_end,
                              const MomentumCoupling& gk, const Lattice& lattice, double omega_e, double eta);

// Fraction of Σ|C_n|² on sites inside the cone of the given half-angle around
// `direction`, measured from `apex` with minimum-image displacements. The apex
// site itself is excluded. 2D only.
double directional_mask_population(std::span<const Complex> field, const Lattice& lattice,
                                   std::array<double, 2> direction, double half_angle, std::array<double, 2> apex);

// Σ|C_n|² over sites whose Chebyshev distance to every footprint site exceeds
// `radius`. For a bath field of a unit-norm state this is a share of the total.
double population_beyond_radius(std::span<const Complex> field, const Lattice& lattice, const CouplingProfile& footprint,
                                int radius);

double cosine_similarity(std::span<const double> a, std::span<const double> b);
std::vector<double> magnitudes(std::span<const Complex> values);
std::vector<double> densities(std::span<const Complex> values);  // |v|²

enum class FieldFormat { binary_f64, pgm8 };

FieldFormat parse_field_format(std::string_view name);

struct FieldMeta {
    std::vector<std::size_t> shape;
    double time{0.0};
    std::map<std::string, std::string> metadata;
};

// binary_f64: raw little-endian doubles plus `<path>.json` sidecar.
// pgm8: 8-bit grayscale (2D shapes), linear over [min, max], scale in a header comment.
void export_field(std::span<const double> values, const FieldMeta& meta, const std::filesystem::path& path,
                  FieldFormat format);
// Complex grids are exported as |value|².
void export_field(std::span<const Complex> values, const FieldMeta& meta, const std::filesystem::path& path,
                  FieldFormat format);
std::vector<double> read_binary_field(const std::filesystem::path& path);

// CSV with header row; every number printed with 17 significant digits.
void write_series_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows, const std::vector<std::string>& comments = {});
std::string format_double(double v);

} // namespace giant
