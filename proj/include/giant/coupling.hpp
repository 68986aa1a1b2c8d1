// coupling.hpp — Giant-emitter coupling footprints in real and momentum space

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "giant/lattice.hpp"

namespace giant {

struct Site {
    IntVec offset{};
    Complex amplitude{};
};

// Real-space footprint of one emitter. Amplitudes already include any
// 1/N_p-style prefactor; `normalization` only records which one was used.
struct CouplingProfile {
    int dimension{2};
    std::vector<Site> sites;
    IntVec center{};
    double normalization{1.0};
    std::string design;  // free-form provenance label, may be empty

    // Distinct offsets, at least one finite nonzero amplitude.
    void validate() const;
    double g_max() const;
    std::size_t support_size() const;  // nonzero amplitudes
    double mass() const;               // Σ |amplitude|²
};

struct MomentumCoupling {
    std::vector<Complex> values;  // grid order of the owning Lattice
    std::string source;           // "sampled-from-profile" or "analytic-design"
    std::string design;
};

enum class Design { local, quasi1d, trap, purify, chiral, vtype, bcc_pair };

Design parse_design(std::string_view name);
const char* to_string(Design design) noexcept;
bool is_analytic(Design design) noexcept;  // chiral and vtype only exist in momentum space

// G(k) = Σ_sites g e^{-ik·(center + offset)} on every grid momentum.
MomentumCoupling gk_from_profile(const CouplingProfile& profile, const Lattice& lattice);

CouplingProfile named_profile(Design design, double g, int dimension);
MomentumCoupling analytic_design(Design design, double g, const Lattice& lattice);
std::variant<CouplingProfile, MomentumCoupling> named_design(Design design, double g, const Lattice& lattice);

// Samples any named design on the grid, whichever representation it has.
MomentumCoupling design_gk(Design design, double g, const Lattice& lattice);

// g(n) = N^{-d} Σ_k G(k) e^{+ik·n} on all N^d sites (exact inverse of gk_from_profile).
CouplingProfile inverse_design(const MomentumCoupling& gk, const Lattice& lattice);

// Keeps the n_tr largest-|amplitude| nonzero sites, ties broken by ascending
// L1 norm of the offset and then lexicographic offset. No rescaling.
CouplingProfile truncate(const CouplingProfile& profile, int n_tr);

// Unweighted mean position (center + offset) of the nonzero sites.
std::array<double, 3> footprint_centroid(const CouplingProfile& profile);

// Structured text document: {dimension, design, center, normalization, sites: [{offset, re, im}]}.
std::string profile_to_json(const CouplingProfile& profile);
CouplingProfile profile_from_json(std::string_view text);

} // namespace giant
