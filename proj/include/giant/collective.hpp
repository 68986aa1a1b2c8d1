// collective.hpp — Bath-mediated coherent and dissipative couplings between giant emitters

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "giant/coupling.hpp"

namespace giant {

using ComplexMatrix = Eigen::MatrixXcd;

struct CollectiveMatrices {
    ComplexMatrix J;                 // coherent exchange (energy)
    ComplexMatrix gamma;             // dissipative couplings (rate)
    std::vector<IntVec> positions;   // emitter centers n_j
    double eta{0.0};                 // regularizer, 0 after extrapolation
    double hermiticity_residue{0.0}; // max |M - M^†| / max |M| before symmetrisation
    ComplexMatrix J_error;           // extrapolation uncertainty, empty for a single η
    ComplexMatrix gamma_error;
    std::vector<double> spreads;     // max entry change between consecutive η values

    std::size_t emitter_count() const { return positions.size(); }
    // Smallest over largest eigenvalue of γ (negative values flag non-PSD).
    double gamma_min_eigenvalue() const;
    double gamma_max_eigenvalue() const;
};

// Real-axis split of 1/(x + iη): principal part x/(x²+η²) and pole part η/(x²+η²).
std::pair<double, double> regularized_kernels(double x, double eta);

// J_ij = N^{-d} Σ_k |G|² x/(x²+η²) e^{ik·(n_i-n_j)}
// γ_ij = 2 N^{-d} Σ_k |G|² η/(x²+η²) e^{ik·(n_i-n_j)}, with x = ω_e - ω(k)
CollectiveMatrices collective_couplings(const Lattice& lattice, const MomentumCoupling& gk,
                                        const std::vector<IntVec>& positions, double omega_e, double eta);

// Polynomial extrapolation of every entry to η → 0 through all supplied η.
// The list must hold at least three strictly decreasing values above 2·8J/N.
CollectiveMatrices eta_extrapolation(const Lattice& lattice, const MomentumCoupling& gk,
                                     const std::vector<IntVec>& positions, double omega_e,
                                     const std::vector<double>& eta_list);

double eta_floor(const Lattice& lattice);  // 2·8J/N

// One row per matrix entry: i, j, re, im (and err_re, err_im when available).
void write_matrix_csv(const std::filesystem::path& path, const ComplexMatrix& m, const ComplexMatrix& error,
                      const std::vector<std::string>& header);

} // namespace giant
