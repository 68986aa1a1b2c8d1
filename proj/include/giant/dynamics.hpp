// dynamics.hpp — Single-excitation propagation in momentum space and a dense real-space oracle

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "giant/coupling.hpp"
#include "giant/floquet.hpp"

namespace giant {

// |Ψ(t)⟩ = C_e |e, vac⟩ + Σ_k C_k |g, 1_k⟩
struct ExcitationState {
    Complex emitter{1.0, 0.0};
    std::vector<Complex> bath;  // C_k in lattice grid order
    double time{0.0};

    double bath_population() const;
    double norm() const;  // |C_e|² + Σ|C_k|²
};

using EmitterCoupling = std::variant<CouplingProfile, MomentumCoupling, DriveSchedule>;

struct EmitterSpec {
    double omega_e{0.0};
    EmitterCoupling coupling;
};

struct EvolveOptions {
    double dt{0.01};
    // Allowed |norm - 1| per unit time before the run is declared failed.
    double norm_drift_rate{1e-9};
    // Record C_e(t) every `series_stride` steps (0 disables the series).
    int series_stride{1};
};

struct Trajectory {
    std::vector<ExcitationState> snapshots;
    std::vector<double> series_times;
    std::vector<Complex> series_emitter;
    double norm_drift{0.0};  // |norm(t_final) - 1|
    double max_step{0.0};    // largest step actually taken
    std::size_t steps{0};
    std::vector<std::string> warnings;
};

// Fixed-step classical RK4 on i dC_e/dt = ω_e C_e + Σ_k ḡ(k)* C_k,
// i dC_k/dt = ω(k) C_k + ḡ(k) C_e, with ḡ(k) = G(k, t) / sqrt(N^d).
// Steps shrink so that snapshots and step-envelope switches fall on step
// boundaries. Initial state: excited emitter, empty bath.
Trajectory evolve(const Lattice& lattice, const EmitterSpec& emitter, double t_final,
                  const std::vector<double>& snapshot_times, const EvolveOptions& options = {});

// Per-mode couplings ḡ(k) = G(k) / sqrt(N^d) of a static coupling.
std::vector<Complex> mode_couplings(const Lattice& lattice, const EmitterCoupling& coupling);

// C_n = N^{-d/2} Σ_k C_k e^{ik·n}, sites in grid order.
std::vector<Complex> bath_realspace(const ExcitationState& state, const Lattice& lattice);
std::vector<Complex> bath_momentum(std::span<const Complex> sites, const Lattice& lattice);

// Perturbative late-time bath state G(k) e^{-iω(k)t} / (ω(k) - ω_e + iΓ_M/2), normalised to unit norm.
std::vector<Complex> asymptotic_bath(const Lattice& lattice, const MomentumCoupling& gk, double omega_e,
                                     double gamma_m, double t);

struct DenseOptions {
    double dt{1e-3};  // time-dependent couplings only
    std::size_t max_dimension{8001};
    int max_size{20};
};

// Explicit (N^d + 1)-dimensional single-excitation Hamiltonian in real space.
// Index 0 is the emitter, index 1 + i is lattice site i in grid order.
std::vector<Complex> dense_hamiltonian(const Lattice& lattice, double omega_e, const CouplingProfile& profile);

// Eigendecomposition (static coupling) or fine-step real-space RK4 (schedule).
// Returns the state with the bath transformed to momentum space.
ExcitationState dense_oracle_evolve(const Lattice& lattice, const EmitterSpec& emitter, double t_final,
                                    const DenseOptions& options = {});

} // namespace giant
