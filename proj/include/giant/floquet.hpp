// floquet.hpp — Periodic drive schedules, time averages and high-frequency corrections

#pragma once

#include <map>
#include <vector>

#include "giant/coupling.hpp"

namespace giant {

enum class Envelope {
    step,           // amplitude on [slot, slot + 1)·T/slots, zero elsewhere
    raised_cosine,  // amplitude·cos²((ωt - phase)/2)
};

struct Segment {
    IntVec offset{};
    Complex amplitude{};  // peak value g_{n_α}
    Envelope envelope{Envelope::step};
    int slot{0};          // step only
    int slots{1};
    double phase{0.0};    // raised_cosine only
};

class DriveSchedule {
public:
    DriveSchedule(int dimension, double omega, std::vector<Segment> segments, IntVec center = {});

    int dimension() const noexcept { return dimension_; }
    double omega() const noexcept { return omega_; }
    double period() const noexcept { return period_; }
    const IntVec& center() const noexcept { return center_; }
    const std::vector<Segment>& segments() const noexcept { return segments_; }
    bool is_step() const noexcept;

    // Ω_α(t); step windows are half-open [start, end) modulo the period.
    Complex envelope_value(std::size_t segment, double t) const;
    std::vector<Complex> amplitudes_at(double t) const;
    // Times in [0, T) at which some step envelope switches.
    std::vector<double> switching_times() const;
    // Peak-amplitude profile, used to build the per-site phase arrays.
    CouplingProfile footprint() const;

private:
    int dimension_;
    double omega_;
    double period_;
    std::vector<Segment> segments_;
    IntVec center_;
};

// Segment α (1-based) active on [(α-1)T/N_p, αT/N_p).
DriveSchedule step_schedule(const std::vector<IntVec>& positions, const std::vector<Complex>& amplitudes,
                            double omega_drive, int dimension = 2);

// Ω_1 = g cos²(ωt/2) on `first`, Ω_2 = g sin²(ωt/2) on `second`.
DriveSchedule smooth_two_site_schedule(double g, double omega_drive, IntVec first = {0, 0, 0},
                                       IntVec second = {1, 1, 0}, int dimension = 2);

// Closed-form (1/T)∫Ω_α dt for every segment.
CouplingProfile time_average(const DriveSchedule& schedule);

// Fourier coefficient of the step envelope f_α: (1/2πij) e^{-2πiαj/N_p}(e^{2πij/N_p} - 1), α 1-based.
Complex step_coefficient(int j, int alpha, int n_p);

struct HarmonicDecomposition {
    CouplingProfile dc;
    std::map<int, CouplingProfile> harmonics;  // j = ±1..±j_max
    int j_max{0};
    // Root-mean-square truncation error over one period, maximised over
    // segments: sqrt(Σ_{|j|>j_max} |C_{j,α} g_α|²). Exactly 0 for raised cosines.
    double tail_bound{0.0};

    // dc + Σ_j harmonics[j] e^{ijωt} for one segment.
    Complex reconstruct(std::size_t segment, double t, double omega) const;
};

HarmonicDecomposition harmonic_coefficients(const DriveSchedule& schedule, int j_max);

struct FirstOrderCorrection {
    // N_p × N_p row-major coefficients c_{αβ} of Σ c_{αβ} a†_α a_β σ_z.
    std::vector<Complex> coefficients;
    std::size_t n_p{0};
    // Largest singular value of the induced bath-block operator (|σ_z| = 1/2).
    double operator_norm{0.0};
    // 4 g_max² N_p² ζ(3) / (π² ω)
    double norm_bound{0.0};

    Complex at(std::size_t alpha, std::size_t beta) const { return coefficients[alpha * n_p + beta]; }
};

inline constexpr double apery_zeta3 = 1.2020569031595942853997;

double first_order_norm_bound(double g_max, std::size_t n_p, double omega);

// Step schedules only; anything else throws UnsupportedError.
FirstOrderCorrection first_order_correction(const DriveSchedule& schedule, int j_max);

} // namespace giant
