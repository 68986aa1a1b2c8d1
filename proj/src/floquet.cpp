// floquet.cpp — Drive schedules and the high-frequency (Floquet) expansion

#include "giant/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Dense>

#include "giant/error.hpp"

namespace giant {

namespace {

constexpr double pi = std::numbers::pi;

// e^{2πi num/den}, exact at multiples of a quarter turn.
Complex turn(long num, long den) {
    long r = num % den;
    if (r < 0) r += den;
    if (r == 0) return {1.0, 0.0};
    if (4 * r == den) return {0.0, 1.0};
    if (2 * r == den) return {-1.0, 0.0};
    if (4 * r == 3 * den) return {0.0, -1.0};
    const double angle = 2.0 * pi * static_cast<double>(r) / static_cast<double>(den);
    return {std::cos(angle), std::sin(angle)};
}

double turn_sin(long num, long den) { return turn(num, den).imag(); }

// (1/T)∫ over [slot, slot+1)T/slots of e^{-ijωt} dt.
Complex window_coefficient(int j, int slot, int slots) {
    if (j == 0) return {1.0 / slots, 0.0};
    const Complex a = turn(-static_cast<long>(j) * slot, slots);
    const Complex b = turn(-static_cast<long>(j) * (slot + 1), slots);
    return (a - b) / Complex(0.0, 2.0 * pi * j);
}

double fractional_period(double t, double period) {
    double f = std::fmod(t / period, 1.0);
    if (f < 0.0) f += 1.0;
    return f;
}

} // namespace

DriveSchedule::DriveSchedule(int dimension, double omega, std::vector<Segment> segments, IntVec center)
    : dimension_(dimension), omega_(omega), segments_(std::move(segments)), center_(center) {
    if (!(omega_ > 0.0) || !std::isfinite(omega_)) throw ConfigError("drive frequency must be positive and finite");
    if (segments_.empty()) throw ConfigError("drive schedule needs at least one position");
    if (dimension_ < 1 || dimension_ > 3) throw ConfigError("schedule dimension must be 1, 2 or 3");
    period_ = 2.0 * pi / omega_;
    std::set<IntVec> seen;
    for (const auto& s : segments_) {
        if (!seen.insert(s.offset).second) throw ConfigError("drive schedule positions must be distinct");
        if (!std::isfinite(s.amplitude.real()) || !std::isfinite(s.amplitude.imag()))
            throw ConfigError("drive schedule amplitude must be finite");
    }
    if (is_step()) {
        const int slots = segments_.front().slots;
        std::set<int> used;
        for (const auto& s : segments_) {
            if (s.slots != slots || s.slot < 0 || s.slot >= slots || !used.insert(s.slot).second)
                throw ConfigError("step windows must tile the period exactly once");
        }
        if (static_cast<int>(used.size()) != slots) throw ConfigError("step windows must tile the period exactly once");
    }
}

bool DriveSchedule::is_step() const noexcept {
    return std::all_of(segments_.begin(), segments_.end(), [](const Segment& s) { return s.envelope == Envelope::step; });
}

Complex DriveSchedule::envelope_value(std::size_t segment, double t) const {
    const Segment& s = segments_.at(segment);
    if (s.envelope == Envelope::raised_cosine) return s.amplitude * (0.5 * (1.0 + std::cos(omega_ * t - s.phase)));
    const double f = fractional_period(t, period_) * s.slots;
    return (f >= s.slot && f < s.slot + 1) ? s.amplitude : Complex{};
}

std::vector<Complex> DriveSchedule::amplitudes_at(double t) const {
    std::vector<Complex> out(segments_.size());
    for (std::size_t i = 0; i < segments_.size(); ++i) out[i] = envelope_value(i, t);
    return out;
}

std::vector<double> DriveSchedule::switching_times() const {
    std::set<double> times;
    for (const auto& s : segments_)
        if (s.envelope == Envelope::step) {
            times.insert(period_ * s.slot / s.slots);
            if (s.slot + 1 < s.slots) times.insert(period_ * (s.slot + 1) / s.slots);
        }
    return {times.begin(), times.end()};
}

CouplingProfile DriveSchedule::footprint() const {
    CouplingProfile p;
    p.dimension = dimension_;
    p.center = center_;
    p.design = "schedule";
    for (const auto& s : segments_) p.sites.push_back({s.offset, s.amplitude});
    return p;
}

DriveSchedule step_schedule(const std::vector<IntVec>& positions, const std::vector<Complex>& amplitudes,
                            double omega_drive, int dimension) {
    if (positions.empty()) throw ConfigError("step schedule needs at least one position");
    if (positions.size() != amplitudes.size())
        throw ConfigError("step schedule needs one amplitude per position");
    const int n_p = static_cast<int>(positions.size());
    std::vector<Segment> segments;
    for (int a = 0; a < n_p; ++a) {
        Segment s;
        s.offset = positions[static_cast<std::size_t>(a)];
        s.amplitude = amplitudes[static_cast<std::size_t>(a)];
        s.envelope = Envelope::step;
        s.slot = a;
        s.slots = n_p;
        segments.push_back(s);
    }
    return DriveSchedule(dimension, omega_drive, std::move(segments));
}

DriveSchedule smooth_two_site_schedule(double g, double omega_drive, IntVec first, IntVec second, int dimension) {
    Segment a;
    a.offset = first;
    a.amplitude = g;
    a.envelope = Envelope::raised_cosine;
    a.phase = 0.0;
    Segment b = a;
    b.offset = second;
    b.phase = pi;  // cos²((ωt - π)/2) = sin²(ωt/2)
    return DriveSchedule(dimension, omega_drive, {a, b});
}

CouplingProfile time_average(const DriveSchedule& schedule) {
    CouplingProfile p;
    p.dimension = schedule.dimension();
    p.center = schedule.center();
    p.design = "time-average";
    const auto n = schedule.segments().size();
    p.normalization = 1.0 / static_cast<double>(n);
    for (const auto& s : schedule.segments()) {
        const Complex avg = s.envelope == Envelope::step ? s.amplitude / static_cast<double>(s.slots) : s.amplitude * 0.5;
        p.sites.push_back({s.offset, avg});
    }
    return p;
}

Complex step_coefficient(int j, int alpha, int n_p) {
    if (j == 0) return {1.0 / n_p, 0.0};
    const Complex prefactor = 1.0 / Complex(0.0, 2.0 * pi * j);
    return prefactor * turn(-static_cast<long>(alpha) * j, n_p) * (turn(j, n_p) - 1.0);
}

Complex HarmonicDecomposition::reconstruct(std::size_t segment, double t, double omega) const {
    Complex v = dc.sites.at(segment).amplitude;
    for (const auto& [j, profile] : harmonics) v += profile.sites.at(segment).amplitude * std::polar(1.0, j * omega * t);
    return v;
}

HarmonicDecomposition harmonic_coefficients(const DriveSchedule& schedule, int j_max) {
    if (j_max < 1) throw ConfigError("j_max must be >= 1");
    HarmonicDecomposition h;
    h.j_max = j_max;
    h.dc = time_average(schedule);
    h.dc.design = "harmonic-0";
    for (int j = -j_max; j <= j_max; ++j) {
        if (j == 0) continue;
        CouplingProfile p = h.dc;
        p.design = "harmonic-" + std::to_string(j);
        for (std::size_t a = 0; a < schedule.segments().size(); ++a) {
            const Segment& s = schedule.segments()[a];
            Complex c{};
            if (s.envelope == Envelope::step) {
                c = window_coefficient(j, s.slot, s.slots);
            } else if (std::abs(j) == 1) {
                // cos²((ωt-φ)/2) = 1/2 + (e^{i(ωt-φ)} + e^{-i(ωt-φ)})/4
                c = 0.25 * std::polar(1.0, -j * s.phase);
            }
            p.sites[a].amplitude = c * s.amplitude;
        }
        h.harmonics.emplace(j, std::move(p));
    }
    for (std::size_t a = 0; a < schedule.segments().size(); ++a) {
        const Segment& s = schedule.segments()[a];
        if (s.envelope != Envelope::step) continue;
        // Parseval: mean of f² over the period is 1/slots.
        double kept = 1.0 / (static_cast<double>(s.slots) * s.slots);
        for (int j = 1; j <= j_max; ++j) kept += 2.0 * std::norm(window_coefficient(j, s.slot, s.slots));
        const double tail2 = std::max(0.0, 1.0 / s.slots - kept);
        h.tail_bound = std::max(h.tail_bound, std::abs(s.amplitude) * std::sqrt(tail2));
    }
    return h;
}

double first_order_norm_bound(double g_max, std::size_t n_p, double omega) {
    if (!(omega > 0.0)) throw ConfigError("drive frequency must be positive");
    if (g_max < 0.0) throw ConfigError("coupling bound must be non-negative");
    const double np = static_cast<double>(n_p);
    return 4.0 * g_max * g_max * np * np * apery_zeta3 / (pi * pi * omega);
}

FirstOrderCorrection first_order_correction(const DriveSchedule& schedule, int j_max) {
    if (!schedule.is_step())
        throw UnsupportedError("first-order correction has a closed form for step schedules only");
    if (j_max < 1) throw ConfigError("j_max must be >= 1");
    const auto& segs = schedule.segments();
    const std::size_t n = segs.size();
    const long n_p = static_cast<long>(n);
    FirstOrderCorrection out;
    out.n_p = n;
    out.coefficients.assign(n * n, Complex{});
    double g_max = 0.0;
    for (const auto& s : segs) g_max = std::max(g_max, std::abs(s.amplitude));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            // α, β are the 1-based time slots of the two sites.
            const long diff = static_cast<long>(segs[b].slot) - segs[a].slot;
            double sum = 0.0;
            for (long j = 1; j <= j_max; ++j) {
                const double s1 = turn_sin(j, 2 * n_p);  // sin(jπ/N_p)
                const double s2 = turn_sin(diff * j, n_p);  // sin(2π(β-α)j/N_p)
                sum += s1 * s1 * s2 / static_cast<double>(j * j * j);
            }
            const Complex pref = Complex(0.0, 4.0) * segs[a].amplitude * std::conj(segs[b].amplitude) /
                                 (pi * pi * schedule.omega());
            out.coefficients[a * n + b] = pref * sum;
        }
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 0.5 * out.coefficients[a * n + b];
    out.operator_norm = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
    out.norm_bound = first_order_norm_bound(g_max, n, schedule.omega());
    return out;
}

} // namespace giant
