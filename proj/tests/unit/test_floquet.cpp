// test_floquet.cpp — Drive schedules, harmonic content and the first-order correction

#include <doctest.h>

#include <Eigen/Dense>

#include "giant/error.hpp"
#include "giant/floquet.hpp"
#include "support.hpp"

using namespace giant;
using namespace giant::testing;

namespace {

std::vector<IntVec> diagonal(int n) {
    std::vector<IntVec> out;
    for (int a = 0; a < n; ++a) out.push_back({a, a, 0});
    return out;
}

// Midpoint-rule Fourier coefficient (1/T)∫ f(t) e^{-ijωt} dt of one envelope.
Complex numeric_coefficient(const DriveSchedule& s, std::size_t segment, int j, int samples) {
    Complex acc{};
    const double period = s.period();
    for (int i = 0; i < samples; ++i) {
        const double t = (i + 0.5) * period / samples;
        acc += s.envelope_value(segment, t) * std::polar(1.0, -j * s.omega() * t);
    }
    return acc / static_cast<double>(samples);
}

// Single-excitation representation of Σ_j [V^(j), V^(-j)] / (jω): basis
// {|e, vac>, |g, 1_α>}, V^(j) couples the emitter to site α with C_{j,α} g_α.
Eigen::MatrixXcd commutator_oracle(const std::vector<Complex>& g, double omega, int j_max) {
    const auto n = static_cast<Eigen::Index>(g.size());
    const int n_p = static_cast<int>(g.size());
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    const auto build = [&](int j) {
        Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n + 1, n + 1);
        for (Eigen::Index a = 0; a < n; ++a) {
            // Independent closed form of the window integral.
            const double lo = 2.0 * pi * j * static_cast<double>(a) / n_p;
            const double hi = 2.0 * pi * j * static_cast<double>(a + 1) / n_p;
            const Complex c = (std::polar(1.0, -lo) - std::polar(1.0, -hi)) / Complex(0.0, 2.0 * pi * j);
            v(a + 1, 0) = c * g[static_cast<std::size_t>(a)];
            v(0, a + 1) = c * std::conj(g[static_cast<std::size_t>(a)]);
        }
        return v;
    };
    for (int j = 1; j <= j_max; ++j) {
        const auto vp = build(j), vm = build(-j);
        total += (vp * vm - vm * vp) / (j * omega);
    }
    return total;
}

} // namespace

TEST_CASE("step schedule windows") {
    const auto one = step_schedule({{0, 0, 0}}, {0.1}, 3.0);
    for (double t : {0.0, 0.4, 1.7, 100.3}) CHECK(one.envelope_value(0, t) == Complex{0.1, 0.0});

    const auto two = step_schedule(diagonal(2), {0.1, Complex{0.0, 0.2}}, 2.0);
    const double T = two.period();
    CHECK(T == doctest::Approx(pi));
    auto a = two.amplitudes_at(0.25 * T);
    CHECK(a[0] == Complex{0.1, 0.0});
    CHECK(a[1] == Complex{});
    a = two.amplitudes_at(0.75 * T);
    CHECK(a[0] == Complex{});
    CHECK(a[1] == Complex{0.0, 0.2});
    CHECK(two.switching_times().size() == 2);

    const auto four = step_schedule(diagonal(4), std::vector<Complex>(4, 1.0), 1.0);
    const auto avg = time_average(four);
    for (const auto& s : avg.sites) CHECK(s.amplitude == Complex{0.25, 0.0});
    for (std::size_t s = 0; s < 4; ++s) CHECK(std::abs(numeric_coefficient(four, s, 0, 40000) - 0.25) < 1e-12);

    CHECK_THROWS_AS(step_schedule({}, {}, 1.0), ConfigError);
    CHECK_THROWS_AS(step_schedule(diagonal(2), {0.1, 0.1}, 0.0), ConfigError);
    CHECK_THROWS_AS(step_schedule({{0, 0, 0}, {0, 0, 0}}, {0.1, 0.1}, 1.0), ConfigError);
}

TEST_CASE("step time averages are exact") {
    const double g = 0.37;
    const auto s2 = time_average(step_schedule(diagonal(2), {g, g}, 5.0));
    CHECK(s2.sites[0].amplitude == Complex{g / 2, 0.0});
    CHECK(s2.sites[1].amplitude == Complex{g / 2, 0.0});
    const auto s4 = time_average(step_schedule(diagonal(4), {g, 0.0, 0.0, 0.0}, 5.0));
    CHECK(s4.sites[0].amplitude == Complex{g / 4, 0.0});
    for (std::size_t i = 1; i < 4; ++i) CHECK(s4.sites[i].amplitude == Complex{});
}

TEST_CASE("smooth two-site schedule") {
    const double g = 0.1, w = 3.0;
    const auto s = smooth_two_site_schedule(g, w);
    auto a = s.amplitudes_at(0.0);
    CHECK(a[0] == Complex{g, 0.0});
    CHECK(std::abs(a[1]) < 1e-18);
    a = s.amplitudes_at(pi / w);
    CHECK(std::abs(a[0]) < 1e-17);
    CHECK(std::abs(a[1] - g) < 1e-17);
    for (double t = 0.0; t < 5.0; t += 0.137) {
        a = s.amplitudes_at(t);
        CHECK(std::abs(a[0] + a[1] - g) < 1e-15);
        CHECK(std::abs(a[0] - g * std::pow(std::cos(w * t / 2), 2)) < 1e-15);
    }
    const auto avg = time_average(s);
    CHECK(avg.sites[0].amplitude == Complex{g / 2, 0.0});
    CHECK(avg.sites[1].amplitude == Complex{g / 2, 0.0});
    CHECK(!s.is_step());
}

TEST_CASE("step Fourier coefficients") {
    CHECK(std::abs(step_coefficient(1, 1, 2) - Complex{0.0, -1.0 / pi}) < 1e-15);
    CHECK(std::abs(step_coefficient(1, 1, 2)) == doctest::Approx(0.3183098861837907));
    for (int n_p : {1, 2, 3, 4, 7})
        for (int alpha = 1; alpha <= n_p; ++alpha)
            for (int m = 1; m <= 3; ++m) CHECK(step_coefficient(m * n_p, alpha, n_p) == Complex{});

    const auto sched = step_schedule(diagonal(3), {1.0, 1.0, 1.0}, 1.0);
    for (int alpha = 1; alpha <= 3; ++alpha)
        for (int j : {-5, -2, -1, 1, 2, 4, 7}) {
            const auto numeric = numeric_coefficient(sched, static_cast<std::size_t>(alpha - 1), j, 300000);
            CHECK(std::abs(step_coefficient(j, alpha, 3) - numeric) < 1e-6);
        }
}

TEST_CASE("harmonic decomposition structure") {
    const auto sched = step_schedule(diagonal(3), {0.1, Complex{0.05, 0.02}, 0.2}, 2.0);
    const auto h = harmonic_coefficients(sched, 32);
    CHECK(h.harmonics.size() == 64);
    for (int j = 1; j <= 32; ++j)
        for (std::size_t a = 0; a < 3; ++a) {
            const Complex plus = h.harmonics.at(j).sites[a].amplitude / sched.segments()[a].amplitude;
            const Complex minus = h.harmonics.at(-j).sites[a].amplitude / sched.segments()[a].amplitude;
            CHECK(std::abs(plus - std::conj(minus)) < 1e-15);
            CHECK(std::abs(plus - step_coefficient(j, static_cast<int>(a) + 1, 3)) < 1e-15);
        }
    for (std::size_t a = 0; a < 3; ++a) CHECK(h.dc.sites[a].amplitude == sched.segments()[a].amplitude / 3.0);

    const auto smooth = harmonic_coefficients(smooth_two_site_schedule(0.1, 1.0), 8);
    for (const auto& [j, p] : smooth.harmonics)
        for (const auto& s : p.sites) {
            if (std::abs(j) == 1) CHECK(std::abs(s.amplitude) == doctest::Approx(0.025));
            else CHECK(s.amplitude == Complex{});
        }
    CHECK(smooth.tail_bound == 0.0);
    CHECK_THROWS_AS(harmonic_coefficients(sched, 0), ConfigError);
}

TEST_CASE("step reconstruction stays within the tail bound") {
    const double w = 1.0;
    const auto sched = step_schedule(diagonal(4), {0.1, 0.2, Complex{0.0, 0.1}, 0.05}, w);
    for (int j_max : {8, 64, 256}) {
        const auto h = harmonic_coefficients(sched, j_max);
        CHECK(h.tail_bound > 0.0);
        const int samples = 4096;
        for (std::size_t a = 0; a < 4; ++a) {
            double rms = 0.0;
            for (int i = 0; i < samples; ++i) {
                const double t = (i + 0.5) * sched.period() / samples;
                rms += std::norm(h.reconstruct(a, t, w) - sched.envelope_value(a, t));
            }
            rms = std::sqrt(rms / samples);
            CHECK(rms <= 1.01 * h.tail_bound);
        }
    }
    // The smooth schedule is reproduced pointwise.
    const auto smooth = smooth_two_site_schedule(0.1, 2.0);
    const auto hs = harmonic_coefficients(smooth, 2);
    for (double t = 0.0; t < 4.0; t += 0.31)
        for (std::size_t a = 0; a < 2; ++a) CHECK(std::abs(hs.reconstruct(a, t, 2.0) - smooth.envelope_value(a, t)) < 1e-15);
}

TEST_CASE("first-order norm bound closed form") {
    const double expected = 4.0 * 0.01 * 4.0 * 1.2020569031595942 / (pi * pi * 10.0);
    CHECK(std::abs(first_order_norm_bound(0.1, 2, 10.0) - expected) <= 1e-12 * expected);
    CHECK(first_order_norm_bound(0.1, 2, 10.0) == doctest::Approx(1.949e-3).epsilon(1e-3));
}

TEST_CASE("first-order correction vanishes for one and two positions") {
    for (int n_p : {1, 2}) {
        std::vector<Complex> g(static_cast<std::size_t>(n_p), 0.1);
        const auto c = first_order_correction(step_schedule(diagonal(n_p), g, 10.0), 64);
        for (const auto& v : c.coefficients) CHECK(v == Complex{});
        CHECK(c.operator_norm == 0.0);
    }
}

TEST_CASE("first-order coefficients match the single-excitation commutator") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n_p : {3, 4, 5}) {
        std::vector<Complex> g;
        for (int a = 0; a < n_p; ++a) g.emplace_back(0.1 * u(rng), 0.1 * u(rng));
        const double w = 7.0;
        const int j_max = 40;
        const auto c = first_order_correction(step_schedule(diagonal(n_p), g, w), j_max);
        const auto m = commutator_oracle(g, w, j_max);
        double scale = 0.0;
        for (const auto& v : c.coefficients) scale = std::max(scale, std::abs(v));
        REQUIRE(scale > 0.0);
        for (int a = 0; a < n_p; ++a)
            for (int b = 0; b < n_p; ++b) {
                const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
                CHECK(std::abs(m(a + 1, b + 1) - 0.5 * c.at(ua, ub)) < 1e-12 * scale);
                if (a == b) CHECK(std::abs(c.at(ua, ub)) < 1e-15);
            }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.bottomRightCorner(n_p, n_p));
        CHECK(std::abs(svd.singularValues()(0) - c.operator_norm) < 1e-12 * scale);
    }
}

TEST_CASE("first-order coefficients are imaginary and antisymmetric for real amplitudes") {
    const auto c = first_order_correction(step_schedule(diagonal(4), {0.1, 0.1, 0.1, 0.1}, 3.0), 64);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            CHECK(c.at(a, b).real() == 0.0);
            CHECK(c.at(a, b) == -c.at(b, a));
        }
}

TEST_CASE("correction norm never exceeds the analytic bound") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n_p = 1; n_p <= 8; ++n_p)
        for (double w : {0.5, 2.0, 10.0}) {
            std::vector<Complex> g;
            for (int a = 0; a < n_p; ++a) g.emplace_back(0.2 * u(rng), 0.2 * u(rng));
            const auto c = first_order_correction(step_schedule(diagonal(n_p), g, w), 256);
            CHECK(c.operator_norm <= c.norm_bound);
        }
    CHECK_THROWS_AS(first_order_correction(smooth_two_site_schedule(0.1, 1.0), 16), UnsupportedError);
}
