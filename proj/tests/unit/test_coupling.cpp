// test_coupling.cpp — Profiles, momentum couplings, named designs and inverse design

#include <doctest.h>

#include "giant/error.hpp"
#include "support.hpp"

using namespace giant;
using namespace giant::testing;

namespace {

std::size_t index_of(const Lattice& lattice, int mx, int my) { return lattice.linear_index({mx, my, 0}); }

// Indices m of the four resonant lines k_x ± k_y = ±π.
bool on_line(const Lattice& lattice, const IntVec& m, int sign, int target) {
    const int n = lattice.size();
    return m[0] + sign * m[1] == target * n / 2;
}

} // namespace

TEST_CASE("single local site gives a constant coupling") {
    const Lattice lattice = square(16);
    const auto gk = gk_from_profile(named_profile(Design::local, 0.3, 2), lattice);
    for (const auto& v : gk.values) CHECK(v == Complex{0.3, 0.0});
    CHECK(gk.source == "sampled-from-profile");
}

TEST_CASE("quasi1d and trap cancel at the quoted momenta") {
    const Lattice lattice = square(16);
    const double g = 0.1;
    const auto q = gk_from_profile(named_profile(Design::quasi1d, g, 2), lattice);
    CHECK(std::abs(q.values[index_of(lattice, 4, 4)]) < 1e-15);
    const auto t = gk_from_profile(named_profile(Design::trap, g, 2), lattice);
    CHECK(std::abs(t.values[index_of(lattice, -8, 0)]) < 1e-15);
}

TEST_CASE("sampled profiles agree with the polar-form reference") {
    std::mt19937_64 rng(11);
    const Lattice lattice = square(12);
    for (int trial = 0; trial < 5; ++trial) {
        auto p = random_profile(rng, 6, 4, 0.2);
        p.center = {1, -2, 0};
        const auto gk = gk_from_profile(p, lattice);
        for (std::size_t k = 0; k < lattice.mode_count(); ++k)
            CHECK(std::abs(gk.values[k] - reference_gk(p, lattice, lattice.coordinates(k))) < 1e-13);
    }
    // Large supports take the transform path.
    const Lattice small = square(8);
    CouplingProfile dense;
    dense.dimension = 2;
    std::mt19937_64 r2(5);
    std::normal_distribution<double> nd;
    for (std::size_t i = 0; i < small.mode_count(); ++i) dense.sites.push_back({small.coordinates(i), {nd(r2), nd(r2)}});
    const auto gk = gk_from_profile(dense, small);
    for (std::size_t k = 0; k < small.mode_count(); ++k)
        CHECK(std::abs(gk.values[k] - reference_gk(dense, small, small.coordinates(k))) < 1e-12);
}

TEST_CASE("purify coupling equals -g sin kx sin ky") {
    const Lattice lattice = square(32);
    const double g = 0.7;
    const auto gk = gk_from_profile(named_profile(Design::purify, g, 2), lattice);
    for (std::size_t k = 0; k < lattice.mode_count(); ++k) {
        const auto m = lattice.coordinates(k);
        const double expect = -g * std::sin(2 * pi * m[0] / 32.0) * std::sin(2 * pi * m[1] / 32.0);
        CHECK(std::abs(gk.values[k] - expect) < 1e-12);
    }
}

TEST_CASE("named design zero sets are exact on the grid") {
    const double g = 0.1;
    for (int n : {16, 64, 256}) {
        const Lattice lattice = square(n);
        const auto quasi = design_gk(Design::quasi1d, g, lattice);
        const auto trap = design_gk(Design::trap, g, lattice);
        const auto pur = design_gk(Design::purify, g, lattice);
        const auto chi = design_gk(Design::chiral, g, lattice);
        const auto vt = design_gk(Design::vtype, g, lattice);
        double worst = 0.0;
        std::size_t checked = 0;
        for (std::size_t k = 0; k < lattice.mode_count(); ++k) {
            const auto m = lattice.coordinates(k);
            const bool sum_p = on_line(lattice, m, +1, +1), sum_m = on_line(lattice, m, +1, -1);
            const bool dif_p = on_line(lattice, m, -1, +1), dif_m = on_line(lattice, m, -1, -1);
            if (sum_p || sum_m) worst = std::max(worst, std::abs(quasi.values[k]));
            if (sum_p || sum_m || dif_p || dif_m) {
                worst = std::max(worst, std::abs(trap.values[k]));
                ++checked;
            }
            if (sum_m || dif_p || dif_m) worst = std::max(worst, std::abs(chi.values[k]));
            if (sum_p || dif_p) worst = std::max(worst, std::abs(vt.values[k]));
        }
        for (auto [a, b] : {std::pair{0, -n / 2}, std::pair{-n / 2, 0}})
            worst = std::max(worst, std::abs(pur.values[index_of(lattice, a, b)]));
        // k_x + k_y = π and k_x - k_y = π, each N points, crossing at (0, N/2) and (N/2, 0)
        CHECK(checked == static_cast<std::size_t>(2 * n - 2));
        CHECK(worst <= 1e-12);
        // The coupled lines really are coupled.
        CHECK(std::abs(chi.values[index_of(lattice, n / 4, n / 4)]) > 0.04);
        CHECK(std::abs(vt.values[index_of(lattice, -n / 4, -n / 4)]) > 0.04);
    }
}

TEST_CASE("bcc two-site design vanishes on the k1 + k2 = ±π planes") {
    const Lattice lattice = bcc(8);
    const auto gk = design_gk(Design::bcc_pair, 0.1, lattice);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < lattice.mode_count(); ++k) {
        const auto m = lattice.coordinates(k);
        if (((m[0] + m[1]) % 8 + 8) % 8 == 4) {
            CHECK(std::abs(gk.values[k]) <= 1e-12);
            CHECK(lattice.energy(k) == 0.0);
            ++hits;
        }
    }
    CHECK(hits == 8 * 8);
}

TEST_CASE("analytic designs are normalised to peak g and reject other dimensions") {
    const Lattice lattice = square(64);
    for (Design d : {Design::chiral, Design::vtype}) {
        const auto gk = design_gk(d, 0.25, lattice);
        double peak = 0.0;
        for (const auto& v : gk.values) peak = std::max(peak, std::abs(v));
        CHECK(peak == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(gk.source == "analytic-design");
        CHECK_THROWS_AS(named_profile(d, 0.1, 2), ConfigError);
    }
    CHECK_THROWS_AS(analytic_design(Design::chiral, 0.1, square(8, 1)), ConfigError);
    CHECK_THROWS_AS(named_profile(Design::trap, 0.1, 3), ConfigError);
    CHECK_THROWS_AS(parse_design("spiral"), ConfigError);
}

TEST_CASE("inverse design recovers deltas and round-trips") {
    const Lattice lattice = square(16);
    MomentumCoupling constant{std::vector<Complex>(lattice.mode_count(), Complex{0.2, 0.0}), "user", ""};
    auto p = inverse_design(constant, lattice);
    REQUIRE(p.sites.size() == lattice.mode_count());
    for (const auto& s : p.sites) {
        if (s.offset == IntVec{0, 0, 0}) CHECK(std::abs(s.amplitude - 0.2) < 1e-15);
        else CHECK(std::abs(s.amplitude) < 1e-15);
    }

    MomentumCoupling shifted{std::vector<Complex>(lattice.mode_count()), "user", ""};
    for (std::size_t k = 0; k < lattice.mode_count(); ++k) shifted.values[k] = 0.2 * lattice.plane_wave(k, {1, 1, 0});
    p = inverse_design(shifted, lattice);
    for (const auto& s : p.sites) {
        if (s.offset == IntVec{1, 1, 0}) CHECK(std::abs(s.amplitude - 0.2) < 1e-15);
        else CHECK(std::abs(s.amplitude) < 1e-15);
    }

    const Lattice l64 = square(64);
    const auto chi = design_gk(Design::chiral, 0.1, l64);
    const auto back = gk_from_profile(inverse_design(chi, l64), l64);
    CHECK(max_abs_diff(back.values, chi.values) < 1e-10 * 0.1);
    CHECK_THROWS_AS(inverse_design(chi, lattice), ConfigError);
}

TEST_CASE("Parseval holds between profile and momentum coupling") {
    const Lattice lattice = square(32);
    for (Design d : {Design::chiral, Design::vtype, Design::purify, Design::trap}) {
        const auto gk = design_gk(d, 0.1, lattice);
        double sk = 0.0;
        for (const auto& v : gk.values) sk += std::norm(v);
        const double sn = inverse_design(gk, lattice).mass();
        CHECK(std::abs(sn - sk / lattice.mode_count()) < 1e-10 * sn);
    }
}

TEST_CASE("center shift multiplies G by the plane-wave phase, and G is linear") {
    const Lattice lattice = square(16);
    std::mt19937_64 rng(3);
    auto p = random_profile(rng, 5, 3, 0.1);
    const auto base = gk_from_profile(p, lattice);
    auto shifted = p;
    shifted.center = {3, -2, 0};
    const auto moved = gk_from_profile(shifted, lattice);
    for (std::size_t k = 0; k < lattice.mode_count(); ++k)
        CHECK(std::abs(moved.values[k] - base.values[k] * lattice.plane_wave(k, {3, -2, 0})) < 1e-15);

    auto doubled = p;
    for (auto& s : doubled.sites) s.amplitude *= 2.0;
    const auto twice = gk_from_profile(doubled, lattice);
    for (std::size_t k = 0; k < lattice.mode_count(); ++k)
        CHECK(std::abs(twice.values[k] - 2.0 * base.values[k]) < 1e-15);
}

TEST_CASE("offsets outside the grid are rejected") {
    const Lattice lattice = square(8);
    CouplingProfile p;
    p.sites = {{{4, 0, 0}, 0.1}};
    CHECK_THROWS_AS(gk_from_profile(p, lattice), ConfigError);
    p.sites = {{{-4, 3, 0}, 0.1}};
    CHECK_NOTHROW(gk_from_profile(p, lattice));
}

TEST_CASE("profile invariants") {
    CouplingProfile p;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.sites = {{{0, 0, 0}, 0.0}};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.sites = {{{0, 0, 0}, 0.1}, {{0, 0, 0}, 0.2}};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.sites = {{{0, 0, 0}, 0.1}, {{1, 0, 0}, Complex{0.0, -0.3}}};
    CHECK_NOTHROW(p.validate());
    CHECK(p.g_max() == doctest::Approx(0.3));
    CHECK(p.support_size() == 2);
}

TEST_CASE("truncation keeps the largest sites with the documented tie rule") {
    const auto trap = named_profile(Design::trap, 0.1, 2);
    const auto two = truncate(trap, 2);
    REQUIRE(two.sites.size() == 2);
    CHECK(two.sites[0].offset == IntVec{-1, 0, 0});
    CHECK(two.sites[1].offset == IntVec{0, -1, 0});
    const auto all = truncate(trap, 4);
    CHECK(all.sites[2].offset == IntVec{0, 1, 0});
    CHECK(all.sites[3].offset == IntVec{1, 0, 0});
    CHECK(truncate(trap, 100).support_size() == 4);
    CHECK_THROWS_AS(truncate(trap, 0), ConfigError);

    const Lattice lattice = square(64);
    const auto full = inverse_design(design_gk(Design::chiral, 0.1, lattice), lattice);
    double last = 0.0;
    for (int n : {8, 16, 32, 64}) {
        const auto t = truncate(full, n);
        CHECK(t.support_size() == static_cast<std::size_t>(n));
        CHECK(t.mass() >= last);
        last = t.mass();
        const auto again = truncate(t, n);
        REQUIRE(again.sites.size() == t.sites.size());
        for (std::size_t i = 0; i < t.sites.size(); ++i) {
            CHECK(again.sites[i].offset == t.sites[i].offset);
            CHECK(again.sites[i].amplitude == t.sites[i].amplitude);
        }
        // Sort-and-keep oracle: no dropped site beats the weakest kept one.
        double weakest = 1e300;
        for (const auto& s : t.sites) weakest = std::min(weakest, std::abs(s.amplitude));
        std::size_t stronger = 0;
        for (const auto& s : full.sites) stronger += std::abs(s.amplitude) > weakest ? 1 : 0;
        CHECK(stronger < static_cast<std::size_t>(n));
    }
}

TEST_CASE("footprint centroid") {
    auto q = named_profile(Design::quasi1d, 0.1, 2);
    q.center = {2, 2, 0};
    const auto c = footprint_centroid(q);
    CHECK(c[0] == 2.5);
    CHECK(c[1] == 2.5);
}

TEST_CASE("profile documents round-trip bit-exactly") {
    std::mt19937_64 rng(99);
    auto p = random_profile(rng, 9, 5, 0.123456789);
    p.center = {3, -1, 0};
    p.design = "random";
    p.normalization = 1.0 / 3.0;
    const auto text = profile_to_json(p);
    const auto q = profile_from_json(text);
    CHECK(q.dimension == p.dimension);
    CHECK(q.center == p.center);
    CHECK(q.design == p.design);
    CHECK(q.normalization == p.normalization);
    REQUIRE(q.sites.size() == p.sites.size());
    for (std::size_t i = 0; i < p.sites.size(); ++i) {
        CHECK(q.sites[i].offset == p.sites[i].offset);
        CHECK(q.sites[i].amplitude == p.sites[i].amplitude);
    }
    CHECK(profile_to_json(q) == text);

    CHECK_THROWS_AS(profile_from_json("{\"dimension\":2,\"sites\":[],\"colour\":1}"), ConfigError);
    CHECK_THROWS_AS(profile_from_json("{\"dimension\":2,\"sites\":[{\"offset\":[0],\"re\":1,\"im\":0}]}"), ConfigError);
    CHECK_THROWS_AS(profile_from_json("not json"), ConfigError);
}

TEST_CASE("truncation treats round-off level differences as ties") {
    CouplingProfile p;
    p.dimension = 2;
    const double g = 0.01;
    p.sites = {{{2, 1, 0}, std::nextafter(g, 1.0)}, {{1, 2, 0}, g}, {{-1, -2, 0}, std::nextafter(g, 0.0)},
               {{0, 0, 0}, 0.05}, {{3, 0, 0}, 0.5 * g}};
    const auto t = truncate(p, 3);
    REQUIRE(t.sites.size() == 3);
    CHECK(t.sites[0].offset == IntVec{0, 0, 0});
    CHECK(t.sites[1].offset == IntVec{-1, -2, 0});
    CHECK(t.sites[2].offset == IntVec{1, 2, 0});
}
