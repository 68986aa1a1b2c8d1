// coupling.cpp — Profiles, G(k) sampling, named designs and Fourier inverse design

#include "giant/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "giant/error.hpp"
#include "giant/parallel.hpp"

namespace giant {

void CouplingProfile::validate() const {
    if (dimension < 1 || dimension > 3) throw ConfigError("profile dimension must be 1, 2 or 3");
    if (sites.empty()) throw ConfigError("coupling profile has no sites");
    std::set<IntVec> seen;
    bool any_nonzero = false;
    for (const auto& s : sites) {
        if (!std::isfinite(s.amplitude.real()) || !std::isfinite(s.amplitude.imag()))
            throw ConfigError("coupling profile has a non-finite amplitude");
        for (int axis = dimension; axis < 3; ++axis)
            if (s.offset[static_cast<std::size_t>(axis)] != 0)
                throw ConfigError("profile offset has components beyond its dimension");
        if (!seen.insert(s.offset).second) throw ConfigError("coupling profile offsets must be distinct");
        any_nonzero = any_nonzero || s.amplitude != Complex{};
    }
    if (!any_nonzero) throw ConfigError("coupling profile has no nonzero amplitude");
}

double CouplingProfile::g_max() const {
    double g = 0.0;
    for (const auto& s : sites) g = std::max(g, std::abs(s.amplitude));
    return g;
}

std::size_t CouplingProfile::support_size() const {
    return static_cast<std::size_t>(
        std::count_if(sites.begin(), sites.end(), [](const Site& s) { return s.amplitude != Complex{}; }));
}

double CouplingProfile::mass() const {
    double m = 0.0;
    for (const auto& s : sites) m += std::norm(s.amplitude);
    return m;
}

Design parse_design(std::string_view name) {
    static constexpr std::pair<std::string_view, Design> table[] = {
        {"local", Design::local},   {"quasi1d", Design::quasi1d}, {"trap", Design::trap},
        {"purify", Design::purify}, {"chiral", Design::chiral},   {"vtype", Design::vtype},
        {"bcc_pair", Design::bcc_pair},
    };
    for (const auto& [key, value] : table)
        if (key == name) return value;
    throw ConfigError("unknown design '" + std::string(name) + "'");
}

const char* to_string(Design design) noexcept {
    switch (design) {
    case Design::local: return "local";
    case Design::quasi1d: return "quasi1d";
    case Design::trap: return "trap";
    case Design::purify: return "purify";
    case Design::chiral: return "chiral";
    case Design::vtype: return "vtype";
    case Design::bcc_pair: return "bcc_pair";
    }
    return "?";
}

bool is_analytic(Design design) noexcept { return design == Design::chiral || design == Design::vtype; }

namespace {

void check_fits(const CouplingProfile& profile, const Lattice& lattice) {
    if (profile.dimension != lattice.dimension())
        throw ConfigError("profile dimension " + std::to_string(profile.dimension) + " does not match bath dimension " +
                          std::to_string(lattice.dimension()));
    const int half = lattice.size() / 2;
    for (const auto& s : profile.sites)
        for (int axis = 0; axis < profile.dimension; ++axis) {
            const int o = s.offset[static_cast<std::size_t>(axis)];
            if (o < -half || o >= half)
                throw ConfigError("profile offset component " + std::to_string(o) + " does not fit a lattice of size " +
                                  std::to_string(lattice.size()));
        }
}

IntVec position(const CouplingProfile& profile, const Site& s) {
    IntVec p{};
    for (std::size_t a = 0; a < 3; ++a) p[a] = profile.center[a] + s.offset[a];
    return p;
}

} // namespace

MomentumCoupling gk_from_profile(const CouplingProfile& profile, const Lattice& lattice) {
    profile.validate();
    check_fits(profile, lattice);
    MomentumCoupling gk;
    gk.source = "sampled-from-profile";
    gk.design = profile.design;
    const std::size_t count = lattice.mode_count();
    const int d = lattice.dimension();

    if (profile.sites.size() > 4 * static_cast<std::size_t>(lattice.size())) {
        std::vector<Complex> grid(count);
        for (const auto& s : profile.sites) grid[lattice.linear_index(position(profile, s))] += s.amplitude;
        gk.values = lattice.transform(grid, -1, 1.0);
        return gk;
    }

    gk.values.assign(count, Complex{});
    parallel::for_blocks(count, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const IntVec m = lattice.coordinates(i);
            Complex acc{};
            for (const auto& s : profile.sites) {
                const IntVec p = position(profile, s);
                long dot = 0;
                for (int axis = 0; axis < d; ++axis)
                    dot += static_cast<long>(m[static_cast<std::size_t>(axis)]) * p[static_cast<std::size_t>(axis)];
                acc += s.amplitude * lattice.phase(dot);
            }
            gk.values[i] = acc;
        }
    });
    return gk;
}

CouplingProfile named_profile(Design design, double g, int dimension) {
    CouplingProfile p;
    p.dimension = dimension;
    p.design = to_string(design);
    const auto need2d = [&] {
        if (dimension != 2) throw ConfigError(std::string("design '") + to_string(design) + "' requires dimension 2");
    };
    switch (design) {
    case Design::local:
        p.sites = {{{0, 0, 0}, g}};
        break;
    case Design::quasi1d:
        need2d();
        p.normalization = 0.5;
        p.sites = {{{0, 0, 0}, g / 2}, {{1, 1, 0}, g / 2}};
        break;
    case Design::trap:
        need2d();
        p.normalization = 0.25;
        p.sites = {{{1, 0, 0}, g / 4}, {{-1, 0, 0}, g / 4}, {{0, 1, 0}, g / 4}, {{0, -1, 0}, g / 4}};
        break;
    case Design::purify:
        need2d();
        p.normalization = 0.25;
        p.sites = {{{1, 1, 0}, g / 4}, {{-1, -1, 0}, g / 4}, {{1, -1, 0}, -g / 4}, {{-1, 1, 0}, -g / 4}};
        break;
    case Design::bcc_pair:
        if (dimension != 3) throw ConfigError("design 'bcc_pair' requires dimension 3");
        p.normalization = 0.5;
        p.sites = {{{0, 0, 0}, g / 2}, {{1, 1, 0}, g / 2}};
        break;
    case Design::chiral:
    case Design::vtype:
        throw ConfigError(std::string("design '") + to_string(design) +
                          "' has no finite real-space profile; use inverse design");
    }
    return p;
}

MomentumCoupling analytic_design(Design design, double g, const Lattice& lattice) {
    if (!is_analytic(design)) throw ConfigError(std::string("design '") + to_string(design) + "' is not analytic");
    if (lattice.dimension() != 2) throw ConfigError(std::string("design '") + to_string(design) + "' requires dimension 2");
    const double n = lattice.size();
    MomentumCoupling gk;
    gk.source = "analytic-design";
    gk.design = to_string(design);
    gk.values.resize(lattice.mode_count());
    double peak = 0.0;
    for (std::size_t i = 0; i < lattice.mode_count(); ++i) {
        const IntVec m = lattice.coordinates(i);
        // (k_x ± k_y)/2 = π (m_x ± m_y)/N
        const double half_diff = std::numbers::pi * (m[0] - m[1]) / n;
        const double half_sum = std::numbers::pi * (m[0] + m[1]) / n;
        double v = 0.0;
        if (design == Design::chiral)
            v = std::cos(half_diff) * (1.0 + std::sin(half_sum));
        else
            v = (1.0 - std::sin(half_diff)) * (1.0 - std::sin(half_sum));
        gk.values[i] = v;
        peak = std::max(peak, std::abs(v));
    }
    for (auto& v : gk.values) v *= g / peak;
    return gk;
}

std::variant<CouplingProfile, MomentumCoupling> named_design(Design design, double g, const Lattice& lattice) {
    if (is_analytic(design)) return analytic_design(design, g, lattice);
    return named_profile(design, g, lattice.dimension());
}

MomentumCoupling design_gk(Design design, double g, const Lattice& lattice) {
    if (is_analytic(design)) return analytic_design(design, g, lattice);
    return gk_from_profile(named_profile(design, g, lattice.dimension()), lattice);
}

CouplingProfile inverse_design(const MomentumCoupling& gk, const Lattice& lattice) {
    if (gk.values.size() != lattice.mode_count())
        throw ConfigError("G(k) has " + std::to_string(gk.values.size()) + " samples but the grid has " +
                          std::to_string(lattice.mode_count()));
    const auto amplitudes = lattice.transform(gk.values, +1, 1.0 / static_cast<double>(lattice.mode_count()));
    CouplingProfile p;
    p.dimension = lattice.dimension();
    p.design = gk.design;
    p.normalization = 1.0 / static_cast<double>(lattice.mode_count());
    p.sites.resize(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i) p.sites[i] = {lattice.coordinates(i), amplitudes[i]};
    return p;
}

CouplingProfile truncate(const CouplingProfile& profile, int n_tr) {
    if (n_tr < 1) throw ConfigError("truncation order n_tr must be >= 1");
    std::vector<Site> kept;
    for (const auto& s : profile.sites)
        if (s.amplitude != Complex{}) kept.push_back(s);
    const auto l1 = [](const IntVec& o) { return std::abs(o[0]) + std::abs(o[1]) + std::abs(o[2]); };
    // Magnitudes equal to ~1e-11 of the peak count as ties, so transform round-off
    // does not decide between symmetry-related sites.
    double peak = 0.0;
    for (const auto& s : kept) peak = std::max(peak, std::abs(s.amplitude));
    const auto level = [&](const Site& s) { return std::llround(std::abs(s.amplitude) / peak * 1e11); };
    std::sort(kept.begin(), kept.end(), [&](const Site& a, const Site& b) {
        const auto la = level(a);
        const auto lb = level(b);
        if (la != lb) return la > lb;
        if (l1(a.offset) != l1(b.offset)) return l1(a.offset) < l1(b.offset);
        return a.offset < b.offset;
    });
    if (kept.size() > static_cast<std::size_t>(n_tr)) kept.resize(static_cast<std::size_t>(n_tr));
    CouplingProfile out = profile;
    out.sites = std::move(kept);
    return out;
}

std::array<double, 3> footprint_centroid(const CouplingProfile& profile) {
    std::array<double, 3> c{};
    std::size_t count = 0;
    for (const auto& s : profile.sites) {
        if (s.amplitude == Complex{}) continue;
        for (std::size_t a = 0; a < 3; ++a) c[a] += profile.center[a] + s.offset[a];
        ++count;
    }
    if (count == 0) throw ConfigError("coupling profile has no nonzero amplitude");
    for (auto& v : c) v /= static_cast<double>(count);
    return c;
}

std::string profile_to_json(const CouplingProfile& profile) {
    using nlohmann::json;
    const auto vec = [&](const IntVec& v) {
        return std::vector<int>(v.begin(), v.begin() + profile.dimension);
    };
    json doc;
    doc["dimension"] = profile.dimension;
    doc["design"] = profile.design;
    doc["center"] = vec(profile.center);
    doc["normalization"] = profile.normalization;
    json sites = json::array();
    for (const auto& s : profile.sites)
        sites.push_back({{"offset", vec(s.offset)}, {"re", s.amplitude.real()}, {"im", s.amplitude.imag()}});
    doc["sites"] = std::move(sites);
    return doc.dump(1);
}

CouplingProfile profile_from_json(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("profile document is not valid JSON: ") + e.what());
    }
    static const std::set<std::string> allowed{"dimension", "design", "center", "normalization", "sites"};
    if (!doc.is_object()) throw ConfigError("profile document must be an object");
    for (const auto& [key, _] : doc.items())
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in profile document");
    CouplingProfile p;
    try {
        p.dimension = doc.at("dimension").get<int>();
        p.design = doc.value("design", std::string{});
        p.normalization = doc.value("normalization", 1.0);
        const auto read_vec = [&](const json& j) {
            const auto v = j.get<std::vector<int>>();
            if (static_cast<int>(v.size()) != p.dimension)
                throw ConfigError("profile vector length does not match dimension");
            IntVec out{};
            std::copy(v.begin(), v.end(), out.begin());
            return out;
        };
        if (doc.contains("center")) p.center = read_vec(doc["center"]);
        for (const auto& s : doc.at("sites")) {
            for (const auto& [key, _] : s.items())
                if (key != "offset" && key != "re" && key != "im")
                    throw ConfigError("unknown key '" + key + "' in profile site record");
            p.sites.push_back({read_vec(s.at("offset")), {s.at("re").get<double>(), s.at("im").get<double>()}});
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed profile document: ") + e.what());
    }
    if (p.dimension < 1 || p.dimension > 3) throw ConfigError("profile dimension must be 1, 2 or 3");
    p.validate();
    return p;
}

} // namespace giant
