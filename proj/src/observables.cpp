// observables.cpp — Directional metrics, spectral densities and decay-rate estimators

#include "giant/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "giant/error.hpp"
#include "giant/parallel.hpp"

namespace giant {

double QuadrantFractions::miss(const std::vector<int>& target) const {
    double hit = 0.0;
    for (int q : target) hit += (*this)[q];
    return 1.0 - hit;
}

QuadrantFractions quadrant_fractions(const ExcitationState& state, const Lattice& lattice) {
    if (lattice.dimension() != 2) throw ConfigError("quadrant fractions need a 2D bath");
    if (state.bath.size() != lattice.mode_count()) throw ConfigError("state does not match the lattice grid");
    const int half = lattice.size() / 2;
    // sign class: +1, -1, or 0 for the boundary lines k = 0 and k = -π
    const auto sign_class = [half](int m) { return (m == 0 || m == -half) ? 0 : (m > 0 ? 1 : -1); };
    std::array<double, 4> acc{};
    double total = 0.0;
    for (std::size_t i = 0; i < state.bath.size(); ++i) {
        const double p = std::norm(state.bath[i]);
        if (p == 0.0) continue;
        total += p;
        const IntVec m = lattice.coordinates(i);
        const int sx = sign_class(m[0]);
        const int sy = sign_class(m[1]);
        const double share = p / ((sx == 0 ? 2.0 : 1.0) * (sy == 0 ? 2.0 : 1.0));
        const bool xp = sx >= 0, xm = sx <= 0, yp = sy >= 0, ym = sy <= 0;
        if (xp && yp) acc[0] += share;
        if (xm && yp) acc[1] += share;
        if (xm && ym) acc[2] += share;
        if (xp && ym) acc[3] += share;
    }
    if (!(total > 1e-15)) throw UndefinedError("quadrant fractions are undefined for an empty bath");
    QuadrantFractions out;
    for (std::size_t q = 0; q < 4; ++q) out.f[q] = acc[q] / total;
    out.time = state.time;
    return out;
}

std::vector<int> design_target_quadrants(Design design) {
    switch (design) {
    case Design::chiral: return {1};
    case Design::vtype: return {2, 3};
    default: return {1, 2, 3, 4};
    }
}

std::size_t SpectralDensity::bin_of(double energy) const {
    const double lo = bin_edges.front();
    const auto n = values.size();
    if (energy <= lo) return 0;
    auto i = std::min(static_cast<std::size_t>((energy - lo) / bin_width()), n - 1);
    while (i + 1 < n && energy >= bin_edges[i + 1]) ++i;
    while (i > 0 && energy < bin_edges[i]) --i;
    return i;
}

double SpectralDensity::center_value() const {
    const auto n = values.size();
    return values[n % 2 == 0 ? n / 2 - 1 : n / 2];
}

SpectralDensity spectral_density(const MomentumCoupling& gk, const Lattice& lattice, int n_bins, double g) {
    if (n_bins < 10) throw ConfigError("spectral density needs n_bins >= 10");
    if (gk.values.size() != lattice.mode_count()) throw ConfigError("G(k) does not match the lattice grid");
    if (g <= 0.0)
        for (const auto& v : gk.values) g = std::max(g, std::abs(v));
    if (!(g > 0.0)) throw ConfigError("spectral density of a vanishing coupling is undefined");
    const auto [lo, hi] = lattice.band_edges();
    SpectralDensity sd;
    const auto nb = static_cast<std::size_t>(n_bins);
    sd.bin_edges.resize(nb + 1);
    const double width = (hi - lo) / n_bins;
    for (std::size_t i = 0; i <= nb; ++i) sd.bin_edges[i] = lo + width * static_cast<double>(i);
    sd.bin_edges.back() = hi;
    sd.values.assign(nb, 0.0);
    const double norm = 1.0 / (static_cast<double>(lattice.mode_count()) * g * g);
    double total = 0.0;
    for (std::size_t i = 0; i < gk.values.size(); ++i) {
        const double w = std::norm(gk.values[i]) * norm;
        total += w;
        sd.values[sd.bin_of(lattice.energy(i))] += w;
    }
    for (auto& v : sd.values) v /= width;
    sd.total_weight = total;
    return sd;
}

double lorentzian(double x, double eta) { return (eta / std::numbers::pi) / (x * x + eta * eta); }

double default_eta(const Lattice& lattice) {
    return 8.0 * std::numbers::pi * lattice.spec().hopping / lattice.size();
}

double golden_rule_rate(const MomentumCoupling& gk, const Lattice& lattice, double omega_e, double eta) {
    if (!(eta > 0.0)) throw ConfigError("smoothing width eta must be positive");
    if (gk.values.size() != lattice.mode_count()) throw ConfigError("G(k) does not match the lattice grid");
    const double sum = parallel::block_sum<double>(gk.values.size(), [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += std::norm(gk.values[i]) * lorentzian(omega_e - lattice.energy(i), eta);
        return s;
    });
    return 2.0 * std::numbers::pi * sum / static_cast<double>(lattice.mode_count());
}

SurvivalFit survival_and_rate(const Trajectory& trajectory, double window_start, double window_end,
                              const MomentumCoupling& gk, const Lattice& lattice, double omega_e, double eta) {
    if (!(window_end > window_start)) throw ConfigError("fit window must have positive length");
    SurvivalFit fit;
    fit.times = trajectory.series_times;
    fit.survival.reserve(fit.times.size());
    for (const auto& c : trajectory.series_emitter) fit.survival.push_back(std::norm(c));
    if (fit.times.empty() || window_start < fit.times.front() || window_end > fit.times.back())
        throw ConfigError("fit window lies outside the trajectory");

    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < fit.times.size(); ++i) {
        if (fit.times[i] < window_start || fit.times[i] > window_end) continue;
        if (fit.survival[i] <= 0.0) {
            fit.warnings.push_back("zero survival inside the fit window; sample skipped");
            continue;
        }
        ts.push_back(fit.times[i]);
        ys.push_back(std::log(fit.survival[i]));
    }
    if (ts.size() < 10) throw ConfigError("fit window holds fewer than 10 samples");
    const double n = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += ys[i];
    }
    const double mt = st / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxy += (ts[i] - mt) * (ys[i] - my);
        sxx += (ts[i] - mt) * (ts[i] - mt);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.fitted_rate = slope == 0.0 ? 0.0 : -slope;

    bool monotone = true;
    for (std::size_t i = 1; i < ys.size(); ++i)
        if (ys[i] > ys[i - 1] + 1e-12) monotone = false;
    if (!monotone) fit.warnings.push_back("survival is not monotone inside the fit window");
    if (std::abs(ys.back() - ys.front()) < 1e-9) fit.warnings.push_back("survival is nearly flat inside the fit window");

    fit.golden_rule_rate = golden_rule_rate(gk, lattice, omega_e, eta);
    return fit;
}

double directional_mask_population(std::span<const Complex> field, const Lattice& lattice,
                                   std::array<double, 2> direction, double half_angle, std::array<double, 2> apex) {
    if (lattice.dimension() != 2) throw ConfigError("directional mask needs a 2D bath");
    if (field.size() != lattice.mode_count()) throw ConfigError("field does not match the lattice grid");
    const double len = std::hypot(direction[0], direction[1]);
    if (!(len > 0.0) || !std::isfinite(len)) throw ConfigError("cone direction must be a nonzero finite vector");
    if (!(half_angle > 0.0) || half_angle > std::numbers::pi) throw ConfigError("cone half-angle must lie in (0, π]");
    const double ux = direction[0] / len, uy = direction[1] / len;
    const double cos_half = std::cos(half_angle);
    const int n = lattice.size();
    const int half = n / 2;
    const double bx = std::floor(apex[0]), by = std::floor(apex[1]);
    const double fx = apex[0] - bx, fy = apex[1] - by;
    const int base_x = static_cast<int>(bx), base_y = static_cast<int>(by);

    // Visit sites in displacement order so a common translation of field and
    // apex reproduces the sum bit-for-bit.
    double inside = 0.0, total = 0.0;
    for (int dx = -half; dx < half; ++dx) {
        double rx = dx - fx;
        if (rx < -half) rx += n;
        for (int dy = -half; dy < half; ++dy) {
            double ry = dy - fy;
            if (ry < -half) ry += n;
            const double p = std::norm(field[lattice.linear_index({base_x + dx, base_y + dy, 0})]);
            total += p;
            const double r = std::hypot(rx, ry);
            if (r == 0.0) continue;
            if (rx * ux + ry * uy >= r * cos_half) inside += p;
        }
    }
    if (!(total > 0.0)) throw UndefinedError("directional population of an empty field is undefined");
    return inside / total;
}

double population_beyond_radius(std::span<const Complex> field, const Lattice& lattice, const CouplingProfile& footprint,
                                int radius) {
    if (field.size() != lattice.mode_count()) throw ConfigError("field does not match the lattice grid");
    std::vector<IntVec> sites;
    for (const auto& s : footprint.sites)
        if (s.amplitude != Complex{}) {
            IntVec p{};
            for (std::size_t a = 0; a < 3; ++a) p[a] = footprint.center[a] + s.offset[a];
            sites.push_back(p);
        }
    const int n = lattice.size();
    const auto min_image = [n](int d) {
        d %= n;
        if (d < -n / 2) d += n;
        if (d >= n / 2) d -= n;
        return std::abs(d);
    };
    double outside = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double p = std::norm(field[i]);
        const IntVec c = lattice.coordinates(i);
        int best = n;
        for (const auto& s : sites) {
            int cheb = 0;
            for (int a = 0; a < lattice.dimension(); ++a)
                cheb = std::max(cheb, min_image(c[static_cast<std::size_t>(a)] - s[static_cast<std::size_t>(a)]));
            best = std::min(best, cheb);
        }
        if (best > radius) outside += p;
    }
    return outside;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ConfigError("cosine similarity needs equal lengths");
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) throw UndefinedError("cosine similarity with a zero vector");
    return ab / std::sqrt(aa * bb);
}

std::vector<double> magnitudes(std::span<const Complex> values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::abs(values[i]);
    return out;
}

std::vector<double> densities(std::span<const Complex> values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::norm(values[i]);
    return out;
}

FieldFormat parse_field_format(std::string_view name) {
    if (name == "binary_f64") return FieldFormat::binary_f64;
    if (name == "pgm8") return FieldFormat::pgm8;
    throw ConfigError("unknown field format '" + std::string(name) + "' (expected binary_f64 or pgm8)");
}

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void export_field(std::span<const double> values, const FieldMeta& meta, const std::filesystem::path& path,
                  FieldFormat format) {
    std::size_t count = 1;
    for (auto s : meta.shape) count *= s;
    if (meta.shape.empty() || count != values.size())
        throw ConfigError("field shape does not match its " + std::to_string(values.size()) + " values");

    if (format == FieldFormat::binary_f64) {
        auto out = open_out(path);
        for (double v : values) {
            const auto bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
            out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
        }
        finish(out, path);
        nlohmann::ordered_json side;
        side["shape"] = meta.shape;
        side["layout"] = "row-major";
        side["dtype"] = "float64-le";
        side["time"] = meta.time;
        side["metadata"] = meta.metadata;
        auto sc = open_out(path.string() + ".json");
        sc << side.dump(2) << '\n';
        finish(sc, path.string() + ".json");
        return;
    }

    if (meta.shape.size() > 2) throw ConfigError("pgm8 export supports 1D and 2D fields only");
    const std::size_t rows = meta.shape.size() == 2 ? meta.shape[0] : 1;
    const std::size_t cols = meta.shape.back();
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn, hi = *mx;
    auto out = open_out(path);
    out << "P5\n# min=" << format_double(lo) << " max=" << format_double(hi) << " time=" << format_double(meta.time)
        << "\n"
        << cols << ' ' << rows << "\n255\n";
    for (double v : values) {
        const double scaled = hi > lo ? (v - lo) / (hi - lo) : 0.0;
        const auto px = static_cast<unsigned char>(std::lround(std::clamp(scaled, 0.0, 1.0) * 255.0));
        out.put(static_cast<char>(px));
    }
    finish(out, path);
}

void export_field(std::span<const Complex> values, const FieldMeta& meta, const std::filesystem::path& path,
                  FieldFormat format) {
    const auto d = densities(values);
    export_field(std::span<const double>(d), meta, path, format);
}

std::vector<double> read_binary_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<double> out;
    std::uint64_t bits = 0;
    while (in.read(reinterpret_cast<char*>(&bits), sizeof bits)) out.push_back(std::bit_cast<double>(to_little_endian(bits)));
    return out;
}

void write_series_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows, const std::vector<std::string>& comments) {
    auto out = open_out(path);
    for (const auto& c : comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size()) throw ConfigError("CSV row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
    finish(out, path);
}

} // namespace giant
