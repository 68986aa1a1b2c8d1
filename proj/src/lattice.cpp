// lattice.cpp — Dispersion tables and separable lattice Fourier transforms

#include "giant/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "giant/error.hpp"
#include "giant/parallel.hpp"

namespace giant {

Model parse_model(std::string_view name) {
    if (name == "square_tb") return Model::square_tb;
    if (name == "bcc_tb") return Model::bcc_tb;
    throw ConfigError("unknown bath model '" + std::string(name) + "' (expected square_tb or bcc_tb)");
}

const char* to_string(Model model) noexcept {
    switch (model) {
    case Model::square_tb: return "square_tb";
    case Model::bcc_tb: return "bcc_tb";
    }
    return "?";
}

void BathSpec::validate() const {
    if (dimension < 1 || dimension > 3)
        throw ConfigError("bath dimension must be 1, 2 or 3, got " + std::to_string(dimension));
    if (size < 4 || size % 2 != 0)
        throw ConfigError("bath size N must be even and >= 4, got " + std::to_string(size));
    if (model == Model::square_tb && dimension == 3)
        throw ConfigError("model square_tb supports dimension 1 or 2 only");
    if (model == Model::bcc_tb && dimension != 3)
        throw ConfigError("model bcc_tb requires dimension 3");
    if (!(hopping > 0.0) || !std::isfinite(hopping))
        throw ConfigError("hopping J must be positive and finite");
    if (!std::isfinite(band_center)) throw ConfigError("band_center must be finite");
    std::size_t count = 1;
    for (int i = 0; i < dimension; ++i) count *= static_cast<std::size_t>(size);
    if (count > (std::size_t{1} << 27)) throw ConfigError("lattice has too many modes");
}

std::size_t BathSpec::mode_count() const {
    std::size_t count = 1;
    for (int i = 0; i < dimension; ++i) count *= static_cast<std::size_t>(size);
    return count;
}

namespace {

// cos and sin of 2πj/N on [0, N/2], folded so that every symmetry of the
// unit circle that maps grid points to grid points holds exactly.
double folded_cos(long j, long n) {
    if (4 * j > n) return -folded_cos(n / 2 - j, n);
    if (8 * j <= n) return std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    return std::sin(std::numbers::pi * static_cast<double>(n - 4 * j) / (2.0 * static_cast<double>(n)));
}

double folded_sin(long j, long n) {
    if (4 * j > n) return folded_sin(n / 2 - j, n);
    if (8 * j <= n) return std::sin(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    return std::cos(std::numbers::pi * static_cast<double>(n - 4 * j) / (2.0 * static_cast<double>(n)));
}

// Pairs opposite-signed terms first so the analytic zero planes cancel exactly.
double sum4(double a, double b, double c, double d) {
    std::array<double, 4> v{a, b, c, d};
    std::sort(v.begin(), v.end());
    return (v[0] + v[3]) + (v[1] + v[2]);
}

} // namespace

Lattice::Lattice(const BathSpec& spec) : spec_(spec) {
    spec_.validate();
    count_ = spec_.mode_count();
    const long n = spec_.size;
    cos_.resize(static_cast<std::size_t>(n));
    sin_.resize(static_cast<std::size_t>(n));
    for (long j = 0; j < n; ++j) {
        if (j <= n / 2) {
            cos_[static_cast<std::size_t>(j)] = folded_cos(j, n);
            sin_[static_cast<std::size_t>(j)] = folded_sin(j, n);
        } else {
            cos_[static_cast<std::size_t>(j)] = folded_cos(n - j, n);
            sin_[static_cast<std::size_t>(j)] = -folded_sin(n - j, n);
        }
    }
    energies_.resize(count_);
    for (std::size_t i = 0; i < count_; ++i) energies_[i] = dispersion(coordinates(i));
}

IntVec Lattice::coordinates(std::size_t linear) const {
    IntVec c{};
    const auto n = static_cast<std::size_t>(spec_.size);
    for (int axis = spec_.dimension - 1; axis >= 0; --axis) {
        c[static_cast<std::size_t>(axis)] = static_cast<int>(linear % n) - spec_.size / 2;
        linear /= n;
    }
    return c;
}

std::size_t Lattice::linear_index(const IntVec& coords) const {
    std::size_t linear = 0;
    const long half = spec_.size / 2;
    for (int axis = 0; axis < spec_.dimension; ++axis)
        linear = linear * static_cast<std::size_t>(spec_.size) + wrap(coords[static_cast<std::size_t>(axis)] + half);
    return linear;
}

Momentum Lattice::momentum(std::size_t linear) const {
    Momentum m;
    m.dimension = spec_.dimension;
    m.index = coordinates(linear);
    for (int axis = 0; axis < spec_.dimension; ++axis)
        m.k[static_cast<std::size_t>(axis)] =
            2.0 * std::numbers::pi * m.index[static_cast<std::size_t>(axis)] / static_cast<double>(spec_.size);
    return m;
}

Complex Lattice::plane_wave(std::size_t k_linear, const IntVec& site) const {
    const IntVec m = coordinates(k_linear);
    long dot = 0;
    for (int axis = 0; axis < spec_.dimension; ++axis)
        dot += static_cast<long>(m[static_cast<std::size_t>(axis)]) * site[static_cast<std::size_t>(axis)];
    return phase(dot);
}

double Lattice::dispersion(const IntVec& m) const {
    const double scale = -2.0 * spec_.hopping;
    if (spec_.model == Model::bcc_tb) {
        const double s = sum4(cos_turn(m[0]), cos_turn(m[1]), cos_turn(m[2]),
                              cos_turn(static_cast<long>(m[0]) + m[1] + m[2]));
        return spec_.band_center + scale * s;
    }
    double s = 0.0;
    if (spec_.dimension == 2) {
        s = cos_turn(m[0]) + cos_turn(m[1]);
    } else {
        s = cos_turn(m[0]);
    }
    return spec_.band_center + scale * s;
}

std::pair<double, double> Lattice::band_edges() const noexcept {
    const double half_width = spec_.model == Model::bcc_tb ? 8.0 * spec_.hopping
                                                           : 2.0 * spec_.dimension * spec_.hopping;
    return {spec_.band_center - half_width, spec_.band_center + half_width};
}

std::vector<Complex> Lattice::transform(std::span<const Complex> in, int sign, double scale) const {
    if (in.size() != count_)
        throw ConfigError("transform input has " + std::to_string(in.size()) + " entries, lattice has " +
                          std::to_string(count_));
    const auto n = static_cast<std::size_t>(spec_.size);
    const long half = spec_.size / 2;
    // Phase table indexed by (m*x) mod N in centered coordinates.
    std::vector<Complex> table(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const long prod = (static_cast<long>(a) - half) * (static_cast<long>(b) - half);
            const Complex p = phase(prod);
            table[a * n + b] = sign > 0 ? std::conj(p) : p;
        }

    std::vector<Complex> cur(in.begin(), in.end());
    std::vector<Complex> next(count_);
    std::size_t stride = 1;
    for (int axis = spec_.dimension - 1; axis >= 0; --axis) {
        const std::size_t lines = count_ / n;
        const std::size_t outer_stride = stride * n;
        parallel::for_blocks(lines, [&](std::size_t begin, std::size_t end) {
            for (std::size_t line = begin; line < end; ++line) {
                const std::size_t base = (line / stride) * outer_stride + line % stride;
                for (std::size_t out = 0; out < n; ++out) {
                    Complex acc{};
                    const Complex* row = &table[out * n];
                    for (std::size_t src = 0; src < n; ++src) acc += row[src] * cur[base + src * stride];
                    next[base + out * stride] = acc;
                }
            }
        });
        std::swap(cur, next);
        stride *= n;
    }
    if (scale != 1.0)
        for (auto& v : cur) v *= scale;
    return cur;
}

double dispersion(const BathSpec& spec, const Momentum& k) {
    spec.validate();
    if (k.dimension != spec.dimension)
        throw ConfigError("momentum dimension " + std::to_string(k.dimension) + " does not match bath dimension " +
                          std::to_string(spec.dimension));
    // Off-grid momenta are evaluated directly from their components.
    bool on_grid = true;
    for (int axis = 0; axis < spec.dimension; ++axis) {
        const auto a = static_cast<std::size_t>(axis);
        const double expected = 2.0 * std::numbers::pi * k.index[a] / static_cast<double>(spec.size);
        if (expected != k.k[a] || k.index[a] < -spec.size / 2 || k.index[a] >= spec.size / 2) on_grid = false;
    }
    if (on_grid) return Lattice(spec).dispersion(k.index);
    const double scale = -2.0 * spec.hopping;
    if (spec.model == Model::bcc_tb)
        return spec.band_center +
               scale * (std::cos(k.k[0]) + std::cos(k.k[1]) + std::cos(k.k[2]) + std::cos(k.k[0] + k.k[1] + k.k[2]));
    double s = 0.0;
    for (int axis = 0; axis < spec.dimension; ++axis) s += std::cos(k.k[static_cast<std::size_t>(axis)]);
    return spec.band_center + scale * s;
}

std::vector<Momentum> momentum_grid(const BathSpec& spec) {
    const Lattice lattice(spec);
    std::vector<Momentum> grid;
    grid.reserve(lattice.mode_count());
    for (std::size_t i = 0; i < lattice.mode_count(); ++i) grid.push_back(lattice.momentum(i));
    return grid;
}

std::vector<Momentum> resonant_modes(const BathSpec& spec, double omega_e, double tol) {
    if (!(tol > 0.0)) throw ConfigError("resonant_modes tolerance must be positive");
    const Lattice lattice(spec);
    std::vector<Momentum> modes;
    for (std::size_t i = 0; i < lattice.mode_count(); ++i)
        if (std::abs(lattice.energy(i) - omega_e) <= tol) modes.push_back(lattice.momentum(i));
    return modes;
}

} // namespace giant
