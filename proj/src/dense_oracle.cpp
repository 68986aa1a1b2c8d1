// dense_oracle.cpp — Explicit real-space single-excitation Hamiltonian for verification

#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "giant/dynamics.hpp"
#include "giant/error.hpp"

namespace giant {

namespace {

std::vector<IntVec> hopping_vectors(const Lattice& lattice) {
    if (lattice.spec().model == Model::bcc_tb)
        return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}, {1, 1, 1}, {-1, -1, -1}};
    if (lattice.dimension() == 1) return {{1, 0, 0}, {-1, 0, 0}};
    return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
}

// Emitter-to-site amplitudes for a static profile, in grid order.
std::vector<Complex> site_couplings(const Lattice& lattice, const CouplingProfile& profile) {
    profile.validate();
    if (profile.dimension != lattice.dimension()) throw ConfigError("profile dimension does not match the bath");
    std::vector<Complex> g(lattice.mode_count());
    for (const auto& s : profile.sites) {
        IntVec p{};
        for (std::size_t a = 0; a < 3; ++a) p[a] = profile.center[a] + s.offset[a];
        g[lattice.linear_index(p)] += s.amplitude;
    }
    return g;
}

void check_size(const Lattice& lattice, const DenseOptions& options) {
    const std::size_t dim = lattice.mode_count() + 1;
    if (lattice.size() > options.max_size || dim > options.max_dimension) {
        std::ostringstream msg;
        msg << "dense oracle refuses N = " << lattice.size() << " (matrix dimension " << dim << "); limits are N <= "
            << options.max_size << " and dimension <= " << options.max_dimension;
        throw ConfigError(msg.str());
    }
}

// Direct O(M²) plane-wave projection, kept separate from the separable transform.
std::vector<Complex> project_to_modes(const Lattice& lattice, const Eigen::VectorXcd& psi) {
    const std::size_t m = lattice.mode_count();
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<Complex> ck(m);
    for (std::size_t k = 0; k < m; ++k) {
        Complex acc{};
        for (std::size_t n = 0; n < m; ++n)
            acc += lattice.plane_wave(k, lattice.coordinates(n)) * psi(static_cast<Eigen::Index>(n + 1));
        ck[k] = acc * scale;
    }
    return ck;
}

std::vector<Complex> build_dense(const Lattice& lattice, double omega_e, const std::vector<Complex>& g) {
    const std::size_t m = lattice.mode_count();
    const std::size_t dim = m + 1;
    std::vector<Complex> h(dim * dim);
    const auto at = [&](std::size_t r, std::size_t c) -> Complex& { return h[r * dim + c]; };
    at(0, 0) = omega_e;
    const double hop = lattice.spec().hopping;
    const auto vectors = hopping_vectors(lattice);
    for (std::size_t i = 0; i < m; ++i) {
        at(i + 1, 0) = g[i];
        at(0, i + 1) = std::conj(g[i]);
        at(i + 1, i + 1) = lattice.spec().band_center;
        const IntVec n = lattice.coordinates(i);
        for (const auto& v : vectors) {
            IntVec nb{};
            for (std::size_t a = 0; a < 3; ++a) nb[a] = n[a] + v[a];
            at(lattice.linear_index(nb) + 1, i + 1) += -hop;
        }
    }
    return h;
}

} // namespace

std::vector<Complex> dense_hamiltonian(const Lattice& lattice, double omega_e, const CouplingProfile& profile) {
    return build_dense(lattice, omega_e, site_couplings(lattice, profile));
}

ExcitationState dense_oracle_evolve(const Lattice& lattice, const EmitterSpec& emitter, double t_final,
                                    const DenseOptions& options) {
    check_size(lattice, options);
    if (!(t_final >= 0.0)) throw ConfigError("t_final must be >= 0");
    const std::size_t m = lattice.mode_count();
    const auto dim = static_cast<Eigen::Index>(m + 1);

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;

    const auto to_matrix = [&](const std::vector<Complex>& flat) {
        Eigen::MatrixXcd mat(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index c = 0; c < dim; ++c) mat(r, c) = flat[static_cast<std::size_t>(r * dim + c)];
        return mat;
    };

    if (const auto* schedule = std::get_if<DriveSchedule>(&emitter.coupling)) {
        // Real-space RK4 with sparse hopping and the instantaneous envelopes.
        CouplingProfile footprint = schedule->footprint();
        std::vector<std::vector<Complex>> unit;
        for (const auto& seg : schedule->segments()) {
            CouplingProfile one = footprint;
            one.sites = {{seg.offset, Complex{1.0, 0.0}}};
            unit.push_back(site_couplings(lattice, one));
        }
        const Eigen::MatrixXcd bath = to_matrix(build_dense(lattice, emitter.omega_e, std::vector<Complex>(m)));
        const Eigen::SparseMatrix<Complex> h0 = bath.sparseView();

        const auto rhs = [&](double t, const Eigen::VectorXcd& v) {
            Eigen::VectorXcd out = h0 * v;
            const auto w = schedule->amplitudes_at(t);
            for (std::size_t a = 0; a < unit.size(); ++a) {
                if (w[a] == Complex{}) continue;
                for (std::size_t i = 0; i < m; ++i) {
                    const Complex gi = w[a] * unit[a][i];
                    if (gi == Complex{}) continue;
                    out(static_cast<Eigen::Index>(i + 1)) += gi * v(0);
                    out(0) += std::conj(gi) * v(static_cast<Eigen::Index>(i + 1));
                }
            }
            return Eigen::VectorXcd(Complex(0.0, -1.0) * out);
        };

        // Breakpoints at every step-envelope switch so no step straddles one.
        std::vector<double> points;
        if (schedule->is_step()) {
            const auto switches = schedule->switching_times();
            for (long cycle = 0; cycle * schedule->period() < t_final; ++cycle)
                for (double s : switches) {
                    const double t = cycle * schedule->period() + s;
                    if (t > 0.0 && t < t_final) points.push_back(t);
                }
        }
        points.push_back(t_final);
        double t = 0.0;
        for (double target : points) {
            if (target <= t) continue;
            const auto steps = static_cast<long>(std::ceil((target - t) / options.dt));
            const double h = (target - t) / static_cast<double>(steps);
            for (long s = 0; s < steps; ++s) {
                const double t0 = t + h * static_cast<double>(s);
                const double tm = t0 + 0.5 * h;
                const double ta = schedule->is_step() ? tm : t0;
                const double tb = schedule->is_step() ? tm : t0 + h;
                const Eigen::VectorXcd k1 = rhs(ta, psi);
                const Eigen::VectorXcd k2 = rhs(tm, psi + 0.5 * h * k1);
                const Eigen::VectorXcd k3 = rhs(tm, psi + 0.5 * h * k2);
                const Eigen::VectorXcd k4 = rhs(tb, psi + h * k3);
                psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            t = target;
        }
    } else {
        CouplingProfile profile;
        if (const auto* p = std::get_if<CouplingProfile>(&emitter.coupling))
            profile = *p;
        else
            profile = inverse_design(std::get<MomentumCoupling>(emitter.coupling), lattice);
        const Eigen::MatrixXcd h = to_matrix(dense_hamiltonian(lattice, emitter.omega_e, profile));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
        const Eigen::MatrixXcd& v = eig.eigenvectors();
        Eigen::VectorXcd coeff = v.adjoint() * psi;
        for (Eigen::Index i = 0; i < dim; ++i) coeff(i) *= std::polar(1.0, -eig.eigenvalues()(i) * t_final);
        psi = v * coeff;
    }

    ExcitationState out;
    out.emitter = psi(0);
    out.bath = project_to_modes(lattice, psi);
    out.time = t_final;
    return out;
}

} // namespace giant
