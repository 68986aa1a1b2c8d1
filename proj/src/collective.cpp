// collective.cpp — Born–Markov collective matrices and η extrapolation

#include "giant/collective.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "giant/error.hpp"
#include "giant/observables.hpp"
#include "giant/parallel.hpp"

namespace giant {

namespace {

struct PairSums {
    Complex j{};
    Complex gamma{};
    PairSums& operator+=(const PairSums& o) {
        j += o.j;
        gamma += o.gamma;
        return *this;
    }
};

double max_abs(const ComplexMatrix& m) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i) r = std::max(r, std::abs(m.data()[i]));
    return r;
}

double hermitian_residue(const ComplexMatrix& m) {
    const double scale = max_abs(m);
    if (scale == 0.0) return 0.0;
    return max_abs(m - m.adjoint()) / scale;
}

} // namespace

std::pair<double, double> regularized_kernels(double x, double eta) {
    const double d = x * x + eta * eta;
    return {x / d, eta / d};
}

double CollectiveMatrices::gamma_min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gamma, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double CollectiveMatrices::gamma_max_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gamma, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double eta_floor(const Lattice& lattice) { return 2.0 * 8.0 * lattice.spec().hopping / lattice.size(); }

CollectiveMatrices collective_couplings(const Lattice& lattice, const MomentumCoupling& gk,
                                        const std::vector<IntVec>& positions, double omega_e, double eta) {
    if (!(eta > 0.0)) throw ConfigError("regularizer eta must be positive");
    if (positions.empty()) throw ConfigError("at least one emitter position is required");
    if (gk.values.size() != lattice.mode_count()) throw ConfigError("G(k) does not match the lattice grid");
    const int dim = lattice.dimension();
    for (std::size_t a = 0; a < positions.size(); ++a)
        for (std::size_t b = a + 1; b < positions.size(); ++b)
            if (lattice.linear_index(positions[a]) == lattice.linear_index(positions[b]))
                throw ConfigError("emitter positions must be distinct");

    const std::size_t modes = lattice.mode_count();
    std::vector<double> wj(modes), wg(modes);
    for (std::size_t k = 0; k < modes; ++k) {
        const auto [pj, pg] = regularized_kernels(omega_e - lattice.energy(k), eta);
        const double w = std::norm(gk.values[k]);
        wj[k] = w * pj;
        wg[k] = 2.0 * w * pg;
    }

    const auto ne = static_cast<Eigen::Index>(positions.size());
    CollectiveMatrices out;
    out.positions = positions;
    out.eta = eta;
    out.J = ComplexMatrix::Zero(ne, ne);
    out.gamma = ComplexMatrix::Zero(ne, ne);
    const double inv = 1.0 / static_cast<double>(modes);
    for (Eigen::Index a = 0; a < ne; ++a) {
        for (Eigen::Index b = 0; b < ne; ++b) {
            IntVec diff{};
            for (int ax = 0; ax < dim; ++ax) {
                const auto u = static_cast<std::size_t>(ax);
                diff[u] = positions[static_cast<std::size_t>(a)][u] - positions[static_cast<std::size_t>(b)][u];
            }
            const auto s = parallel::block_sum<PairSums>(modes, [&](std::size_t begin, std::size_t end) {
                PairSums p;
                for (std::size_t k = begin; k < end; ++k) {
                    const Complex ph = std::conj(lattice.plane_wave(k, diff));
                    p.j += wj[k] * ph;
                    p.gamma += wg[k] * ph;
                }
                return p;
            });
            out.J(a, b) = s.j * inv;
            out.gamma(a, b) = s.gamma * inv;
        }
    }
    out.hermiticity_residue = std::max(hermitian_residue(out.J), hermitian_residue(out.gamma));
    out.J = (out.J + out.J.adjoint()) * 0.5;
    out.gamma = (out.gamma + out.gamma.adjoint()) * 0.5;
    return out;
}

CollectiveMatrices eta_extrapolation(const Lattice& lattice, const MomentumCoupling& gk,
                                     const std::vector<IntVec>& positions, double omega_e,
                                     const std::vector<double>& eta_list) {
    if (eta_list.size() < 3) throw ConfigError("eta extrapolation needs at least three values");
    for (std::size_t i = 1; i < eta_list.size(); ++i)
        if (!(eta_list[i] < eta_list[i - 1])) throw ConfigError("eta values must be strictly decreasing");
    const double floor = eta_floor(lattice);
    if (eta_list.back() < floor)
        throw ConfigError("eta " + format_double(eta_list.back()) + " is below the level-spacing floor " +
                          format_double(floor));

    std::vector<CollectiveMatrices> runs;
    for (double eta : eta_list) runs.push_back(collective_couplings(lattice, gk, positions, omega_e, eta));

    // Neville tableau evaluated at η = 0; `skip` drops the largest η.
    const auto neville = [&](auto pick, std::size_t skip) {
        std::vector<ComplexMatrix> p;
        std::vector<double> x;
        for (std::size_t i = skip; i < runs.size(); ++i) {
            p.push_back(pick(runs[i]));
            x.push_back(eta_list[i]);
        }
        const std::size_t n = p.size();
        for (std::size_t level = 1; level < n; ++level)
            for (std::size_t i = 0; i + level < n; ++i) {
                const double xi = x[i], xj = x[i + level];
                p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
            }
        return p[0];
    };
    const auto pick_j = [](const CollectiveMatrices& m) -> const ComplexMatrix& { return m.J; };
    const auto pick_g = [](const CollectiveMatrices& m) -> const ComplexMatrix& { return m.gamma; };

    CollectiveMatrices out = runs.back();
    out.eta = 0.0;
    out.J = neville(pick_j, 0);
    out.gamma = neville(pick_g, 0);
    const auto componentwise = [](const ComplexMatrix& d) {
        return d.unaryExpr([](const Complex& z) { return Complex{std::abs(z.real()), std::abs(z.imag())}; }).eval();
    };
    out.J_error = componentwise(out.J - neville(pick_j, 1));
    out.gamma_error = componentwise(out.gamma - neville(pick_g, 1));
    out.hermiticity_residue = 0.0;
    for (const auto& r : runs) out.hermiticity_residue = std::max(out.hermiticity_residue, r.hermiticity_residue);
    for (std::size_t i = 1; i < runs.size(); ++i)
        out.spreads.push_back(std::max(max_abs(runs[i].J - runs[i - 1].J), max_abs(runs[i].gamma - runs[i - 1].gamma)));
    return out;
}

void write_matrix_csv(const std::filesystem::path& path, const ComplexMatrix& m, const ComplexMatrix& error,
                      const std::vector<std::string>& header) {
    const bool with_error = error.size() == m.size() && error.size() > 0;
    std::vector<std::string> columns{"i", "j", "re", "im"};
    if (with_error) {
        columns.push_back("err_re");
        columns.push_back("err_im");
    }
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::vector<double> row{static_cast<double>(i), static_cast<double>(j), m(i, j).real(), m(i, j).imag()};
            if (with_error) {
                row.push_back(error(i, j).real());
                row.push_back(error(i, j).imag());
            }
            rows.push_back(std::move(row));
        }
    write_series_csv(path, columns, rows, header);
}

} // namespace giant
