// dynamics.cpp — Momentum-space RK4 propagation of the single-excitation sector

#include "giant/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "giant/error.hpp"
#include "giant/parallel.hpp"

namespace giant {

double ExcitationState::bath_population() const {
    double p = 0.0;
    for (const auto& c : bath) p += std::norm(c);
    return p;
}

double ExcitationState::norm() const { return std::norm(emitter) + bath_population(); }

namespace {

struct CouplingField {
    // Static: one array. Schedule: one array per segment, weighted by Ω_α(t).
    std::vector<std::vector<Complex>> arrays;
    const DriveSchedule* schedule{nullptr};

    bool time_dependent() const { return schedule != nullptr; }

    std::vector<Complex> weights(double t) const {
        if (!schedule) return {Complex{1.0, 0.0}};
        return schedule->amplitudes_at(t);
    }
};

double inv_sqrt_modes(const Lattice& lattice) { return 1.0 / std::sqrt(static_cast<double>(lattice.mode_count())); }

CouplingField build_field(const Lattice& lattice, const EmitterCoupling& coupling) {
    CouplingField field;
    if (const auto* schedule = std::get_if<DriveSchedule>(&coupling)) {
        field.schedule = schedule;
        for (const auto& seg : schedule->segments()) {
            CouplingProfile unit;
            unit.dimension = schedule->dimension();
            unit.center = schedule->center();
            unit.sites = {{seg.offset, Complex{1.0, 0.0}}};
            auto gk = gk_from_profile(unit, lattice);
            for (auto& v : gk.values) v *= inv_sqrt_modes(lattice);
            field.arrays.push_back(std::move(gk.values));
        }
        return field;
    }
    field.arrays.push_back(mode_couplings(lattice, coupling));
    return field;
}

// ḡ(k) at mode i for the given envelope weights.
inline Complex coupling_at(const CouplingField& field, const std::vector<Complex>& w, std::size_t i) {
    if (field.arrays.size() == 1) return w[0] * field.arrays[0][i];
    Complex g{};
    for (std::size_t a = 0; a < field.arrays.size(); ++a) g += w[a] * field.arrays[a][i];
    return g;
}

std::vector<double> breakpoints(double t_final, const std::vector<double>& snapshots, const DriveSchedule* schedule) {
    std::set<double> points(snapshots.begin(), snapshots.end());
    points.insert(t_final);
    if (schedule && schedule->is_step() && t_final > 0.0) {
        const double period = schedule->period();
        const auto switches = schedule->switching_times();
        for (long cycle = 0; cycle * period < t_final; ++cycle)
            for (double s : switches) {
                const double t = cycle * period + s;
                if (t > 0.0 && t < t_final) points.insert(t);
            }
    }
    points.erase(0.0);
    // Merge switching times that coincide with snapshots up to rounding.
    std::vector<double> out;
    for (double t : points) {
        if (!out.empty() && t - out.back() < 1e-12 * std::max(1.0, t)) {
            if (std::find(snapshots.begin(), snapshots.end(), t) != snapshots.end() || t == t_final) out.back() = t;
            continue;
        }
        out.push_back(t);
    }
    return out;
}

} // namespace

std::vector<Complex> mode_couplings(const Lattice& lattice, const EmitterCoupling& coupling) {
    std::vector<Complex> g;
    if (const auto* profile = std::get_if<CouplingProfile>(&coupling)) {
        g = gk_from_profile(*profile, lattice).values;
    } else if (const auto* gk = std::get_if<MomentumCoupling>(&coupling)) {
        if (gk->values.size() != lattice.mode_count())
            throw ConfigError("momentum coupling has " + std::to_string(gk->values.size()) + " samples, grid has " +
                              std::to_string(lattice.mode_count()));
        g = gk->values;
    } else {
        throw ConfigError("a drive schedule has no static mode couplings; use its time average");
    }
    const double scale = inv_sqrt_modes(lattice);
    for (auto& v : g) v *= scale;
    return g;
}

Trajectory evolve(const Lattice& lattice, const EmitterSpec& emitter, double t_final,
                  const std::vector<double>& snapshot_times, const EvolveOptions& options) {
    if (!(options.dt > 0.0) || !std::isfinite(options.dt)) throw ConfigError("time step dt must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be finite and >= 0");
    if (!std::isfinite(emitter.omega_e)) throw ConfigError("emitter frequency must be finite");
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        const double t = snapshot_times[i];
        if (t < 0.0 || t > t_final)
            throw ConfigError("snapshot time " + std::to_string(t) + " outside [0, " + std::to_string(t_final) + "]");
        if (i > 0 && t < snapshot_times[i - 1]) throw ConfigError("snapshot times must be sorted");
    }

    const CouplingField field = build_field(lattice, emitter.coupling);
    const std::size_t n = lattice.mode_count();
    const auto energies = lattice.energies();
    const double omega_e = emitter.omega_e;

    Trajectory traj;
    const double max_speed = 2.0 * lattice.spec().hopping;
    if (t_final * max_speed > lattice.size() / 2.0) {
        std::ostringstream msg;
        msg << "t_final*2J = " << t_final * max_speed << " exceeds N/2 = " << lattice.size() / 2
            << "; emission may wrap around the periodic lattice";
        traj.warnings.push_back(msg.str());
    }

    std::vector<Complex> y(n), acc(n), tmp(n);
    Complex ye{1.0, 0.0};
    double t = 0.0;

    const auto snapshot = [&](double time) {
        ExcitationState s;
        s.emitter = ye;
        s.bath = y;
        s.time = time;
        traj.snapshots.push_back(std::move(s));
    };
    const auto record_series = [&] {
        traj.series_times.push_back(t);
        traj.series_emitter.push_back(ye);
    };

    std::size_t next_snapshot = 0;
    while (next_snapshot < snapshot_times.size() && snapshot_times[next_snapshot] == 0.0) {
        snapshot(0.0);
        ++next_snapshot;
    }
    if (options.series_stride > 0) record_series();

    // Σ_k ḡ(k, t)* c_k with the deterministic block reduction.
    const auto feedback = [&](const std::vector<Complex>& c, const std::vector<Complex>& w) {
        return parallel::block_sum<Complex>(n, [&](std::size_t b, std::size_t e) {
            Complex s{};
            for (std::size_t i = b; i < e; ++i) s += std::conj(coupling_at(field, w, i)) * c[i];
            return s;
        });
    };

    const auto points = breakpoints(t_final, snapshot_times, field.schedule);
    const bool step_envelopes = field.schedule && field.schedule->is_step();
    const Complex minus_i{0.0, -1.0};
    std::size_t step_count = 0;

    std::vector<Complex> w0 = field.weights(0.0);
    Complex feedback_y = feedback(y, w0);

    for (double target : points) {
        const double span = target - t;
        if (span <= 0.0) continue;
        const auto substeps = static_cast<std::size_t>(std::ceil(span / options.dt * (1.0 - 1e-12)));
        const double h = span / static_cast<double>(std::max<std::size_t>(substeps, 1));
        traj.max_step = std::max(traj.max_step, h);
        const double t_start = t;
        for (std::size_t s = 0; s < std::max<std::size_t>(substeps, 1); ++s) {
            const double t0 = t_start + h * static_cast<double>(s);
            const double t1 = (s + 1 == substeps) ? target : t_start + h * static_cast<double>(s + 1);
            const double hs = t1 - t0;
            // Stage times; step envelopes are frozen at the step midpoint.
            const double tm = t0 + 0.5 * hs;
            const std::array<double, 4> stage_t = step_envelopes ? std::array<double, 4>{tm, tm, tm, tm}
                                                                 : std::array<double, 4>{t0, tm, tm, t1};
            std::array<std::vector<Complex>, 4> w;
            for (int k = 0; k < 4; ++k) w[static_cast<std::size_t>(k)] = field.weights(stage_t[static_cast<std::size_t>(k)]);
            // Weights for the fused feedback of the final stage (next step's first stage).
            const std::vector<Complex> w_next = field.weights(t1);

            static constexpr std::array<double, 4> acc_weight{1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
            static constexpr std::array<double, 4> next_offset{0.5, 0.5, 1.0, 0.0};

            // Step envelopes: the feedback of y must use the frozen midpoint weights.
            Complex stage_feedback = (step_envelopes || field.time_dependent()) ? feedback(y, w[0]) : feedback_y;
            Complex stage_e = ye;
            Complex acc_e = ye;
            for (int stage = 0; stage < 4; ++stage) {
                const auto st = static_cast<std::size_t>(stage);
                const std::vector<Complex>& input = stage == 0 ? y : tmp;
                const Complex ke = minus_i * (omega_e * stage_e + stage_feedback);
                const double aw = acc_weight[st] * hs;
                const double nw = next_offset[st] * hs;
                const bool last = stage == 3;
                const std::vector<Complex>& wn = last ? w_next : w[st + 1 < 4 ? st + 1 : 3];
                const std::vector<Complex>& wc = w[st];
                const Complex next_e = last ? Complex{} : ye + nw * ke;
                Complex partial = parallel::block_sum<Complex>(n, [&](std::size_t b, std::size_t e) {
                    Complex sum{};
                    for (std::size_t i = b; i < e; ++i) {
                        const Complex gi = coupling_at(field, wc, i);
                        const Complex kk = minus_i * (energies[i] * input[i] + gi * stage_e);
                        if (stage == 0)
                            acc[i] = y[i] + aw * kk;
                        else
                            acc[i] += aw * kk;
                        Complex nv;
                        if (last) {
                            nv = acc[i];
                        } else {
                            nv = y[i] + nw * kk;
                            tmp[i] = nv;
                        }
                        sum += std::conj(coupling_at(field, wn, i)) * nv;
                    }
                    return sum;
                });
                acc_e = (stage == 0 ? ye : acc_e) + aw * ke;
                stage_feedback = partial;
                stage_e = next_e;
            }
            std::swap(y, acc);
            ye = acc_e;
            feedback_y = stage_feedback;
            t = t1;
            ++step_count;
            if (options.series_stride > 0 && step_count % static_cast<std::size_t>(options.series_stride) == 0)
                record_series();
        }
        while (next_snapshot < snapshot_times.size() && snapshot_times[next_snapshot] <= target) {
            snapshot(snapshot_times[next_snapshot]);
            ++next_snapshot;
        }
    }
    while (next_snapshot < snapshot_times.size()) {
        snapshot(snapshot_times[next_snapshot]);
        ++next_snapshot;
    }
    traj.steps = step_count;

    ExcitationState final_state{ye, {}, t};
    double pop = parallel::block_sum<double>(n, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += std::norm(y[i]);
        return s;
    });
    traj.norm_drift = std::abs(std::norm(ye) + pop - 1.0);
    const double allowed = options.norm_drift_rate * std::max(1.0, t_final);
    if (traj.norm_drift > allowed) {
        std::ostringstream msg;
        msg << "norm drift " << traj.norm_drift << " exceeds " << allowed << " after t = " << t_final
            << " with step " << traj.max_step << "; reduce dt";
        throw IntegrationError(msg.str());
    }
    return traj;
}

std::vector<Complex> bath_realspace(const ExcitationState& state, const Lattice& lattice) {
    return lattice.transform(state.bath, +1, inv_sqrt_modes(lattice));
}

std::vector<Complex> bath_momentum(std::span<const Complex> sites, const Lattice& lattice) {
    return lattice.transform(sites, -1, inv_sqrt_modes(lattice));
}

std::vector<Complex> asymptotic_bath(const Lattice& lattice, const MomentumCoupling& gk, double omega_e,
                                     double gamma_m, double t) {
    if (!(gamma_m > 0.0)) throw ConfigError("Markovian rate must be positive");
    if (gk.values.size() != lattice.mode_count()) throw ConfigError("G(k) does not match the lattice grid");
    std::vector<Complex> c(lattice.mode_count());
    double norm = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double w = lattice.energy(i);
        c[i] = gk.values[i] * std::polar(1.0, -w * t) / Complex(w - omega_e, 0.5 * gamma_m);
        norm += std::norm(c[i]);
    }
    if (norm > 0.0)
        for (auto& v : c) v /= std::sqrt(norm);
    return c;
}

} // namespace giant
