// c_api.cpp — extern "C" wrappers over the giant core

#include "giant/giant_c.h"

#include <cstring>
#include <string>

#include "giant/coupling.hpp"
#include "giant/dynamics.hpp"
#include "giant/error.hpp"
#include "giant/floquet.hpp"
#include "giant/observables.hpp"
#include "giant/parallel.hpp"
#include "giant/runner.hpp"
#include "giant/version.hpp"

struct giant_bath {
    giant::Lattice lattice;
};

struct giant_profile {
    giant::CouplingProfile profile;
};

struct giant_gk {
    giant::MomentumCoupling gk;
};

struct giant_trajectory {
    giant::Trajectory trajectory;
};

namespace {

thread_local std::string last_error;

giant_status status_of(giant::ErrorKind kind) {
    switch (kind) {
    case giant::ErrorKind::config: return GIANT_ERR_CONFIG;
    case giant::ErrorKind::integration: return GIANT_ERR_INTEGRATION;
    case giant::ErrorKind::io: return GIANT_ERR_IO;
    case giant::ErrorKind::unsupported: return GIANT_ERR_UNSUPPORTED;
    case giant::ErrorKind::undefined: return GIANT_ERR_UNDEFINED;
    }
    return GIANT_ERR_INTERNAL;
}

template <class F>
giant_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return GIANT_OK;
    } catch (const giant::Error& e) {
        last_error = e.what();
        return status_of(e.kind());
    } catch (const std::exception& e) {
        last_error = e.what();
        return GIANT_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return GIANT_ERR_INTERNAL;
    }
}

giant_status argument_error(const char* what) {
    last_error = what;
    return GIANT_ERR_ARGUMENT;
}

char* copy_string(const std::string& s) {
    auto* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void copy_complex(const std::vector<giant::Complex>& in, double* re_im) {
    for (std::size_t i = 0; i < in.size(); ++i) {
        re_im[2 * i] = in[i].real();
        re_im[2 * i + 1] = in[i].imag();
    }
}

} // namespace

extern "C" {

const char* giant_version(void) { return giant::version; }

const char* giant_last_error(void) { return last_error.c_str(); }

void giant_string_free(char* s) { delete[] s; }

void giant_set_threads(int n) { giant::parallel::set_threads(n); }

giant_status giant_bath_create(int dimension, int size, const char* model, double hopping, double band_center,
                               giant_bath** out) {
    if (!out || !model) return argument_error("null argument");
    return guarded([&] {
        giant::BathSpec spec{dimension, size, giant::parse_model(model), hopping, band_center};
        *out = new giant_bath{giant::Lattice(spec)};
    });
}

void giant_bath_destroy(giant_bath* bath) { delete bath; }

size_t giant_bath_mode_count(const giant_bath* bath) { return bath ? bath->lattice.mode_count() : 0; }

giant_status giant_bath_energies(const giant_bath* bath, double* out, size_t len) {
    if (!bath || !out) return argument_error("null argument");
    if (len < bath->lattice.mode_count()) return argument_error("buffer too small");
    const auto e = bath->lattice.energies();
    std::copy(e.begin(), e.end(), out);
    return GIANT_OK;
}

giant_status giant_profile_from_json(const char* text, giant_profile** out) {
    if (!text || !out) return argument_error("null argument");
    return guarded([&] { *out = new giant_profile{giant::profile_from_json(text)}; });
}

giant_status giant_profile_named(const char* design, double g, int dimension, giant_profile** out) {
    if (!design || !out) return argument_error("null argument");
    return guarded([&] { *out = new giant_profile{giant::named_profile(giant::parse_design(design), g, dimension)}; });
}

giant_status giant_profile_to_json(const giant_profile* profile, char** out) {
    if (!profile || !out) return argument_error("null argument");
    return guarded([&] { *out = copy_string(giant::profile_to_json(profile->profile)); });
}

giant_status giant_profile_truncate(const giant_profile* profile, int n_tr, giant_profile** out) {
    if (!profile || !out) return argument_error("null argument");
    return guarded([&] { *out = new giant_profile{giant::truncate(profile->profile, n_tr)}; });
}

size_t giant_profile_support(const giant_profile* profile) { return profile ? profile->profile.support_size() : 0; }

void giant_profile_destroy(giant_profile* profile) { delete profile; }

giant_status giant_gk_from_profile(const giant_profile* profile, const giant_bath* bath, giant_gk** out) {
    if (!profile || !bath || !out) return argument_error("null argument");
    return guarded([&] { *out = new giant_gk{giant::gk_from_profile(profile->profile, bath->lattice)}; });
}

giant_status giant_gk_design(const char* design, double g, const giant_bath* bath, giant_gk** out) {
    if (!design || !bath || !out) return argument_error("null argument");
    return guarded([&] { *out = new giant_gk{giant::design_gk(giant::parse_design(design), g, bath->lattice)}; });
}

giant_status giant_gk_from_values(const double* re_im, size_t len, const giant_bath* bath, giant_gk** out) {
    if (!re_im || !bath || !out) return argument_error("null argument");
    if (len != 2 * bath->lattice.mode_count()) return argument_error("G(k) length does not match the lattice grid");
    return guarded([&] {
        giant::MomentumCoupling gk{{}, "user", "user"};
        gk.values.resize(len / 2);
        for (std::size_t i = 0; i < gk.values.size(); ++i) gk.values[i] = {re_im[2 * i], re_im[2 * i + 1]};
        *out = new giant_gk{std::move(gk)};
    });
}

giant_status giant_gk_values(const giant_gk* gk, double* re_im, size_t len) {
    if (!gk || !re_im) return argument_error("null argument");
    if (len < 2 * gk->gk.values.size()) return argument_error("buffer too small");
    copy_complex(gk->gk.values, re_im);
    return GIANT_OK;
}

giant_status giant_gk_inverse(const giant_gk* gk, const giant_bath* bath, giant_profile** out) {
    if (!gk || !bath || !out) return argument_error("null argument");
    return guarded([&] { *out = new giant_profile{giant::inverse_design(gk->gk, bath->lattice)}; });
}

void giant_gk_destroy(giant_gk* gk) { delete gk; }

giant_status giant_golden_rule_rate(const giant_gk* gk, const giant_bath* bath, double omega_e, double eta,
                                    double* out) {
    if (!gk || !bath || !out) return argument_error("null argument");
    return guarded([&] { *out = giant::golden_rule_rate(gk->gk, bath->lattice, omega_e, eta); });
}

giant_status giant_floquet_bound(double g_max, size_t n_p, double omega, double* out) {
    if (!out) return argument_error("null argument");
    return guarded([&] { *out = giant::first_order_norm_bound(g_max, n_p, omega); });
}

giant_status giant_evolve(const giant_bath* bath, const giant_gk* gk, double omega_e, double t_final, double dt,
                          giant_trajectory** out) {
    if (!bath || !gk || !out) return argument_error("null argument");
    return guarded([&] {
        giant::EvolveOptions opt;
        opt.dt = dt;
        giant::EmitterSpec emitter{omega_e, gk->gk};
        *out = new giant_trajectory{giant::evolve(bath->lattice, emitter, t_final, {t_final}, opt)};
    });
}

giant_status giant_trajectory_emitter(const giant_trajectory* traj, double* re, double* im) {
    if (!traj || !re || !im) return argument_error("null argument");
    const auto c = traj->trajectory.snapshots.back().emitter;
    *re = c.real();
    *im = c.imag();
    return GIANT_OK;
}

giant_status giant_trajectory_bath(const giant_trajectory* traj, double* re_im, size_t len) {
    if (!traj || !re_im) return argument_error("null argument");
    const auto& bath = traj->trajectory.snapshots.back().bath;
    if (len < 2 * bath.size()) return argument_error("buffer too small");
    copy_complex(bath, re_im);
    return GIANT_OK;
}

double giant_trajectory_norm_drift(const giant_trajectory* traj) { return traj ? traj->trajectory.norm_drift : -1.0; }

void giant_trajectory_destroy(giant_trajectory* traj) { delete traj; }

int giant_run(const char* subcommand, const char* config_path, const char* out_dir, int threads, double dt) {
    if (!subcommand || !config_path) {
        last_error = R"({"status":"error","kind":"config","message":"missing subcommand or config path","exit_code":2})";
        return 2;
    }
    giant::run::Overrides o;
    if (out_dir && *out_dir) o.out_dir = out_dir;
    if (dt > 0.0) o.dt = dt;
    o.threads = threads > 0 ? threads : 0;
    try {
        const auto outcome = giant::run::run_file(subcommand, config_path, o);
        last_error = outcome.exit_code == 0 ? std::string{} : outcome.error.dump();
        return outcome.exit_code;
    } catch (...) {
        last_error = R"({"status":"error","kind":"internal","message":"unexpected failure","exit_code":1})";
        return 1;
    }
}

} // extern "C"
