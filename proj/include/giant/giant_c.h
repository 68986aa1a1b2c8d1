/* giant_c.h — C interface to the giant emitter toolkit */

#pragma once

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GIANT_API __declspec(dllexport)
#else
#define GIANT_API __attribute__((visibility("default")))
#endif

typedef enum giant_status {
    GIANT_OK = 0,
    GIANT_ERR_INTERNAL = 1,
    GIANT_ERR_CONFIG = 2,
    GIANT_ERR_INTEGRATION = 3,
    GIANT_ERR_IO = 4,
    GIANT_ERR_UNSUPPORTED = 5,
    GIANT_ERR_UNDEFINED = 6,
    GIANT_ERR_ARGUMENT = 7, /* null handle or undersized buffer */
} giant_status;

typedef struct giant_bath giant_bath;
typedef struct giant_profile giant_profile;
typedef struct giant_gk giant_gk;
typedef struct giant_trajectory giant_trajectory;

GIANT_API const char* giant_version(void);
/* Message of the last failed call on this thread, "" if none. */
GIANT_API const char* giant_last_error(void);
GIANT_API void giant_string_free(char* s);
GIANT_API void giant_set_threads(int n);

/* Bath: model is "square_tb" or "bcc_tb". */
GIANT_API giant_status giant_bath_create(int dimension, int size, const char* model, double hopping,
                                         double band_center, giant_bath** out);
GIANT_API void giant_bath_destroy(giant_bath* bath);
GIANT_API size_t giant_bath_mode_count(const giant_bath* bath);
GIANT_API giant_status giant_bath_energies(const giant_bath* bath, double* out, size_t len);

/* Profiles travel as JSON documents. */
GIANT_API giant_status giant_profile_from_json(const char* text, giant_profile** out);
GIANT_API giant_status giant_profile_named(const char* design, double g, int dimension, giant_profile** out);
GIANT_API giant_status giant_profile_to_json(const giant_profile* profile, char** out);
GIANT_API giant_status giant_profile_truncate(const giant_profile* profile, int n_tr, giant_profile** out);
GIANT_API size_t giant_profile_support(const giant_profile* profile);
GIANT_API void giant_profile_destroy(giant_profile* profile);

/* Momentum couplings; values are interleaved re, im pairs in grid order (len = 2 * modes). */
GIANT_API giant_status giant_gk_from_profile(const giant_profile* profile, const giant_bath* bath, giant_gk** out);
GIANT_API giant_status giant_gk_design(const char* design, double g, const giant_bath* bath, giant_gk** out);
GIANT_API giant_status giant_gk_from_values(const double* re_im, size_t len, const giant_bath* bath, giant_gk** out);
GIANT_API giant_status giant_gk_values(const giant_gk* gk, double* re_im, size_t len);
GIANT_API giant_status giant_gk_inverse(const giant_gk* gk, const giant_bath* bath, giant_profile** out);
GIANT_API void giant_gk_destroy(giant_gk* gk);

/* Observables on a coupling. */
GIANT_API giant_status giant_golden_rule_rate(const giant_gk* gk, const giant_bath* bath, double omega_e, double eta,
                                              double* out);
GIANT_API giant_status giant_floquet_bound(double g_max, size_t n_p, double omega, double* out);

/* Static-coupling propagation from the excited emitter. */
GIANT_API giant_status giant_evolve(const giant_bath* bath, const giant_gk* gk, double omega_e, double t_final,
                                    double dt, giant_trajectory** out);
GIANT_API giant_status giant_trajectory_emitter(const giant_trajectory* traj, double* re, double* im);
GIANT_API giant_status giant_trajectory_bath(const giant_trajectory* traj, double* re_im, size_t len);
GIANT_API double giant_trajectory_norm_drift(const giant_trajectory* traj);
GIANT_API void giant_trajectory_destroy(giant_trajectory* traj);

/* Runs one CLI subcommand. Returns the process exit code (0, 1 or 2).
 * out_dir may be NULL to use the config's output_dir; dt <= 0 keeps the config value;
 * threads <= 0 keeps the runtime default. On failure giant_last_error() holds the
 * JSON error record. */
GIANT_API int giant_run(const char* subcommand, const char* config_path, const char* out_dir, int threads, double dt);

#ifdef __cplusplus
}
#endif
