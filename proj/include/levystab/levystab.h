/*
 * C interface to the levystab library: heavy-tailed SGD dynamics, stability
 * bounds and Wasserstein diagnostics.
 *
 * Functions return an lvs_status. On failure, lvs_last_error() describes the
 * most recent error on the calling thread. Handles are opaque and owned by the
 * caller; each *_new has a matching *_free that accepts NULL.
 */
#ifndef LEVYSTAB_H
#define LEVYSTAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LEVYSTAB_BUILDING_LIBRARY)
#    define LVS_API __declspec(dllexport)
#  else
#    define LVS_API __declspec(dllimport)
#  endif
#else
#  define LVS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the command-line exit codes. */
typedef enum lvs_status {
  LVS_OK = 0,
  LVS_ERR_INTERNAL = 1,
  LVS_ERR_CONFIG = 2,
  LVS_ERR_DOMAIN = 3,
  LVS_ERR_ACCEPTANCE = 4,
  LVS_ERR_DIVERGENCE = 5
} lvs_status;

typedef struct lvs_config lvs_config;
typedef struct lvs_report lvs_report;
typedef struct lvs_rng lvs_rng;

LVS_API const char* lvs_version(void);
/* Message for the last failing call on this thread; empty if none. */
LVS_API const char* lvs_last_error(void);

/* ---- configuration ---------------------------------------------------- */

LVS_API lvs_config* lvs_config_new(void);
LVS_API void lvs_config_free(lvs_config* cfg);
/* Merges key = value lines from a file or string; later values win. */
LVS_API lvs_status lvs_config_parse_file(lvs_config* cfg, const char* path);
LVS_API lvs_status lvs_config_parse_text(lvs_config* cfg, const char* text);
LVS_API lvs_status lvs_config_set(lvs_config* cfg, const char* key, const char* value);
/* Copies the value into buf (NUL-terminated, truncated to buf_len). Writes the
 * full length to *needed when non-NULL. LVS_ERR_CONFIG if the key is unset. */
LVS_API lvs_status lvs_config_get(const lvs_config* cfg, const char* key, char* buf, size_t buf_len,
                                  size_t* needed);

/* ---- commands --------------------------------------------------------- */

/* Runs gcurve, stability-sweep, moment-divergence, validate or bounds. On
 * LVS_OK or LVS_ERR_ACCEPTANCE a report is returned through *out; the latter
 * means the command completed but its checks failed. */
LVS_API lvs_status lvs_run(const char* command, const lvs_config* cfg, lvs_report** out);
LVS_API const char* lvs_report_text(const lvs_report* report);
LVS_API const char* lvs_report_format(const lvs_report* report);
LVS_API int lvs_report_status(const lvs_report* report);
LVS_API void lvs_report_free(lvs_report* report);

/* ---- special functions and bound formulas ----------------------------- */

LVS_API lvs_status lvs_gamma(double x, double* out);
LVS_API lvs_status lvs_log_abs_gamma(double x, double* out);
LVS_API lvs_status lvs_digamma(double x, double* out);
LVS_API lvs_status lvs_log_g(double alpha, size_t d, double* out);
LVS_API lvs_status lvs_g(double alpha, size_t d, double* out);
/* Bundle order: K1, K2, B, m, K, L, M. */
LVS_API lvs_status lvs_compute_c0(double alpha, size_t d, const double bundle[7], double* out);
LVS_API lvs_status lvs_critical_alpha0(double* c0, double* alpha0);

/* ---- sampling --------------------------------------------------------- */

LVS_API lvs_rng* lvs_rng_new(uint64_t seed, uint64_t stream);
LVS_API void lvs_rng_free(lvs_rng* rng);
/* Fills out[0..count) with independent scalar symmetric alpha-stable draws. */
LVS_API lvs_status lvs_sample_sas(lvs_rng* rng, double alpha, double scale, double* out, size_t count);
/* One rotationally symmetric draw in R^d. */
LVS_API lvs_status lvs_sample_isotropic(lvs_rng* rng, double alpha, double scale, double* out, size_t d);

/* ---- Wasserstein ------------------------------------------------------ */

LVS_API lvs_status lvs_w1_exact_1d(const double* a, const double* b, size_t n, double* out);
/* Row-major clouds of n points in R^d. */
LVS_API lvs_status lvs_w1_assignment(const double* a, const double* b, size_t n, size_t d, double* out);

#ifdef __cplusplus
}
#endif

#endif /* LEVYSTAB_H */
