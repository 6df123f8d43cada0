/* C interface to the mixture-model estimation library.
 *
 * All functions return a mixlab_status; on failure a thread-local message
 * is available from mixlab_last_error(). Objects are opaque handles owned
 * by the caller and released with the matching _free function. Rich
 * inputs and outputs (fit configurations, reports, check parameters)
 * travel as JSON strings whose schemas are documented in the README.
 */
#ifndef MIXLAB_H
#define MIXLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define MIXLAB_API __declspec(dllexport)
#else
#  define MIXLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mixlab_status {
  MIXLAB_OK = 0,
  MIXLAB_ERROR_INVALID_ARGUMENT = 1, /* contract violation / bad handle */
  MIXLAB_ERROR_DOMAIN = 2,           /* value outside mathematical domain */
  MIXLAB_ERROR_PARSE = 3,            /* malformed JSON/CSV or schema violation */
  MIXLAB_ERROR_IO = 4,               /* file system failure */
  MIXLAB_ERROR_FIT = 5,              /* estimation failed (e.g. every restart died) */
  MIXLAB_ERROR_INTERNAL = 6
} mixlab_status;

typedef struct mixlab_mixing mixlab_mixing;   /* mixing distribution */
typedef struct mixlab_sample mixlab_sample;   /* observation sample */
typedef struct mixlab_result mixlab_result;   /* JSON-bearing result */

MIXLAB_API const char* mixlab_version(void);
MIXLAB_API const char* mixlab_status_name(mixlab_status s);
/* Message for the last failure on this thread; empty string if none. */
MIXLAB_API const char* mixlab_last_error(void);

/* --- mixing distributions ------------------------------------------- */
MIXLAB_API mixlab_status mixlab_mixing_from_json(const char* json_text, mixlab_mixing** out);
MIXLAB_API mixlab_status mixlab_mixing_to_json(const mixlab_mixing* g, char** json_out);
MIXLAB_API mixlab_status mixlab_mixing_load(const char* path, mixlab_mixing** out);
MIXLAB_API mixlab_status mixlab_mixing_save(const mixlab_mixing* g, const char* path);
MIXLAB_API void mixlab_mixing_free(mixlab_mixing* g);

/* Exact Kiefer-Wolfowitz distance; dim is 1 (means) or 2 (mean, scale). */
MIXLAB_API mixlab_status mixlab_kw_distance(const mixlab_mixing* a, const mixlab_mixing* b,
                                            int dim, double* value_out,
                                            uint64_t* cells_out /* may be NULL */);

/* --- samples --------------------------------------------------------- */
MIXLAB_API mixlab_status mixlab_sample_generate(const char* family_json, const mixlab_mixing* g,
                                                size_t n, uint64_t seed, mixlab_sample** out);
MIXLAB_API mixlab_status mixlab_sample_load_csv(const char* csv_path, mixlab_sample** out);
/* Writes the CSV plus a <stem>.meta.json sidecar (seed, family, G). */
MIXLAB_API mixlab_status mixlab_sample_save_csv(const mixlab_sample* s, const char* csv_path,
                                                const char* family_json /* may be NULL */,
                                                const mixlab_mixing* g /* may be NULL */);
MIXLAB_API size_t mixlab_sample_size(const mixlab_sample* s);
MIXLAB_API void mixlab_sample_free(mixlab_sample* s);

MIXLAB_API mixlab_status mixlab_log_likelihood(const char* family_json, const mixlab_mixing* g,
                                               const mixlab_sample* s, double* out);

/* --- estimation ------------------------------------------------------ */
/* config_json: FitConfig schema; result JSON: FitReport schema. */
MIXLAB_API mixlab_status mixlab_fit(const mixlab_sample* s, const char* config_json,
                                    mixlab_result** out);
/* config_json: NPMLE schema (family, grid_atoms, tol_grad, ...). */
MIXLAB_API mixlab_status mixlab_npmle(const mixlab_sample* s, const char* config_json,
                                      mixlab_result** out);

/* --- theory checks and experiments ----------------------------------- */
/* name: jensen_kl | pfanzagl | finite_grid_mle | degenerate_sequence |
 *       concentration | poisson_heavy_tail | g_dominance |
 *       kl_finiteness_bounded_poisson.
 * passed_out (may be NULL) receives 1/0. */
MIXLAB_API mixlab_status mixlab_check(const char* name, const char* params_json,
                                      mixlab_result** out, int* passed_out);

/* kind: consistency | degeneracy. Writes CSV/summary files when the
 * config names an output_path; returns the summary JSON. */
MIXLAB_API mixlab_status mixlab_experiment(const char* kind, const char* config_json,
                                           mixlab_result** out);

/* --- results --------------------------------------------------------- */
/* Borrowed pointer, valid until the result is freed. */
MIXLAB_API const char* mixlab_result_json(const mixlab_result* r);
MIXLAB_API void mixlab_result_free(mixlab_result* r);
MIXLAB_API void mixlab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* MIXLAB_H */
