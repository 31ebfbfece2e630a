/* C interface to the hopfdeg library.
 *
 * All functions return an hd_status. On failure hd_last_error() holds a
 * message for the calling thread. Strings returned through char** outputs are
 * owned by the caller and released with hd_string_free. Option arguments are
 * JSON objects (NULL or "" means defaults); unknown keys are rejected with
 * HD_ERR_CONFIG.
 */
#ifndef HOPFDEG_H
#define HOPFDEG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define HD_API __declspec(dllexport)
#else
#define HD_API __attribute__((visibility("default")))
#endif

typedef enum hd_status {
  HD_OK = 0,
  HD_ERR_INVALID_ARGUMENT = 1,
  HD_ERR_DIMENSION = 2,
  HD_ERR_UNSUPPORTED = 3,
  /* The computation ran but the invariant could not be certified; the result
     JSON is still written. */
  HD_INCONCLUSIVE = 4,
  HD_ERR_SUPPORT = 5,
  HD_ERR_NOT_REGULAR = 6,
  HD_ERR_CONFIG = 7,
  HD_ERR_IO = 8,
  HD_ERR_INTERNAL = 9
} hd_status;

typedef struct hd_map hd_map;

HD_API const char* hd_version(void);
HD_API const char* hd_status_name(hd_status status);
HD_API const char* hd_last_error(void);
HD_API void hd_string_free(char* s);

/* 0 restores the hardware default. */
HD_API hd_status hd_set_threads(int threads);
/* Worker count currently in effect. */
HD_API int hd_threads(void);

/* family_json: {"family": ..., "params": {...}}. */
HD_API hd_status hd_map_create(const char* family_json, hd_map** out);
HD_API void hd_map_free(hd_map* map);
HD_API int hd_map_source_dim(const hd_map* map);
HD_API int hd_map_target_dim(const hd_map* map);
/* point has source_dim + 1 entries (a point of S^m), out has target_dim. */
HD_API hd_status hd_map_eval(const hd_map* map, const double* point, double* out);
HD_API hd_status hd_map_descriptor(const hd_map* map, char** json_out);

/* Brouwer degree by quadrature and by preimage counting.
   options: {"resolution", "value", "seed"}. */
HD_API hd_status hd_degree(const hd_map* map, const char* options_json, char** result_json);

/* Hopf invariant by the Whitehead integral and by fiber linking.
   options: {"N", "L", "stencil", "cap_radius", "p", "q", "seed", "min_separation_cells"}. */
HD_API hd_status hd_hopf(const hd_map* map, const char* options_json, char** result_json);

/* Gagliardo seminorm on the source sphere.
   options: {"s", "p", "method", "resolution", "samples", "seed", "metric"}. */
HD_API hd_status hd_seminorm(const hd_map* map, const char* options_json, char** result_json);

/* Runs an experiment. config: {"experiment": id, ...}; options: {"seed",
   "mc_samples", "N", "L", "hopf_max_computed_k", "commutator_amplitude"}.
   csv_out and plot_out may be NULL. */
HD_API hd_status hd_experiment(const char* config_json, const char* options_json, char** summary_json,
                               char** csv_out, char** plot_out);

#ifdef __cplusplus
}
#endif

#endif
