/* modphi: stable laws, mod-phi residues, zones of control and local limit
 * theorems behind a C ABI. Handles are opaque; every fallible call returns a
 * status code and leaves a message retrievable via mp_last_error(). Strings
 * returned through char** out-parameters are heap-allocated and must be
 * released with mp_string_free(). */
#ifndef MODPHI_H
#define MODPHI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mp_status {
    MP_OK = 0,
    MP_ERR_INVALID_ARGUMENT = 1, /* bad input (parse errors, out-of-domain values) */
    MP_ERR_CAPABILITY = 2,       /* operation needs a pmf/sampler the model lacks */
    MP_ERR_NUMERICAL = 3,        /* quadrature or series failed to converge */
    MP_ERR_UNKNOWN_MODEL = 4,
    MP_ERR_INTERNAL = 5
} mp_status;

typedef struct mp_stable mp_stable;
typedef struct mp_model mp_model;

const char* mp_version(void);
/* thread-local message for the most recent failing call */
const char* mp_last_error(void);
void mp_string_free(char* s);

/* ---- stable laws -------------------------------------------------------- */

mp_status mp_stable_create(double c, double alpha, double beta, mp_stable** out);
void mp_stable_free(mp_stable* law);

mp_status mp_stable_levy_exponent(const mp_stable* law, double xi, double* re, double* im);
mp_status mp_stable_density(const mp_stable* law, double x, double* out);
mp_status mp_stable_density_zero_series(const mp_stable* law, double* out);
mp_status mp_stable_scaling_defect(const mp_stable* law, double t, double xi, double* out);

/* ---- models ------------------------------------------------------------- */

/* JSON array of registry names */
mp_status mp_model_names(char** json_array);

/* params_json: model parameters, e.g. {"r2":[0.9,0.98]}, {"q":[0.5]},
 * {"P":[[0.7,0.3],[0.2,0.8]],"state":0}, {"p":0.5}, {"beta":2.0},
 * {"increment":"pareto","pareto_alpha":1.5}. NULL means defaults. */
mp_status mp_model_create(const char* name, const char* params_json, mp_model** out);
void mp_model_free(mp_model* m);

mp_status mp_model_info(const mp_model* m, char** json);
mp_status mp_model_t(const mp_model* m, double index, double* out);
mp_status mp_model_charfn(const mp_model* m, double index, double xi, double* re, double* im);
mp_status mp_model_residue(const mp_model* m, double index, double xi, double* re, double* im);

/* zone_json: {"K":..,"gamma":..,"nu":..,"omega":..,"K1":..,"K2":..};
 * NULL uses the model's declared zone when one exists. */
mp_status mp_model_verify_zone(const mp_model* m, const double* indices, size_t n_indices,
                               const char* zone_json, int grid_points, char** report_json);

/* config_json keys: x, window [[a,b],...], indices [...], and one of
 * delta (ladder), scale (ladder, L1 models), eps (tilted models); optional
 * method "exact"|"parseval"|"montecarlo"|"fourier", mc_budget, seed. */
mp_status mp_model_llt(const mp_model* m, const char* config_json, char** report_json);

/* truncated L1 distance between theta_n and the model's limiting residue */
mp_status mp_model_l1_distance(const mp_model* m, double index, double cutoff,
                               double* value, double* tail_bound);

/* ---- batch driver -------------------------------------------------------- */

/* config_text: flat key=value sections, one experiment per [section].
 * Writes <out_dir>/<name>.json per experiment and <out_dir>/summary.csv;
 * out_dir may be NULL to skip writing. summary_json gets a combined document. */
mp_status mp_run_report(const char* config_text, const char* out_dir, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* MODPHI_H */
