#ifndef STEPSTRESS_CAPI_H
#define STEPSTRESS_CAPI_H

/* C interface to the step-stress lifetime library.
 *
 * Conventions:
 *  - Every fallible call returns a status code; 0 is success.
 *  - On failure, ssx_last_error() returns a thread-local message describing
 *    the most recent error on the calling thread.
 *  - Strings returned through char** out-parameters are heap-allocated and
 *    must be released with ssx_string_free().
 *  - Structured inputs and outputs are JSON documents (see README for the
 *    schemas); datasets are CSV with a commented header.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum ssx_status {
  SSX_OK = 0,
  SSX_ERR_NUMERIC = 1,    /* singular information, non-convergence guards, ... */
  SSX_ERR_VALIDATION = 2, /* bad arguments, malformed configs or datasets */
  SSX_ERR_IO = 3          /* file system failures */
};

const char* ssx_version(void);

/* Message for the last failing call on this thread; empty string if none. */
const char* ssx_last_error(void);

void ssx_string_free(char* s);

/* Simulate a dataset from a config document (model parameters, levels, change
 * times or target probabilities, n, scheme, seed). Outputs the dataset CSV
 * and a sidecar JSON echoing the resolved plan. Either out pointer may be
 * NULL if that output is not wanted. */
int ssx_simulate(const char* config_json, char** out_csv, char** out_sidecar_json);

/* Fit the model to a dataset. plan_json supplies the stress plan and n;
 * options_json (may be NULL) supports:
 *   {"ci": true, "conf_levels": [0.9,...], "boot_B": 500, "seed": 1,
 *    "test_gamma1": true, "init": [g0, g1, sigma]}
 * The report JSON carries estimates, standard errors, convergence info and
 * any requested interval/test blocks. Statistical non-convergence is reported
 * in the JSON, not as an error status. */
int ssx_fit(const char* dataset_csv, const char* plan_json,
            const char* options_json, char** out_report_json);

/* Run a Monte Carlo scenario document; returns the report CSV. jobs <= 0
 * means one worker. Output is independent of jobs. */
int ssx_mc_run(const char* scenario_json, int jobs, char** out_report_csv);

/* {"gamma0":..,"gamma1":..,"sigma":.., levels..., "target_cum_probs":[...]}
 * -> {"taus":[...]} */
int ssx_design_taus(const char* request_json, char** out_json);

/* {"x":[...], "mean_lifetimes":[...], "sd_first":..}
 * -> {"gamma0":..,"gamma1":..,"sigma":..} */
int ssx_calibrate(const char* request_json, char** out_json);

/* Opaque evaluated model: parameters plus a resolved stress plan. */
typedef struct ssx_model ssx_model;

/* model_json: {"gamma0":..,"gamma1":..,"sigma":.., levels..., "taus":[...]} */
int ssx_model_new(const char* model_json, ssx_model** out_model);
void ssx_model_free(ssx_model* model);

int ssx_model_cdf(const ssx_model* model, double t, double* out_p);
int ssx_model_pdf(const ssx_model* model, double t, double* out_density);
int ssx_model_quantile(const ssx_model* model, double p, double* out_t);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STEPSTRESS_CAPI_H */
