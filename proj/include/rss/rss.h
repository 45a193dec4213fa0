/* C API for the redundantly encoded resource-state simulator.
 *
 * The library hands out opaque handles; every handle must be released with
 * the matching *_free function. Strings returned through char** are owned by
 * the caller and released with rss_string_free. Calls returning rss_status
 * leave a thread-local message retrievable via rss_last_error on failure.
 */
#ifndef RSS_RSS_H
#define RSS_RSS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rss_status {
  RSS_OK = 0,
  RSS_ERR_INVALID_ARGUMENT = 1,
  RSS_ERR_PARSE = 2,
  RSS_ERR_SELF_CHECK = 3,
  RSS_ERR_INTERNAL = 4,
} rss_status;

typedef struct rss_config rss_config;  /* parsed configuration document */
typedef struct rss_result rss_result;  /* generated state plus its configuration */

const char* rss_version(void);
const char* rss_status_name(rss_status status);
/* Message from the most recent failing call on this thread. */
const char* rss_last_error(void);

void rss_string_free(char* text);

/* -- configuration ------------------------------------------------------- */

rss_status rss_config_parse_file(const char* path, rss_config** out);
rss_status rss_config_parse_string(const char* text, rss_config** out);
/* Key syntax "section.key", e.g. rss_config_set(c, "errors.step3", "0.1, 0"). */
rss_status rss_config_set(rss_config* config, const char* key, const char* value);
/* Returns the raw value, or NULL through *out when the key is absent. */
rss_status rss_config_get(const rss_config* config, const char* key, char** out);
/* Validates [protocol] and [errors] together. */
rss_status rss_config_validate(const rss_config* config);
rss_status rss_config_total_photons(const rss_config* config, int* out);
void rss_config_free(rss_config* config);

/* -- generation ---------------------------------------------------------- */

rss_status rss_generate(const rss_config* config, rss_result** out);
/* Fidelity of the generated state against its ideal target, tracing loss. */
rss_status rss_result_fidelity(const rss_result* result, double* out);
/* One-shot run + fidelity without keeping the state. */
rss_status rss_simulated_fidelity(const rss_config* config, double* out);
rss_status rss_result_component_count(const rss_result* result, size_t* out);
/* Stable text dump: one line per term per component. */
rss_status rss_result_serialize(const rss_result* result, char** out);
void rss_result_free(rss_result* result);

/* -- closed-form fidelities ---------------------------------------------- */

/* mechanism: spin_prep, step3, step5a, step5b, excitation, off_resonant,
 * cyclicity or loss, evaluated on the config's error model. */
rss_status rss_closed_form(const rss_config* config, const char* mechanism, double* out);

double rss_formula_spin_prep(double fs, double dy, double dz);
double rss_boost_success(int m, double eta);
int rss_boost_optimal_m(double eta);

/* -- fusion --------------------------------------------------------------- */

/* Runs the [fusion] scenario of the config; *out receives a JSON report. */
rss_status rss_fusion_report(const rss_config* config, char** out);

rss_status rss_boost_rate(int m, double eta, long long trials, uint64_t seed, double* rate,
                          double* standard_error);
/* One JSON object per trial, newline separated. */
rss_status rss_boost_trials_jsonl(int m, double eta, long long trials, uint64_t seed, char** out);

#ifdef __cplusplus
}
#endif

#endif /* RSS_RSS_H */
