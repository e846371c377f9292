/* ergolab.h -- C interface to the ergolab shared library.
 *
 * Thermodynamic-formalism computations on symbolic dynamical systems and
 * suspension flows: partition sums and pressure, orbit-segment
 * decompositions with specification and Bowen-property certificates,
 * Gibbs-bound verification against spectral oracles, entropy-expansivity
 * and large-deviations checks.
 *
 * Usage: create an experiment from a JSON config, run a subcommand, read
 * the JSON report and CSV tables.  All handles are opaque; strings returned
 * by accessor functions are owned by the handle and remain valid until the
 * next run on that handle or its destruction.
 */

#ifndef ERGOLAB_H
#define ERGOLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ergo_status {
  ERGO_OK = 0,
  ERGO_CHECK_FAILED = 1,  /* an asserted inequality or certificate failed */
  ERGO_CONFIG_ERROR = 2,  /* invalid configuration or parameters */
  ERGO_BUDGET_EXCEEDED = 3,
  ERGO_ERROR = 4          /* internal failure */
} ergo_status;

typedef struct ergo_experiment ergo_experiment;

const char* ergo_version(void);

/* parse a JSON configuration; on failure returns the status and, if out is
 * non-null, a handle whose error string describes the problem */
ergo_status ergo_experiment_create(const char* config_json, ergo_experiment** out);
void ergo_experiment_destroy(ergo_experiment* e);

/* run one subcommand (pressure, certify, gibbs, entropy, flow-pressure,
 * ldp, glue, decompose, examples); params_json may be NULL or "{}" to use
 * the config's run.params */
ergo_status ergo_experiment_run(ergo_experiment* e, const char* subcommand,
                                const char* params_json);

/* full report: {"envelope": ..., "body": ...}; the body alone is
 * deterministic for identical configs */
const char* ergo_experiment_report(const ergo_experiment* e);
const char* ergo_experiment_body(const ergo_experiment* e);

int ergo_experiment_table_count(const ergo_experiment* e);
const char* ergo_experiment_table_name(const ergo_experiment* e, int index);
const char* ergo_experiment_table_csv(const ergo_experiment* e, const char* name);

const char* ergo_experiment_error(const ergo_experiment* e);

/* embedded example catalog */
int ergo_example_count(void);
const char* ergo_example_name(int index);
const char* ergo_example_description(int index);
const char* ergo_example_config(int index);

#ifdef __cplusplus
}
#endif

#endif /* ERGOLAB_H */
