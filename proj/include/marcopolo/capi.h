/* C interface to the MarcoPolo DMDP bandit library. All functions return an
 * mp_status code (MP_OK on success); mp_last_error() describes the most
 * recent failure on the calling thread. Strings returned through char** are
 * heap allocated and must be released with mp_string_free(). */

#ifndef MARCOPOLO_CAPI_H
#define MARCOPOLO_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mp_dmdp mp_dmdp;
typedef struct mp_experiment mp_experiment;

typedef enum mp_status {
    MP_OK = 0,
    MP_ERR_PARSE = 2,      /* malformed DMDP/config/adversary input */
    MP_ERR_CONFIG = 3,     /* run cannot be set up as requested */
    MP_ERR_ORACLE_CAP = 4, /* policy space exceeds the cap, no fallback */
    MP_ERR_INPUT = 5,      /* invalid argument */
    MP_ERR_INTERNAL = 6    /* invariant violation; indicates a bug */
} mp_status;

const char* mp_version(void);

/* Message for the last failure on this thread; empty string when none. */
const char* mp_last_error(void);

void mp_string_free(char* s);

/* --- DMDP files ------------------------------------------------------- */

int mp_dmdp_parse(const char* json_text, mp_dmdp** out);
void mp_dmdp_free(mp_dmdp* m);
int mp_dmdp_num_states(const mp_dmdp* m);
int mp_dmdp_num_actions(const mp_dmdp* m);

/* Structural analysis report as JSON. max_cycle_length <= 0 defaults to the
 * number of states. */
int mp_analyze(const mp_dmdp* m, int max_cycle_length, char** json_out);

/* Hindsight optima as JSON for the given adversary spec (JSON text with
 * names resolved against the DMDP). When the policy space exceeds max_enum,
 * fails with MP_ERR_ORACLE_CAP unless fallback_dp is nonzero. */
int mp_oracle(const mp_dmdp* m, const char* adversary_json, int64_t horizon,
              int max_cycle_length, const char* start_state, int fallback_dp, int64_t max_enum,
              char** json_out);

/* --- Experiments ------------------------------------------------------- */

/* Parses an experiment config; a DMDP referenced as {"file": ...} is
 * resolved relative to base_dir (may be NULL for the working directory). */
int mp_experiment_parse(const char* config_json, const char* base_dir, mp_experiment** out);
void mp_experiment_free(mp_experiment* e);

/* Optional overrides applied before mp_experiment_run. */
int mp_experiment_set_seeds(mp_experiment* e, const uint64_t* seeds, int count);
int mp_experiment_set_tau(mp_experiment* e, int64_t tau);
int mp_experiment_set_max_enum(mp_experiment* e, int64_t cap);

int mp_experiment_run(mp_experiment* e);

const char* mp_experiment_name(const mp_experiment* e);
const char* mp_experiment_out_dir(const mp_experiment* e);
int mp_experiment_num_seeds(const mp_experiment* e);
int mp_experiment_seed_at(const mp_experiment* e, int index, uint64_t* seed_out);

/* Per-seed CSV trace and the run summary; valid after mp_experiment_run. */
int mp_experiment_seed_csv(const mp_experiment* e, int index, char** csv_out);
int mp_experiment_summary(const mp_experiment* e, char** json_out);

/* --- Self tests --------------------------------------------------------- */

/* Decomposition reconstruction checks; MP_OK iff every case passed. The
 * JSON report is returned either way. */
int mp_decompose_selftest(char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* MARCOPOLO_CAPI_H */
