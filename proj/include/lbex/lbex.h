/* lbex - lower-bound-error reliability analysis of discrete dynamical
 * system simulations.
 *
 * C API over the lbex core. All objects are opaque handles owned by the
 * library; every fallible call returns an lbex_status and leaves a
 * human-readable message in lbex_last_error() (thread-local) on failure.
 * Handles are created by lbex_*_parse/_open/_compute calls and released
 * with the matching lbex_*_free; freeing NULL is a no-op.
 */
#ifndef LBEX_H
#define LBEX_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lbex_status {
    LBEX_OK = 0,
    LBEX_E_IO = 1,         /* file missing/unreadable/unwritable */
    LBEX_E_SYNTAX = 2,     /* model/experiment/plan text does not parse */
    LBEX_E_VALIDATION = 3, /* parsed but violates an invariant */
    LBEX_E_MISMATCH = 4,   /* objects from different models combined */
    LBEX_E_OVERFLOW = 5,   /* simulation left the finite range */
    LBEX_E_RANGE = 6,      /* index or parameter out of range */
    LBEX_E_INTERNAL = 7
} lbex_status;

typedef struct lbex_model lbex_model;
typedef struct lbex_plan lbex_plan;
typedef struct lbex_orbit lbex_orbit;
typedef struct lbex_series lbex_series;
typedef struct lbex_experiment lbex_experiment;

const char* lbex_version(void);

/* Message for the most recent failing call on this thread ("" if none). */
const char* lbex_last_error(void);

/* ------------------------------------------------------------------ */
/* Models                                                              */

lbex_status lbex_model_parse_file(const char* path, lbex_model** out);
lbex_status lbex_model_parse_text(const char* text, lbex_model** out);
void lbex_model_free(lbex_model* model);

const char* lbex_model_name(const lbex_model* model);
int lbex_model_term_count(const lbex_model* model);
int lbex_model_seed_length(const lbex_model* model);
int lbex_model_max_output_lag(const lbex_model* model); /* -1 if none */
int lbex_model_max_input_lag(const lbex_model* model);  /* -1 if none */
int lbex_model_degree(const lbex_model* model);

/* Serialized model text (round-trips through lbex_model_parse_text). */
lbex_status lbex_model_serialize(const lbex_model* model, char* buf, size_t cap);

/* Number of invariant violations; diagnostics joined by '\n' into buf
 * (buf/cap may be NULL/0 to query the count only). */
lbex_status lbex_model_validate(const lbex_model* model, char* buf, size_t cap, int* count);

/* u_n of the model's declared input signal. */
lbex_status lbex_model_input_value(const lbex_model* model, long n, double* out);

/* ------------------------------------------------------------------ */
/* Evaluation plans                                                    */

lbex_status lbex_plan_canonical(const lbex_model* model, const char* label, lbex_plan** out);

/* Plan-spec grammar: canonical | regroup(term=<i>, tree="...") |
 * permute(reverse) | permute(order=...), chained with ';'. */
lbex_status lbex_plan_parse(const lbex_model* model, const char* spec, const char* label,
                            lbex_plan** out);
void lbex_plan_free(lbex_plan* plan);

const char* lbex_plan_label(const lbex_plan* plan);
lbex_status lbex_plan_signature(const lbex_plan* plan, char* buf, size_t cap);

/* 1 iff the plans expand to the same exact polynomial. Plans must come
 * from the same model (LBEX_E_MISMATCH otherwise). */
lbex_status lbex_plan_equivalent(const lbex_plan* a, const lbex_plan* b, int* out);

/* ------------------------------------------------------------------ */
/* Simulation                                                          */

/* Free-run `iterations` steps from `seed` (length = seed_length of the
 * model). The orbit holds seed values followed by computed values; on
 * overflow the orbit is truncated and flagged, not an error here. */
lbex_status lbex_simulate(const lbex_model* model, const lbex_plan* plan, const double* seed,
                          size_t seed_len, long iterations, lbex_orbit** out);

/* High-precision reference orbit (canonical plan, bits >= 128); values
 * are exposed rounded to binary64. */
lbex_status lbex_simulate_reference(const lbex_model* model, const double* seed, size_t seed_len,
                                    long iterations, int bits, lbex_orbit** out);

void lbex_orbit_free(lbex_orbit* orbit);
size_t lbex_orbit_length(const lbex_orbit* orbit);
double lbex_orbit_value(const lbex_orbit* orbit, size_t n);
const char* lbex_orbit_plan_id(const lbex_orbit* orbit);
/* 1 if truncated by overflow; *iteration (may be NULL) gets the index. */
int lbex_orbit_overflowed(const lbex_orbit* orbit, long* iteration);

/* ------------------------------------------------------------------ */
/* Lower bound error                                                   */

/* Pairwise LBE + relative-precision series. Orbits must carry distinct
 * plan ids and equal precision modes. */
lbex_status lbex_series_compute(const lbex_orbit* a, const lbex_orbit* b, lbex_series** out);
void lbex_series_free(lbex_series* series);
size_t lbex_series_length(const lbex_series* series);
double lbex_series_lbe(const lbex_series* series, size_t n);
double lbex_series_relative_precision(const lbex_series* series, size_t n);
int lbex_series_guard(const lbex_series* series, size_t n);

/* Least-squares slope of log2(lbe) over [lo, hi), bits/iteration. */
lbex_status lbex_series_growth_rate(const lbex_series* series, long lo, long hi, double* out);

enum {
    LBEX_TRIGGER_CRITERION = 0,
    LBEX_TRIGGER_DENOMINATOR_GUARD = 1,
    LBEX_TRIGGER_ORBIT_END = 2
};

typedef struct lbex_horizon_summary {
    long horizon;   /* -1 when the criterion never fires */
    int trigger;    /* LBEX_TRIGGER_* */
    double epsilon;
} lbex_horizon_summary;

lbex_status lbex_reliability_horizon(const lbex_orbit* a, const lbex_orbit* b, double epsilon,
                                     lbex_horizon_summary* out);

typedef struct lbex_verify_summary {
    long window;
    long trusted;
    long violations;
    double min_margin;
} lbex_verify_summary;

/* Simulate plans a and b plus a bits-wide reference over `window` steps
 * and check max(|ref-a|,|ref-b|) >= |a-b|/2 on the trusted prefix. */
lbex_status lbex_verify_theorem(const lbex_model* model, const double* seed, size_t seed_len,
                                long window, int bits, const lbex_plan* a, const lbex_plan* b,
                                lbex_verify_summary* out);

/* ------------------------------------------------------------------ */
/* Experiments                                                         */

lbex_status lbex_experiment_open(const char* path, lbex_experiment** out);
void lbex_experiment_free(lbex_experiment* experiment);

lbex_status lbex_experiment_set_iterations(lbex_experiment* experiment, long iterations);
lbex_status lbex_experiment_set_epsilon(lbex_experiment* experiment, double epsilon);
lbex_status lbex_experiment_set_ref_bits(lbex_experiment* experiment, int bits);
lbex_status lbex_experiment_set_reps(lbex_experiment* experiment, int reps);
lbex_status lbex_experiment_set_output_dir(lbex_experiment* experiment, const char* dir);

const char* lbex_experiment_name(const lbex_experiment* experiment);
const char* lbex_experiment_output_dir(const lbex_experiment* experiment);

typedef struct lbex_timing_summary {
    int reps;
    double mean_s;
    double std_s;
} lbex_timing_summary;

/* Each run writes its CSVs and manifest into the output directory and
 * records the file list on the experiment handle. */
lbex_status lbex_run_simulate(lbex_experiment* experiment);
lbex_status lbex_run_lbe(lbex_experiment* experiment, double* growth_rate /* nullable */);
lbex_status lbex_run_horizon(lbex_experiment* experiment, lbex_horizon_summary* out);
lbex_status lbex_run_verify(lbex_experiment* experiment, lbex_verify_summary* out);
lbex_status lbex_run_bench(lbex_experiment* experiment, lbex_timing_summary* out);

int lbex_experiment_output_count(const lbex_experiment* experiment);
const char* lbex_experiment_output_path(const lbex_experiment* experiment, int index);

/* Mean ratios against the fastest task, one row per entry, with the
 * one-sigma band propagated to [min,max]. */
typedef struct lbex_ratio_row {
    double mean_ratio;
    double min_ratio;
    double max_ratio;
} lbex_ratio_row;

lbex_status lbex_compare(const lbex_timing_summary* stats, int count, lbex_ratio_row* rows);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LBEX_H */
