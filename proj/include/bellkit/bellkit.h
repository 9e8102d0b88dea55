#ifndef BELLKIT_H
#define BELLKIT_H

/* C interface to the bellkit library: experiment generation, CHSH statistics,
 * quantum predictions and the marginal-problem checker. Objects are opaque
 * handles released with the matching *_destroy function. Every fallible call
 * returns a bk_status; on failure bk_last_error() describes the problem for
 * the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BELLKIT_BUILDING_LIBRARY)
#    define BK_API __declspec(dllexport)
#  else
#    define BK_API __declspec(dllimport)
#  endif
#else
#  define BK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bk_status {
  BK_OK = 0,
  BK_E_INVALID_ARGUMENT = 1,
  BK_E_INVALID_PLAN = 2,
  BK_E_CORRUPTED_DATA = 3,
  BK_E_MODEL_VIOLATION = 4,
  BK_E_SIZE_LIMIT = 5,
  BK_E_PRECONDITION = 6,
  BK_E_PARSE = 7,
  BK_E_IO = 8,
  BK_E_INTERNAL = 9
} bk_status;

typedef enum bk_mode { BK_MODE_PER_PAIR = 0, BK_MODE_COMMON_SPACE = 1, BK_MODE_INSTRUMENT = 2 } bk_mode;

/* Setting pairs in CHSH order: (a,b), (a,c), (d,b), (d,c). */
typedef enum bk_pair { BK_PAIR_AB = 0, BK_PAIR_AC = 1, BK_PAIR_DB = 2, BK_PAIR_DC = 3 } bk_pair;

typedef struct bk_vec3 {
  double x, y, z;
} bk_vec3;

typedef struct bk_plan bk_plan;
typedef struct bk_dataset bk_dataset;
typedef struct bk_scenario bk_scenario;
typedef struct bk_feasibility bk_feasibility;

BK_API const char* bk_version(void);
BK_API const char* bk_status_name(bk_status status);
/* Message of the last failed call on this thread; "" if none. */
BK_API const char* bk_last_error(void);

/* ---- settings and quantum predictions ---------------------------------- */

BK_API bk_status bk_make_setting(double theta_deg, double phi_deg, bk_vec3* out);

typedef struct bk_pair_table {
  /* (-1,-1), (-1,+1), (+1,-1), (+1,+1) */
  double p[4];
  /* Product expectation of the table, equal to a.b. */
  double expectation;
} bk_pair_table;

BK_API bk_status bk_joint_pair_distribution(const bk_vec3* a, const bk_vec3* b, bk_pair_table* out);
BK_API bk_status bk_singlet_tensor_expectation(const bk_vec3* a, const bk_vec3* b, double* out);
BK_API double bk_chsh_facet_value(double e_ab, double e_ac, double e_db, double e_dc);

/* ---- experiments ---------------------------------------------------------- */

/* settings[0..3] = a, b, c, d. */
BK_API bk_status bk_plan_create(const bk_vec3 settings[4], uint64_t trials_per_pair, uint64_t seed,
                                bk_mode mode, bk_plan** out);
BK_API void bk_plan_destroy(bk_plan* plan);

BK_API bk_status bk_simulate(const bk_plan* plan, unsigned threads, bk_dataset** out);
BK_API bk_status bk_dataset_read_log(const char* path, bk_dataset** out);
BK_API bk_status bk_dataset_write_log(const bk_dataset* data, const char* path);
BK_API void bk_dataset_destroy(bk_dataset* data);

/* 1 if the data lives on one common probability space (quadruples). */
BK_API int bk_dataset_is_common_space(const bk_dataset* data);
/* Trials per setting pair. */
BK_API uint64_t bk_dataset_trials_per_pair(const bk_dataset* data);

typedef struct bk_pair_summary {
  uint64_t count;
  int64_t product_sum;
  double mean;
  double standard_error;
  uint64_t cells[4]; /* (-,-), (-,+), (+,-), (+,+) */
} bk_pair_summary;

BK_API bk_status bk_dataset_pair_summary(const bk_dataset* data, bk_pair pair, bk_pair_summary* out);

typedef struct bk_gamma_summary {
  double M;
  double delta;
  int64_t gamma_sum;
  uint64_t O, P, Q, R, S, J;
  int r_bound_applicable;
  int r_bound_pass;
  double r_bound_required; /* J * delta / 2 */
  double r_bound_slack;    /* R - J * delta / 2 */
} bk_gamma_summary;

/* Separate-space data: gamma from the k-th trial of each block. Common-space
 * data: gamma per quadruple, with the +-2 check enforced. */
BK_API bk_status bk_dataset_gamma(const bk_dataset* data, bk_gamma_summary* out);

/* Running mean of gamma after each quadruple; writes min(capacity, J) values. */
BK_API bk_status bk_dataset_running_mean(const bk_dataset* data, double* out, size_t capacity, size_t* written);

/* ---- marginal problem ----------------------------------------------------- */

BK_API bk_status bk_scenario_load(const char* path, bk_scenario** out);
BK_API bk_status bk_scenario_parse(const char* text, bk_scenario** out);
BK_API void bk_scenario_destroy(bk_scenario* scenario);
BK_API size_t bk_scenario_variable_count(const bk_scenario* scenario);
BK_API const char* bk_scenario_variable_name(const bk_scenario* scenario, size_t index);
BK_API size_t bk_scenario_constraint_count(const bk_scenario* scenario);

/* Checks table shapes, normalization and agreement of overlapping marginals. */
BK_API bk_status bk_scenario_validate(const bk_scenario* scenario);
/* *cyclic = 1 when Graham reduction does not empty the constraint sets. */
BK_API bk_status bk_scenario_cyclicity(const bk_scenario* scenario, int* cyclic);

BK_API bk_status bk_scenario_feasibility(const bk_scenario* scenario, bk_feasibility** out);
BK_API bk_status bk_scenario_vertex_oracle(const bk_scenario* scenario, bk_feasibility** out);
BK_API void bk_feasibility_destroy(bk_feasibility* result);

BK_API int bk_feasibility_is_feasible(const bk_feasibility* result);
BK_API double bk_feasibility_residual(const bk_feasibility* result);
BK_API int bk_feasibility_is_exact(const bk_feasibility* result);
/* Joint over 2^n atoms, NULL when infeasible. */
BK_API const double* bk_feasibility_witness(const bk_feasibility* result, size_t* size);

typedef struct bk_certificate_info {
  const char* kind;        /* "chsh" or "farkas" */
  const char* description;
  double value;
  double bound;
  size_t term_count;
} bk_certificate_info;

typedef struct bk_certificate_term {
  size_t constraint;
  size_t cell;
  double coefficient;
} bk_certificate_term;

/* BK_E_INVALID_ARGUMENT when the result is feasible (no certificate). */
BK_API bk_status bk_feasibility_certificate(const bk_feasibility* result, bk_certificate_info* out);
BK_API bk_status bk_feasibility_certificate_term(const bk_feasibility* result, size_t index,
                                                 bk_certificate_term* out);

#ifdef __cplusplus
}
#endif

#endif /* BELLKIT_H */
