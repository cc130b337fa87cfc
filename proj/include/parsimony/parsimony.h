/* C interface to the parsimonious labeling library. */
#ifndef PARSIMONY_PARSIMONY_H
#define PARSIMONY_PARSIMONY_H

#include <stddef.h>
#include <stdint.h>

#if defined(PARSIMONY_BUILDING_LIBRARY)
#define PL_API __attribute__((visibility("default")))
#else
#define PL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pl_status {
    PL_OK = 0,
    PL_SOLVER_FAILURE = 1,
    PL_INPUT_ERROR = 2
} pl_status;

typedef struct pl_problem pl_problem;
typedef struct pl_report pl_report;

/* Message for the most recent failure on the calling thread ("" if none). */
PL_API const char* pl_last_error(void);

/* Frees strings returned through char** out-parameters. */
PL_API void pl_string_free(char* s);

PL_API pl_status pl_problem_load(const char* path, pl_problem** out);
PL_API pl_status pl_problem_parse(const char* json, size_t length, pl_problem** out);
PL_API void pl_problem_free(pl_problem* problem);
PL_API size_t pl_problem_num_variables(const pl_problem* problem);
PL_API size_t pl_problem_num_labels(const pl_problem* problem);
PL_API pl_status pl_problem_to_json(const pl_problem* problem, char** out);
PL_API pl_status pl_problem_energy(const pl_problem* problem, const int32_t* labeling, size_t length, double* out);

typedef struct pl_solve_options {
    size_t mixture_size; /* trees in the FRT mixture, >= 1 */
    uint64_t seed;
    size_t threads;
} pl_solve_options;

PL_API void pl_solve_options_init(pl_solve_options* options);

PL_API pl_status pl_solve(const pl_problem* problem, const pl_solve_options* options, pl_report** out);
PL_API void pl_report_free(pl_report* report);
PL_API double pl_report_energy(const pl_report* report);
/* Returns the labeling length; *data stays valid until the report is freed. */
PL_API size_t pl_report_labeling(const pl_report* report, const int32_t** data);
PL_API pl_status pl_report_to_json(const pl_report* report, int include_timings, char** out);
PL_API pl_status pl_report_labeling_text(const pl_report* report, char** out);

typedef struct pl_oracle_check {
    double optimum;          /* exhaustive minimum energy */
    double optimum_unary;    /* unary term of the optimum */
    double optimum_clique;   /* clique term of the optimum */
    double ratio;            /* solver energy / optimum (1 when both are 0) */
    double bound_factor;     /* multiplicative bound for the solver used */
    double bound_rhs;        /* optimum_unary + bound_factor * optimum_clique */
    int bound_holds;
} pl_oracle_check;

/* Exhaustive check of a report against its problem. Fails with
   PL_INPUT_ERROR when the instance is too large to enumerate. */
PL_API pl_status pl_oracle_check_report(const pl_problem* problem, const pl_report* report, pl_oracle_check* out);

typedef struct pl_synth_options {
    int width;
    int height;
    int num_labels;
    int window;
    int stride;
    int use_tree;   /* 0: truncated linear diameter diversity, 1: random r-HST */
    double lambda;
    int truncation;
    double r;
    int tree_depth;
    uint64_t seed;
    const double* weights; /* w_c sweep; NULL selects {0,1,2,3,4,5,100} */
    size_t num_weights;
} pl_synth_options;

PL_API void pl_synth_options_init(pl_synth_options* options);

/* CSV with header schema_version,w_c,energy,time_ms,unique_labels. */
PL_API pl_status pl_synth_bench(const pl_synth_options* synth, const pl_solve_options* solve, char** csv);

typedef struct pl_stereo_params {
    int num_disparities;
    double lambda;
    int truncation;
    double sigma;
    double unary_truncation; /* <= 0 disables */
    double gradient_threshold;
    double weight_low_gradient;
    double weight_high_gradient;
} pl_stereo_params;

typedef struct pl_inpaint_params {
    int levels;
    double lambda;
    int truncation;
    double sigma;
    double pairwise_weight;
} pl_inpaint_params;

PL_API void pl_stereo_params_init(pl_stereo_params* params);
PL_API void pl_inpaint_params_init(pl_inpaint_params* params);

/* superpixels may be NULL: B x B tiles with B = block are used instead.
   output_raster may be NULL. */
PL_API pl_status pl_stereo(const char* left, const char* right, const char* superpixels, int block,
                           const pl_stereo_params* params, const pl_solve_options* options,
                           const char* output_raster, pl_report** out);
/* mask may be NULL (no obscured pixels). The output raster holds intensities. */
PL_API pl_status pl_inpaint(const char* image, const char* mask, const char* superpixels, int block,
                            const pl_inpaint_params* params, const pl_solve_options* options,
                            const char* output_raster, pl_report** out);

/* Runs the axiom checkers on a problem or tree file. *ok is 1 when every
   check passes; *text receives a human-readable summary. Returns
   PL_INPUT_ERROR only when the file cannot be read or parsed. */
PL_API pl_status pl_validate_file(const char* path, int* ok, char** text);

#ifdef __cplusplus
}
#endif

#endif
