/*
 * C interface to the trpca library.
 *
 * All objects are opaque handles created by trpca_* functions and released
 * with the matching *_free function (free functions accept NULL). Functions
 * returning int return TRPCA_OK (0) on success or one of the trpca_status
 * codes; a message describing the most recent failure on the calling thread
 * is available from trpca_last_error().
 *
 * Tensor data is exposed in frontal-slice-major order: entry (i, j, k),
 * 0-based, is at offset i + n1 * (j + n2 * k).
 */
#ifndef TRPCA_H_
#define TRPCA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TRPCA_BUILDING_LIBRARY)
#    define TRPCA_API __declspec(dllexport)
#  else
#    define TRPCA_API __declspec(dllimport)
#  endif
#else
#  define TRPCA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum trpca_status {
  TRPCA_OK = 0,
  TRPCA_E_INVALID_ARGUMENT = 1,
  TRPCA_E_DIMENSION_MISMATCH = 2,
  TRPCA_E_OUT_OF_RANGE = 3,
  TRPCA_E_INVALID_TRANSFORM = 4,
  TRPCA_E_NUMERICAL = 5,
  TRPCA_E_IO = 6,
  TRPCA_E_UNSUPPORTED_FORMAT = 7,
  TRPCA_E_INTERNAL = 99
} trpca_status;

typedef struct trpca_tensor trpca_tensor;
typedef struct trpca_transform trpca_transform;
typedef struct trpca_solution trpca_solution;
typedef struct trpca_image trpca_image;

TRPCA_API const char* trpca_last_error(void);
TRPCA_API const char* trpca_version(void);
TRPCA_API int trpca_tensor_format_version(void);
/* Caps worker threads for per-slice work; 1 runs everything inline. */
TRPCA_API void trpca_set_threads(size_t n);

/* ---- tensors ---------------------------------------------------------- */

/* data may be NULL for a zero tensor; otherwise n1*n2*n3 finite values. */
TRPCA_API int trpca_tensor_create(size_t n1, size_t n2, size_t n3,
                                  const double* data, trpca_tensor** out);
/* Binary container, or the CSV fixture format when path ends in ".csv". */
TRPCA_API int trpca_tensor_load(const char* path, trpca_tensor** out);
TRPCA_API int trpca_tensor_save(const trpca_tensor* t, const char* path);
TRPCA_API int trpca_tensor_save_csv(const trpca_tensor* t, const char* path);
TRPCA_API void trpca_tensor_dims(const trpca_tensor* t, size_t dims[3]);
TRPCA_API const double* trpca_tensor_data(const trpca_tensor* t);
TRPCA_API void trpca_tensor_free(trpca_tensor* t);

/* ---- transforms ------------------------------------------------------- */

/* spec: "dct", "rom:<seed>", "hadamard", "identity" or "file:<csv path>". */
TRPCA_API int trpca_transform_parse(const char* spec, size_t n3,
                                    trpca_transform** out);
/* Validates a row-major n3 x n3 matrix against L'L = LL' = ell*I. */
TRPCA_API int trpca_transform_from_matrix(const double* row_major, size_t n3,
                                          trpca_transform** out);
TRPCA_API size_t trpca_transform_size(const trpca_transform* t);
TRPCA_API double trpca_transform_ell(const trpca_transform* t);
TRPCA_API void trpca_transform_free(trpca_transform* t);

/* ---- tensor algebra --------------------------------------------------- */

TRPCA_API int trpca_tprod(const trpca_tensor* a, const trpca_tensor* b,
                          const trpca_transform* t, trpca_tensor** out);
TRPCA_API int trpca_tsvt(const trpca_tensor* y, double tau,
                         const trpca_transform* t, trpca_tensor** out);
TRPCA_API int trpca_tubal_rank(const trpca_tensor* a, const trpca_transform* t,
                               double tol, size_t* out);
TRPCA_API int trpca_spectral_norm(const trpca_tensor* a,
                                  const trpca_transform* t, double* out);
TRPCA_API int trpca_nuclear_norm(const trpca_tensor* a,
                                 const trpca_transform* t, double* out);

typedef struct trpca_incoherence_report {
  double mu1;
  double mu2;
  double mu3;
  double mu;
  size_t rank;
} trpca_incoherence_report;

TRPCA_API int trpca_incoherence(const trpca_tensor* a, const trpca_transform* t,
                                trpca_incoherence_report* out);

/* ---- solver ----------------------------------------------------------- */

typedef struct trpca_solver_config {
  double lambda; /* <= 0 selects 1/sqrt(max(n1,n2) * ell) */
  double mu0;
  double rho;
  double mu_max;
  double tol;
  size_t max_iters;
} trpca_solver_config;

typedef struct trpca_iteration_record {
  size_t iter;
  double primal_inf_norm;
  double dl_inf;
  double ds_inf;
  double mu;
  double objective;
} trpca_iteration_record;

typedef struct trpca_solution_info {
  size_t iterations;
  int converged;
  double lambda;
} trpca_solution_info;

TRPCA_API void trpca_solver_config_default(trpca_solver_config* cfg);
TRPCA_API double trpca_default_lambda(size_t n1, size_t n2,
                                      const trpca_transform* t);
TRPCA_API int trpca_solve(const trpca_tensor* x, const trpca_transform* t,
                          const trpca_solver_config* cfg, trpca_solution** out);
TRPCA_API void trpca_solution_info_get(const trpca_solution* s,
                                       trpca_solution_info* out);
/* Returned tensors are new handles owned by the caller. */
TRPCA_API int trpca_solution_low_rank(const trpca_solution* s, trpca_tensor** out);
TRPCA_API int trpca_solution_sparse(const trpca_solution* s, trpca_tensor** out);
TRPCA_API size_t trpca_solution_trace_length(const trpca_solution* s);
TRPCA_API int trpca_solution_trace_at(const trpca_solution* s, size_t index,
                                      trpca_iteration_record* out);
/* Columns: iter,primal_inf_norm,dL_inf,dS_inf,mu,objective. */
TRPCA_API int trpca_solution_write_trace_csv(const trpca_solution* s,
                                             const char* path);
TRPCA_API void trpca_solution_free(trpca_solution* s);

/* ---- synthetic experiments ------------------------------------------- */

typedef enum trpca_sign_model {
  TRPCA_SIGNS_RANDOM = 0,
  TRPCA_SIGNS_COHERENT = 1
} trpca_sign_model;

typedef struct trpca_trial_config {
  size_t n1;
  size_t n2;
  size_t n3;
  size_t r;
  size_t m;
  trpca_sign_model sign_model;
  const char* transform; /* same syntax as trpca_transform_parse */
  uint64_t seed;
} trpca_trial_config;

typedef struct trpca_trial_report {
  size_t n1, n2, n3;
  size_t r;
  size_t m;
  size_t recovered_rank;
  size_t recovered_support;
  double low_rank_rel_error;
  double sparse_rel_error;
  size_t iterations;
  int converged;
  int success;
  double wall_seconds;
} trpca_trial_report;

TRPCA_API int trpca_run_recovery_trial(const trpca_trial_config* cfg,
                                       const trpca_solver_config* solver,
                                       trpca_trial_report* out);
/* success_out receives n_rank * n_sparsity fractions, row-major with rows
 * indexed by rank ratio. */
TRPCA_API int trpca_run_phase_grid(const trpca_trial_config* base,
                                   const double* rank_ratios, size_t n_rank,
                                   const double* sparsity_ratios,
                                   size_t n_sparsity, size_t trials_per_cell,
                                   const trpca_solver_config* solver,
                                   double* success_out);
/* Parses "start:step:stop" or "a,b,c". *count receives the number of values;
 * at most capacity are written to out. */
TRPCA_API int trpca_parse_ratio_list(const char* text, double* out,
                                     size_t capacity, size_t* count);

/* ---- images ----------------------------------------------------------- */

TRPCA_API int trpca_image_load(const char* path, trpca_image** out);
TRPCA_API int trpca_image_save(const trpca_image* img, const char* path);
TRPCA_API void trpca_image_dims(const trpca_image* img, size_t* height,
                                size_t* width, unsigned* maxval);
TRPCA_API int trpca_image_tensor(const trpca_image* img, trpca_tensor** out);
TRPCA_API int trpca_image_corrupt(const trpca_image* img, double fraction,
                                  uint64_t seed, trpca_image** out,
                                  size_t* corrupted_pixels);
/* +INFINITY when the images are identical. */
TRPCA_API int trpca_image_psnr(const trpca_image* estimate,
                               const trpca_image* reference, double* out);
TRPCA_API int trpca_image_denoise(const trpca_image* img,
                                  const trpca_transform* t,
                                  const trpca_solver_config* cfg,
                                  trpca_image** recovered,
                                  trpca_solution** solution);
TRPCA_API void trpca_image_free(trpca_image* img);

#ifdef __cplusplus
}
#endif

#endif /* TRPCA_H_ */
