#include "trpca/trpca.h"

#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "trpca/imaging.hpp"
#include "trpca/prox.hpp"
#include "trpca/solver.hpp"
#include "trpca/synth.hpp"
#include "trpca/tensor_io.hpp"
#include "trpca/tlinalg.hpp"
#include "trpca/transform.hpp"
#include "trpca/parallel.hpp"

struct trpca_tensor {
  trpca::Tensor3 value;
};

struct trpca_transform {
  trpca::Transform value;
};

struct trpca_solution {
  trpca::TrpcaSolution value;
};

struct trpca_image {
  trpca::ImageTensor value;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TRPCA_OK;
  } catch (const trpca::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TRPCA_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TRPCA_E_INTERNAL, e.what());
  } catch (...) {
    return fail(TRPCA_E_INTERNAL, "unknown error");
  }
}

#define TRPCA_REQUIRE(ptr)                                                  \
  do {                                                                      \
    if ((ptr) == nullptr)                                                   \
      return fail(TRPCA_E_INVALID_ARGUMENT, "null argument: " #ptr);        \
  } while (0)

trpca::SolverConfig to_cpp(const trpca_solver_config* cfg) {
  trpca::SolverConfig sc;
  if (cfg == nullptr) return sc;
  if (cfg->lambda > 0.0) sc.lambda = cfg->lambda;
  sc.mu0 = cfg->mu0;
  sc.rho = cfg->rho;
  sc.mu_max = cfg->mu_max;
  sc.tol = cfg->tol;
  sc.max_iters = cfg->max_iters;
  return sc;
}

trpca::RecoveryTrialConfig to_cpp(const trpca_trial_config& c) {
  trpca::RecoveryTrialConfig cfg;
  cfg.n1 = c.n1;
  cfg.n2 = c.n2;
  cfg.n3 = c.n3;
  cfg.r = c.r;
  cfg.m = c.m;
  cfg.sign_model = c.sign_model == TRPCA_SIGNS_COHERENT
                       ? trpca::SignModel::kCoherentSigns
                       : trpca::SignModel::kRandomSigns;
  cfg.transform_spec = c.transform != nullptr ? c.transform : "dct";
  cfg.seed = c.seed;
  return cfg;
}

trpca_tensor* wrap(trpca::Tensor3 t) { return new trpca_tensor{std::move(t)}; }

}  // namespace

extern "C" {

const char* trpca_last_error(void) { return g_last_error.c_str(); }

const char* trpca_version(void) { return TRPCA_VERSION_STRING; }

int trpca_tensor_format_version(void) { return trpca::kTensorFormatVersion; }

void trpca_set_threads(size_t n) { trpca::set_max_threads(n); }

int trpca_tensor_create(size_t n1, size_t n2, size_t n3, const double* data,
                        trpca_tensor** out) {
  TRPCA_REQUIRE(out);
  return guarded([&] {
    const trpca::Dims d{n1, n2, n3};
    if (data == nullptr) {
      *out = wrap(trpca::Tensor3(d));
    } else {
      *out = wrap(trpca::Tensor3(d, std::vector<double>(data, data + d.size())));
    }
  });
}

int trpca_tensor_load(const char* path, trpca_tensor** out) {
  TRPCA_REQUIRE(path);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = wrap(trpca::load_tensor(path)); });
}

int trpca_tensor_save(const trpca_tensor* t, const char* path) {
  TRPCA_REQUIRE(t);
  TRPCA_REQUIRE(path);
  return guarded([&] { trpca::write_tensor(t->value, path); });
}

int trpca_tensor_save_csv(const trpca_tensor* t, const char* path) {
  TRPCA_REQUIRE(t);
  TRPCA_REQUIRE(path);
  return guarded([&] { trpca::write_tensor_csv(t->value, path); });
}

void trpca_tensor_dims(const trpca_tensor* t, size_t dims[3]) {
  if (t == nullptr || dims == nullptr) return;
  dims[0] = t->value.n1();
  dims[1] = t->value.n2();
  dims[2] = t->value.n3();
}

const double* trpca_tensor_data(const trpca_tensor* t) {
  return t == nullptr ? nullptr : t->value.data().data();
}

void trpca_tensor_free(trpca_tensor* t) { delete t; }

int trpca_transform_parse(const char* spec, size_t n3, trpca_transform** out) {
  TRPCA_REQUIRE(spec);
  TRPCA_REQUIRE(out);
  return guarded(
      [&] { *out = new trpca_transform{trpca::parse_transform(spec, n3)}; });
}

int trpca_transform_from_matrix(const double* row_major, size_t n3,
                                trpca_transform** out) {
  TRPCA_REQUIRE(row_major);
  TRPCA_REQUIRE(out);
  return guarded([&] {
    const auto n = static_cast<Eigen::Index>(n3);
    trpca::Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row_major[i * n + j];
    }
    *out = new trpca_transform{trpca::Transform::validate(m)};
  });
}

size_t trpca_transform_size(const trpca_transform* t) {
  return t == nullptr ? 0 : t->value.size();
}

double trpca_transform_ell(const trpca_transform* t) {
  return t == nullptr ? 0.0 : t->value.ell();
}

void trpca_transform_free(trpca_transform* t) { delete t; }

int trpca_tprod(const trpca_tensor* a, const trpca_tensor* b,
                const trpca_transform* t, trpca_tensor** out) {
  TRPCA_REQUIRE(a);
  TRPCA_REQUIRE(b);
  TRPCA_REQUIRE(t);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = wrap(trpca::tprod(a->value, b->value, t->value)); });
}

int trpca_tsvt(const trpca_tensor* y, double tau, const trpca_transform* t,
               trpca_tensor** out) {
  TRPCA_REQUIRE(y);
  TRPCA_REQUIRE(t);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = wrap(trpca::tsvt(y->value, tau, t->value)); });
}

int trpca_tubal_rank(const trpca_tensor* a, const trpca_transform* t,
                     double tol, size_t* out) {
  TRPCA_REQUIRE(a);
  TRPCA_REQUIRE(t);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = trpca::tubal_rank(a->value, t->value, tol); });
}

int trpca_spectral_norm(const trpca_tensor* a, const trpca_transform* t,
                        double* out) {
  TRPCA_REQUIRE(a);
  TRPCA_REQUIRE(t);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = trpca::spectral_norm(a->value, t->value); });
}

int trpca_nuclear_norm(const trpca_tensor* a, const trpca_transform* t,
                       double* out) {
  TRPCA_REQUIRE(a);
  TRPCA_REQUIRE(t);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = trpca::nuclear_norm(a->value, t->value); });
}

int trpca_incoherence(const trpca_tensor* a, const trpca_transform* t,
                      trpca_incoherence_report* out) {
  TRPCA_REQUIRE(a);
  TRPCA_REQUIRE(t);
  TRPCA_REQUIRE(out);
  return guarded([&] {
    const auto rep = trpca::incoherence(a->value, t->value);
    *out = trpca_incoherence_report{rep.mu1, rep.mu2, rep.mu3, rep.mu, rep.rank};
  });
}

void trpca_solver_config_default(trpca_solver_config* cfg) {
  if (cfg == nullptr) return;
  const trpca::SolverConfig d;
  *cfg = trpca_solver_config{0.0, d.mu0, d.rho, d.mu_max, d.tol, d.max_iters};
}

double trpca_default_lambda(size_t n1, size_t n2, const trpca_transform* t) {
  if (t == nullptr || n1 == 0 || n2 == 0) return 0.0;
  return trpca::default_lambda(n1, n2, t->value);
}

int trpca_solve(const trpca_tensor* x, const trpca_transform* t,
                const trpca_solver_config* cfg, trpca_solution** out) {
  TRPCA_REQUIRE(x);
  TRPCA_REQUIRE(t);
  TRPCA_REQUIRE(out);
  return guarded([&] {
    *out = new trpca_solution{trpca::solve(x->value, t->value, to_cpp(cfg))};
  });
}

void trpca_solution_info_get(const trpca_solution* s, trpca_solution_info* out) {
  if (s == nullptr || out == nullptr) return;
  *out = trpca_solution_info{s->value.iterations, s->value.converged ? 1 : 0,
                             s->value.lambda};
}

int trpca_solution_low_rank(const trpca_solution* s, trpca_tensor** out) {
  TRPCA_REQUIRE(s);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = wrap(s->value.low_rank); });
}

int trpca_solution_sparse(const trpca_solution* s, trpca_tensor** out) {
  TRPCA_REQUIRE(s);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = wrap(s->value.sparse); });
}

size_t trpca_solution_trace_length(const trpca_solution* s) {
  return s == nullptr ? 0 : s->value.trace.size();
}

int trpca_solution_trace_at(const trpca_solution* s, size_t index,
                            trpca_iteration_record* out) {
  TRPCA_REQUIRE(s);
  TRPCA_REQUIRE(out);
  if (index >= s->value.trace.size()) {
    return fail(TRPCA_E_OUT_OF_RANGE, "trace index out of range");
  }
  const auto& r = s->value.trace[index];
  *out = trpca_iteration_record{r.iter, r.primal_inf, r.dl_inf,
                                r.ds_inf, r.mu,        r.objective};
  return TRPCA_OK;
}

int trpca_solution_write_trace_csv(const trpca_solution* s, const char* path) {
  TRPCA_REQUIRE(s);
  TRPCA_REQUIRE(path);
  return guarded([&] {
    std::ofstream out(path);
    if (!out) throw trpca::Error(trpca::ErrorCode::kIo, std::string("cannot open ") + path);
    out << "iter,primal_inf_norm,dL_inf,dS_inf,mu,objective\n"
        << std::setprecision(17);
    for (const auto& r : s->value.trace) {
      out << r.iter << ',' << r.primal_inf << ',' << r.dl_inf << ',' << r.ds_inf
          << ',' << r.mu << ',' << r.objective << '\n';
    }
    if (!out) throw trpca::Error(trpca::ErrorCode::kIo, std::string("write failed: ") + path);
  });
}

void trpca_solution_free(trpca_solution* s) { delete s; }

int trpca_run_recovery_trial(const trpca_trial_config* cfg,
                             const trpca_solver_config* solver,
                             trpca_trial_report* out) {
  TRPCA_REQUIRE(cfg);
  TRPCA_REQUIRE(out);
  return guarded([&] {
    const auto r = trpca::run_recovery_trial(to_cpp(*cfg), to_cpp(solver));
    *out = trpca_trial_report{r.n1,
                              r.n2,
                              r.n3,
                              r.r,
                              r.m,
                              r.recovered_rank,
                              r.recovered_support,
                              r.low_rank_rel_error,
                              r.sparse_rel_error,
                              r.iterations,
                              r.converged ? 1 : 0,
                              r.success ? 1 : 0,
                              r.wall_seconds};
  });
}

int trpca_run_phase_grid(const trpca_trial_config* base,
                         const double* rank_ratios, size_t n_rank,
                         const double* sparsity_ratios, size_t n_sparsity,
                         size_t trials_per_cell,
                         const trpca_solver_config* solver,
                         double* success_out) {
  TRPCA_REQUIRE(base);
  TRPCA_REQUIRE(rank_ratios);
  TRPCA_REQUIRE(sparsity_ratios);
  TRPCA_REQUIRE(success_out);
  return guarded([&] {
    trpca::PhaseGrid grid;
    grid.rank_ratios.assign(rank_ratios, rank_ratios + n_rank);
    grid.sparsity_ratios.assign(sparsity_ratios, sparsity_ratios + n_sparsity);
    grid.trials_per_cell = trials_per_cell;
    const auto result = trpca::run_phase_grid(to_cpp(*base), grid, to_cpp(solver));
    for (size_t a = 0; a < n_rank; ++a) {
      for (size_t b = 0; b < n_sparsity; ++b) {
        success_out[a * n_sparsity + b] = result.success[a][b];
      }
    }
  });
}

int trpca_parse_ratio_list(const char* text, double* out, size_t capacity,
                           size_t* count) {
  TRPCA_REQUIRE(text);
  TRPCA_REQUIRE(count);
  return guarded([&] {
    const auto values = trpca::parse_ratio_list(text);
    *count = values.size();
    for (size_t i = 0; i < values.size() && i < capacity && out != nullptr; ++i) {
      out[i] = values[i];
    }
  });
}

int trpca_image_load(const char* path, trpca_image** out) {
  TRPCA_REQUIRE(path);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = new trpca_image{trpca::load_image(path)}; });
}

int trpca_image_save(const trpca_image* img, const char* path) {
  TRPCA_REQUIRE(img);
  TRPCA_REQUIRE(path);
  return guarded([&] { trpca::save_image(img->value, path); });
}

void trpca_image_dims(const trpca_image* img, size_t* height, size_t* width,
                      unsigned* maxval) {
  if (img == nullptr) return;
  if (height != nullptr) *height = img->value.height();
  if (width != nullptr) *width = img->value.width();
  if (maxval != nullptr) *maxval = img->value.maxval;
}

int trpca_image_tensor(const trpca_image* img, trpca_tensor** out) {
  TRPCA_REQUIRE(img);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = wrap(img->value.tensor); });
}

int trpca_image_corrupt(const trpca_image* img, double fraction, uint64_t seed,
                        trpca_image** out, size_t* corrupted_pixels) {
  TRPCA_REQUIRE(img);
  TRPCA_REQUIRE(out);
  return guarded([&] {
    auto c = trpca::corrupt(img->value, fraction, seed);
    if (corrupted_pixels != nullptr) *corrupted_pixels = c.pixels;
    *out = new trpca_image{std::move(c.image)};
  });
}

int trpca_image_psnr(const trpca_image* estimate, const trpca_image* reference,
                     double* out) {
  TRPCA_REQUIRE(estimate);
  TRPCA_REQUIRE(reference);
  TRPCA_REQUIRE(out);
  return guarded([&] { *out = trpca::psnr(estimate->value, reference->value); });
}

int trpca_image_denoise(const trpca_image* img, const trpca_transform* t,
                        const trpca_solver_config* cfg, trpca_image** recovered,
                        trpca_solution** solution) {
  TRPCA_REQUIRE(img);
  TRPCA_REQUIRE(t);
  TRPCA_REQUIRE(recovered);
  return guarded([&] {
    auto res = trpca::denoise(img->value, t->value, to_cpp(cfg));
    auto rec = std::make_unique<trpca_image>(trpca_image{std::move(res.recovered)});
    if (solution != nullptr) {
      *solution = new trpca_solution{std::move(res.solution)};
    }
    *recovered = rec.release();
  });
}

void trpca_image_free(trpca_image* img) { delete img; }

}  // extern "C"
