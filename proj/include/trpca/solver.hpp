#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "trpca/tensor3.hpp"
#include "trpca/transform.hpp"

namespace trpca {

// ADMM settings for  min ||L||_* + lambda ||S||_1  s.t.  X = L + S.
// `mu` here is the augmented-Lagrangian penalty, unrelated to incoherence.
struct SolverConfig {
  std::optional<double> lambda;  // empty selects default_lambda()
  double mu0 = 1e-3;
  double rho = 1.1;
  double mu_max = 1e10;
  double tol = 1e-8;
  std::size_t max_iters = 500;

  // Throws kInvalidArgument if any field is out of range.
  void validate() const;
};

struct IterationRecord {
  std::size_t iter = 0;       // 1-based
  double primal_inf = 0.0;    // ||L + S - X||_inf
  double dl_inf = 0.0;        // ||L_{k+1} - L_k||_inf
  double ds_inf = 0.0;        // ||S_{k+1} - S_k||_inf
  double mu = 0.0;            // penalty used in this iteration
  double objective = 0.0;     // ||L_{k+1}||_* + lambda ||S_{k+1}||_1
};

struct TrpcaSolution {
  Tensor3 low_rank;
  Tensor3 sparse;
  double lambda = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> trace;
};

// 1 / sqrt(max(n1, n2) * ell).
double default_lambda(std::size_t n1, std::size_t n2, const Transform& t);

// Runs the ADMM iteration from L = S = Y = 0 until the largest of the two
// iterate changes and the primal residual (all max-abs) drops to cfg.tol, or
// cfg.max_iters is reached (converged = false, not an error). Throws
// kNumericalFailure naming the iteration if an iterate becomes non-finite.
TrpcaSolution solve(const Tensor3& x, const Transform& t,
                    const SolverConfig& cfg = {});

}  // namespace trpca
