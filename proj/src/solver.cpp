#include "trpca/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trpca/prox.hpp"

namespace trpca {

void SolverConfig::validate() const {
  auto bad = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, "solver config: " + msg);
  };
  if (lambda && !(*lambda > 0.0 && std::isfinite(*lambda))) {
    bad("lambda must be positive");
  }
  if (!(mu0 > 0.0 && std::isfinite(mu0))) bad("mu0 must be positive");
  if (!(rho >= 1.0 && std::isfinite(rho))) bad("rho must be >= 1");
  if (!(mu_max > 0.0)) bad("mu_max must be positive");
  if (mu0 > mu_max) bad("mu0 must not exceed mu_max");
  if (!(tol > 0.0)) bad("tol must be positive");
  if (max_iters == 0) bad("max_iters must be positive");
}

double default_lambda(std::size_t n1, std::size_t n2, const Transform& t) {
  if (n1 == 0 || n2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "default_lambda: empty dims");
  }
  return 1.0 / std::sqrt(static_cast<double>(std::max(n1, n2)) * t.ell());
}

TrpcaSolution solve(const Tensor3& x, const Transform& t,
                    const SolverConfig& cfg) {
  cfg.validate();
  if (!x.all_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "solve: input has non-finite entries");
  }
  if (x.n3() != t.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "solve: tensor n3 does not match transform size");
  }

  TrpcaSolution sol;
  sol.lambda = cfg.lambda.value_or(default_lambda(x.n1(), x.n2(), t));
  const double lambda = sol.lambda;

  Tensor3 l(x.dims());
  Tensor3 s(x.dims());
  Tensor3 y(x.dims());
  double mu = cfg.mu0;

  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    const double inv_mu = 1.0 / mu;

    // Y is the multiplier of L + S - X, so it enters both primal steps with a
    // minus sign.
    Tensor3 target = x - s;
    target -= y * inv_mu;
    TsvtResult lstep = tsvt_with_norm(target, inv_mu, t);

    target = x - lstep.value;
    target -= y * inv_mu;
    Tensor3 s_next = soft_threshold(target, lambda * inv_mu);

    Tensor3 residual = lstep.value + s_next;
    residual -= x;

    IterationRecord rec;
    rec.iter = iter;
    rec.mu = mu;
    rec.dl_inf = max_abs_diff(lstep.value, l);
    rec.ds_inf = max_abs_diff(s_next, s);
    rec.primal_inf = residual.norm(NormKind::kLinf);
    rec.objective = lstep.nuclear_norm + lambda * s_next.norm(NormKind::kL1);
    if (!std::isfinite(rec.primal_inf) || !std::isfinite(rec.objective) ||
        !std::isfinite(rec.dl_inf) || !std::isfinite(rec.ds_inf)) {
      throw Error(ErrorCode::kNumericalFailure,
                  "solve: non-finite iterate at iteration " + std::to_string(iter));
    }
    sol.trace.push_back(rec);

    l = std::move(lstep.value);
    s = std::move(s_next);
    sol.iterations = iter;

    if (std::max({rec.dl_inf, rec.ds_inf, rec.primal_inf}) <= cfg.tol) {
      sol.converged = true;
      break;
    }
    y += residual * mu;
    mu = std::min(cfg.rho * mu, cfg.mu_max);
  }

  sol.low_rank = std::move(l);
  sol.sparse = std::move(s);
  return sol;
}

}  // namespace trpca
