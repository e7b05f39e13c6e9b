#include "trpca/synth.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "trpca/random.hpp"
#include "trpca/tlinalg.hpp"

namespace trpca {

void RecoveryTrialConfig::validate() const {
  if (n1 == 0 || n2 == 0 || n3 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "trial config: sizes must be positive");
  }
  if (r > std::min(n1, n2)) {
    throw Error(ErrorCode::kOutOfRange,
                "trial config: r=" + std::to_string(r) + " exceeds min(n1,n2)");
  }
  if (m > n1 * n2 * n3) {
    throw Error(ErrorCode::kOutOfRange,
                "trial config: m=" + std::to_string(m) + " exceeds n1*n2*n3");
  }
}

Tensor3 gen_low_rank(std::size_t n1, std::size_t n2, std::size_t n3,
                     std::size_t r, const Transform& t, std::uint64_t seed) {
  if (r > std::min(n1, n2)) {
    throw Error(ErrorCode::kOutOfRange,
                "gen_low_rank: r=" + std::to_string(r) + " exceeds min(n1,n2)");
  }
  if (r == 0) return Tensor3(n1, n2, n3);
  Rng rng(derive_seed(seed, "synth.low_rank"));
  const double stddev = std::sqrt(1.0 / static_cast<double>(std::max(n1, n2)));
  const Tensor3 p = gaussian_tensor({n1, r, n3}, stddev, rng);
  const Tensor3 q = gaussian_tensor({n2, r, n3}, stddev, rng);
  return tprod(p, ttranspose(q, t), t);
}

Tensor3 gen_sparse(std::size_t n1, std::size_t n2, std::size_t n3,
                   std::size_t m, SignModel model, const Tensor3* low_rank_ref,
                   std::uint64_t seed) {
  const Dims dims{n1, n2, n3};
  if (m > dims.size()) {
    throw Error(ErrorCode::kOutOfRange,
                "gen_sparse: m=" + std::to_string(m) + " exceeds n1*n2*n3");
  }
  if (model == SignModel::kCoherentSigns) {
    if (low_rank_ref == nullptr) {
      throw Error(ErrorCode::kInvalidArgument,
                  "gen_sparse: coherent signs need a low-rank reference");
    }
    if (low_rank_ref->dims() != dims) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "gen_sparse: low-rank reference has different dims");
    }
  }

  Rng rng(derive_seed(seed, "synth.sparse"));
  // Partial Fisher-Yates: the first m entries become a uniform m-subset.
  std::vector<std::size_t> idx(dims.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t n = 0; n < m; ++n) {
    std::uniform_int_distribution<std::size_t> pick(n, idx.size() - 1);
    std::swap(idx[n], idx[pick(rng)]);
  }

  Tensor3 s(dims);
  auto out = s.data();
  std::bernoulli_distribution coin(0.5);
  for (std::size_t n = 0; n < m; ++n) {
    const std::size_t at = idx[n];
    if (model == SignModel::kRandomSigns) {
      out[at] = coin(rng) ? 1.0 : -1.0;
    } else {
      const double v = low_rank_ref->data()[at];
      out[at] = (v > 0.0) ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
  }
  return s;
}

std::size_t support_size(const Tensor3& s) {
  const double cutoff = 1e-8 * s.norm(NormKind::kLinf);
  std::size_t count = 0;
  for (double v : s.data()) {
    if (std::abs(v) > cutoff) ++count;
  }
  return count;
}

namespace {

double relative_error(const Tensor3& estimate, const Tensor3& truth) {
  const double denom = truth.norm();
  const double num = (estimate - truth).norm();
  return denom > 0.0 ? num / denom : num;
}

}  // namespace

TrialReport run_recovery_trial(const RecoveryTrialConfig& cfg,
                               const SolverConfig& solver_cfg) {
  cfg.validate();
  const Transform t = parse_transform(cfg.transform_spec, cfg.n3);
  const Tensor3 l0 = gen_low_rank(cfg.n1, cfg.n2, cfg.n3, cfg.r, t, cfg.seed);
  const Tensor3 s0 =
      gen_sparse(cfg.n1, cfg.n2, cfg.n3, cfg.m, cfg.sign_model, &l0, cfg.seed);
  const Tensor3 x = l0 + s0;

  SolverConfig sc = solver_cfg;
  if (!sc.lambda) sc.lambda = default_lambda(cfg.n1, cfg.n2, t);

  const auto start = std::chrono::steady_clock::now();
  const TrpcaSolution sol = solve(x, t, sc);
  const auto stop = std::chrono::steady_clock::now();

  TrialReport rep;
  rep.n1 = cfg.n1;
  rep.n2 = cfg.n2;
  rep.n3 = cfg.n3;
  rep.r = cfg.r;
  rep.m = cfg.m;
  rep.recovered_rank = tubal_rank(sol.low_rank, t);
  rep.recovered_support = support_size(sol.sparse);
  rep.low_rank_rel_error = relative_error(sol.low_rank, l0);
  rep.sparse_rel_error = relative_error(sol.sparse, s0);
  rep.iterations = sol.iterations;
  rep.converged = sol.converged;
  rep.success = rep.low_rank_rel_error <= kRecoverySuccessThreshold;
  rep.wall_seconds = std::chrono::duration<double>(stop - start).count();
  return rep;
}

PhaseGrid run_phase_grid(const RecoveryTrialConfig& base, PhaseGrid grid,
                         const SolverConfig& solver_cfg) {
  if (grid.rank_ratios.empty() || grid.sparsity_ratios.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "phase grid: empty ratio list");
  }
  if (grid.trials_per_cell == 0) {
    throw Error(ErrorCode::kInvalidArgument, "phase grid: trials_per_cell must be >= 1");
  }
  auto check_ratio = [](double v) {
    if (!(v > 0.0 && v < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "phase grid: ratio " + std::to_string(v) + " not in (0,1)");
    }
  };
  for (double v : grid.rank_ratios) check_ratio(v);
  for (double v : grid.sparsity_ratios) check_ratio(v);

  const std::size_t rows = grid.rank_ratios.size();
  const std::size_t cols = grid.sparsity_ratios.size();
  const std::size_t n = std::min(base.n1, base.n2);
  const double volume = static_cast<double>(base.n1 * base.n2 * base.n3);

  grid.success.assign(rows, std::vector<double>(cols, 0.0));
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      RecoveryTrialConfig cell = base;
      cell.r = std::max<std::size_t>(
          1, static_cast<std::size_t>(
                 std::llround(grid.rank_ratios[a] * static_cast<double>(n))));
      cell.r = std::min(cell.r, n);
      cell.m = static_cast<std::size_t>(
          std::llround(grid.sparsity_ratios[b] * volume));
      std::size_t wins = 0;
      for (std::size_t trial = 0; trial < grid.trials_per_cell; ++trial) {
        cell.seed = derive_seed(base.seed, "synth.phase_grid",
                                (a * cols + b) * grid.trials_per_cell + trial);
        if (run_recovery_trial(cell, solver_cfg).success) ++wins;
      }
      grid.success[a][b] =
          static_cast<double>(wins) / static_cast<double>(grid.trials_per_cell);
    }
  }
  return grid;
}

std::vector<double> parse_ratio_list(const std::string& text) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cannot parse ratio '" + s + "' in '" + text + "'");
    }
    return v;
  };
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);

  std::vector<double> out;
  if (sep == ':') {
    if (parts.size() != 3) {
      throw Error(ErrorCode::kInvalidArgument,
                  "range '" + text + "' must be start:step:stop");
    }
    const double start = to_double(parts[0]);
    const double step = to_double(parts[1]);
    const double stop = to_double(parts[2]);
    if (!(step > 0.0) || stop < start) {
      throw Error(ErrorCode::kInvalidArgument, "range '" + text + "' is empty");
    }
    const auto count =
        static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      // Round to suppress accumulation noise such as 0.15000000000000002.
      const double v = start + static_cast<double>(i) * step;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
  } else {
    for (const auto& p : parts) out.push_back(to_double(p));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty ratio list '" + text + "'");
  }
  return out;
}

std::size_t monotonicity_violations(const PhaseGrid& grid) {
  std::size_t count = 0;
  const auto& s = grid.success;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = 0; b < s[a].size(); ++b) {
      const bool up = a > 0 && s[a][b] > s[a - 1][b] + 1e-12;
      const bool left = b > 0 && s[a][b] > s[a][b - 1] + 1e-12;
      if (up || left) ++count;
    }
  }
  return count;
}

}  // namespace trpca
