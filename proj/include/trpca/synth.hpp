#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trpca/solver.hpp"
#include "trpca/tensor3.hpp"
#include "trpca/transform.hpp"

namespace trpca {

// Relative low-rank error at or below which a trial counts as a recovery.
inline constexpr double kRecoverySuccessThreshold = 1e-3;

enum class SignModel { kRandomSigns, kCoherentSigns };

struct RecoveryTrialConfig {
  std::size_t n1 = 40;
  std::size_t n2 = 40;
  std::size_t n3 = 40;
  std::size_t r = 4;
  std::size_t m = 6400;
  SignModel sign_model = SignModel::kRandomSigns;
  std::string transform_spec = "dct";
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrialReport {
  std::size_t n1 = 0, n2 = 0, n3 = 0;
  std::size_t r = 0;
  std::size_t m = 0;
  std::size_t recovered_rank = 0;    // tubal rank of the recovered low-rank part
  std::size_t recovered_support = 0; // entries of S-hat above 1e-8 * max|S-hat|
  double low_rank_rel_error = 0.0;
  double sparse_rel_error = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool success = false;
  double wall_seconds = 0.0;
};

// P *_L Q' with P: n1 x r x n3, Q: n2 x r x n3 drawn i.i.d. N(0, 1/max(n1,n2)).
Tensor3 gen_low_rank(std::size_t n1, std::size_t n2, std::size_t n3,
                     std::size_t r, const Transform& t, std::uint64_t seed);

// Exactly m nonzeros at uniformly chosen distinct positions. Values are fair
// +-1 coins, or sgn(low_rank_ref) on the support for the coherent model.
Tensor3 gen_sparse(std::size_t n1, std::size_t n2, std::size_t n3,
                   std::size_t m, SignModel model,
                   const Tensor3* low_rank_ref, std::uint64_t seed);

// Number of entries with |value| > 1e-8 * max|value|.
std::size_t support_size(const Tensor3& s);

TrialReport run_recovery_trial(const RecoveryTrialConfig& cfg,
                               const SolverConfig& solver_cfg = {});

struct PhaseGrid {
  std::vector<double> rank_ratios;      // rows
  std::vector<double> sparsity_ratios;  // columns
  std::size_t trials_per_cell = 10;
  // success[row][col], fraction of successful trials in [0, 1]
  std::vector<std::vector<double>> success;
};

// Runs trials_per_cell trials for every (rank ratio, sparsity ratio) cell.
// base supplies sizes, sign model, transform and seed; r and m are derived per
// cell as max(1, round(ratio * min(n1, n2))) and round(rho * n1 n2 n3).
PhaseGrid run_phase_grid(const RecoveryTrialConfig& base, PhaseGrid grid,
                         const SolverConfig& solver_cfg = {});

// "a:b:c" (start:step:stop, inclusive) or a comma separated list.
std::vector<double> parse_ratio_list(const std::string& text);

// Count of cells whose success exceeds the cell before it along a row or a
// column (success should not increase with rank or sparsity).
std::size_t monotonicity_violations(const PhaseGrid& grid);

}  // namespace trpca
