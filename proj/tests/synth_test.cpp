#include <cmath>

#include "gtest/gtest.h"
#include "trpca/synth.hpp"
#include "trpca/tlinalg.hpp"

namespace trpca {
namespace {

TEST(GenLowRank, DeterministicAndOfRequestedRank) {
  const Transform t = Transform::dct(40);
  const Tensor3 a = gen_low_rank(40, 40, 40, 4, t, 9);
  EXPECT_EQ(a, gen_low_rank(40, 40, 40, 4, t, 9));
  EXPECT_FALSE(a == gen_low_rank(40, 40, 40, 4, t, 10));
  EXPECT_EQ(tubal_rank(a, t), 4u);
}

TEST(GenLowRank, RectangularAndEdgeRanks) {
  const Transform t = Transform::random_orthogonal(6, 1);
  EXPECT_EQ(tubal_rank(gen_low_rank(12, 7, 6, 7, t, 2), t), 7u);
  EXPECT_EQ(gen_low_rank(5, 5, 6, 0, t, 2).norm(), 0.0);
  EXPECT_THROW(gen_low_rank(5, 4, 6, 5, t, 2), Error);
  EXPECT_THROW(gen_low_rank(5, 4, 7, 2, t, 2), Error);
}

TEST(GenLowRank, FactorVarianceMatchesOneOverN) {
  // With P, Q ~ N(0, 1/n) and an orthonormal transform, each transformed slice
  // is a product of n x r Gaussians, so E ||P * Q'||_F^2 = n3 n^2 r / n^2.
  const std::size_t n = 30, n3 = 4, r = 3;
  const Transform t = Transform::dct(n3);
  double acc = 0.0;
  const int reps = 40;
  for (int s = 0; s < reps; ++s) {
    const double f = gen_low_rank(n, n, n3, r, t, 100 + s).norm();
    acc += f * f;
  }
  const double expected = double(n3 * r);
  EXPECT_NEAR(acc / reps / expected, 1.0, 0.1);
}

TEST(GenSparse, ExactSupportAndUnitValues) {
  const Tensor3 s = gen_sparse(10, 8, 5, 123, SignModel::kRandomSigns, nullptr, 4);
  std::size_t nnz = 0, pos = 0;
  for (double v : s.data()) {
    if (v != 0.0) {
      ++nnz;
      EXPECT_TRUE(v == 1.0 || v == -1.0);
      pos += v > 0;
    }
  }
  EXPECT_EQ(nnz, 123u);
  EXPECT_GT(pos, 30u);
  EXPECT_LT(pos, 93u);
  EXPECT_EQ(s, gen_sparse(10, 8, 5, 123, SignModel::kRandomSigns, nullptr, 4));
}

TEST(GenSparse, EmptyAndFullSupports) {
  EXPECT_EQ(gen_sparse(4, 4, 4, 0, SignModel::kRandomSigns, nullptr, 1).norm(), 0.0);
  const Tensor3 full = gen_sparse(4, 3, 2, 24, SignModel::kRandomSigns, nullptr, 1);
  for (double v : full.data()) EXPECT_EQ(std::abs(v), 1.0);
  EXPECT_THROW(gen_sparse(4, 3, 2, 25, SignModel::kRandomSigns, nullptr, 1), Error);
}

TEST(GenSparse, CoherentSignsFollowReference) {
  const Transform t = Transform::dct(5);
  const Tensor3 l0 = gen_low_rank(9, 9, 5, 2, t, 3);
  const Tensor3 s = gen_sparse(9, 9, 5, 200, SignModel::kCoherentSigns, &l0, 3);
  std::size_t nnz = 0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (s.data()[n] != 0.0) {
      ++nnz;
      EXPECT_EQ(s.data()[n], l0.data()[n] > 0 ? 1.0 : -1.0);
    }
  }
  EXPECT_EQ(nnz, 200u);
  EXPECT_THROW(gen_sparse(9, 9, 5, 10, SignModel::kCoherentSigns, nullptr, 3), Error);
  EXPECT_THROW(gen_sparse(9, 8, 5, 10, SignModel::kCoherentSigns, &l0, 3), Error);
}

TEST(SupportSize, RelativeCutoff) {
  Tensor3 s(2, 2, 1);
  s(0, 0, 0) = 1.0;
  s(1, 0, 0) = 2e-8;
  s(0, 1, 0) = 5e-9;
  EXPECT_EQ(support_size(s), 2u);
  EXPECT_EQ(support_size(Tensor3(2, 2, 1)), 0u);
}

TEST(RecoveryTrial, DeskScaleSuccess) {
  RecoveryTrialConfig cfg;  // n = n3 = 40, r = 4, m = 0.1 n^3, DCT
  cfg.seed = 1;
  const TrialReport rep = run_recovery_trial(cfg);
  EXPECT_TRUE(rep.converged);
  EXPECT_TRUE(rep.success);
  EXPECT_EQ(rep.recovered_rank, 4u);
  EXPECT_LT(rep.low_rank_rel_error, 1e-4);
  const TrialReport again = run_recovery_trial(cfg);
  EXPECT_EQ(again.low_rank_rel_error, rep.low_rank_rel_error);
  EXPECT_EQ(again.sparse_rel_error, rep.sparse_rel_error);
  EXPECT_EQ(again.iterations, rep.iterations);
}

TEST(RecoveryTrial, FailsOutsideRecoverableRegime) {
  RecoveryTrialConfig cfg;
  cfg.n1 = cfg.n2 = cfg.n3 = 20;
  cfg.r = 20;
  cfg.m = static_cast<std::size_t>(std::lround(0.9 * 20 * 20 * 20));
  cfg.seed = 2;
  EXPECT_FALSE(run_recovery_trial(cfg).success);
}

TEST(RecoveryTrial, ConfigValidation) {
  RecoveryTrialConfig cfg;
  cfg.r = 41;
  EXPECT_THROW(run_recovery_trial(cfg), Error);
  cfg = RecoveryTrialConfig{};
  cfg.m = 40 * 40 * 40 + 1;
  EXPECT_THROW(run_recovery_trial(cfg), Error);
  cfg = RecoveryTrialConfig{};
  cfg.transform_spec = "hadamard";  // 40 is not a power of two
  EXPECT_THROW(run_recovery_trial(cfg), Error);
}

RecoveryTrialConfig grid_base() {
  RecoveryTrialConfig base;
  base.n1 = base.n2 = 30;
  base.n3 = 15;
  base.seed = 5;
  return base;
}

TEST(PhaseGrid, DeepInsideAndOutside) {
  PhaseGrid inside;
  inside.rank_ratios = {0.05};
  inside.sparsity_ratios = {0.05};
  inside.trials_per_cell = 3;
  EXPECT_EQ(run_phase_grid(grid_base(), inside).success[0][0], 1.0);

  PhaseGrid outside = inside;
  outside.rank_ratios = {0.45};
  outside.sparsity_ratios = {0.45};
  EXPECT_EQ(run_phase_grid(grid_base(), outside).success[0][0], 0.0);
}

TEST(PhaseGrid, RejectsBadRatios) {
  PhaseGrid g;
  g.rank_ratios = {};
  g.sparsity_ratios = {0.1};
  EXPECT_THROW(run_phase_grid(grid_base(), g), Error);
  g.rank_ratios = {1.2};
  EXPECT_THROW(run_phase_grid(grid_base(), g), Error);
  g.rank_ratios = {0.1};
  g.trials_per_cell = 0;
  EXPECT_THROW(run_phase_grid(grid_base(), g), Error);
}

TEST(ParseRatioList, RangesAndLists) {
  const auto r = parse_ratio_list("0.05:0.1:0.45");
  ASSERT_EQ(r.size(), 5u);
  EXPECT_DOUBLE_EQ(r[0], 0.05);
  EXPECT_NEAR(r[4], 0.45, 1e-12);
  EXPECT_EQ(parse_ratio_list("0.01:0.01:0.5").size(), 50u);
  EXPECT_EQ(parse_ratio_list("0.1,0.2,0.3"), (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_EQ(parse_ratio_list("0.25"), (std::vector<double>{0.25}));
  EXPECT_THROW(parse_ratio_list(""), Error);
  EXPECT_THROW(parse_ratio_list("0.1:0:0.5"), Error);
  EXPECT_THROW(parse_ratio_list("a,b"), Error);
  EXPECT_THROW(parse_ratio_list("0.1:0.1"), Error);
}

TEST(Monotonicity, CountsIncreasesAlongRowsAndColumns) {
  PhaseGrid g;
  g.rank_ratios = {0.1, 0.2, 0.3};
  g.sparsity_ratios = {0.1, 0.2, 0.3};
  g.success = {{1, 1, 0.5}, {1, 0.5, 0}, {0.5, 0, 0}};
  EXPECT_EQ(monotonicity_violations(g), 0u);
  g.success[2][2] = 1.0;  // higher than both its left and upper neighbours
  EXPECT_EQ(monotonicity_violations(g), 1u);
  g.success[0][2] = 1.0;
  g.success[1][2] = 1.0;  // now (1,2) exceeds (1,1) as well
  EXPECT_EQ(monotonicity_violations(g), 2u);
}

}  // namespace
}  // namespace trpca
