#pragma once

#include <cstddef>

#include "trpca/tensor3.hpp"
#include "trpca/transform.hpp"

namespace trpca {

// Relative threshold used to decide whether a singular tube is nonzero.
inline constexpr double kDefaultRankTol = 1e-8;

// a *_L b: frontal-slice-wise products in the transform domain.
// a is n1 x n2 x n3, b is n2 x l x n3.
Tensor3 tprod(const Tensor3& a, const Tensor3& b, const Transform& t);

// Transpose under L. For a real mode-3 transform this reduces to transposing
// every spatial frontal slice, since L only mixes along tubes.
Tensor3 ttranspose(const Tensor3& a, const Transform& t);

// n x n x n3 tensor whose transform-domain slices are all identities.
Tensor3 identity_tensor(std::size_t n, const Transform& t);

struct TSvdFactors {
  Tensor3 u;  // n1 x k x n3
  Tensor3 s;  // k x k x n3, f-diagonal in the transform domain
  Tensor3 v;  // n2 x k x n3
  // k x n3; column i holds the singular values of L(a)^(i), nonincreasing.
  Matrix singular_values;
  Transform transform;
  bool skinny = true;

  std::size_t k() const { return s.n1(); }
  // u *_L s *_L v'
  Tensor3 reconstruct() const;
};

// t-SVD by per-slice SVD in the transform domain. With skinny=true the factors
// are truncated to the tubal rank at tolerance rank_tol; otherwise
// k = min(n1, n2). Left singular vectors are sign-normalised so their
// largest-magnitude entry is positive. Throws kNumericalFailure naming the
// slice if a slice SVD fails.
TSvdFactors tsvd(const Tensor3& a, const Transform& t, bool skinny = true,
                 double rank_tol = kDefaultRankTol);

// min(n1,n2) x n3 matrix of transform-domain singular values.
Matrix slice_singular_values(const Tensor3& a, const Transform& t);

// Number of singular tubes with 2-norm above tol times the largest one.
std::size_t tubal_rank(const Tensor3& a, const Transform& t,
                       double tol = kDefaultRankTol);
std::size_t tubal_rank_from_singular_values(const Matrix& sv, double tol);

// max over transform slices of the largest singular value.
double spectral_norm(const Tensor3& a, const Transform& t);

// (1/ell) * sum of all transform-domain singular values.
double nuclear_norm(const Tensor3& a, const Transform& t);

// Tensor column basis: n x 1 x n3 whose transform has tube (i, 0, :) all ones.
Tensor3 column_basis(std::size_t i, std::size_t n, const Transform& t);
// Tensor tube basis: 1 x 1 x n3 whose transform is the k-th unit tube.
Tensor3 tube_basis(std::size_t k, const Transform& t);

struct IncoherenceReport {
  double mu1 = 0.0;  // column-space condition
  double mu2 = 0.0;  // row-space condition
  double mu3 = 0.0;  // joint condition on u *_L v'
  double mu = 0.0;   // max of the three
  std::size_t rank = 0;
};

// Smallest mu for which each incoherence bound holds, evaluated on the skinny
// t-SVD of a. Throws kInvalidArgument for the zero tensor.
IncoherenceReport incoherence(const Tensor3& a, const Transform& t);

}  // namespace trpca
