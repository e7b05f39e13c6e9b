#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "trpca/tensor3.hpp"

namespace trpca {

// Invertible mode-3 transform L with L'L = LL' = ell * I.
//
// Instances are immutable and only obtainable through the factories below,
// all of which route through validate().
class Transform {
 public:
  // Relative tolerance on the L'L = ell*I check and the inverse check.
  static constexpr double kTolerance = 1e-10;

  static Transform dct(std::size_t n3);
  static Transform random_orthogonal(std::size_t n3, std::uint64_t seed);
  static Transform scaled_hadamard(std::size_t n3);
  static Transform identity(std::size_t n3);

  // Estimates ell as the mean diagonal of L'L and accepts the matrix only if
  // max|L'L - ell I| and max|LL' - ell I| are within kTolerance * ell.
  // Throws kInvalidTransform reporting the worst deviation otherwise.
  static Transform validate(const Matrix& matrix);

  std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  const Matrix& inverse() const { return inverse_; }
  double ell() const { return ell_; }

  // Replace every tube a(i, j, :) by L * tube (resp. L^{-1} * tube).
  Tensor3 apply(const Tensor3& a) const;
  Tensor3 apply_inverse(const Tensor3& a) const;

 private:
  Transform(Matrix matrix, Matrix inverse, double ell)
      : matrix_(std::move(matrix)), inverse_(std::move(inverse)), ell_(ell) {}

  Matrix matrix_;
  Matrix inverse_;
  double ell_ = 1.0;
};

// Orthonormal DCT-II matrix, rows are basis vectors.
Matrix dct_matrix(std::size_t n3);

// Parse a transform description: "dct", "rom:<seed>", "hadamard",
// "identity" or "file:<path>" (dense CSV matrix). Throws kInvalidArgument on
// a malformed description and kInvalidTransform from validate().
Transform parse_transform(std::string_view spec, std::size_t n3);

}  // namespace trpca
