#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "trpca/error.hpp"

namespace trpca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SliceMap = Eigen::Map<Matrix>;
using ConstSliceMap = Eigen::Map<const Matrix>;

struct Dims {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t n3 = 0;

  std::size_t size() const { return n1 * n2 * n3; }
  std::size_t slice_size() const { return n1 * n2; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

enum class NormKind { kFrobenius, kL1, kLinf };

// Dense real n1 x n2 x n3 tensor.
//
// Storage is frontal-slice major: entry (i, j, k) lives at
// i + n1 * (j + n2 * k), so every frontal slice is a contiguous column-major
// n1 x n2 block and tubes have stride n1 * n2. All indices are 0-based.
class Tensor3 {
 public:
  Tensor3() = default;

  // Zero tensor.
  explicit Tensor3(Dims dims);
  Tensor3(std::size_t n1, std::size_t n2, std::size_t n3)
      : Tensor3(Dims{n1, n2, n3}) {}

  // Throws kInvalidArgument on length mismatch or non-finite entries.
  Tensor3(Dims dims, std::vector<double> data);

  static Tensor3 from_slices(std::span<const Matrix> slices);

  const Dims& dims() const { return dims_; }
  std::size_t n1() const { return dims_.n1; }
  std::size_t n2() const { return dims_.n2; }
  std::size_t n3() const { return dims_.n3; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[index(i, j, k)];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[index(i, j, k)];
  }
  // Bounds-checked access; throws kOutOfRange.
  double at(std::size_t i, std::size_t j, std::size_t k) const;

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  // View of frontal slice k (0-based); writes through the mutable view land in
  // the tensor. Throws kOutOfRange when k >= n3.
  ConstSliceMap slice(std::size_t k) const;
  SliceMap slice(std::size_t k);

  // The (n1*n2) x n3 matrix whose columns are the flattened frontal slices.
  // Row (i + n1*j) of this view is the tube (i, j, :).
  Eigen::Map<const Matrix> unfold3() const;
  Eigen::Map<Matrix> unfold3();

  double norm(NormKind kind = NormKind::kFrobenius) const;
  bool all_finite() const;

  Tensor3& operator+=(const Tensor3& other);
  Tensor3& operator-=(const Tensor3& other);
  Tensor3& operator*=(double s);

  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + dims_.n1 * (j + dims_.n2 * k);
  }

  Dims dims_;
  std::vector<double> data_;
};

// Sum over all entries of a .* b. Throws kDimensionMismatch.
double inner(const Tensor3& a, const Tensor3& b);

inline double norm(const Tensor3& t, NormKind kind = NormKind::kFrobenius) {
  return t.norm(kind);
}

// Max-abs entrywise difference. Throws kDimensionMismatch.
double max_abs_diff(const Tensor3& a, const Tensor3& b);

void require_same_dims(const Tensor3& a, const Tensor3& b, const char* what);

}  // namespace trpca
