#include "trpca/tensor3.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace trpca {

namespace {

std::string dims_string(const Dims& d) {
  std::ostringstream os;
  os << d.n1 << "x" << d.n2 << "x" << d.n3;
  return os.str();
}

}  // namespace

Tensor3::Tensor3(Dims dims) : dims_(dims), data_(dims.size(), 0.0) {}

Tensor3::Tensor3(Dims dims, std::vector<double> data)
    : dims_(dims), data_(std::move(data)) {
  if (data_.size() != dims_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "tensor data length " + std::to_string(data_.size()) +
                    " does not match dims " + dims_string(dims_));
  }
  if (!all_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "tensor data contains NaN or Inf");
  }
}

Tensor3 Tensor3::from_slices(std::span<const Matrix> slices) {
  if (slices.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "from_slices: no slices given");
  }
  const auto rows = static_cast<std::size_t>(slices.front().rows());
  const auto cols = static_cast<std::size_t>(slices.front().cols());
  Tensor3 out(rows, cols, slices.size());
  for (std::size_t k = 0; k < slices.size(); ++k) {
    if (static_cast<std::size_t>(slices[k].rows()) != rows ||
        static_cast<std::size_t>(slices[k].cols()) != cols) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "from_slices: slice " + std::to_string(k) +
                      " has a different shape");
    }
    out.slice(k) = slices[k];
  }
  if (!out.all_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "tensor data contains NaN or Inf");
  }
  return out;
}

double Tensor3::at(std::size_t i, std::size_t j, std::size_t k) const {
  if (i >= dims_.n1 || j >= dims_.n2 || k >= dims_.n3) {
    throw Error(ErrorCode::kOutOfRange,
                "index (" + std::to_string(i) + "," + std::to_string(j) + "," +
                    std::to_string(k) + ") out of range for " +
                    dims_string(dims_));
  }
  return (*this)(i, j, k);
}

ConstSliceMap Tensor3::slice(std::size_t k) const {
  if (k >= dims_.n3) {
    throw Error(ErrorCode::kOutOfRange,
                "frontal slice " + std::to_string(k) + " out of range (n3=" +
                    std::to_string(dims_.n3) + ")");
  }
  return ConstSliceMap(data_.data() + k * dims_.slice_size(),
                       static_cast<Eigen::Index>(dims_.n1),
                       static_cast<Eigen::Index>(dims_.n2));
}

SliceMap Tensor3::slice(std::size_t k) {
  if (k >= dims_.n3) {
    throw Error(ErrorCode::kOutOfRange,
                "frontal slice " + std::to_string(k) + " out of range (n3=" +
                    std::to_string(dims_.n3) + ")");
  }
  return SliceMap(data_.data() + k * dims_.slice_size(),
                  static_cast<Eigen::Index>(dims_.n1),
                  static_cast<Eigen::Index>(dims_.n2));
}

Eigen::Map<const Matrix> Tensor3::unfold3() const {
  return Eigen::Map<const Matrix>(
      data_.data(), static_cast<Eigen::Index>(dims_.slice_size()),
      static_cast<Eigen::Index>(dims_.n3));
}

Eigen::Map<Matrix> Tensor3::unfold3() {
  return Eigen::Map<Matrix>(data_.data(),
                            static_cast<Eigen::Index>(dims_.slice_size()),
                            static_cast<Eigen::Index>(dims_.n3));
}

double Tensor3::norm(NormKind kind) const {
  switch (kind) {
    case NormKind::kFrobenius: {
      double s = 0.0;
      for (double v : data_) s += v * v;
      return std::sqrt(s);
    }
    case NormKind::kL1: {
      double s = 0.0;
      for (double v : data_) s += std::abs(v);
      return s;
    }
    case NormKind::kLinf: {
      double m = 0.0;
      for (double v : data_) m = std::max(m, std::abs(v));
      return m;
    }
  }
  return 0.0;
}

bool Tensor3::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Tensor3& Tensor3::operator+=(const Tensor3& other) {
  require_same_dims(*this, other, "operator+");
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += other.data_[n];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& other) {
  require_same_dims(*this, other, "operator-");
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= other.data_[n];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

void require_same_dims(const Tensor3& a, const Tensor3& b, const char* what) {
  if (a.dims() != b.dims()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": dimension mismatch " +
                    dims_string(a.dims()) + " vs " + dims_string(b.dims()));
  }
}

double inner(const Tensor3& a, const Tensor3& b) {
  require_same_dims(a, b, "inner");
  const auto x = a.data();
  const auto y = b.data();
  double s = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) s += x[n] * y[n];
  return s;
}

double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  require_same_dims(a, b, "max_abs_diff");
  const auto x = a.data();
  const auto y = b.data();
  double m = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    m = std::max(m, std::abs(x[n] - y[n]));
  }
  return m;
}

}  // namespace trpca
