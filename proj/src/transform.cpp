#include "trpca/transform.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/QR>

#include "trpca/random.hpp"
#include "trpca/tensor_io.hpp"

namespace trpca {

Matrix dct_matrix(std::size_t n3) {
  const auto n = static_cast<Eigen::Index>(n3);
  Matrix m(n, n);
  const double n_d = static_cast<double>(n3);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double c = (k == 0) ? std::sqrt(1.0 / n_d) : std::sqrt(2.0 / n_d);
    for (Eigen::Index j = 0; j < n; ++j) {
      m(k, j) = c * std::cos(std::numbers::pi * static_cast<double>(k) *
                             (2.0 * static_cast<double>(j) + 1.0) / (2.0 * n_d));
    }
  }
  return m;
}

Transform Transform::dct(std::size_t n3) {
  if (n3 == 0) throw Error(ErrorCode::kInvalidArgument, "dct: n3 must be >= 1");
  return validate(dct_matrix(n3));
}

Transform Transform::random_orthogonal(std::size_t n3, std::uint64_t seed) {
  if (n3 == 0) throw Error(ErrorCode::kInvalidArgument, "rom: n3 must be >= 1");
  Rng rng(derive_seed(seed, "transform.rom"));
  const Matrix g = gaussian_matrix(n3, n3, 1.0, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Haar measure needs R with a positive diagonal: Q <- Q * diag(sign(R_ii)).
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  return validate(q);
}

Transform Transform::scaled_hadamard(std::size_t n3) {
  if (n3 == 0 || (n3 & (n3 - 1)) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "hadamard: n3=" + std::to_string(n3) + " is not a power of two");
  }
  Matrix h = Matrix::Ones(1, 1);
  while (static_cast<std::size_t>(h.rows()) < n3) {
    const auto m = h.rows();
    Matrix next(2 * m, 2 * m);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return validate(h);
}

Transform Transform::identity(std::size_t n3) {
  if (n3 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "identity: n3 must be >= 1");
  }
  const auto n = static_cast<Eigen::Index>(n3);
  return validate(Matrix::Identity(n, n));
}

Transform Transform::validate(const Matrix& matrix) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    std::ostringstream os;
    os << "transform matrix must be square and nonempty, got " << matrix.rows()
       << "x" << matrix.cols();
    throw Error(ErrorCode::kInvalidTransform, os.str());
  }
  if (!matrix.allFinite()) {
    throw Error(ErrorCode::kInvalidTransform,
                "transform matrix has non-finite entries");
  }
  const auto n = matrix.rows();
  const Matrix gram = matrix.transpose() * matrix;
  const double ell = gram.diagonal().mean();
  if (!(ell > 0.0)) {
    throw Error(ErrorCode::kInvalidTransform,
                "transform matrix is zero (ell estimate <= 0)");
  }
  const Matrix ident = Matrix::Identity(n, n);
  const double dev_left = (gram - ell * ident).cwiseAbs().maxCoeff();
  const double dev_right =
      (matrix * matrix.transpose() - ell * ident).cwiseAbs().maxCoeff();
  const double deviation = std::max(dev_left, dev_right) / ell;
  if (deviation > kTolerance) {
    std::ostringstream os;
    os << "transform violates L'L = LL' = ell*I: max relative deviation "
       << deviation << " exceeds " << kTolerance << " (ell estimate " << ell
       << ")";
    throw Error(ErrorCode::kInvalidTransform, os.str());
  }
  Matrix inverse = matrix.transpose() / ell;
  const double inv_dev = (matrix * inverse - ident).cwiseAbs().maxCoeff();
  if (inv_dev > kTolerance) {
    std::ostringstream os;
    os << "transform inverse check failed: max|L*Linv - I| = " << inv_dev;
    throw Error(ErrorCode::kInvalidTransform, os.str());
  }
  return Transform(matrix, std::move(inverse), ell);
}

namespace {

void check_size(const Transform& t, const Tensor3& a) {
  if (a.n3() != t.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "transform of size " + std::to_string(t.size()) +
                    " applied to tensor with n3=" + std::to_string(a.n3()));
  }
}

}  // namespace

Tensor3 Transform::apply(const Tensor3& a) const {
  check_size(*this, a);
  Tensor3 out(a.dims());
  // Each row of the unfolding is a tube; tube' * L' = (L * tube)'.
  out.unfold3().noalias() = a.unfold3() * matrix_.transpose();
  return out;
}

Tensor3 Transform::apply_inverse(const Tensor3& a) const {
  check_size(*this, a);
  Tensor3 out(a.dims());
  out.unfold3().noalias() = a.unfold3() * inverse_.transpose();
  return out;
}

Transform parse_transform(std::string_view spec, std::size_t n3) {
  if (spec == "dct") return Transform::dct(n3);
  if (spec == "hadamard") return Transform::scaled_hadamard(n3);
  if (spec == "identity") return Transform::identity(n3);
  if (spec.starts_with("rom:")) {
    const auto digits = spec.substr(4);
    std::uint64_t seed = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (digits.empty() || ec != std::errc() ||
        ptr != digits.data() + digits.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad rom seed in transform '" + std::string(spec) + "'");
    }
    return Transform::random_orthogonal(n3, seed);
  }
  if (spec.starts_with("file:")) {
    const Matrix m = read_matrix_csv(std::string(spec.substr(5)));
    Transform t = Transform::validate(m);
    if (t.size() != n3) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "transform file is " + std::to_string(t.size()) +
                      "x" + std::to_string(t.size()) + " but n3=" +
                      std::to_string(n3));
    }
    return t;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown transform '" + std::string(spec) +
                  "' (expected dct, rom:<seed>, hadamard, identity or "
                  "file:<path>)");
}

}  // namespace trpca
