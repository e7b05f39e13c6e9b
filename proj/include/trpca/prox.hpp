#pragma once

#include "trpca/tensor3.hpp"
#include "trpca/transform.hpp"

namespace trpca {

struct TsvtResult {
  Tensor3 value;
  // Tensor nuclear norm of `value`, i.e. (1/ell) * sum of the shrunk
  // transform-domain singular values.
  double nuclear_norm = 0.0;
};

// Tensor singular value thresholding: the minimiser of
//   tau * ||X||_* + 1/2 ||X - Y||_F^2.
// Every transform-domain slice has its singular values shrunk by tau; the
// 1/ell in the nuclear norm scales the whole objective and does not change
// the per-slice threshold. Throws kInvalidArgument unless tau > 0.
Tensor3 tsvt(const Tensor3& y, double tau, const Transform& t);
TsvtResult tsvt_with_norm(const Tensor3& y, double tau, const Transform& t);

// Entrywise sign(y) * max(|y| - tau, 0); |y| == tau maps to 0.
Tensor3 soft_threshold(const Tensor3& y, double tau);

}  // namespace trpca
