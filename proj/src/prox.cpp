#include "trpca/prox.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "trpca/parallel.hpp"

namespace trpca {

namespace {

void require_positive_tau(double tau, const char* who) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(who) + ": tau must be a positive finite number, got " +
                    std::to_string(tau));
  }
}

}  // namespace

TsvtResult tsvt_with_norm(const Tensor3& y, double tau, const Transform& t) {
  require_positive_tau(tau, "tsvt");
  const Tensor3 ybar = t.apply(y);
  Tensor3 xbar(y.dims());
  std::vector<double> shrunk_sums(y.n3(), 0.0);

  parallel_for(y.n3(), [&](std::size_t k) {
    Eigen::BDCSVD<Matrix> svd(ybar.slice(k),
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
      throw Error(ErrorCode::kNumericalFailure,
                  "tsvt: SVD failed on transform-domain frontal slice " +
                      std::to_string(k + 1));
    }
    const Vector& sigma = svd.singularValues();
    Eigen::Index keep = 0;
    while (keep < sigma.size() && sigma(keep) > tau) ++keep;
    if (keep == 0) return;  // slice already zero
    const Vector shrunk = sigma.head(keep).array() - tau;
    shrunk_sums[k] = shrunk.sum();
    xbar.slice(k).noalias() = svd.matrixU().leftCols(keep) *
                              shrunk.asDiagonal() *
                              svd.matrixV().leftCols(keep).transpose();
  });

  double total = 0.0;
  for (double s : shrunk_sums) total += s;
  return TsvtResult{t.apply_inverse(xbar), total / t.ell()};
}

Tensor3 tsvt(const Tensor3& y, double tau, const Transform& t) {
  return tsvt_with_norm(y, tau, t).value;
}

Tensor3 soft_threshold(const Tensor3& y, double tau) {
  require_positive_tau(tau, "soft_threshold");
  Tensor3 out(y.dims());
  const auto in = y.data();
  auto o = out.data();
  for (std::size_t n = 0; n < in.size(); ++n) {
    const double v = in[n];
    if (v > tau) {
      o[n] = v - tau;
    } else if (v < -tau) {
      o[n] = v + tau;
    }
  }
  return out;
}

}  // namespace trpca
