#include "trpca/tlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "trpca/parallel.hpp"

namespace trpca {

namespace {

struct SliceSvd {
  Matrix u;
  Vector sigma;
  Matrix v;
};

SliceSvd slice_svd(const Eigen::Ref<const Matrix>& m, std::size_t slice,
                   bool vectors) {
  const int options = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0;
  Eigen::BDCSVD<Matrix> svd(m, options);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure,
                "SVD failed on transform-domain frontal slice " +
                    std::to_string(slice + 1));
  }
  SliceSvd out;
  out.sigma = svd.singularValues();
  if (vectors) {
    out.u = svd.matrixU();
    out.v = svd.matrixV();
    for (Eigen::Index c = 0; c < out.u.cols(); ++c) {
      Eigen::Index at = 0;
      out.u.col(c).cwiseAbs().maxCoeff(&at);
      if (out.u(at, c) < 0.0) {
        out.u.col(c) = -out.u.col(c);
        out.v.col(c) = -out.v.col(c);
      }
    }
  }
  return out;
}

}  // namespace

Tensor3 tprod(const Tensor3& a, const Tensor3& b, const Transform& t) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "tprod: cannot multiply " + std::to_string(a.n1()) + "x" +
                    std::to_string(a.n2()) + "x" + std::to_string(a.n3()) +
                    " by " + std::to_string(b.n1()) + "x" +
                    std::to_string(b.n2()) + "x" + std::to_string(b.n3()));
  }
  const Tensor3 abar = t.apply(a);
  const Tensor3 bbar = t.apply(b);
  Tensor3 cbar(a.n1(), b.n2(), a.n3());
  parallel_for(a.n3(), [&](std::size_t k) {
    cbar.slice(k).noalias() = abar.slice(k) * bbar.slice(k);
  });
  return t.apply_inverse(cbar);
}

Tensor3 ttranspose(const Tensor3& a, const Transform& t) {
  if (a.n3() != t.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "ttranspose: tensor n3 does not match transform size");
  }
  Tensor3 out(a.n2(), a.n1(), a.n3());
  for (std::size_t k = 0; k < a.n3(); ++k) out.slice(k) = a.slice(k).transpose();
  return out;
}

Tensor3 identity_tensor(std::size_t n, const Transform& t) {
  Tensor3 ibar(n, n, t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) ibar(i, i, k) = 1.0;
  }
  return t.apply_inverse(ibar);
}

Tensor3 TSvdFactors::reconstruct() const {
  return tprod(tprod(u, s, transform), ttranspose(v, transform), transform);
}

Matrix slice_singular_values(const Tensor3& a, const Transform& t) {
  const Tensor3 abar = t.apply(a);
  const auto k = static_cast<Eigen::Index>(std::min(a.n1(), a.n2()));
  Matrix sv(k, static_cast<Eigen::Index>(a.n3()));
  parallel_for(a.n3(), [&](std::size_t s) {
    sv.col(static_cast<Eigen::Index>(s)) =
        slice_svd(abar.slice(s), s, false).sigma;
  });
  return sv;
}

std::size_t tubal_rank_from_singular_values(const Matrix& sv, double tol) {
  if (sv.rows() == 0) return 0;
  const Vector tube_norms = sv.rowwise().norm();
  const double largest = tube_norms.maxCoeff();
  if (largest == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < tube_norms.size(); ++i) {
    if (tube_norms(i) > tol * largest) ++rank;
  }
  return rank;
}

std::size_t tubal_rank(const Tensor3& a, const Transform& t, double tol) {
  if (tol < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "tubal_rank: tol must be >= 0");
  }
  return tubal_rank_from_singular_values(slice_singular_values(a, t), tol);
}

TSvdFactors tsvd(const Tensor3& a, const Transform& t, bool skinny,
                 double rank_tol) {
  const Tensor3 abar = t.apply(a);
  const std::size_t n1 = a.n1();
  const std::size_t n2 = a.n2();
  const std::size_t n3 = a.n3();
  const std::size_t full_k = std::min(n1, n2);

  std::vector<SliceSvd> slices(n3);
  parallel_for(n3, [&](std::size_t s) {
    slices[s] = slice_svd(abar.slice(s), s, true);
  });

  Matrix sv(static_cast<Eigen::Index>(full_k), static_cast<Eigen::Index>(n3));
  for (std::size_t s = 0; s < n3; ++s) {
    sv.col(static_cast<Eigen::Index>(s)) = slices[s].sigma;
  }
  const std::size_t k =
      skinny ? tubal_rank_from_singular_values(sv, rank_tol) : full_k;
  const auto kk = static_cast<Eigen::Index>(k);

  Tensor3 ubar(n1, k, n3);
  Tensor3 sbar(k, k, n3);
  Tensor3 vbar(n2, k, n3);
  for (std::size_t s = 0; s < n3; ++s) {
    ubar.slice(s) = slices[s].u.leftCols(kk);
    vbar.slice(s) = slices[s].v.leftCols(kk);
    auto ss = sbar.slice(s);
    for (Eigen::Index i = 0; i < kk; ++i) ss(i, i) = slices[s].sigma(i);
  }
  return TSvdFactors{t.apply_inverse(ubar), t.apply_inverse(sbar),
                     t.apply_inverse(vbar), sv.topRows(kk), t, skinny};
}

double spectral_norm(const Tensor3& a, const Transform& t) {
  const Matrix sv = slice_singular_values(a, t);
  return sv.size() == 0 ? 0.0 : sv.maxCoeff();
}

double nuclear_norm(const Tensor3& a, const Transform& t) {
  return slice_singular_values(a, t).sum() / t.ell();
}

Tensor3 column_basis(std::size_t i, std::size_t n, const Transform& t) {
  if (i >= n) {
    throw Error(ErrorCode::kOutOfRange,
                "column_basis: index " + std::to_string(i) +
                    " out of range for n=" + std::to_string(n));
  }
  Tensor3 ebar(n, 1, t.size());
  for (std::size_t k = 0; k < t.size(); ++k) ebar(i, 0, k) = 1.0;
  return t.apply_inverse(ebar);
}

Tensor3 tube_basis(std::size_t k, const Transform& t) {
  if (k >= t.size()) {
    throw Error(ErrorCode::kOutOfRange,
                "tube_basis: index " + std::to_string(k) +
                    " out of range for n3=" + std::to_string(t.size()));
  }
  Tensor3 ebar(1, 1, t.size());
  ebar(0, 0, k) = 1.0;
  return t.apply_inverse(ebar);
}

namespace {

// max over (i, k) of ||f' *_L e_i *_L L(e_k)||_F^2 for a factor f (n x r x n3).
double max_basis_energy(const Tensor3& factor, const Transform& t) {
  const Tensor3 ft = ttranspose(factor, t);
  const std::size_t n = factor.n1();
  const std::size_t n3 = t.size();
  std::vector<Tensor3> tube_images(n3);
  for (std::size_t k = 0; k < n3; ++k) tube_images[k] = t.apply(tube_basis(k, t));

  std::vector<double> best(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const Tensor3 w = tprod(ft, column_basis(i, n, t), t);
    for (std::size_t k = 0; k < n3; ++k) {
      const double e = tprod(w, tube_images[k], t).norm();
      best[i] = std::max(best[i], e * e);
    }
  });
  return *std::max_element(best.begin(), best.end());
}

}  // namespace

IncoherenceReport incoherence(const Tensor3& a, const Transform& t) {
  if (a.norm(NormKind::kLinf) == 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "incoherence is undefined for the zero tensor");
  }
  const TSvdFactors f = tsvd(a, t, /*skinny=*/true);
  const auto r = static_cast<double>(f.k());
  const auto n1 = static_cast<double>(a.n1());
  const auto n2 = static_cast<double>(a.n2());

  IncoherenceReport rep;
  rep.rank = f.k();
  rep.mu1 = n1 / r * max_basis_energy(f.u, t);
  rep.mu2 = n2 / r * max_basis_energy(f.v, t);
  const double uv_inf = tprod(f.u, ttranspose(f.v, t), t).norm(NormKind::kLinf);
  rep.mu3 = n1 * n2 * t.ell() / r * uv_inf * uv_inf;
  rep.mu = std::max({rep.mu1, rep.mu2, rep.mu3});
  return rep;
}

}  // namespace trpca
