#include <algorithm>
#include <cmath>
#include <random>

#include "minimax/errors.hpp"
#include "minimax/trsub.hpp"

namespace minimax {

namespace {

Vector random_unit(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v.normalized();
}

}  // namespace

EigPair lanczos_min_eigpair(const Matrix& H, std::uint64_t seed) {
  if (H.rows() != H.cols() || H.rows() == 0) {
    throw Error(ErrorKind::kDimensionMismatch, "lanczos: H must be square and non-empty");
  }
  const Eigen::Index n = H.rows();
  const Matrix hs = 0.5 * (H + H.transpose());
  // Infinity norm bounds the spectral norm from above.
  const double hnorm = hs.cwiseAbs().rowwise().sum().maxCoeff();
  const double tol = 1e-10 * (1.0 + hnorm);

  std::mt19937_64 rng(seed);
  Matrix basis(n, n);
  Vector alpha(n), beta(n);
  Vector v = random_unit(n, rng);

  Eigen::Index k = 0;
  Eigen::Index next_check = std::min<Eigen::Index>(n, 20);
  double theta = 0.0;
  Vector ritz;
  bool converged = false;
  while (k < n) {
    basis.col(k) = v;
    Vector w = hs * v;
    alpha(k) = v.dot(w);
    w -= alpha(k) * v;
    if (k > 0) w -= beta(k - 1) * basis.col(k - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const auto vk = basis.leftCols(k + 1);
      w -= vk * (vk.transpose() * w);
    }
    beta(k) = w.norm();
    ++k;

    const bool breakdown = beta(k - 1) <= 1e-14 * (1.0 + hnorm);
    if (k == next_check || k == n || breakdown) {
      Eigen::SelfAdjointEigenSolver<Matrix> tri;
      tri.computeFromTridiagonal(alpha.head(k), beta.head(k - 1), Eigen::ComputeEigenvectors);
      if (tri.info() != Eigen::Success) break;
      theta = tri.eigenvalues()(0);
      const Vector y = tri.eigenvectors().col(0);
      if (std::abs(beta(k - 1) * y(k - 1)) <= tol || k == n) {
        ritz = basis.leftCols(k) * y;
        converged = true;
        break;
      }
      next_check = std::min<Eigen::Index>(n, k + std::max<Eigen::Index>(10, k / 4));
    }
    if (breakdown) {
      // Invariant subspace: continue from a fresh direction orthogonal to it.
      Vector fresh = random_unit(n, rng);
      for (int pass = 0; pass < 2; ++pass) {
        const auto vk = basis.leftCols(k);
        fresh -= vk * (vk.transpose() * fresh);
      }
      beta(k - 1) = 0.0;
      v = fresh.normalized();
    } else {
      v = w / beta(k - 1);
    }
  }

  if (converged) {
    EigPair out;
    out.vector = ritz.normalized();
    out.value = out.vector.dot(hs * out.vector);
    theta = out.value;
    if ((hs * out.vector - theta * out.vector).norm() <= tol) return out;
  }
  return dense_min_eigpair(H);
}

}  // namespace minimax
