#include "minimax/trsub.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minimax/errors.hpp"

namespace minimax {

namespace {

constexpr double kHardCaseThreshold = 1e-12;

void check_tr_problem(const TRProblem& p) {
  const Eigen::Index n = p.g.size();
  if (p.H.rows() != n || p.H.cols() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "TR problem: H and g sizes disagree");
  }
  if (!(p.radius > 0.0) || !std::isfinite(p.radius)) {
    throw Error(ErrorKind::kInvalidArgument, "TR problem: radius must be positive and finite");
  }
  if (!(p.reg >= 0.0) || !std::isfinite(p.reg)) {
    throw Error(ErrorKind::kInvalidArgument, "TR problem: reg must be nonnegative and finite");
  }
  if (!p.H.allFinite() || !p.g.allFinite()) {
    throw Error(ErrorKind::kNonFiniteIterate, "TR problem has non-finite data");
  }
}

Matrix model_matrix(const TRProblem& p) {
  Matrix m = 0.5 * (p.H + p.H.transpose());
  m.diagonal().array() += p.reg;
  return m;
}

// Positive root tau of ||z + tau d|| = radius, assuming ||z|| <= radius.
double to_boundary(const Vector& z, const Vector& d, double radius) {
  const double dd = d.squaredNorm();
  const double zd = z.dot(d);
  const double zz = z.squaredNorm();
  const double disc = std::max(0.0, zd * zd + dd * (radius * radius - zz));
  // Stable form of (-zd + sqrt(disc)) / dd.
  if (zd <= 0.0) return (-zd + std::sqrt(disc)) / dd;
  return std::max(0.0, radius * radius - zz) / (zd + std::sqrt(disc));
}

void finalize(const TRProblem& p, const Matrix& model, TRSolution& out) {
  out.kkt_residual = (model * out.s + out.lambda * out.s + p.g).norm();
  if (!out.s.allFinite() || !std::isfinite(out.lambda)) {
    throw Error(ErrorKind::kNumericalBreakdown, "TR solve produced non-finite values");
  }
}

}  // namespace

double tr_objective(const TRProblem& p, const Vector& s) {
  return p.g.dot(s) + 0.5 * s.dot(p.H * s) + 0.5 * p.reg * s.squaredNorm();
}

TRSolution solve_tr_exact(const TRProblem& p, double tol) {
  check_tr_problem(p);
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tol must be positive");

  const Matrix model = model_matrix(p);
  Eigen::SelfAdjointEigenSolver<Matrix> es(model);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumericalBreakdown, "eigendecomposition of the model failed");
  }
  const Vector& eig = es.eigenvalues();
  const Matrix& q = es.eigenvectors();
  const Vector gh = q.transpose() * p.g;
  const double gnorm = p.g.norm();
  const double lam0 = eig(0);
  const Eigen::Index n = eig.size();

  TRSolution out;
  out.min_eig_model = lam0;

  auto coeffs = [&](double shift) {
    Vector c(n);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = -gh(i) / (eig(i) + shift);
    return c;
  };

  if (lam0 > 0.0) {
    const Vector c = coeffs(0.0);
    if (c.norm() <= p.radius) {
      out.s = q * c;
      out.lambda = 0.0;
      finalize(p, model, out);
      return out;
    }
  }

  if (lam0 <= 0.0) {
    // Bottom eigenspace: eigenvalues within a relative 1e-10 of lambda_min.
    const double scale = std::max(1.0, eig.cwiseAbs().maxCoeff());
    Eigen::Index cluster = 1;
    while (cluster < n && eig(cluster) - lam0 <= 1e-10 * scale) ++cluster;
    const double gb = gh.head(cluster).norm();
    if (gb <= kHardCaseThreshold * gnorm) {
      Vector c = Vector::Zero(n);
      for (Eigen::Index i = cluster; i < n; ++i) c(i) = -gh(i) / (eig(i) - lam0);
      const double cn = c.norm();
      if (cn <= p.radius) {
        out.lambda = -lam0;
        if (lam0 < 0.0) {
          c(0) += std::sqrt(std::max(0.0, p.radius * p.radius - cn * cn));
          out.on_boundary = true;
          out.hard_case = true;
        }
        out.s = q * c;
        finalize(p, model, out);
        return out;
      }
    }
  }

  // Boundary solution: root of 1/||s(lambda)|| - 1/radius on (lo, hi].
  double lo = std::max(0.0, -lam0);
  double hi = std::max(lo, gnorm / p.radius - lam0);
  auto snorm = [&](double lambda) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double den = eig(i) + lambda;
      if (den <= 0.0) {
        if (gh(i) != 0.0) return std::numeric_limits<double>::infinity();
        continue;
      }
      const double v = gh(i) / den;
      acc += v * v;
    }
    return std::sqrt(acc);
  };

  const double rel_tol = std::min(1e-2 * tol, 1e-12);
  double lambda = hi;
  int iter = 0;
  for (; iter < 500; ++iter) {
    const double sn = snorm(lambda);
    if (std::abs(sn - p.radius) <= rel_tol * p.radius) break;
    if (sn > p.radius) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    double next = 0.5 * (lo + hi);
    if (std::isfinite(sn) && sn > 0.0) {
      double d3 = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double den = eig(i) + lambda;
        d3 += gh(i) * gh(i) / (den * den * den);
      }
      // psi = 1/sn - 1/radius, psi' = d3 / sn^3
      const double newton = lambda - (1.0 / sn - 1.0 / p.radius) * sn * sn * sn / d3;
      if (std::isfinite(newton) && newton > lo && newton < hi) next = newton;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) {
      lambda = hi;
      break;
    }
    lambda = next;
  }
  if (iter >= 500 && std::abs(snorm(lambda) - p.radius) > 1e-8 * p.radius) {
    throw Error(ErrorKind::kNumericalBreakdown, "secular equation root find did not converge");
  }

  out.lambda = lambda;
  out.s = q * coeffs(lambda);
  out.on_boundary = true;
  out.iterations = iter;
  // Remove rounding drift off the sphere.
  const double sn = out.s.norm();
  if (sn > p.radius) out.s *= p.radius / sn;
  finalize(p, model, out);
  return out;
}

TRSolution solve_tr_cg(const TRProblem& p, int max_iters, double tol) {
  check_tr_problem(p);
  if (max_iters < 1) throw Error(ErrorKind::kInvalidArgument, "max_iters must be >= 1");

  const Matrix model = model_matrix(p);
  const Eigen::Index n = p.g.size();
  TRSolution out;
  out.min_eig_model = std::numeric_limits<double>::quiet_NaN();
  out.s = Vector::Zero(n);

  const double gnorm = p.g.norm();
  if (gnorm == 0.0) {
    finalize(p, model, out);
    return out;
  }

  Vector z = Vector::Zero(n);
  Vector r = p.g;
  Vector d = -r;
  double rr = r.squaredNorm();
  for (int k = 0; k < max_iters; ++k) {
    out.iterations = k + 1;
    const Vector md = model * d;
    const double curv = d.dot(md);
    if (curv <= 0.0) {
      out.s = z + to_boundary(z, d, p.radius) * d;
      out.on_boundary = true;
      finalize(p, model, out);
      return out;
    }
    const double alpha = rr / curv;
    const Vector z_next = z + alpha * d;
    if (z_next.norm() >= p.radius) {
      out.s = z + to_boundary(z, d, p.radius) * d;
      out.on_boundary = true;
      finalize(p, model, out);
      return out;
    }
    z = z_next;
    r += alpha * md;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= tol * gnorm) break;
    d = -r + (rr_next / rr) * d;
    rr = rr_next;
  }
  out.s = z;
  finalize(p, model, out);
  return out;
}

Vector cauchy_point(const TRProblem& p) {
  check_tr_problem(p);
  const double gnorm = p.g.norm();
  if (gnorm == 0.0) return Vector::Zero(p.g.size());
  const double curv = p.g.dot(p.H * p.g) + p.reg * gnorm * gnorm;
  double alpha = p.radius / gnorm;
  if (curv > 0.0) alpha = std::min(alpha, gnorm * gnorm / curv);
  return -alpha * p.g;
}

EigPair dense_min_eigpair(const Matrix& H) {
  if (H.rows() != H.cols() || H.rows() == 0) {
    throw Error(ErrorKind::kDimensionMismatch, "min_eigpair: H must be square and non-empty");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H + H.transpose()));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kConvergenceFailure, "dense symmetric eigensolver failed");
  }
  EigPair out;
  out.value = es.eigenvalues()(0);
  out.vector = es.eigenvectors().col(0).normalized();
  return out;
}

EigPair min_eigpair(const Matrix& H, const Vector& orient_against, std::uint64_t seed) {
  if (H.rows() != H.cols() || orient_against.size() != H.rows()) {
    throw Error(ErrorKind::kDimensionMismatch, "min_eigpair: size mismatch");
  }
  if (!H.allFinite()) throw Error(ErrorKind::kNonFiniteIterate, "min_eigpair: non-finite H");
  EigPair out = H.rows() <= kDenseEigenLimit ? dense_min_eigpair(H) : lanczos_min_eigpair(H, seed);
  if (orient_against.dot(out.vector) > 0.0) out.vector = -out.vector;
  return out;
}

}  // namespace minimax
