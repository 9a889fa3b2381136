#include "minimax/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minimax/errors.hpp"

namespace minimax {

namespace {

void require_size(Eigen::Index actual, Eigen::Index expected, const char* what) {
  if (actual != expected) {
    throw Error(ErrorKind::kDimensionMismatch, std::string(what) + ": expected size " +
                                                   std::to_string(expected) + ", got " +
                                                   std::to_string(actual));
  }
}

double entry_error(double analytic, double reference) {
  return std::abs(analytic - reference) / std::max(1.0, std::abs(reference));
}

double max_entry_error(const Matrix& analytic, const Matrix& reference) {
  double err = 0.0;
  for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
    for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
      err = std::max(err, entry_error(analytic(i, j), reference(i, j)));
    }
  }
  return err;
}

}  // namespace

DerivedConstants generic_constants(double ell, double mu, double rho) {
  const double kappa = ell / mu;
  const double k1 = 1.0 + kappa;
  return DerivedConstants{k1 * ell, rho * k1 * k1, rho * k1 * k1 * k1};
}

DerivedConstants derived_constants(const MinimaxProblem& problem) {
  if (problem.envelope) return *problem.envelope;
  return generic_constants(problem.ell, problem.mu, problem.rho);
}

void check_problem(const MinimaxProblem& problem) {
  if (problem.dim_x <= 0 || problem.dim_y <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "problem dimensions must be positive");
  }
  if (!problem.eval_f || !problem.grad_x || !problem.grad_y || !problem.hess_xx ||
      !problem.hess_xy || !problem.hess_yy) {
    throw Error(ErrorKind::kInvalidArgument, "problem is missing an oracle callback");
  }
  if (!(problem.ell > 0.0) || !(problem.mu > 0.0) || !(problem.rho > 0.0) ||
      !std::isfinite(problem.ell) || !std::isfinite(problem.rho)) {
    throw Error(ErrorKind::kInvalidArgument, "ell, mu and rho must be positive and finite");
  }
  if (problem.mu > problem.ell) {
    throw Error(ErrorKind::kInvalidArgument, "mu must not exceed ell (kappa >= 1)");
  }
  if (problem.envelope) {
    const auto& e = *problem.envelope;
    if (!(e.L1 > 0.0) || !(e.LH > 0.0) || !(e.L2 > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "envelope constants must be positive");
    }
  }
}

Matrix assemble_reduced_hessian(const MinimaxProblem& problem, const Vector& x, const Vector& y) {
  require_size(x.size(), problem.dim_x, "x");
  require_size(y.size(), problem.dim_y, "y");
  const Matrix hxx = problem.hess_xx(x, y);
  const Matrix hxy = problem.hess_xy(x, y);
  const Matrix hyy = problem.hess_yy(x, y);
  require_size(hxx.rows(), problem.dim_x, "hess_xx rows");
  require_size(hxx.cols(), problem.dim_x, "hess_xx cols");
  require_size(hxy.rows(), problem.dim_x, "hess_xy rows");
  require_size(hxy.cols(), problem.dim_y, "hess_xy cols");
  require_size(hyy.rows(), problem.dim_y, "hess_yy rows");
  require_size(hyy.cols(), problem.dim_y, "hess_yy cols");

  const Matrix neg_yy = -0.5 * (hyy + hyy.transpose());
  Eigen::LLT<Matrix> llt(neg_yy);
  if (llt.info() != Eigen::Success || !hyy.allFinite()) {
    throw Error(ErrorKind::kSingularYYBlock,
                "Cholesky of -f_yy failed; strong concavity is violated at this point");
  }
  const Matrix h = hxx + hxy * llt.solve(hxy.transpose());
  return 0.5 * (h + h.transpose());
}

double DerivativeReport::max() const {
  return std::max({grad_x, grad_y, hess_xx, hess_xy, hess_yy});
}

DerivativeReport validate_derivatives(const MinimaxProblem& problem, const Vector& z,
                                      double step) {
  const int n = problem.dim_x;
  const int m = problem.dim_y;
  require_size(z.size(), n + m, "z");
  if (!(step > 0.0)) throw Error(ErrorKind::kInvalidArgument, "step must be positive");

  const Vector x = z.head(n);
  const Vector y = z.tail(m);
  const double inv2h = 0.5 / step;

  Vector fd_gx(n), fd_gy(m);
  Matrix fd_hxx(n, n), fd_hxy(n, m), fd_hxy_from_gy(n, m), fd_hyy(m, m);
  for (int i = 0; i < n; ++i) {
    Vector xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    fd_gx(i) = (problem.eval_f(xp, y) - problem.eval_f(xm, y)) * inv2h;
    fd_hxx.col(i) = (problem.grad_x(xp, y) - problem.grad_x(xm, y)) * inv2h;
    fd_hxy_from_gy.row(i) = ((problem.grad_y(xp, y) - problem.grad_y(xm, y)) * inv2h).transpose();
  }
  for (int j = 0; j < m; ++j) {
    Vector yp = y, ym = y;
    yp(j) += step;
    ym(j) -= step;
    fd_gy(j) = (problem.eval_f(x, yp) - problem.eval_f(x, ym)) * inv2h;
    fd_hxy.col(j) = (problem.grad_x(x, yp) - problem.grad_x(x, ym)) * inv2h;
    fd_hyy.col(j) = (problem.grad_y(x, yp) - problem.grad_y(x, ym)) * inv2h;
  }

  DerivativeReport report;
  report.grad_x = max_entry_error(problem.grad_x(x, y), fd_gx);
  report.grad_y = max_entry_error(problem.grad_y(x, y), fd_gy);
  report.hess_xx = max_entry_error(problem.hess_xx(x, y), fd_hxx);
  const Matrix hxy = problem.hess_xy(x, y);
  report.hess_xy = std::max(max_entry_error(hxy, fd_hxy), max_entry_error(hxy, fd_hxy_from_gy));
  report.hess_yy = max_entry_error(problem.hess_yy(x, y), fd_hyy);
  return report;
}

AssumptionReport sample_assumptions(const MinimaxProblem& problem,
                                    const std::function<Vector(std::uint64_t)>& sample_z,
                                    int samples) {
  AssumptionReport report;
  const int n = problem.dim_x;
  const int m = problem.dim_y;
  for (int k = 0; k < samples; ++k) {
    const Vector z = sample_z(static_cast<std::uint64_t>(k));
    require_size(z.size(), n + m, "sampled z");
    const Vector x = z.head(n);
    const Vector y = z.tail(m);

    const Matrix hyy = problem.hess_yy(x, y);
    const Matrix hxx = problem.hess_xx(x, y);
    report.max_hessian_asymmetry =
        std::max({report.max_hessian_asymmetry, (hyy - hyy.transpose()).cwiseAbs().maxCoeff(),
                  (hxx - hxx.transpose()).cwiseAbs().maxCoeff()});
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (hyy + hyy.transpose()),
                                              Eigen::EigenvaluesOnly);
    report.max_concavity_violation =
        std::max(report.max_concavity_violation, eig.eigenvalues().maxCoeff() + problem.mu);

    // d/dx grad_y must equal hess_xy^T.
    const double h = 1e-6 * (1.0 + z.norm());
    Matrix fd(m, n);
    for (int i = 0; i < n; ++i) {
      Vector xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      fd.col(i) = (problem.grad_y(xp, y) - problem.grad_y(xm, y)) / (2.0 * h);
    }
    report.max_mixed_partial_mismatch = std::max(
        report.max_mixed_partial_mismatch, max_entry_error(problem.hess_xy(x, y).transpose(), fd));
    ++report.samples;
  }
  return report;
}

}  // namespace minimax
