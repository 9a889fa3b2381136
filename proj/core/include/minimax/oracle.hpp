#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Dense>

namespace minimax {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Lipschitz constants of the primal envelope P(x) = max_y f(x, y).
///   L1: gradient of P
///   LH: the reduced Hessian map H(x, y)
///   L2: Hessian of P
struct DerivedConstants {
  double L1 = 0.0;
  double LH = 0.0;
  double L2 = 0.0;
};

/// Oracle bundle for a smooth f(x, y) that is strongly concave in y.
///
/// The constants ell (gradient Lipschitz), mu (strong concavity in y) and rho
/// (Hessian Lipschitz) are supplied by the caller and never estimated here.
struct MinimaxProblem {
  int dim_x = 0;
  int dim_y = 0;

  std::function<double(const Vector&, const Vector&)> eval_f;
  std::function<Vector(const Vector&, const Vector&)> grad_x;
  std::function<Vector(const Vector&, const Vector&)> grad_y;
  std::function<Matrix(const Vector&, const Vector&)> hess_xx;
  std::function<Matrix(const Vector&, const Vector&)> hess_xy;  // n x m
  std::function<Matrix(const Vector&, const Vector&)> hess_yy;

  double ell = 1.0;
  double mu = 1.0;
  double rho = 1.0;

  /// Sharper constants for P when the instance structure gives them (for
  /// example when y is decoupled from x and P is known in closed form).
  /// When absent the generic (1 + kappa) bounds are used.
  std::optional<DerivedConstants> envelope;

  /// Domain of definition for x; empty means all of R^n.
  std::function<bool(const Vector&)> in_domain;

  /// Maps a point outside the domain to a point inside with the same value of
  /// P, if such a point is available.
  std::function<std::optional<Vector>(const Vector&)> restore_domain;

  double kappa() const { return ell / mu; }
};

/// L1 = (kappa + 1) ell, LH = rho (1 + kappa)^2, L2 = rho (1 + kappa)^3.
DerivedConstants generic_constants(double ell, double mu, double rho);

/// The envelope override when present, otherwise generic_constants().
DerivedConstants derived_constants(const MinimaxProblem& problem);

/// Throws kInvalidArgument when callbacks are missing or the constants are
/// not positive with mu <= ell.
void check_problem(const MinimaxProblem& problem);

/// Schur complement H(x, y) = f_xx - f_xy f_yy^{-1} f_yx, symmetrized.
///
/// The yy block is applied through a Cholesky solve of -f_yy; a failed
/// factorization raises kSingularYYBlock.
Matrix assemble_reduced_hessian(const MinimaxProblem& problem, const Vector& x, const Vector& y);

/// Inexact first/second-order information about P at x_t.
struct OracleEval {
  Vector g;         // grad_x f(x_t, y_t)
  Matrix H;         // H(x_t, y_t)
  double eps1 = 0;  // certified bound on ||grad P(x_t) - g||
  double eps2 = 0;  // certified bound on ||hess P(x_t) - H||
  int inner_iters = 0;
};

/// Max entrywise error |analytic - fd| / max(1, |fd|) per derivative block.
struct DerivativeReport {
  double grad_x = 0.0;
  double grad_y = 0.0;
  double hess_xx = 0.0;
  double hess_xy = 0.0;
  double hess_yy = 0.0;

  double max() const;
};

/// Central-difference checks of every derivative callback at z = [x; y].
DerivativeReport validate_derivatives(const MinimaxProblem& problem, const Vector& z, double step);

struct AssumptionReport {
  int samples = 0;
  double max_concavity_violation = 0.0;  // max over samples of lambda_max(f_yy) + mu, clipped at 0
  double max_mixed_partial_mismatch = 0.0;
  double max_hessian_asymmetry = 0.0;
};

/// Debug routine: evaluates the strong-concavity and mixed-partial assumptions
/// at `samples` points drawn by `sample_z`.
AssumptionReport sample_assumptions(const MinimaxProblem& problem,
                                    const std::function<Vector(std::uint64_t)>& sample_z,
                                    int samples);

}  // namespace minimax
