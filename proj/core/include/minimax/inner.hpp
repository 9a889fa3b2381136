#pragma once

#include <optional>

#include "minimax/oracle.hpp"

namespace minimax {

struct InnerConfig {
  double eta_y = 0.0;        // step size, 0 < eta_y <= 2 / (ell + mu)
  double target_eps1 = 0.0;  // gradient accuracy to certify
  double target_eps2 = 0.0;  // Hessian accuracy to certify
  int max_iters = 1000;
  bool accelerated = false;  // Nesterov momentum (sqrt(kappa)-1)/(sqrt(kappa)+1)
};

/// eta_y = 2 / (ell + mu) with the given accuracy targets.
InnerConfig default_inner_config(const MinimaxProblem& problem, double eps1, double eps2,
                                 int max_iters = 1000);

/// Targets chosen so that the residual stop is ||grad_y f|| <= residual_tol.
InnerConfig inner_config_for_residual(const MinimaxProblem& problem, double residual_tol,
                                      int max_iters = 1000000);

/// A = min(eps1 / ell, eps2 / L_H): the distance to y*(x) that certifies both targets.
double accuracy_radius(const MinimaxProblem& problem, const InnerConfig& cfg);

struct InnerResult {
  Vector y;
  int iters = 0;
  double residual = 0.0;  // ||grad_y f(x, y)||
  bool truncated = false;
};

/// Gradient ascent on f(x, .) from y0 until ||grad_y f|| <= mu * A.
///
/// By strong concavity ||y - y*(x)|| <= residual / mu, so an untruncated
/// return certifies ||grad P(x) - grad_x f(x, y)|| <= eps1 and
/// ||hess P(x) - H(x, y)|| <= eps2.
InnerResult ascend(const MinimaxProblem& problem, const Vector& x, const Vector& y0,
                   const InnerConfig& cfg);

/// Inner iteration count hint N_t (natural log), clamped below at 1.
///   t == 1: ceil(kappa * log(y0_dist / A))
///   t >= 2: ceil(kappa * log((A + kappa * s_prev_norm) / A))
int schedule_N(int t, double kappa, double A, double s_prev_norm, double y0_dist);

/// g = grad_x f(x, y), H = H(x, y) with accuracies certified from the
/// inner residual: eps1 = ell * residual / mu, eps2 = L_H * residual / mu.
OracleEval evaluate_oracle(const MinimaxProblem& problem, const Vector& x,
                           const InnerResult& inner);

struct EnvelopeValue {
  double value = 0.0;  // f(x, y), a lower bound on P(x)
  double error_bound = 0.0;  // P(x) - value <= residual^2 / (2 mu)
  Vector y;
  double residual = 0.0;
};

/// High-accuracy evaluation of P(x) by an inner solve to the given residual.
EnvelopeValue envelope_value(const MinimaxProblem& problem, const Vector& x,
                             const Vector& y_start, double residual_tol,
                             int max_iters = 1000000);

}  // namespace minimax
