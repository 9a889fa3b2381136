#include "minimax/inner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minimax/errors.hpp"

namespace minimax {

namespace {

void check_config(const MinimaxProblem& problem, const InnerConfig& cfg) {
  const double eta_max = 2.0 / (problem.ell + problem.mu);
  if (!(cfg.eta_y > 0.0) || cfg.eta_y > eta_max * (1.0 + 1e-12)) {
    throw Error(ErrorKind::kInvalidArgument,
                "eta_y must lie in (0, 2/(ell+mu)], got " + std::to_string(cfg.eta_y));
  }
  if (!(cfg.target_eps1 > 0.0) || !(cfg.target_eps2 > 0.0) || !std::isfinite(cfg.target_eps1) ||
      !std::isfinite(cfg.target_eps2)) {
    throw Error(ErrorKind::kInvalidAccuracy, "inner accuracy targets must be positive and finite");
  }
  if (cfg.max_iters < 0) throw Error(ErrorKind::kInvalidArgument, "max_iters must be >= 0");
}

Vector checked_grad_y(const MinimaxProblem& problem, const Vector& x, const Vector& y) {
  Vector g = problem.grad_y(x, y);
  if (g.size() != problem.dim_y) {
    throw Error(ErrorKind::kDimensionMismatch, "grad_y returned a vector of the wrong size");
  }
  if (!g.allFinite() || !y.allFinite()) {
    throw Error(ErrorKind::kNonFiniteIterate, "non-finite inner iterate or gradient");
  }
  return g;
}

InnerResult finish(const MinimaxProblem& problem, const Vector& x, Vector y, int iters,
                   double residual, bool truncated) {
  if (!std::isfinite(problem.eval_f(x, y))) {
    throw Error(ErrorKind::kNonFiniteIterate, "f is non-finite at the inner iterate");
  }
  return InnerResult{std::move(y), iters, residual, truncated};
}

}  // namespace

InnerConfig default_inner_config(const MinimaxProblem& problem, double eps1, double eps2,
                                 int max_iters) {
  InnerConfig cfg;
  cfg.eta_y = 2.0 / (problem.ell + problem.mu);
  cfg.target_eps1 = eps1;
  cfg.target_eps2 = eps2;
  cfg.max_iters = max_iters;
  return cfg;
}

InnerConfig inner_config_for_residual(const MinimaxProblem& problem, double residual_tol,
                                      int max_iters) {
  const DerivedConstants c = derived_constants(problem);
  // mu * min(eps1/ell, eps2/LH) == residual_tol
  return default_inner_config(problem, problem.ell * residual_tol / problem.mu,
                              c.LH * residual_tol / problem.mu, max_iters);
}

double accuracy_radius(const MinimaxProblem& problem, const InnerConfig& cfg) {
  const DerivedConstants c = derived_constants(problem);
  return std::min(cfg.target_eps1 / problem.ell, cfg.target_eps2 / c.LH);
}

InnerResult ascend(const MinimaxProblem& problem, const Vector& x, const Vector& y0,
                   const InnerConfig& cfg) {
  check_config(problem, cfg);
  if (x.size() != problem.dim_x || y0.size() != problem.dim_y) {
    throw Error(ErrorKind::kDimensionMismatch, "ascend: x or y0 has the wrong size");
  }
  const double target = problem.mu * accuracy_radius(problem, cfg);

  Vector y = y0;
  Vector grad = checked_grad_y(problem, x, y);
  double residual = grad.norm();
  if (residual <= target) return finish(problem, x, std::move(y), 0, residual, false);

  if (!cfg.accelerated) {
    for (int k = 1; k <= cfg.max_iters; ++k) {
      y += cfg.eta_y * grad;
      grad = checked_grad_y(problem, x, y);
      residual = grad.norm();
      if (residual <= target) return finish(problem, x, std::move(y), k, residual, false);
    }
    return finish(problem, x, std::move(y), cfg.max_iters, residual, true);
  }

  // Nesterov's method for a strongly concave objective; the step is capped at
  // 1/ell, where the momentum coefficient below is valid.
  const double step = std::min(cfg.eta_y, 1.0 / problem.ell);
  const double sk = std::sqrt(problem.kappa());
  const double beta = (sk - 1.0) / (sk + 1.0);
  Vector y_prev = y;
  Vector w = y;
  Vector grad_w = grad;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    y = w + step * grad_w;
    grad = checked_grad_y(problem, x, y);
    residual = grad.norm();
    if (residual <= target) return finish(problem, x, std::move(y), k, residual, false);
    w = y + beta * (y - y_prev);
    y_prev = y;
    grad_w = checked_grad_y(problem, x, w);
  }
  return finish(problem, x, std::move(y), cfg.max_iters, residual, true);
}

int schedule_N(int t, double kappa, double A, double s_prev_norm, double y0_dist) {
  if (!(A > 0.0) || !std::isfinite(A)) {
    throw Error(ErrorKind::kInvalidAccuracy, "schedule_N: A must be positive");
  }
  if (t < 1) throw Error(ErrorKind::kInvalidArgument, "schedule_N: t must be >= 1");
  if (!(kappa >= 1.0)) throw Error(ErrorKind::kInvalidArgument, "schedule_N: kappa must be >= 1");
  if (s_prev_norm < 0.0 || y0_dist < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "schedule_N: norms must be nonnegative");
  }
  const double ratio = t == 1 ? y0_dist / A : (A + kappa * s_prev_norm) / A;
  if (!(ratio > 1.0)) return 1;
  const double n = std::ceil(kappa * std::log(ratio));
  if (n >= static_cast<double>(std::numeric_limits<int>::max())) {
    return std::numeric_limits<int>::max();
  }
  return std::max(1, static_cast<int>(n));
}

OracleEval evaluate_oracle(const MinimaxProblem& problem, const Vector& x,
                           const InnerResult& inner) {
  const DerivedConstants c = derived_constants(problem);
  OracleEval eval;
  eval.g = problem.grad_x(x, inner.y);
  if (eval.g.size() != problem.dim_x) {
    throw Error(ErrorKind::kDimensionMismatch, "grad_x returned a vector of the wrong size");
  }
  if (!eval.g.allFinite()) throw Error(ErrorKind::kNonFiniteIterate, "grad_x is non-finite");
  eval.H = assemble_reduced_hessian(problem, x, inner.y);
  if (!eval.H.allFinite()) throw Error(ErrorKind::kNonFiniteIterate, "H(x, y) is non-finite");
  const double dist = inner.residual / problem.mu;
  eval.eps1 = problem.ell * dist;
  eval.eps2 = c.LH * dist;
  eval.inner_iters = inner.iters;
  return eval;
}

EnvelopeValue envelope_value(const MinimaxProblem& problem, const Vector& x,
                             const Vector& y_start, double residual_tol, int max_iters) {
  const InnerResult inner =
      ascend(problem, x, y_start, inner_config_for_residual(problem, residual_tol, max_iters));
  EnvelopeValue out;
  out.value = problem.eval_f(x, inner.y);
  out.residual = inner.residual;
  out.error_bound = inner.residual * inner.residual / (2.0 * problem.mu);
  out.y = inner.y;
  return out;
}

}  // namespace minimax
