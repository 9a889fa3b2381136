#include "minimax/drivers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "minimax/errors.hpp"
#include "minimax/inner.hpp"

namespace minimax {

namespace {

using Clock = std::chrono::steady_clock;

constexpr long kDefaultMaxOuter = 100000;
constexpr double kMaxOuterCap = 1e7;
constexpr int kMaxHalvings = 30;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_start(const MinimaxProblem& problem, const Vector& x0, const Vector& y0) {
  check_problem(problem);
  if (x0.size() != problem.dim_x || y0.size() != problem.dim_y) {
    throw Error(ErrorKind::kDimensionMismatch, "x0 or y0 has the wrong size");
  }
  if (!x0.allFinite() || !y0.allFinite()) {
    throw Error(ErrorKind::kNonFiniteIterate, "non-finite starting point");
  }
  if (problem.in_domain && !problem.in_domain(x0)) {
    throw Error(ErrorKind::kOutsideDomain, "x0 lies outside the problem domain");
  }
}

void check_solver_config(const SolverConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    throw Error(ErrorKind::kInvalidArgument, "epsilon must be positive");
  }
  if (cfg.max_outer_iters && *cfg.max_outer_iters < 1) {
    throw Error(ErrorKind::kInvalidArgument, "max_outer_iters must be positive");
  }
  if (cfg.sigma && !(*cfg.sigma >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "sigma must be nonnegative");
  }
  if (cfg.r && !(*cfg.r > 0.0)) throw Error(ErrorKind::kInvalidArgument, "r must be positive");
  if ((cfg.eps1 && !(*cfg.eps1 > 0.0)) || (cfg.eps2 && !(*cfg.eps2 > 0.0))) {
    throw Error(ErrorKind::kInvalidAccuracy, "eps1 and eps2 must be positive");
  }
  if (cfg.subproblem == SubproblemMode::kCg && cfg.cg_iters < 1) {
    throw Error(ErrorKind::kInvalidArgument, "cg_iters must be positive");
  }
  if (cfg.inner_max_iters < 1) {
    throw Error(ErrorKind::kInvalidArgument, "inner_max_iters must be positive");
  }
}

struct GuardedStep {
  Vector x_next;
  Vector s;
  DomainEvent event = DomainEvent::kNone;
};

// Restore first, then halve the step, then give up and stay put.
GuardedStep guard_step(const MinimaxProblem& problem, const Vector& x, const Vector& s) {
  GuardedStep out{x + s, s, DomainEvent::kNone};
  if (!problem.in_domain || problem.in_domain(out.x_next)) return out;
  if (problem.restore_domain) {
    if (auto restored = problem.restore_domain(out.x_next)) {
      out.x_next = std::move(*restored);
      out.event = DomainEvent::kRestored;
      return out;
    }
  }
  Vector step = s;
  for (int k = 0; k < kMaxHalvings; ++k) {
    step *= 0.5;
    Vector cand = x + step;
    if (problem.in_domain(cand)) {
      out.x_next = std::move(cand);
      out.s = std::move(step);
      out.event = DomainEvent::kShrunk;
      return out;
    }
  }
  out.x_next = x;
  out.s = Vector::Zero(x.size());
  out.event = DomainEvent::kRejected;
  return out;
}

long resolve_max_outer(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                       const SolverConfig& cfg, double L2) {
  if (cfg.max_outer_iters) return *cfg.max_outer_iters;
  if (!cfg.p_lower_bound) return kDefaultMaxOuter;
  const double tol = problem.mu * 1e-8;
  const EnvelopeValue p0 = envelope_value(problem, x0, y0, tol);
  const double gap = std::max(0.0, p0.value + p0.error_bound - *cfg.p_lower_bound);
  const double bound = 10.0 * 128.0 * std::sqrt(L2) * gap * std::pow(cfg.epsilon, -1.5);
  return static_cast<long>(std::clamp(std::ceil(bound), 1.0, kMaxOuterCap));
}

// Tracks the inner solve across outer iterations: warm start and cap.
class InnerDriver {
 public:
  InnerDriver(const MinimaxProblem& problem, const SolverConfig& cfg, double eps1, double eps2,
              const Vector& x0, const Vector& y0)
      : problem_(problem), y_(y0) {
    cfg_ = default_inner_config(problem, eps1, eps2, cfg.inner_max_iters);
    cfg_.accelerated = cfg.accelerated_inner;
    base_cap_ = cfg.inner_max_iters;
    A_ = accuracy_radius(problem, cfg_);
    y0_dist_ = problem.grad_y(x0, y0).norm() / problem.mu;
  }

  OracleEval step(const Vector& x, long t, double s_prev_norm) {
    const int hint = schedule_N(static_cast<int>(std::min<long>(t, 2)), problem_.kappa(), A_,
                                s_prev_norm, y0_dist_);
    cfg_.max_iters = std::max(base_cap_, hint);
    const InnerResult inner = ascend(problem_, x, y_, cfg_);
    y_ = inner.y;
    return evaluate_oracle(problem_, x, inner);
  }

  const Vector& y() const { return y_; }

 private:
  const MinimaxProblem& problem_;
  InnerConfig cfg_;
  Vector y_;
  int base_cap_ = 1000;
  double A_ = 0.0;
  double y0_dist_ = 0.0;
};

void finish_result(const MinimaxProblem& problem, const SolverConfig& cfg, CertificateRule rule,
                   SolverResult& result, Clock::time_point start) {
  result.wall_time_s = seconds_since(start);
  if (cfg.certify_final) {
    CertifyOptions opts;
    opts.y_start = result.y_final;
    result.report = certify(problem, result.x_final, cfg.epsilon, rule, opts);
  }
}

bool out_of_time(const SolverConfig& cfg, Clock::time_point start) {
  return cfg.time_limit && seconds_since(start) >= *cfg.time_limit;
}

SolverResult trust_region_loop(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                               const SolverConfig& cfg, double sigma, bool fixed_radius) {
  check_start(problem, x0, y0);
  check_solver_config(cfg);
  const auto start = Clock::now();
  const DerivedConstants c = derived_constants(problem);
  const double eps = cfg.epsilon;
  const double r = cfg.r.value_or(1.0 / (4.0 * std::sqrt(c.L2)));
  const double eps1 = cfg.eps1.value_or(grtr_default_eps1(eps, c.L1, c.L2));
  const double eps2 = cfg.eps2.value_or(grtr_default_eps2(eps, c.L2));
  const long max_outer = resolve_max_outer(problem, x0, y0, cfg, c.L2);
  const double curvature_tol = std::sqrt(c.L2 * eps);

  SolverResult result;
  InnerDriver inner(problem, cfg, eps1, eps2, x0, y0);
  Vector x = x0;
  double s_prev = 0.0;
  for (long t = 1;; ++t) {
    const OracleEval ev = inner.step(x, t, s_prev);
    result.inner_iterations_total += ev.inner_iters;
    if (cfg.record_iterates) result.iterates.push_back(x);

    IterationRecord rec;
    rec.t = t;
    rec.x_norm = x.norm();
    rec.g_norm = ev.g.norm();
    rec.P_estimate = problem.eval_f(x, inner.y());
    rec.inner_iters = ev.inner_iters;

    const TRProblem model = grtr_model(ev.g, ev.H, sigma, r, eps, fixed_radius);
    TRSolution sol;
    bool stop = false;
    if (cfg.subproblem == SubproblemMode::kExact) {
      sol = solve_tr_exact(model);
      rec.lambda = sol.lambda;
      rec.lambda_min_H = sol.min_eig_model - model.reg;
      stop = grtr_should_stop(rec.g_norm, sol.lambda, eps, c.L2);
    } else {
      if (rec.g_norm <= eps) {
        const double lmin = min_eigpair(ev.H, ev.g, cfg.seed).value;
        rec.lambda_min_H = lmin;
        stop = lmin >= -0.5 * curvature_tol;
      }
      if (!stop) sol = solve_tr_cg(model, cfg.cg_iters);
    }

    if (stop) {
      rec.step_kind = StepKind::kStop;
      rec.wall_time_s = seconds_since(start);
      result.trace.push_back(rec);
      result.converged = true;
      break;
    }

    GuardedStep gs = guard_step(problem, x, sol.s);
    rec.step_kind = StepKind::kTrustRegion;
    rec.step_norm = gs.s.norm();
    rec.domain_event = gs.event;
    rec.wall_time_s = seconds_since(start);
    result.trace.push_back(rec);
    x = std::move(gs.x_next);
    s_prev = rec.step_norm;
    if (!x.allFinite()) throw Error(ErrorKind::kNonFiniteIterate, "non-finite outer iterate");
    if (gs.event == DomainEvent::kRejected || t >= max_outer || out_of_time(cfg, start)) {
      result.truncated = true;
      break;
    }
  }
  result.x_final = x;
  result.y_final = inner.y();
  if (result.truncated && cfg.record_iterates) result.iterates.push_back(x);
  finish_result(problem, cfg, CertificateRule::kGrtr, result, start);
  return result;
}

}  // namespace

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kTrustRegion: return "trust_region";
    case StepKind::kLm: return "lm";
    case StepKind::kNegativeCurvature: return "negative_curvature";
    case StepKind::kGradient: return "gradient";
    case StepKind::kStop: return "stop";
  }
  return "stop";
}

std::optional<StepKind> step_kind_from_string(std::string_view name) {
  for (StepKind k : {StepKind::kTrustRegion, StepKind::kLm, StepKind::kNegativeCurvature,
                     StepKind::kGradient, StepKind::kStop}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

double grtr_default_eps1(double epsilon, double L1, double L2) {
  return std::min(1.0 / 96.0, std::sqrt(L2) / (16.0 * L1)) * std::pow(epsilon, 1.5);
}

double grtr_default_eps2(double epsilon, double L2) {
  return std::sqrt(L2) / 12.0 * std::sqrt(epsilon);
}

double lmnegcur_default_eps1(double epsilon, double L1, double L2) {
  return std::min(1.0 / 36.0, std::sqrt(L2) / (12.0 * L1)) * std::pow(epsilon, 1.5);
}

double lmnegcur_default_eps2(double epsilon, double L2) {
  return std::sqrt(L2) / 18.0 * std::sqrt(epsilon);
}

TRProblem grtr_model(const Vector& g, const Matrix& H, double sigma, double r, double epsilon,
                     bool fixed_radius) {
  const double root_g = std::sqrt(g.norm());
  const double root_eps = std::sqrt(epsilon);
  TRProblem p;
  p.H = H;
  p.g = g;
  p.reg = sigma * root_g;
  p.radius = fixed_radius ? r * root_eps : r * std::max(root_g, root_eps);
  return p;
}

bool grtr_should_stop(double g_norm, double lambda, double epsilon, double L2) {
  return g_norm <= epsilon && lambda <= std::sqrt(L2 * epsilon);
}

LmNegCurStep lmnegcur_step(const Vector& g, const Matrix& H, double epsilon, double L2,
                           std::uint64_t seed) {
  if (g.size() != H.rows() || H.rows() != H.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "lmnegcur_step: g and H disagree");
  }
  const double g_norm = g.norm();
  const double big = std::max(g_norm, epsilon);
  const EigPair eig = min_eigpair(H, g, seed);

  LmNegCurStep out;
  out.lambda_min = eig.value;
  if (eig.value <= -0.5 * std::sqrt(L2 * big)) {
    out.kind = StepKind::kNegativeCurvature;
    out.s = std::sqrt(big / L2) * eig.vector;
    return out;
  }
  if (g_norm >= epsilon) {
    Matrix shifted = 0.5 * (H + H.transpose());
    shifted.diagonal().array() += std::sqrt(L2 * g_norm);
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::kSingularLMSystem, "shifted LM system is not positive definite");
    }
    out.kind = StepKind::kLm;
    out.s = -llt.solve(g);
    if (!out.s.allFinite()) {
      throw Error(ErrorKind::kSingularLMSystem, "LM solve produced a non-finite step");
    }
    return out;
  }
  out.kind = StepKind::kStop;
  out.s = Vector::Zero(g.size());
  return out;
}

StationarityReport certify(const MinimaxProblem& problem, const Vector& x, double epsilon,
                           CertificateRule rule, const CertifyOptions& options) {
  check_problem(problem);
  if (!(epsilon > 0.0)) throw Error(ErrorKind::kInvalidArgument, "epsilon must be positive");
  if (x.size() != problem.dim_x) {
    throw Error(ErrorKind::kDimensionMismatch, "certify: x has the wrong size");
  }
  const DerivedConstants c = derived_constants(problem);
  const double root_l2 = std::sqrt(c.L2);
  const double tol = options.residual_tol.value_or(
      problem.mu * std::min(epsilon / (100.0 * problem.ell),
                            std::sqrt(c.L2 * epsilon) / (100.0 * c.LH)));
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidAccuracy, "residual tolerance must be positive");
  const Vector y0 = options.y_start.value_or(Vector::Zero(problem.dim_y));
  if (y0.size() != problem.dim_y) {
    throw Error(ErrorKind::kDimensionMismatch, "certify: y_start has the wrong size");
  }

  const InnerResult inner =
      ascend(problem, x, y0, inner_config_for_residual(problem, tol, options.max_inner_iters));
  const OracleEval ev = evaluate_oracle(problem, x, inner);

  const double xi = rule == CertificateRule::kGrtr ? 97.0 / 96.0 : 37.0 / 36.0;
  const double theta = rule == CertificateRule::kGrtr ? 19.0 / 12.0 * root_l2 : 5.0 / 9.0 * root_l2;

  StationarityReport rep;
  rep.residual = inner.residual;
  rep.grad_norm = ev.g.norm() + ev.eps1;
  rep.min_eig = dense_min_eigpair(ev.H).value - ev.eps2;
  rep.xi_bound = xi * epsilon;
  rep.theta_bound = theta * std::sqrt(epsilon);
  rep.satisfied = rep.grad_norm <= rep.xi_bound && rep.min_eig >= -rep.theta_bound;
  return rep;
}

SolverResult run_grtr(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                      const SolverConfig& cfg) {
  const DerivedConstants c = derived_constants(problem);
  const double sigma = cfg.sigma.value_or(std::sqrt(c.L2) / 2.0);
  return trust_region_loop(problem, x0, y0, cfg, sigma, cfg.fixed_radius);
}

SolverResult run_minimax_tr(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                            const SolverConfig& cfg) {
  return trust_region_loop(problem, x0, y0, cfg, 0.0, true);
}

SolverResult run_lmnegcur(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                          const SolverConfig& cfg) {
  check_start(problem, x0, y0);
  check_solver_config(cfg);
  const auto start = Clock::now();
  const DerivedConstants c = derived_constants(problem);
  const double eps = cfg.epsilon;
  const double eps1 = cfg.eps1.value_or(lmnegcur_default_eps1(eps, c.L1, c.L2));
  const double eps2 = cfg.eps2.value_or(lmnegcur_default_eps2(eps, c.L2));
  const long max_outer = resolve_max_outer(problem, x0, y0, cfg, c.L2);

  SolverResult result;
  InnerDriver inner(problem, cfg, eps1, eps2, x0, y0);
  Vector x = x0;
  double s_prev = 0.0;
  for (long t = 1;; ++t) {
    const OracleEval ev = inner.step(x, t, s_prev);
    result.inner_iterations_total += ev.inner_iters;
    if (cfg.record_iterates) result.iterates.push_back(x);

    IterationRecord rec;
    rec.t = t;
    rec.x_norm = x.norm();
    rec.g_norm = ev.g.norm();
    rec.P_estimate = problem.eval_f(x, inner.y());
    rec.inner_iters = ev.inner_iters;

    const LmNegCurStep step = lmnegcur_step(ev.g, ev.H, eps, c.L2, cfg.seed);
    rec.lambda_min_H = step.lambda_min;
    rec.step_kind = step.kind;
    if (step.kind == StepKind::kStop) {
      rec.wall_time_s = seconds_since(start);
      result.trace.push_back(rec);
      result.converged = true;
      break;
    }

    GuardedStep gs = guard_step(problem, x, step.s);
    rec.step_norm = gs.s.norm();
    rec.domain_event = gs.event;
    rec.wall_time_s = seconds_since(start);
    result.trace.push_back(rec);
    x = std::move(gs.x_next);
    s_prev = rec.step_norm;
    if (!x.allFinite()) throw Error(ErrorKind::kNonFiniteIterate, "non-finite outer iterate");
    if (gs.event == DomainEvent::kRejected || t >= max_outer || out_of_time(cfg, start)) {
      result.truncated = true;
      break;
    }
  }
  result.x_final = x;
  result.y_final = inner.y();
  if (result.truncated && cfg.record_iterates) result.iterates.push_back(x);
  finish_result(problem, cfg, CertificateRule::kLmNegCur, result, start);
  return result;
}

SolverResult run_gda(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                     const GdaConfig& cfg) {
  check_start(problem, x0, y0);
  if (!(cfg.step_x >= 0.0) || !(cfg.step_y > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "GDA step sizes must be positive");
  }
  if (cfg.max_iters < 0) throw Error(ErrorKind::kInvalidArgument, "max_iters must be >= 0");
  const auto start = Clock::now();

  SolverResult result;
  Vector x = x0;
  Vector y = y0;
  for (long t = 1; t <= cfg.max_iters; ++t) {
    if (cfg.record_iterates) result.iterates.push_back(x);
    const Vector gx = problem.grad_x(x, y);
    const Vector gy = problem.grad_y(x, y);
    if (!gx.allFinite() || !gy.allFinite()) {
      throw Error(ErrorKind::kNonFiniteIterate, "non-finite gradient in GDA");
    }
    IterationRecord rec;
    rec.t = t;
    rec.x_norm = x.norm();
    rec.g_norm = gx.norm();
    rec.P_estimate = problem.eval_f(x, y);
    rec.step_kind = StepKind::kGradient;

    GuardedStep gs = guard_step(problem, x, -cfg.step_x * gx);
    rec.step_norm = gs.s.norm();
    rec.domain_event = gs.event;
    x = std::move(gs.x_next);
    y += cfg.step_y * gy;
    rec.wall_time_s = seconds_since(start);
    result.trace.push_back(rec);
    if (!x.allFinite() || !y.allFinite()) {
      throw Error(ErrorKind::kNonFiniteIterate, "non-finite GDA iterate");
    }
    if (cfg.time_limit && rec.wall_time_s >= *cfg.time_limit) break;
  }
  result.truncated = true;
  if (cfg.record_iterates) result.iterates.push_back(x);
  result.x_final = x;
  result.y_final = y;
  result.wall_time_s = seconds_since(start);
  return result;
}

}  // namespace minimax
