#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "minimax/oracle.hpp"
#include "minimax/trsub.hpp"

namespace minimax {

enum class SubproblemMode { kExact, kCg };

enum class StepKind { kTrustRegion, kLm, kNegativeCurvature, kGradient, kStop };

std::string_view to_string(StepKind kind);
std::optional<StepKind> step_kind_from_string(std::string_view name);

/// What happened when x + s left the problem's domain.
enum class DomainEvent { kNone = 0, kRestored = 1, kShrunk = 2, kRejected = 3 };

struct SolverConfig {
  double epsilon = 1e-2;
  std::optional<long> max_outer_iters;  // default derived from p_lower_bound, else 100000

  std::optional<double> sigma;  // default sqrt(L2) / 2
  std::optional<double> r;      // default 1 / (4 sqrt(L2))
  std::optional<double> eps1;   // inner gradient accuracy, per-algorithm default
  std::optional<double> eps2;   // inner Hessian accuracy, per-algorithm default

  SubproblemMode subproblem = SubproblemMode::kExact;
  int cg_iters = 10;
  bool fixed_radius = false;  // radius r sqrt(eps) instead of r max(sqrt|g|, sqrt(eps))

  std::uint64_t seed = 0;
  int inner_max_iters = 1000;
  bool accelerated_inner = false;

  std::optional<double> p_lower_bound;
  std::optional<double> time_limit;  // seconds of wall time
  bool record_iterates = false;
  bool certify_final = true;
};

/// One row per outer iteration. Row t describes x_t and the step s_t taken
/// from it; the terminal row of a converged run has step_kind kStop.
struct IterationRecord {
  long t = 0;
  double x_norm = 0.0;
  double g_norm = 0.0;
  std::optional<double> lambda;
  std::optional<double> lambda_min_H;
  double step_norm = 0.0;
  StepKind step_kind = StepKind::kStop;
  double P_estimate = 0.0;  // f(x_t, y_t)
  long inner_iters = 0;
  double wall_time_s = 0.0;  // cumulative since the start of the run
  DomainEvent domain_event = DomainEvent::kNone;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct StationarityReport {
  double grad_norm = 0.0;  // upper bound on ||grad P(x)||
  double min_eig = 0.0;    // lower bound on lambda_min(hess P(x))
  double xi_bound = 0.0;
  double theta_bound = 0.0;
  bool satisfied = false;  // grad_norm <= xi_bound && min_eig >= -theta_bound
  double residual = 0.0;   // inner residual behind the bounds
};

struct SolverResult {
  Vector x_final;
  Vector y_final;
  std::vector<IterationRecord> trace;
  std::optional<StationarityReport> report;
  bool converged = false;  // the algorithm's own stopping test passed
  bool truncated = false;  // iteration or time limit reached first
  std::vector<Vector> iterates;  // x_1, ..., x_T when record_iterates is set
  long inner_iterations_total = 0;
  double wall_time_s = 0.0;
};

// Certificate thresholds xi * eps and theta * sqrt(eps):
//   kGrtr:     xi = 97/96, theta = (19/12) sqrt(L2)
//   kLmNegCur: xi = 37/36, theta = (5/9) sqrt(L2)
enum class CertificateRule { kGrtr, kLmNegCur };

struct CertifyOptions {
  std::optional<double> residual_tol;  // default mu min(eps/(100 ell), sqrt(L2 eps)/(100 L_H))
  std::optional<Vector> y_start;       // default 0
  int max_inner_iters = 10000000;
};

StationarityReport certify(const MinimaxProblem& problem, const Vector& x, double epsilon,
                           CertificateRule rule, const CertifyOptions& options = {});

// ---------------------------------------------------------------------------
// Per-iteration step rules, exposed so they can be checked in isolation.

/// reg = sigma sqrt(|g|), radius = r max(sqrt|g|, sqrt(eps)) or r sqrt(eps).
TRProblem grtr_model(const Vector& g, const Matrix& H, double sigma, double r, double epsilon,
                     bool fixed_radius);

bool grtr_should_stop(double g_norm, double lambda, double epsilon, double L2);

struct LmNegCurStep {
  StepKind kind = StepKind::kStop;  // kNegativeCurvature, kLm or kStop
  Vector s;
  double lambda_min = 0.0;
};

/// Branch: negative curvature if lambda_min(H) <= -sqrt(L2 max(|g|, eps)) / 2,
/// else LM if |g| >= eps, else stop.
LmNegCurStep lmnegcur_step(const Vector& g, const Matrix& H, double epsilon, double L2,
                           std::uint64_t seed = 0);

/// Default inner accuracies for each algorithm.
double grtr_default_eps1(double epsilon, double L1, double L2);
double grtr_default_eps2(double epsilon, double L2);
double lmnegcur_default_eps1(double epsilon, double L1, double L2);
double lmnegcur_default_eps2(double epsilon, double L2);

// ---------------------------------------------------------------------------
// Outer loops.

SolverResult run_grtr(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                      const SolverConfig& cfg);

/// The GRTR loop with sigma = 0 and the radius pinned at r sqrt(eps).
SolverResult run_minimax_tr(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                            const SolverConfig& cfg);

SolverResult run_lmnegcur(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                          const SolverConfig& cfg);

struct GdaConfig {
  double step_x = 0.01;
  double step_y = 0.01;
  long max_iters = 100000;
  std::optional<double> time_limit;
  bool record_iterates = false;
};

/// Simultaneous descent-ascent. Never converges by itself; it runs until
/// max_iters or the time limit.
SolverResult run_gda(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                     const GdaConfig& cfg);

}  // namespace minimax
