// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "minimax/drivers.hpp"
#include "minimax/errors.hpp"
#include "minimax/inner.hpp"
#include "minimax/oracle.hpp"
#include "minimax/problems.hpp"
#include "minimax/trsub.hpp"
#include "oracles.hpp"

namespace {

using namespace minimax;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kKktTol = 1e-8;
constexpr double kObjectiveRelTol = 1e-8;
constexpr double kTrRuntime = 10.0;
constexpr double kInnerResidual = 1e-10;
constexpr double kOracleTol = 1e-6;
constexpr double kOracleRuntime = 10.0;
constexpr double kChainEpsilon = 1e-2;
constexpr double kChainGapTol = 1e-3;
constexpr double kChainDistTol = 1e-2;
constexpr double kChainX0 = 1e-3;
constexpr double kTrSlowdown = 2.0;
constexpr double kGdaGapFloor = 1.0;
constexpr double kChainRuntime = 120.0;
constexpr double kDescentSlack = 1e-6;
constexpr double kMonotoneSlack = 1e-8;
constexpr double kPResidual = 1e-10;
constexpr double kCertFactor = 1.1;
constexpr double kExponentCap = 1.7;
constexpr double kContinuityRelTol = 1e-8;
constexpr double kStationaryTol = 1e-8;
constexpr double kHessTol = 1e-8;
constexpr double kFdRelTol = 1e-5;
constexpr double kIntegrityRuntime = 5.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;

void report(int id, const Outcome& o) {
  std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

double seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

long outer_iterations(const SolverResult& r) {
  return static_cast<long>(std::count_if(r.trace.begin(), r.trace.end(), [](const auto& rec) {
    return rec.step_kind != StepKind::kStop;
  }));
}

// ---------------------------------------------------------------------------

Outcome criterion_tr_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dim(2, 10);
  const double regs[] = {0.0, 0.5};
  const double radii[] = {0.1, 1.0, 10.0};
  double worst_kkt = 0.0;
  double worst_obj = 0.0;
  int hard = 0;
  for (int k = 0; k < 200; ++k) {
    const int n = dim(rng);
    TRProblem p;
    p.H = oracles::random_symmetric(rng, n, -5.0, 5.0);
    p.g = oracles::random_vector(rng, n);
    p.reg = regs[k % 2];
    p.radius = radii[(k / 2) % 3];
    if (k % 10 == 9) {
      // Remove the bottom-eigenvector component to exercise the hard case.
      const Vector u = oracles::jacobi_eigen(p.H).vectors.col(0);
      p.g -= u.dot(p.g) * u;
    }
    const TRSolution sol = solve_tr_exact(p);
    hard += sol.hard_case ? 1 : 0;
    const int dimn = static_cast<int>(p.g.size());
    const Matrix shifted = p.H + (p.reg + sol.lambda) * Matrix::Identity(dimn, dimn);
    const double feas = std::max(0.0, sol.s.norm() - p.radius);
    const double dual = std::max(0.0, -sol.lambda);
    const double comp = std::abs(sol.lambda * (p.radius - sol.s.norm()));
    const double stat = (shifted * sol.s + p.g).norm();
    const double psd = std::max(0.0, -oracles::min_eigenvalue(shifted));
    worst_kkt = std::max({worst_kkt, feas, dual, comp, stat, psd});
    const oracles::TROracle ref = oracles::trust_region(p.H, p.g, p.reg, p.radius);
    const double obj = tr_objective(p, sol.s);
    worst_obj = std::max(worst_obj, std::abs(obj - ref.objective) / std::max(1.0, std::abs(ref.objective)));
  }
  const double t = seconds(start);
  Outcome o;
  o.pass = worst_kkt <= kKktTol && worst_obj <= kObjectiveRelTol && t < kTrRuntime;
  o.detail = "200 TR instances, max KKT violation " + fmt("%.2e", worst_kkt) +
             ", max objective rel. error " + fmt("%.2e", worst_obj) + ", hard cases " +
             std::to_string(hard) + ", " + fmt("%.2f s", t);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion_oracle_identities() {
  const auto start = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dn(2, 8);
  std::uniform_int_distribution<int> dm(1, 6);
  double worst_g = 0.0;
  double worst_h = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = dn(rng);
    const int m = dm(rng);
    const ClosedFormProblem q = random_quadratic(1000 + k, n, m, k % 2 == 0);
    const Vector x = oracles::random_vector(rng, n, 2.0);
    const Vector y0 = oracles::random_vector(rng, m);
    const InnerResult inner =
        ascend(q.problem, x, y0, inner_config_for_residual(q.problem, kInnerResidual, 1000000));
    const OracleEval ev = evaluate_oracle(q.problem, x, inner);
    worst_g = std::max(worst_g, (ev.g - q.grad_P(x)).norm());
    worst_h = std::max(worst_h, (ev.H - q.hess_P(x)).norm());
  }
  const double t = seconds(start);
  Outcome o;
  o.pass = worst_g <= kOracleTol && worst_h <= kOracleTol && t < kOracleRuntime;
  o.detail = "50 quadratics, max |g - grad P| " + fmt("%.2e", worst_g) + ", max |H - hess P| " +
             fmt("%.2e", worst_h) + ", " + fmt("%.2f s", t);
  return o;
}

// ---------------------------------------------------------------------------

struct ChainRuns {
  SaddleChainParams params;
  ClosedFormProblem closed;
  DerivedConstants constants;
  Vector x0;
  Vector y0;
  SolverResult grtr;
  SolverResult grtr_cg;
  SolverResult lmnegcur;
  SolverResult minimax_tr;
  SolverResult gda;
  double gda_gap = 0.0;
  double seconds = 0.0;
};

ChainRuns run_chain() {
  const auto start = Clock::now();
  ChainRuns c;
  c.params = make_saddle_chain_params(10, 5, 1.0, 1.0);
  c.closed = saddle_chain_problem(c.params, estimate_saddle_chain_constants(c.params));
  c.constants = derived_constants(c.closed.problem);
  c.x0 = Vector::Constant(c.params.n, kChainX0);
  c.y0 = Vector::Zero(c.params.m);

  SolverConfig cfg;
  cfg.epsilon = kChainEpsilon;
  cfg.record_iterates = true;
  c.grtr = run_grtr(c.closed.problem, c.x0, c.y0, cfg);
  c.lmnegcur = run_lmnegcur(c.closed.problem, c.x0, c.y0, cfg);
  c.minimax_tr = run_minimax_tr(c.closed.problem, c.x0, c.y0, cfg);
  SolverConfig cg = cfg;
  cg.subproblem = SubproblemMode::kCg;
  c.grtr_cg = run_grtr(c.closed.problem, c.x0, c.y0, cg);

  GdaConfig gda;
  gda.step_x = 0.01;
  gda.step_y = 0.01;
  gda.max_iters = std::numeric_limits<long>::max();
  gda.time_limit = c.grtr.wall_time_s;
  c.gda = run_gda(c.closed.problem, c.x0, c.y0, gda);
  c.gda_gap = c.closed.P(c.gda.x_final) - *c.closed.P_star;
  c.seconds = seconds(start);
  return c;
}

Outcome criterion_chain(const ChainRuns& c) {
  const double p_star = *c.closed.P_star;
  const Vector target = Vector::Constant(c.params.n, 4.0 * c.params.tau);
  auto gap = [&](const SolverResult& r) { return c.closed.P(r.x_final) - p_star; };
  auto dist = [&](const SolverResult& r) { return (r.x_final - target).lpNorm<Eigen::Infinity>(); };
  const long it_grtr = outer_iterations(c.grtr);
  const long it_tr = outer_iterations(c.minimax_tr);
  Outcome o;
  o.pass = c.grtr.converged && gap(c.grtr) <= kChainGapTol && dist(c.grtr) <= kChainDistTol &&
           c.lmnegcur.converged && gap(c.lmnegcur) <= kChainGapTol &&
           dist(c.lmnegcur) <= kChainDistTol && c.minimax_tr.converged &&
           it_tr >= kTrSlowdown * it_grtr && c.gda_gap > kGdaGapFloor &&
           c.seconds < kChainRuntime;
  o.detail = "GRTR gap " + fmt("%.2e", gap(c.grtr)) + " dist " + fmt("%.2e", dist(c.grtr)) +
             " iters " + std::to_string(it_grtr) + "; LMNegCur gap " + fmt("%.2e", gap(c.lmnegcur)) +
             " dist " + fmt("%.2e", dist(c.lmnegcur)) + "; MINIMAX-TR converged " +
             (c.minimax_tr.converged ? "yes" : "no") + " iters " + std::to_string(it_tr) +
             "; GDA gap at " + fmt("%.3f s", c.grtr.wall_time_s) + " = " + fmt("%.2f", c.gda_gap) +
             "; " + fmt("%.1f s", c.seconds);
  return o;
}

// ---------------------------------------------------------------------------

struct DescentCheck {
  long checked = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
};

std::vector<double> accurate_P(const ClosedFormProblem& cf, const SolverResult& r) {
  std::vector<double> values;
  values.reserve(r.iterates.size());
  Vector y = r.y_final;
  for (const Vector& x : r.iterates) {
    const EnvelopeValue ev = envelope_value(cf.problem, x, y, kPResidual, 10000000);
    values.push_back(ev.value);
    y = ev.y;
  }
  return values;
}

double worst_increase(const std::vector<double>& P) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < P.size(); ++k) worst = std::max(worst, P[k + 1] - P[k]);
  return worst;
}

Outcome criterion_descent(const ChainRuns& c) {
  const double L2 = c.constants.L2;
  const double eps = kChainEpsilon;
  const auto P_grtr = accurate_P(c.closed, c.grtr);
  const auto P_lm = accurate_P(c.closed, c.lmnegcur);
  const auto P_tr = accurate_P(c.closed, c.minimax_tr);
  const auto P_cg = accurate_P(c.closed, c.grtr_cg);

  DescentCheck grtr;
  for (std::size_t k = 0; k + 1 < P_grtr.size(); ++k) {
    const auto& rec = c.grtr.trace[k];
    if (!(rec.lambda && *rec.lambda > 0.0 && rec.g_norm >= eps)) continue;
    const double need = std::pow(rec.g_norm, 1.5) / (128.0 * std::sqrt(L2)) - kDescentSlack;
    grtr.worst_margin = std::min(grtr.worst_margin, (P_grtr[k] - P_grtr[k + 1]) - need);
    ++grtr.checked;
  }
  DescentCheck nc;
  for (std::size_t k = 0; k + 1 < P_lm.size(); ++k) {
    const auto& rec = c.lmnegcur.trace[k];
    if (rec.step_kind != StepKind::kNegativeCurvature) continue;
    const double need =
        std::pow(std::max(rec.g_norm, eps), 1.5) / (36.0 * std::sqrt(L2)) - kDescentSlack;
    nc.worst_margin = std::min(nc.worst_margin, (P_lm[k] - P_lm[k + 1]) - need);
    ++nc.checked;
  }
  const double inc = std::max({worst_increase(P_grtr), worst_increase(P_lm), worst_increase(P_tr),
                               worst_increase(P_cg)});
  Outcome o;
  o.pass = grtr.checked > 0 && grtr.worst_margin >= 0.0 && nc.checked > 0 &&
           nc.worst_margin >= 0.0 && inc <= kMonotoneSlack;
  o.detail = "GRTR boundary steps checked " + std::to_string(grtr.checked) + " worst margin " +
             fmt("%.2e", grtr.worst_margin) + "; LMNegCur NC steps " + std::to_string(nc.checked) +
             " worst margin " + fmt("%.2e", nc.worst_margin) +
             "; max P increase over 4 trajectories " + fmt("%.2e", inc);
  return o;
}

// ---------------------------------------------------------------------------

struct CertTally {
  int terminations = 0;
  int violations = 0;
  double worst_grad_ratio = 0.0;
  double worst_eig_ratio = -std::numeric_limits<double>::infinity();
};

void tally(CertTally& t, const ClosedFormProblem& cf, const SolverResult& r, double eps,
           CertificateRule rule) {
  if (!r.converged) return;
  const double L2 = derived_constants(cf.problem).L2;
  const double xi = rule == CertificateRule::kGrtr ? 97.0 / 96.0 : 37.0 / 36.0;
  const double theta = rule == CertificateRule::kGrtr ? 19.0 / 12.0 : 5.0 / 9.0;
  const double grad = cf.grad_P(r.x_final).norm();
  const double lmin = oracles::min_eigenvalue(cf.hess_P(r.x_final));
  const double grad_ratio = grad / (xi * eps);
  const double eig_ratio = -lmin / (theta * std::sqrt(L2 * eps));
  ++t.terminations;
  if (grad_ratio > kCertFactor || eig_ratio > kCertFactor) ++t.violations;
  t.worst_grad_ratio = std::max(t.worst_grad_ratio, grad_ratio);
  t.worst_eig_ratio = std::max(t.worst_eig_ratio, eig_ratio);
}

Outcome criterion_certificates(const ChainRuns& c) {
  CertTally grtr;
  CertTally lm;
  tally(grtr, c.closed, c.grtr, kChainEpsilon, CertificateRule::kGrtr);
  tally(grtr, c.closed, c.grtr_cg, kChainEpsilon, CertificateRule::kGrtr);
  tally(grtr, c.closed, c.minimax_tr, kChainEpsilon, CertificateRule::kGrtr);
  tally(lm, c.closed, c.lmnegcur, kChainEpsilon, CertificateRule::kLmNegCur);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    for (double eps : {1e-2, 1e-3}) {
      SolverConfig cfg;
      cfg.epsilon = eps;
      cfg.max_outer_iters = 200000;
      std::vector<std::pair<ClosedFormProblem, Vector>> cases;
      const ClosedFormProblem q = random_quadratic(300 + k, 2 + k % 5, 1 + k % 3, true);
      cases.emplace_back(q, oracles::random_vector(rng, q.problem.dim_x, 2.0));
      const QuarticSaddleFixture f = quartic_saddle_problem(400 + k, 2 + k % 4, 1 + k % 3);
      cases.emplace_back(f.closed, oracles::random_vector(rng, f.closed.problem.dim_x, 1e-3));
      for (const auto& [cf, x0] : cases) {
        const Vector y0 = Vector::Zero(cf.problem.dim_y);
        tally(grtr, cf, run_grtr(cf.problem, x0, y0, cfg), eps, CertificateRule::kGrtr);
        SolverConfig cg = cfg;
        cg.subproblem = SubproblemMode::kCg;
        tally(grtr, cf, run_grtr(cf.problem, x0, y0, cg), eps, CertificateRule::kGrtr);
        tally(lm, cf, run_lmnegcur(cf.problem, x0, y0, cfg), eps, CertificateRule::kLmNegCur);
      }
    }
  }
  Outcome o;
  o.pass = grtr.terminations > 0 && lm.terminations > 0 && grtr.violations == 0 &&
           lm.violations == 0;
  o.detail = "GRTR terminations " + std::to_string(grtr.terminations) + " violations " +
             std::to_string(grtr.violations) + " (worst ratios grad " +
             fmt("%.3f", grtr.worst_grad_ratio) + ", eig " + fmt("%.3f", grtr.worst_eig_ratio) +
             "); LMNegCur terminations " + std::to_string(lm.terminations) + " violations " +
             std::to_string(lm.violations) + " (worst ratios grad " +
             fmt("%.3f", lm.worst_grad_ratio) + ", eig " + fmt("%.3f", lm.worst_eig_ratio) + ")";
  return o;
}

// ---------------------------------------------------------------------------

// Least-squares slope of log(count) against log(1/eps).
double fit_exponent(const std::vector<double>& eps, const std::vector<double>& counts) {
  const std::size_t n = eps.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(1.0 / eps[i]);
    const double y = std::log(counts[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome criterion_scaling() {
  const std::vector<double> eps = {1e-1, 1e-2, 1e-3};
  std::vector<double> grtr(eps.size(), 0.0);
  std::vector<double> lm(eps.size(), 0.0);
  int unconverged = 0;
  constexpr int kFixtures = 8;
  for (int k = 0; k < kFixtures; ++k) {
    const QuarticSaddleFixture f = quartic_saddle_problem(900 + k, 4, 3);
    const Vector x0 = Vector::Constant(4, 1e-3);
    const Vector y0 = Vector::Zero(3);
    for (std::size_t i = 0; i < eps.size(); ++i) {
      SolverConfig cfg;
      cfg.epsilon = eps[i];
      cfg.certify_final = false;
      const SolverResult a = run_grtr(f.closed.problem, x0, y0, cfg);
      const SolverResult b = run_lmnegcur(f.closed.problem, x0, y0, cfg);
      unconverged += (a.converged ? 0 : 1) + (b.converged ? 0 : 1);
      grtr[i] += static_cast<double>(std::max(1L, outer_iterations(a))) / kFixtures;
      lm[i] += static_cast<double>(std::max(1L, outer_iterations(b))) / kFixtures;
    }
  }
  const double pg = fit_exponent(eps, grtr);
  const double pl = fit_exponent(eps, lm);
  Outcome o;
  o.pass = unconverged == 0 && pg <= kExponentCap && pl <= kExponentCap;
  o.detail = "mean outer iterations GRTR " + fmt("%.1f", grtr[0]) + "/" + fmt("%.1f", grtr[1]) +
             "/" + fmt("%.1f", grtr[2]) + " exponent " + fmt("%.3f", pg) + "; LMNegCur " +
             fmt("%.1f", lm[0]) + "/" + fmt("%.1f", lm[1]) + "/" + fmt("%.1f", lm[2]) +
             " exponent " + fmt("%.3f", pl) + "; unconverged " + std::to_string(unconverged);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion_lm_sandwich(const ChainRuns& c) {
  const double L1 = c.constants.L1;
  const double L2 = c.constants.L2;
  long checked = 0;
  long skipped = 0;
  long violations = 0;
  double worst_lo = std::numeric_limits<double>::infinity();
  double worst_hi = std::numeric_limits<double>::infinity();
  for (const SolverResult* r : {&c.lmnegcur}) {
    for (const auto& rec : r->trace) {
      if (rec.step_kind != StepKind::kLm) continue;
      if (rec.domain_event != DomainEvent::kNone) {
        ++skipped;  // the guard altered the step
        continue;
      }
      const double lo = rec.g_norm / (L1 + std::sqrt(L2 * rec.g_norm));
      const double hi = 2.0 * std::sqrt(rec.g_norm / L2);
      ++checked;
      if (rec.step_norm < lo || rec.step_norm > hi) ++violations;
      worst_lo = std::min(worst_lo, rec.step_norm / lo);
      worst_hi = std::min(worst_hi, hi / rec.step_norm);
    }
  }
  Outcome o;
  o.pass = checked > 0 && violations == 0;
  o.detail = "LM steps checked " + std::to_string(checked) + " (guard-altered " +
             std::to_string(skipped) + "), violations " + std::to_string(violations) +
             ", min |s|/lower " + fmt("%.3f", worst_lo) + ", min upper/|s| " + fmt("%.3f", worst_hi);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion_integrity() {
  const auto start = Clock::now();
  const SaddleChainParams p = make_saddle_chain_params(10, 5, 1.0, 1.0);
  const double tau = p.tau;
  const int n = p.n;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // Boundary gluing: both adjoining regions agree on value and gradient.
  double worst_cont = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    for (int i = 1; i <= n; ++i) {
      for (int side = 0; side < 2; ++side) {
        Vector x(n);
        for (int j = 1; j < i; ++j) x(j - 1) = tau * (2.0 + 4.0 * u01(rng));
        for (int j = i + 1; j <= n; ++j) x(j - 1) = tau * u01(rng);
        RegionLabel a, b;
        if (side == 0) {
          x(i - 1) = tau;
          a = {RegionKind::kType1, i};
          b = {RegionKind::kType2, i};
        } else {
          x(i - 1) = 2.0 * tau;
          a = {RegionKind::kType2, i};
          b = i < n ? RegionLabel{RegionKind::kType1, i + 1} : RegionLabel{RegionKind::kFinal, n + 1};
        }
        const double va = saddle_chain_value_in(x, p, a);
        const double vb = saddle_chain_value_in(x, p, b);
        const Vector ga = saddle_chain_grad_in(x, p, a);
        const Vector gb = saddle_chain_grad_in(x, p, b);
        worst_cont = std::max(worst_cont, std::abs(va - vb) / std::max(1.0, std::abs(va)));
        worst_cont = std::max(worst_cont, (ga - gb).norm() / std::max(1.0, ga.norm()));
      }
    }
  }

  // Stationary points and Hessian eigenstructure.
  const auto points = saddle_chain_stationary_points(p);
  double worst_grad = 0.0;
  bool structure_ok = points.size() == static_cast<std::size_t>(n + 1);
  double worst_hess = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    worst_grad = std::max(worst_grad, saddle_chain_grad(points[k], p).norm());
    const Matrix H = saddle_chain_hess(points[k], p);
    if (k + 1 == points.size()) {
      worst_hess = std::max(worst_hess, (H - 2.0 * p.L * Matrix::Identity(n, n)).norm());
      if ((points[k] - Vector::Constant(n, 4.0 * tau)).norm() > 0.0) structure_ok = false;
    } else {
      const Vector ev = oracles::jacobi_eigen(H).values;
      int at_minus = 0;
      int negative = 0;
      for (int j = 0; j < n; ++j) {
        if (std::abs(ev(j) + 2.0 * p.gamma) <= kHessTol) ++at_minus;
        if (ev(j) < -kHessTol) ++negative;
      }
      if (at_minus != 1 || negative != 1) structure_ok = false;
    }
  }

  // Derivative formulas against central differences.
  double worst_fd = 0.0;
  auto value = [&](const Vector& x) { return saddle_chain_value(x, p); };
  auto grad = [&](const Vector& x) { return saddle_chain_grad(x, p); };
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Vector x = sample_saddle_chain_interior(p, k);
    const Vector g = grad(x);
    const Matrix H = saddle_chain_hess(x, p);
    worst_fd = std::max(worst_fd, (oracles::fd_gradient(value, x, 1e-5) - g).norm() / std::max(1.0, g.norm()));
    worst_fd = std::max(worst_fd, (oracles::fd_jacobian(grad, x, 1e-5) - H).norm() / std::max(1.0, H.norm()));
  }
  const double t = seconds(start);
  Outcome o;
  o.pass = worst_cont <= kContinuityRelTol && worst_grad <= kStationaryTol && structure_ok &&
           worst_hess <= kHessTol && worst_fd <= kFdRelTol && t < kIntegrityRuntime;
  o.detail = "continuity " + fmt("%.2e", worst_cont) + ", stationary |grad| " +
             fmt("%.2e", worst_grad) + ", eigenstructure " + (structure_ok ? "ok" : "broken") +
             ", |hess - 2L I| " + fmt("%.2e", worst_hess) + ", FD rel. error " +
             fmt("%.2e", worst_fd) + ", " + fmt("%.2f s", t);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion_reduction() {
  int identical = 0;
  long total_steps = 0;
  std::string first_mismatch;
  for (int k = 0; k < 10; ++k) {
    const QuarticSaddleFixture f = quartic_saddle_problem(700 + k, 3 + k % 3, 2);
    std::mt19937_64 rng(800 + k);
    const Vector x0 = oracles::random_vector(rng, f.closed.problem.dim_x, 0.5);
    const Vector y0 = oracles::random_vector(rng, f.closed.problem.dim_y);
    SolverConfig cfg;
    cfg.epsilon = 1e-2;
    cfg.seed = static_cast<std::uint64_t>(k);
    cfg.record_iterates = true;
    cfg.certify_final = false;
    SolverConfig g = cfg;
    g.sigma = 0.0;
    g.fixed_radius = true;
    const SolverResult a = run_grtr(f.closed.problem, x0, y0, g);
    const SolverResult b = run_minimax_tr(f.closed.problem, x0, y0, cfg);
    bool same = a.iterates.size() == b.iterates.size();
    for (std::size_t i = 0; same && i < a.iterates.size(); ++i) {
      same = a.iterates[i].size() == b.iterates[i].size() &&
             std::equal(a.iterates[i].begin(), a.iterates[i].end(), b.iterates[i].begin());
    }
    if (same) {
      ++identical;
    } else if (first_mismatch.empty()) {
      first_mismatch = ", first mismatch at seed " + std::to_string(k);
    }
    total_steps += static_cast<long>(a.iterates.size());
  }
  Outcome o;
  o.pass = identical == 10;
  o.detail = std::to_string(identical) + "/10 runs bit-identical, " + std::to_string(total_steps) +
             " iterates compared" + first_mismatch;
  return o;
}

Outcome guarded(const std::function<Outcome()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return Outcome{false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  report(1, guarded(criterion_tr_oracle));
  report(2, guarded(criterion_oracle_identities));
  ChainRuns chain;
  bool chain_ok = true;
  try {
    chain = run_chain();
  } catch (const std::exception& e) {
    chain_ok = false;
    for (int id : {3, 4, 5, 7}) report(id, Outcome{false, std::string("exception: ") + e.what()});
  }
  if (chain_ok) {
    report(3, guarded([&] { return criterion_chain(chain); }));
    report(4, guarded([&] { return criterion_descent(chain); }));
    report(5, guarded([&] { return criterion_certificates(chain); }));
  }
  report(6, guarded(criterion_scaling));
  if (chain_ok) report(7, guarded([&] { return criterion_lm_sandwich(chain); }));
  report(8, guarded(criterion_integrity));
  report(9, guarded(criterion_reduction));
  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
