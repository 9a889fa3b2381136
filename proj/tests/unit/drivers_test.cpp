#include <cmath>

#include <gtest/gtest.h>

#include "minimax/drivers.hpp"
#include "minimax/errors.hpp"
#include "minimax/inner.hpp"
#include "minimax/problems.hpp"
#include "oracles.hpp"

namespace minimax {
namespace {

// f(x, y) = x y - y^2 / 2, so P(x) = x^2 / 2.
ClosedFormProblem half_square() {
  return quadratic_problem(Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1), 1e-2);
}

double high_accuracy_P(const MinimaxProblem& p, const Vector& x) {
  return envelope_value(p, x, Vector::Zero(p.dim_y), 1e-11 * p.mu).value;
}

TEST(LmNegCurStep, NegativeCurvatureBranch) {
  Matrix H = Matrix::Zero(2, 2);
  H.diagonal() << -1.0, 2.0;
  Vector g(2);
  g << 0.0, 0.5;
  const LmNegCurStep st = lmnegcur_step(g, H, 0.1, 1.0);
  EXPECT_EQ(st.kind, StepKind::kNegativeCurvature);
  EXPECT_NEAR(std::abs(st.s(0)), std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(st.s(1), 0.0, 1e-14);
  EXPECT_LE(g.dot(st.s), 1e-15);
}

TEST(LmNegCurStep, ScalarLevenbergMarquardt) {
  const LmNegCurStep st =
      lmnegcur_step(Vector::Ones(1), Matrix::Constant(1, 1, 2.0), 1e-2, 4.0);
  EXPECT_EQ(st.kind, StepKind::kLm);
  EXPECT_DOUBLE_EQ(st.s(0), -0.25);
}

TEST(LmNegCurStep, StopsWhenSmallGradientAndNoCurvature) {
  const double eps = 1e-2;
  const LmNegCurStep st = lmnegcur_step(Vector::Constant(1, eps / 2), Matrix::Zero(1, 1), eps, 3.0);
  EXPECT_EQ(st.kind, StepKind::kStop);
  EXPECT_EQ(st.s.norm(), 0.0);
}

TEST(GrtrModel, RegularizerAndRadius) {
  Vector g(2);
  g << 3.0, 4.0;  // |g| = 5
  const TRProblem p = grtr_model(g, Matrix::Identity(2, 2), 2.0, 0.1, 1e-2, false);
  EXPECT_DOUBLE_EQ(p.reg, 2.0 * std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(p.radius, 0.1 * std::sqrt(5.0));
  const TRProblem small = grtr_model(g * 1e-4, Matrix::Identity(2, 2), 2.0, 0.1, 1e-2, false);
  EXPECT_DOUBLE_EQ(small.radius, 0.1 * 0.1);
  EXPECT_GT(small.reg, 0.0);  // kept at sigma sqrt(|g|) below eps
  EXPECT_DOUBLE_EQ(grtr_model(g, Matrix::Identity(2, 2), 2.0, 0.1, 1e-2, true).radius, 0.01);
}

TEST(RunGrtr, HalfSquareConvergesFast) {
  const auto q = half_square();
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  const SolverResult res = run_grtr(q.problem, Vector::Ones(1), Vector::Zero(1), cfg);
  ASSERT_TRUE(res.converged);
  EXPECT_LE(res.trace.size(), 10u);
  EXPECT_EQ(res.trace.back().step_kind, StepKind::kStop);
  EXPECT_LE(res.trace.back().g_norm, 1e-3);
  EXPECT_LT(res.x_final(0), 1.0);
  // First step heads straight toward 0.
  EXPECT_GT(res.trace.front().step_norm, 0.0);
  ASSERT_TRUE(res.report.has_value());
  EXPECT_TRUE(res.report->satisfied);
}

TEST(RunGrtr, StationaryStartStopsImmediately) {
  const auto q = random_quadratic(3, 4, 2);
  const SolverResult res = run_grtr(q.problem, Vector::Zero(4), Vector::Zero(2), SolverConfig{});
  ASSERT_EQ(res.trace.size(), 1u);
  EXPECT_EQ(res.trace[0].step_kind, StepKind::kStop);
  EXPECT_EQ(*res.trace[0].lambda, 0.0);
  EXPECT_EQ(res.x_final.norm(), 0.0);
}

TEST(RunGrtr, CgModeConverges) {
  const auto fx = quartic_saddle_problem(4, 4, 2);
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.subproblem = SubproblemMode::kCg;
  const SolverResult res =
      run_grtr(fx.closed.problem, Vector::Constant(4, 1e-3), Vector::Zero(2), cfg);
  ASSERT_TRUE(res.converged);
  EXPECT_LE(fx.closed.grad_P(res.x_final).norm(), 1.1 * 97.0 / 96.0 * cfg.epsilon);
  EXPECT_GT(oracles::min_eigenvalue(fx.closed.hess_P(res.x_final)), 0.0);
}

TEST(RunMinimaxTr, StepsCappedAtFixedRadius) {
  const auto q = half_square();
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  const SolverResult res = run_minimax_tr(q.problem, Vector::Ones(1), Vector::Zero(1), cfg);
  ASSERT_TRUE(res.converged);
  const double L2 = derived_constants(q.problem).L2;
  const double cap = std::sqrt(cfg.epsilon) / (4.0 * std::sqrt(L2));
  for (const auto& r : res.trace) EXPECT_LE(r.step_norm, cap * (1.0 + 1e-10));
  EXPECT_GT(res.trace.size(), 5u);
}

TEST(RunMinimaxTr, StationaryStartStopsImmediately) {
  const auto q = random_quadratic(6, 3, 2);
  const SolverResult res =
      run_minimax_tr(q.problem, Vector::Zero(3), Vector::Zero(2), SolverConfig{});
  ASSERT_EQ(res.trace.size(), 1u);
  EXPECT_EQ(*res.trace[0].lambda, 0.0);
}

TEST(RunMinimaxTr, EqualsGrtrWithSigmaZeroAndFixedRadius) {
  const auto fx = quartic_saddle_problem(8, 3, 2);
  SolverConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.record_iterates = true;
  const Vector x0 = Vector::Constant(3, 0.01);
  const Vector y0 = Vector::Ones(2);
  const SolverResult a = run_minimax_tr(fx.closed.problem, x0, y0, cfg);
  cfg.sigma = 0.0;
  cfg.fixed_radius = true;
  const SolverResult b = run_grtr(fx.closed.problem, x0, y0, cfg);
  ASSERT_EQ(a.iterates.size(), b.iterates.size());
  for (std::size_t k = 0; k < a.iterates.size(); ++k) {
    EXPECT_TRUE((a.iterates[k].array() == b.iterates[k].array()).all());
  }
}

TEST(RunLmNegCur, EscapesSaddleOfQuarticFixture) {
  const auto fx = quartic_saddle_problem(2, 5, 3);
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  const SolverResult res =
      run_lmnegcur(fx.closed.problem, Vector::Constant(5, 1e-4), Vector::Zero(3), cfg);
  ASSERT_TRUE(res.converged);
  bool saw_nc = false;
  for (const auto& r : res.trace) saw_nc = saw_nc || r.step_kind == StepKind::kNegativeCurvature;
  EXPECT_TRUE(saw_nc);
  EXPECT_GT(oracles::min_eigenvalue(fx.closed.hess_P(res.x_final)), 0.0);
  ASSERT_TRUE(res.report.has_value());
  EXPECT_TRUE(res.report->satisfied);
}

TEST(Trajectories, MonotoneDescentAndStepBounds) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto fx = quartic_saddle_problem(seed, 4, 2);
    const MinimaxProblem& prob = fx.closed.problem;
    const DerivedConstants c = derived_constants(prob);
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    cfg.record_iterates = true;
    cfg.eps1 = grtr_default_eps1(cfg.epsilon, c.L1, c.L2) / 100.0;
    cfg.eps2 = grtr_default_eps2(cfg.epsilon, c.L2) / 100.0;
    std::mt19937_64 rng(seed);
    const Vector x0 = oracles::random_vector(rng, 4, 1e-2);
    const Vector y0 = oracles::random_vector(rng, 2);
    for (int algo = 0; algo < 2; ++algo) {
      const SolverResult res =
          algo == 0 ? run_grtr(prob, x0, y0, cfg) : run_lmnegcur(prob, x0, y0, cfg);
      ASSERT_TRUE(res.converged);
      for (std::size_t t = 0; t + 1 < res.iterates.size(); ++t) {
        const double p0 = high_accuracy_P(prob, res.iterates[t]);
        const double p1 = high_accuracy_P(prob, res.iterates[t + 1]);
        EXPECT_LE(p1, p0 + 1e-8 * (1.0 + std::abs(p0))) << "algo " << algo << " t " << t;
        const IterationRecord& r = res.trace[t];
        if (r.step_kind == StepKind::kLm) {
          EXPECT_LE(r.g_norm / (c.L1 + std::sqrt(c.L2 * r.g_norm)), r.step_norm * (1 + 1e-12));
          EXPECT_LE(r.step_norm, 2.0 * std::sqrt(r.g_norm / c.L2) * (1 + 1e-12));
        }
      }
    }
  }
}

TEST(RunGrtr, TruncatesAtIterationCap) {
  const auto fx = quartic_saddle_problem(5, 3, 2);
  SolverConfig cfg;
  cfg.max_outer_iters = 2;
  const SolverResult res =
      run_grtr(fx.closed.problem, Vector::Constant(3, 0.01), Vector::Zero(2), cfg);
  EXPECT_TRUE(res.truncated);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.trace.size(), 2u);
}

TEST(RunGrtr, RejectsInvalidConfig) {
  const auto q = half_square();
  SolverConfig cfg;
  cfg.epsilon = 0.0;
  EXPECT_THROW(run_grtr(q.problem, Vector::Ones(1), Vector::Zero(1), cfg), Error);
  cfg = SolverConfig{};
  cfg.r = -1.0;
  EXPECT_THROW(run_grtr(q.problem, Vector::Ones(1), Vector::Zero(1), cfg), Error);
  EXPECT_THROW(run_grtr(q.problem, Vector::Ones(2), Vector::Zero(1), SolverConfig{}), Error);
}

TEST(Certify, StrictMinimizerOfSaddleChain) {
  const auto p = make_saddle_chain_params(10, 5, 1.0, 1.0);
  const auto chain = saddle_chain_problem(p, estimate_saddle_chain_constants(p, 51, 90));
  const Vector x = Vector::Constant(10, 4.0 * p.tau);
  for (double eps : {1e-1, 1e-3, 1e-6}) {
    const StationarityReport rep = certify(chain.problem, x, eps, CertificateRule::kGrtr);
    EXPECT_TRUE(rep.satisfied);
    EXPECT_LE(rep.grad_norm, 1e-2 * eps);
    EXPECT_NEAR(rep.min_eig, 2.0, 1e-6);
  }
}

TEST(Certify, OriginOfSaddleChainFails) {
  const auto p = make_saddle_chain_params(10, 5, 1.0, 1.0);
  const auto chain = saddle_chain_problem(p, estimate_saddle_chain_constants(p, 51, 90));
  const StationarityReport rep =
      certify(chain.problem, Vector::Zero(10), 1e-2, CertificateRule::kLmNegCur);
  EXPECT_LE(rep.min_eig, -2.0 + 1e-6);
  EXPECT_FALSE(rep.satisfied);
}

TEST(Certify, HalfSquareNearZero) {
  const auto q = half_square();
  const double eps = 1e-3;
  const StationarityReport rep =
      certify(q.problem, Vector::Constant(1, eps / 2), eps, CertificateRule::kGrtr);
  EXPECT_TRUE(rep.satisfied);
  EXPECT_NEAR(rep.grad_norm, eps / 2, eps / 50);
  EXPECT_NEAR(rep.min_eig, 1.0, 1e-3);
  EXPECT_DOUBLE_EQ(rep.xi_bound, 97.0 / 96.0 * eps);
  const double L2 = derived_constants(q.problem).L2;
  EXPECT_DOUBLE_EQ(rep.theta_bound, 19.0 / 12.0 * std::sqrt(L2) * std::sqrt(eps));
  const StationarityReport lm =
      certify(q.problem, Vector::Constant(1, eps / 2), eps, CertificateRule::kLmNegCur);
  EXPECT_DOUBLE_EQ(lm.xi_bound, 37.0 / 36.0 * eps);
  EXPECT_DOUBLE_EQ(lm.theta_bound, 5.0 / 9.0 * std::sqrt(L2) * std::sqrt(eps));
}

TEST(RunGda, FrozenXBlock) {
  const auto q = random_quadratic(2, 3, 2);
  GdaConfig cfg;
  cfg.step_x = 0.0;
  cfg.max_iters = 50;
  const Vector x0 = Vector::LinSpaced(3, -1.0, 1.0);
  const SolverResult res = run_gda(q.problem, x0, Vector::Zero(2), cfg);
  EXPECT_TRUE((res.x_final.array() == x0.array()).all());
  EXPECT_EQ(res.trace.size(), 50u);
}

TEST(RunGda, LinearConvergenceToFixedPoint) {
  // f = x^2 / 2 + x y - y^2 / 2: fixed point 0, the iteration map contracts.
  const auto q = quadratic_problem(Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1));
  GdaConfig cfg;
  cfg.step_x = 0.1;
  cfg.step_y = 0.1;
  cfg.max_iters = 400;
  const SolverResult res =
      run_gda(q.problem, Vector::Ones(1), Vector::Constant(1, -1.0), cfg);
  Matrix M(2, 2);
  M << 1.0 - 0.1, -0.1, 0.1, 1.0 - 0.1;
  const double rate = Eigen::EigenSolver<Matrix>(M).eigenvalues().cwiseAbs().maxCoeff();
  ASSERT_LT(rate, 1.0);
  Vector z(2);
  z << res.x_final(0), res.y_final(0);
  EXPECT_LE(z.norm(), 2.0 * std::pow(rate, 400) * std::sqrt(2.0) + 1e-15);
  EXPECT_EQ(res.trace.back().step_kind, StepKind::kGradient);
}

TEST(RunGda, RejectsNegativeStep) {
  const auto q = half_square();
  GdaConfig cfg;
  cfg.step_y = -1.0;
  EXPECT_THROW(run_gda(q.problem, Vector::Ones(1), Vector::Zero(1), cfg), Error);
}

}  // namespace
}  // namespace minimax
