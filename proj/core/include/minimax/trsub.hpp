#pragma once

#include <cstdint>

#include "minimax/oracle.hpp"

namespace minimax {

/// min_s g^T s + 1/2 s^T (H + reg I) s  subject to ||s|| <= radius.
struct TRProblem {
  Matrix H;
  Vector g;
  double reg = 0.0;
  double radius = 1.0;
};

struct TRSolution {
  Vector s;
  double lambda = 0.0;  // dual multiplier of the ball constraint
  double kkt_residual = 0.0;  // ||(H + reg I + lambda I) s + g||
  bool on_boundary = false;
  bool hard_case = false;
  double min_eig_model = 0.0;  // lambda_min(H + reg I); NaN when not computed
  int iterations = 0;
};

/// Model value g^T s + 1/2 s^T (H + reg I) s.
double tr_objective(const TRProblem& p, const Vector& s);

/// Exact solution via dense eigendecomposition of H + reg I and a safeguarded
/// Newton iteration on the secular equation 1/||s(lambda)|| = 1/radius.
/// The hard case (g orthogonal to the bottom eigenspace) is completed with a
/// bottom-eigenvector component to reach the boundary.
TRSolution solve_tr_exact(const TRProblem& p, double tol = 1e-10);

/// Steihaug-Toint truncated conjugate gradients on H + reg I. Reports
/// lambda = 0; on_boundary is set when the iterate is pushed to the sphere.
TRSolution solve_tr_cg(const TRProblem& p, int max_iters, double tol = 1e-10);

/// Cauchy point: minimizer of the model along -g inside the ball.
Vector cauchy_point(const TRProblem& p);

struct EigPair {
  double value = 0.0;
  Vector vector;
};

/// Smallest eigenpair of a symmetric matrix, with the vector oriented so that
/// orient_against . u <= 0 (an exact tie keeps the solver's sign).
/// Dense solver for n <= kDenseEigenLimit, Lanczos with full
/// reorthogonalization above it.
EigPair min_eigpair(const Matrix& H, const Vector& orient_against, std::uint64_t seed = 0);

inline constexpr int kDenseEigenLimit = 512;

/// Lanczos with full reorthogonalization; exposed for testing the large-n path.
/// Falls back to the dense solver if the Ritz residual misses 1e-10 (1 + ||H||).
EigPair lanczos_min_eigpair(const Matrix& H, std::uint64_t seed = 0);

/// Dense smallest eigenpair; throws kConvergenceFailure if Eigen reports failure.
EigPair dense_min_eigpair(const Matrix& H);

}  // namespace minimax
