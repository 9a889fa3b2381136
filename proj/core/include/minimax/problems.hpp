#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "minimax/oracle.hpp"

namespace minimax {

/// A minimax problem together with closed forms for y*(x), P and its
/// derivatives, used as an independent reference in tests.
struct ClosedFormProblem {
  MinimaxProblem problem;
  std::function<Vector(const Vector&)> y_star;
  std::function<double(const Vector&)> P;
  std::function<Vector(const Vector&)> grad_P;
  std::function<Matrix(const Vector&)> hess_P;
  std::optional<double> P_star;  // global minimum of P when known
};

// ---------------------------------------------------------------------------
// Saddle-chain benchmark: min_x max_y g(x) - ||y||^2 / 2 on the domain D0.

struct SaddleChainParams {
  int n = 10;
  int m = 5;
  double L = 1.0;
  double gamma = 1.0;
  double tau = 2.718281828459045;
  double nu = 0.0;  // -h1(2 tau) + 4 L tau^2
};

/// Fills in nu from L, gamma and tau.
SaddleChainParams make_saddle_chain_params(int n, int m, double L, double gamma,
                                           double tau = 2.718281828459045);

// Gluing polynomials and their derivatives (order 0..3).
double chain_h1(const SaddleChainParams& p, double x, int order = 0);
double chain_h2(const SaddleChainParams& p, double x, int order = 0);

enum class RegionKind { kType1, kType2, kFinal, kOutside };

struct RegionLabel {
  RegionKind kind = RegionKind::kOutside;
  int index = 0;  // 1-based block index for kType1 / kType2, n + 1 for kFinal

  friend bool operator==(const RegionLabel&, const RegionLabel&) = default;
};

std::string to_string(const RegionLabel& label);

/// Region of D0 containing x. A coordinate equal to tau belongs to type2 and
/// one equal to 2 tau to the successor region.
RegionLabel classify_region(const Vector& x, const SaddleChainParams& p);

/// g and its derivatives. Throw kOutsideDomain outside D0.
double saddle_chain_value(const Vector& x, const SaddleChainParams& p);
Vector saddle_chain_grad(const Vector& x, const SaddleChainParams& p);
Matrix saddle_chain_hess(const Vector& x, const SaddleChainParams& p);

/// Same, but using the closed form of a prescribed region even off its
/// interior; used to check gluing across region boundaries.
double saddle_chain_value_in(const Vector& x, const SaddleChainParams& p, RegionLabel region);
Vector saddle_chain_grad_in(const Vector& x, const SaddleChainParams& p, RegionLabel region);

/// The stationary points (0,...,0), (4tau,0,...,0), ..., (4tau,...,4tau,0)
/// followed by the local minimizer (4tau,...,4tau).
std::vector<Vector> saddle_chain_stationary_points(const SaddleChainParams& p);

/// Reflects negative coordinates to |x_j|. g is even in every coordinate that
/// can reach 0, so the value is unchanged. nullopt if the result is still
/// outside D0.
std::optional<Vector> saddle_chain_restore(const Vector& x, const SaddleChainParams& p);

struct SaddleChainConstants {
  double ell_g = 0.0;  // sup ||hess g|| over D0
  double rho_g = 0.0;  // sup of the third-derivative tensor norm over D0
  double ell = 0.0;    // gradient Lipschitz constant of f (includes the -I y block)
  double mu = 1.0;
  double rho = 0.0;
};

/// Grid estimate of the Lipschitz constants over D0. Only the glued
/// (x_i, x_{i+1}) block is non-quadratic, so a 2-D grid suffices.
SaddleChainConstants estimate_saddle_chain_constants(const SaddleChainParams& p, int grid = 201,
                                                     int angles = 360);

/// f(x, y) = g(x) - ||y||^2 / 2 with y*(x) = 0 and P = g. Because y is
/// decoupled, L1 = ell_g and L_H = L2 = rho_g are supplied as envelope constants.
ClosedFormProblem saddle_chain_problem(const SaddleChainParams& p,
                                       const SaddleChainConstants& constants);

double saddle_chain_optimal_value(const SaddleChainParams& p);

/// A random point strictly inside one region of D0, at least margin * tau
/// away from that region's boundaries.
Vector sample_saddle_chain_interior(const SaddleChainParams& p, std::uint64_t seed,
                                    double margin = 0.01);

// ---------------------------------------------------------------------------
// Quadratic fixture: f(x, y) = x^T A x / 2 + x^T B y - y^T C y / 2.

/// Throws kNotPositiveDefinite unless C is symmetric positive definite.
/// ell = ||[[A, B], [B^T, -C]]||, mu = lambda_min(C); rho is the caller's choice
/// (the Hessian is constant, so any positive value is valid).
ClosedFormProblem quadratic_problem(const Matrix& A, const Matrix& B, const Matrix& C,
                                    double rho = 1e-2);

/// Random quadratic fixture. With convex = true, A is positive definite and
/// P* = 0 at x = 0.
ClosedFormProblem random_quadratic(std::uint64_t seed, int n, int m, bool convex = true,
                                   double rho = 1e-2);

// ---------------------------------------------------------------------------
// Quadratic-plus-saddle fixture:
//   f(x, y) = sum_i (x_i^4 / 4 - a_i x_i^2 / 2) + x^T B y - y^T C y / 2.
// P has a strict saddle at the origin and minimizers where 3 x_i^2 balances
// a_i. Constants are valid on the box |x_i| <= box_radius.

struct QuarticSaddleFixture {
  ClosedFormProblem closed;
  Vector a;
  Matrix B;
  Matrix C;
  double box_radius = 3.0;
};

QuarticSaddleFixture quartic_saddle_problem(std::uint64_t seed, int n, int m,
                                            double box_radius = 3.0);

}  // namespace minimax
