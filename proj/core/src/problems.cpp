#include "minimax/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "minimax/errors.hpp"

namespace minimax {

namespace {

constexpr double kPi = std::numbers::pi;

struct ChainEval {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

bool in_prefix_range(double v, double tau) { return v >= 2.0 * tau && v <= 6.0 * tau; }

// Evaluates g from the closed form of `region`, ignoring whether x lies in it.
ChainEval eval_region(const Vector& x, const SaddleChainParams& p, RegionLabel region,
                      bool want_grad, bool want_hess) {
  const int n = p.n;
  if (x.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "saddle chain expects x of dimension " +
                                                   std::to_string(n));
  }
  ChainEval out;
  if (want_grad) out.grad = Vector::Zero(n);
  if (want_hess) out.hess = Matrix::Zero(n, n);

  const double L = p.L;
  const double four_tau = 4.0 * p.tau;
  int prefix = 0;
  if (region.kind == RegionKind::kFinal) {
    prefix = n;
  } else {
    prefix = region.index - 1;
  }
  for (int j = 0; j < prefix; ++j) {
    const double d = x(j) - four_tau;
    out.value += L * d * d;
    if (want_grad) out.grad(j) = 2.0 * L * d;
    if (want_hess) out.hess(j, j) = 2.0 * L;
  }
  out.value -= static_cast<double>(prefix) * p.nu;
  if (region.kind == RegionKind::kFinal) return out;

  const int i = prefix;  // 0-based position of the active coordinate
  int tail_start = i + 1;
  if (region.kind == RegionKind::kType1) {
    const double xi = x(i);
    out.value += -p.gamma * xi * xi;
    if (want_grad) out.grad(i) = -2.0 * p.gamma * xi;
    if (want_hess) out.hess(i, i) = -2.0 * p.gamma;
  } else {
    const double xi = x(i);
    out.value += chain_h1(p, xi, 0);
    if (want_grad) out.grad(i) = chain_h1(p, xi, 1);
    if (want_hess) out.hess(i, i) = chain_h1(p, xi, 2);
    if (i + 1 < n) {
      const double b = x(i + 1);
      const double h2 = chain_h2(p, xi, 0);
      out.value += h2 * b * b;
      if (want_grad) {
        out.grad(i) += chain_h2(p, xi, 1) * b * b;
        out.grad(i + 1) = 2.0 * h2 * b;
      }
      if (want_hess) {
        out.hess(i, i) += chain_h2(p, xi, 2) * b * b;
        const double cross = 2.0 * chain_h2(p, xi, 1) * b;
        out.hess(i, i + 1) = cross;
        out.hess(i + 1, i) = cross;
        out.hess(i + 1, i + 1) = 2.0 * h2;
      }
      tail_start = i + 2;
    }
  }
  for (int j = tail_start; j < n; ++j) {
    out.value += L * x(j) * x(j);
    if (want_grad) out.grad(j) = 2.0 * L * x(j);
    if (want_hess) out.hess(j, j) = 2.0 * L;
  }
  return out;
}

RegionLabel require_region(const Vector& x, const SaddleChainParams& p) {
  if (x.size() != p.n) {
    throw Error(ErrorKind::kDimensionMismatch, "saddle chain expects x of dimension " +
                                                   std::to_string(p.n));
  }
  RegionLabel label = classify_region(x, p);
  if (label.kind == RegionKind::kOutside) {
    throw Error(ErrorKind::kOutsideDomain, "point lies outside the saddle-chain domain");
  }
  return label;
}

// Third-derivative tensor norm of phi(a, b) = h1(a) + h2(a) b^2, maximized
// over unit directions (c, s).
double glued_tensor_norm(const SaddleChainParams& p, double a, double b, int angles,
                         bool with_b) {
  const double faaa = chain_h1(p, a, 3) + (with_b ? chain_h2(p, a, 3) * b * b : 0.0);
  const double faab = with_b ? 2.0 * chain_h2(p, a, 2) * b : 0.0;
  const double fabb = with_b ? 2.0 * chain_h2(p, a, 1) : 0.0;
  double best = std::abs(faaa);
  for (int k = 0; k < angles; ++k) {
    const double th = kPi * static_cast<double>(k) / angles;
    const double c = std::cos(th);
    const double s = std::sin(th);
    const double v = faaa * c * c * c + 3.0 * faab * c * c * s + 3.0 * fabb * c * s * s;
    best = std::max(best, std::abs(v));
  }
  return best;
}

double sym2_norm(double a, double b, double d) {
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), b);
  return std::max(std::abs(mean + rad), std::abs(mean - rad));
}

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

}  // namespace

SaddleChainParams make_saddle_chain_params(int n, int m, double L, double gamma, double tau) {
  if (n < 1 || m < 1) throw Error(ErrorKind::kInvalidArgument, "n and m must be positive");
  if (!(L > 0.0) || !(gamma > 0.0) || !(tau > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "L, gamma and tau must be positive");
  }
  SaddleChainParams p;
  p.n = n;
  p.m = m;
  p.L = L;
  p.gamma = gamma;
  p.tau = tau;
  p.nu = -chain_h1(p, 2.0 * tau, 0) + 4.0 * L * tau * tau;
  return p;
}

double chain_h1(const SaddleChainParams& p, double x, int order) {
  const double t = p.tau;
  const double u = x - t;
  const double c3 = (-14.0 * p.L + 10.0 * p.gamma) / (3.0 * t);
  const double c4 = (5.0 * p.L - 3.0 * p.gamma) / (2.0 * t * t);
  switch (order) {
    case 0: return -p.gamma * x * x + c3 * u * u * u + c4 * u * u * u * u;
    case 1: return -2.0 * p.gamma * x + 3.0 * c3 * u * u + 4.0 * c4 * u * u * u;
    case 2: return -2.0 * p.gamma + 6.0 * c3 * u + 12.0 * c4 * u * u;
    case 3: return 6.0 * c3 + 24.0 * c4 * u;
    default: throw Error(ErrorKind::kInvalidArgument, "derivative order must be 0..3");
  }
}

double chain_h2(const SaddleChainParams& p, double x, int order) {
  const double t = p.tau;
  const double u = x - 2.0 * t;
  const double k = p.L + p.gamma;
  const double c3 = -10.0 * k / (t * t * t);
  const double c4 = -15.0 * k / (t * t * t * t);
  const double c5 = -6.0 * k / (t * t * t * t * t);
  const double u2 = u * u;
  switch (order) {
    case 0: return -p.gamma + c3 * u2 * u + c4 * u2 * u2 + c5 * u2 * u2 * u;
    case 1: return 3.0 * c3 * u2 + 4.0 * c4 * u2 * u + 5.0 * c5 * u2 * u2;
    case 2: return 6.0 * c3 * u + 12.0 * c4 * u2 + 20.0 * c5 * u2 * u;
    case 3: return 6.0 * c3 + 24.0 * c4 * u + 60.0 * c5 * u2;
    default: throw Error(ErrorKind::kInvalidArgument, "derivative order must be 0..3");
  }
}

std::string to_string(const RegionLabel& label) {
  switch (label.kind) {
    case RegionKind::kType1: return "type1(" + std::to_string(label.index) + ")";
    case RegionKind::kType2: return "type2(" + std::to_string(label.index) + ")";
    case RegionKind::kFinal: return "final";
    case RegionKind::kOutside: return "outside";
  }
  return "outside";
}

RegionLabel classify_region(const Vector& x, const SaddleChainParams& p) {
  const int n = static_cast<int>(x.size());
  const double tau = p.tau;
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(x(j))) return {};
  }
  int prefix = 0;
  while (prefix < n && in_prefix_range(x(prefix), tau)) ++prefix;
  if (prefix == n) return {RegionKind::kFinal, n + 1};

  const double xi = x(prefix);
  if (xi < 0.0 || xi >= 2.0 * tau) return {};
  for (int j = prefix + 1; j < n; ++j) {
    if (x(j) < 0.0 || x(j) > tau) return {};
  }
  const RegionKind kind = xi >= tau ? RegionKind::kType2 : RegionKind::kType1;
  return {kind, prefix + 1};
}

double saddle_chain_value(const Vector& x, const SaddleChainParams& p) {
  return eval_region(x, p, require_region(x, p), false, false).value;
}

Vector saddle_chain_grad(const Vector& x, const SaddleChainParams& p) {
  return eval_region(x, p, require_region(x, p), true, false).grad;
}

Matrix saddle_chain_hess(const Vector& x, const SaddleChainParams& p) {
  return eval_region(x, p, require_region(x, p), false, true).hess;
}

double saddle_chain_value_in(const Vector& x, const SaddleChainParams& p, RegionLabel region) {
  return eval_region(x, p, region, false, false).value;
}

Vector saddle_chain_grad_in(const Vector& x, const SaddleChainParams& p, RegionLabel region) {
  return eval_region(x, p, region, true, false).grad;
}

std::vector<Vector> saddle_chain_stationary_points(const SaddleChainParams& p) {
  std::vector<Vector> points;
  for (int k = 0; k <= p.n; ++k) {
    Vector x = Vector::Zero(p.n);
    x.head(k).setConstant(4.0 * p.tau);
    points.push_back(std::move(x));
  }
  return points;
}

std::optional<Vector> saddle_chain_restore(const Vector& x, const SaddleChainParams& p) {
  if (x.size() != p.n || !x.allFinite()) return std::nullopt;
  Vector r = x.cwiseAbs().cwiseMin(6.0 * p.tau);
  if (classify_region(r, p).kind == RegionKind::kOutside) return std::nullopt;
  return r;
}

SaddleChainConstants estimate_saddle_chain_constants(const SaddleChainParams& p, int grid,
                                                     int angles) {
  if (grid < 2 || angles < 1) {
    throw Error(ErrorKind::kInvalidArgument, "grid needs at least 2 points per axis");
  }
  const double tau = p.tau;
  const bool coupled = p.n >= 2;
  double ell_g = std::max(2.0 * p.L, 2.0 * p.gamma);
  double rho_g = 0.0;
  for (int ia = 0; ia < grid; ++ia) {
    const double a = tau + tau * static_cast<double>(ia) / (grid - 1);
    const double h1pp = chain_h1(p, a, 2);
    ell_g = std::max(ell_g, std::abs(h1pp));
    rho_g = std::max(rho_g, std::abs(chain_h1(p, a, 3)));
    if (!coupled) continue;
    const double h2 = chain_h2(p, a, 0);
    const double h2p = chain_h2(p, a, 1);
    const double h2pp = chain_h2(p, a, 2);
    for (int ib = 0; ib < grid; ++ib) {
      const double b = tau * static_cast<double>(ib) / (grid - 1);
      ell_g = std::max(ell_g, sym2_norm(h1pp + h2pp * b * b, 2.0 * h2p * b, 2.0 * h2));
      rho_g = std::max(rho_g, glued_tensor_norm(p, a, b, angles, true));
    }
  }
  SaddleChainConstants c;
  c.ell_g = ell_g;
  c.rho_g = rho_g;
  c.ell = std::max(ell_g, 1.0);
  c.mu = 1.0;
  c.rho = rho_g;
  return c;
}

ClosedFormProblem saddle_chain_problem(const SaddleChainParams& p,
                                       const SaddleChainConstants& constants) {
  const int n = p.n;
  const int m = p.m;
  ClosedFormProblem out;
  MinimaxProblem& prob = out.problem;
  prob.dim_x = n;
  prob.dim_y = m;
  prob.eval_f = [p](const Vector& x, const Vector& y) {
    return saddle_chain_value(x, p) - 0.5 * y.squaredNorm();
  };
  prob.grad_x = [p](const Vector& x, const Vector&) { return saddle_chain_grad(x, p); };
  prob.grad_y = [](const Vector&, const Vector& y) -> Vector { return -y; };
  prob.hess_xx = [p](const Vector& x, const Vector&) { return saddle_chain_hess(x, p); };
  prob.hess_xy = [n, m](const Vector&, const Vector&) -> Matrix { return Matrix::Zero(n, m); };
  prob.hess_yy = [m](const Vector&, const Vector&) -> Matrix {
    return -Matrix::Identity(m, m);
  };
  prob.ell = constants.ell;
  prob.mu = constants.mu;
  prob.rho = constants.rho;
  prob.envelope = DerivedConstants{constants.ell_g, constants.rho_g, constants.rho_g};
  prob.in_domain = [p](const Vector& x) {
    return classify_region(x, p).kind != RegionKind::kOutside;
  };
  prob.restore_domain = [p](const Vector& x) { return saddle_chain_restore(x, p); };

  out.y_star = [m](const Vector&) -> Vector { return Vector::Zero(m); };
  out.P = [p](const Vector& x) { return saddle_chain_value(x, p); };
  out.grad_P = [p](const Vector& x) { return saddle_chain_grad(x, p); };
  out.hess_P = [p](const Vector& x) { return saddle_chain_hess(x, p); };
  out.P_star = saddle_chain_optimal_value(p);
  return out;
}

double saddle_chain_optimal_value(const SaddleChainParams& p) {
  return -static_cast<double>(p.n) * p.nu;
}

Vector sample_saddle_chain_interior(const SaddleChainParams& p, std::uint64_t seed,
                                    double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tau = p.tau;
  const double pad = margin * tau;
  auto draw = [&](double lo, double hi) { return lo + pad + (hi - lo - 2.0 * pad) * unit(rng); };
  std::uniform_int_distribution<int> pick(0, 2 * p.n);
  const int choice = pick(rng);  // 2k: type1(k+1), 2k+1: type2(k+1), 2n: final
  const int prefix = choice / 2;
  Vector x(p.n);
  for (int j = 0; j < p.n; ++j) {
    if (j < prefix) {
      x(j) = draw(2.0 * tau, 6.0 * tau);
    } else if (j == prefix) {
      x(j) = choice % 2 == 0 ? draw(0.0, tau) : draw(tau, 2.0 * tau);
    } else {
      x(j) = draw(0.0, tau);
    }
  }
  return x;
}

ClosedFormProblem quadratic_problem(const Matrix& A, const Matrix& B, const Matrix& C,
                                    double rho) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = C.rows();
  if (A.cols() != n || C.cols() != m || B.rows() != n || B.cols() != m) {
    throw Error(ErrorKind::kDimensionMismatch, "quadratic blocks have inconsistent shapes");
  }
  if (n == 0 || m == 0) throw Error(ErrorKind::kInvalidArgument, "empty quadratic problem");
  if (!(rho > 0.0)) throw Error(ErrorKind::kInvalidArgument, "rho must be positive");
  const double scale = 1.0 + C.cwiseAbs().maxCoeff();
  if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::kNotPositiveDefinite, "C is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> ceig(C);
  if (ceig.info() != Eigen::Success || !(ceig.eigenvalues()(0) > 0.0)) {
    throw Error(ErrorKind::kNotPositiveDefinite, "C is not positive definite");
  }
  const Matrix As = 0.5 * (A + A.transpose());
  Eigen::LLT<Matrix> cllt(C);
  const Matrix CinvBt = cllt.solve(B.transpose());
  Matrix S = As + B * CinvBt;
  S = 0.5 * (S + S.transpose());

  Matrix full(n + m, n + m);
  full << As, B, B.transpose(), -C;

  ClosedFormProblem out;
  MinimaxProblem& prob = out.problem;
  prob.dim_x = static_cast<int>(n);
  prob.dim_y = static_cast<int>(m);
  prob.eval_f = [As, B, C](const Vector& x, const Vector& y) {
    return 0.5 * x.dot(As * x) + x.dot(B * y) - 0.5 * y.dot(C * y);
  };
  prob.grad_x = [As, B](const Vector& x, const Vector& y) -> Vector { return As * x + B * y; };
  prob.grad_y = [B, C](const Vector& x, const Vector& y) -> Vector {
    return B.transpose() * x - C * y;
  };
  prob.hess_xx = [As](const Vector&, const Vector&) -> Matrix { return As; };
  prob.hess_xy = [B](const Vector&, const Vector&) -> Matrix { return B; };
  prob.hess_yy = [C](const Vector&, const Vector&) -> Matrix { return -C; };
  prob.ell = std::max(spectral_norm(full), ceig.eigenvalues()(0));
  prob.mu = ceig.eigenvalues()(0);
  prob.rho = rho;

  out.y_star = [CinvBt](const Vector& x) -> Vector { return CinvBt * x; };
  out.P = [S](const Vector& x) { return 0.5 * x.dot(S * x); };
  out.grad_P = [S](const Vector& x) -> Vector { return S * x; };
  out.hess_P = [S](const Vector&) -> Matrix { return S; };
  Eigen::SelfAdjointEigenSolver<Matrix> seig(S, Eigen::EigenvaluesOnly);
  if (seig.eigenvalues()(0) >= 0.0) out.P_star = 0.0;
  return out;
}

ClosedFormProblem random_quadratic(std::uint64_t seed, int n, int m, bool convex, double rho) {
  if (n < 1 || m < 1) throw Error(ErrorKind::kInvalidArgument, "n and m must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto gaussian = [&](int r, int c) {
    Matrix M(r, c);
    for (int j = 0; j < c; ++j) {
      for (int i = 0; i < r; ++i) M(i, j) = normal(rng);
    }
    return M;
  };
  auto orthogonal = [&](int k) -> Matrix {
    Eigen::HouseholderQR<Matrix> qr(gaussian(k, k));
    return qr.householderQ() * Matrix::Identity(k, k);
  };
  Vector a(n);
  for (int i = 0; i < n; ++i) a(i) = convex ? 0.5 + 1.5 * unit(rng) : -2.0 + 4.0 * unit(rng);
  Vector c(m);
  for (int i = 0; i < m; ++i) c(i) = 1.0 + 2.0 * unit(rng);
  const Matrix Qa = orthogonal(n);
  const Matrix Qc = orthogonal(m);
  Matrix A = Qa * a.asDiagonal() * Qa.transpose();
  Matrix C = Qc * c.asDiagonal() * Qc.transpose();
  A = 0.5 * (A + A.transpose());
  C = 0.5 * (C + C.transpose());
  const Matrix B = gaussian(n, m) * (0.5 / std::sqrt(static_cast<double>(m)));
  return quadratic_problem(A, B, C, rho);
}

QuarticSaddleFixture quartic_saddle_problem(std::uint64_t seed, int n, int m, double box_radius) {
  if (n < 1 || m < 1) throw Error(ErrorKind::kInvalidArgument, "n and m must be positive");
  if (!(box_radius > 0.0)) throw Error(ErrorKind::kInvalidArgument, "box radius must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  QuarticSaddleFixture fx;
  fx.box_radius = box_radius;
  fx.a = Vector(n);
  for (int i = 0; i < n; ++i) fx.a(i) = 0.5 + unit(rng);
  Vector c(m);
  for (int i = 0; i < m; ++i) c(i) = 1.0 + unit(rng);
  fx.C = c.asDiagonal();
  Matrix B(n, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) B(i, j) = normal(rng);
  }
  // Keep ||B C^-1 B^T|| <= 1/4 < min a so the origin stays a strict saddle.
  const double bnorm = spectral_norm(B);
  if (bnorm > 0.0) B *= 0.5 * std::sqrt(c.minCoeff()) / bnorm;
  fx.B = B;

  const Vector a = fx.a;
  const Matrix C = fx.C;
  const Matrix CinvBt = C.llt().solve(B.transpose());
  const Matrix S = B * CinvBt;
  const double R = box_radius;

  ClosedFormProblem& out = fx.closed;
  MinimaxProblem& prob = out.problem;
  prob.dim_x = n;
  prob.dim_y = m;
  prob.eval_f = [a, B, C](const Vector& x, const Vector& y) {
    const Vector x2 = x.cwiseProduct(x);
    return 0.25 * x2.squaredNorm() - 0.5 * a.dot(x2) + x.dot(B * y) - 0.5 * y.dot(C * y);
  };
  prob.grad_x = [a, B](const Vector& x, const Vector& y) -> Vector {
    return x.cwiseProduct(x).cwiseProduct(x) - a.cwiseProduct(x) + B * y;
  };
  prob.grad_y = [B, C](const Vector& x, const Vector& y) -> Vector {
    return B.transpose() * x - C * y;
  };
  prob.hess_xx = [a](const Vector& x, const Vector&) -> Matrix {
    Vector d = 3.0 * x.cwiseProduct(x) - a;
    return d.asDiagonal();
  };
  prob.hess_xy = [B](const Vector&, const Vector&) -> Matrix { return B; };
  prob.hess_yy = [C](const Vector&, const Vector&) -> Matrix { return -C; };

  const double xx_bound = std::max(3.0 * R * R - a.minCoeff(), a.maxCoeff());
  prob.ell = std::max(xx_bound, c.maxCoeff()) + spectral_norm(B);
  prob.mu = c.minCoeff();
  prob.rho = 6.0 * R;
  prob.envelope = DerivedConstants{xx_bound + spectral_norm(S), 6.0 * R, 6.0 * R};
  prob.in_domain = [R](const Vector& x) { return x.allFinite() && x.cwiseAbs().maxCoeff() <= R; };

  out.y_star = [CinvBt](const Vector& x) -> Vector { return CinvBt * x; };
  out.P = [a, S](const Vector& x) {
    const Vector x2 = x.cwiseProduct(x);
    return 0.25 * x2.squaredNorm() - 0.5 * a.dot(x2) + 0.5 * x.dot(S * x);
  };
  out.grad_P = [a, S](const Vector& x) -> Vector {
    return x.cwiseProduct(x).cwiseProduct(x) - a.cwiseProduct(x) + S * x;
  };
  out.hess_P = [a, S](const Vector& x) -> Matrix {
    Matrix H = S;
    H.diagonal() += 3.0 * x.cwiseProduct(x) - a;
    return H;
  };
  return fx;
}

}  // namespace minimax
