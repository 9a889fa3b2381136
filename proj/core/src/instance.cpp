#include "minimax/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "minimax/errors.hpp"

namespace minimax {

namespace {

std::string kind_name(ProblemKind kind) {
  return kind == ProblemKind::kSaddleChain ? "saddle_chain" : "quadratic";
}

void require_positive(const KeyValueFile& file, std::string_view key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::kConfig, file.where(*file.find(key), "must be positive"));
  }
}

}  // namespace

const std::set<std::string, std::less<>>& problem_spec_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "problem",       "problem.n",     "problem.m",     "problem.L",
      "problem.gamma", "problem.tau",   "problem.nu",    "problem.ell",
      "problem.mu",    "problem.rho",   "problem.ell_g", "problem.rho_g",
      "problem.seed",  "problem.convex"};
  return keys;
}

ProblemSpec problem_spec_from(const KeyValueFile& file) {
  ProblemSpec spec;
  const std::string kind = file.get_string("problem");
  const long n = file.get_int_opt("problem.n").value_or(kind == "quadratic" ? 3 : 10);
  const long m = file.get_int_opt("problem.m").value_or(kind == "quadratic" ? 2 : 5);
  if (n < 1 || n > 100000 || m < 1 || m > 100000) {
    const KeyValueEntry* e = file.find(n < 1 || n > 100000 ? "problem.n" : "problem.m");
    throw Error(ErrorKind::kConfig, file.where(*e, "dimension out of range"));
  }

  if (kind == "saddle_chain") {
    spec.kind = ProblemKind::kSaddleChain;
    const double L = file.get_double_opt("problem.L").value_or(1.0);
    const double gamma = file.get_double_opt("problem.gamma").value_or(1.0);
    const double tau = file.get_double_opt("problem.tau").value_or(std::exp(1.0));
    if (file.contains("problem.L")) require_positive(file, "problem.L", L);
    if (file.contains("problem.gamma")) require_positive(file, "problem.gamma", gamma);
    if (file.contains("problem.tau")) require_positive(file, "problem.tau", tau);
    spec.chain = make_saddle_chain_params(static_cast<int>(n), static_cast<int>(m), L, gamma, tau);
    if (auto nu = file.get_double_opt("problem.nu")) {
      if (std::abs(*nu - spec.chain.nu) > 1e-9 * (1.0 + std::abs(spec.chain.nu))) {
        throw Error(ErrorKind::kConfig,
                    file.where(*file.find("problem.nu"),
                               "inconsistent with L, gamma, tau (expected " +
                                   format_double(spec.chain.nu) + ")"));
      }
    }
    const auto ell_g = file.get_double_opt("problem.ell_g");
    const auto rho_g = file.get_double_opt("problem.rho_g");
    if (ell_g && rho_g) {
      require_positive(file, "problem.ell_g", *ell_g);
      require_positive(file, "problem.rho_g", *rho_g);
      spec.constants.ell_g = *ell_g;
      spec.constants.rho_g = *rho_g;
      spec.constants.ell = file.get_double_opt("problem.ell").value_or(std::max(*ell_g, 1.0));
      spec.constants.mu = file.get_double_opt("problem.mu").value_or(1.0);
      spec.constants.rho = file.get_double_opt("problem.rho").value_or(*rho_g);
    } else {
      spec.constants = estimate_saddle_chain_constants(spec.chain);
    }
  } else if (kind == "quadratic") {
    spec.kind = ProblemKind::kQuadratic;
    spec.n = static_cast<int>(n);
    spec.m = static_cast<int>(m);
    spec.seed = file.get_uint_opt("problem.seed").value_or(0);
    spec.convex = file.get_bool_opt("problem.convex").value_or(true);
    spec.rho = file.get_double_opt("problem.rho").value_or(1e-2);
    if (file.contains("problem.rho")) require_positive(file, "problem.rho", spec.rho);
  } else {
    throw Error(ErrorKind::kConfig, file.where(*file.find("problem"),
                                               "expected saddle_chain or quadratic, got '" +
                                                   kind + "'"));
  }
  return spec;
}

std::string format_problem_spec(const ProblemSpec& spec) {
  std::ostringstream out;
  out << "problem = " << kind_name(spec.kind) << "\n";
  if (spec.kind == ProblemKind::kSaddleChain) {
    const SaddleChainParams& p = spec.chain;
    const SaddleChainConstants& c = spec.constants;
    out << "problem.n = " << p.n << "\n"
        << "problem.m = " << p.m << "\n"
        << "problem.L = " << format_double(p.L) << "\n"
        << "problem.gamma = " << format_double(p.gamma) << "\n"
        << "problem.tau = " << format_double(p.tau) << "\n"
        << "problem.nu = " << format_double(p.nu) << "\n"
        << "problem.ell = " << format_double(c.ell) << "\n"
        << "problem.mu = " << format_double(c.mu) << "\n"
        << "problem.rho = " << format_double(c.rho) << "\n"
        << "problem.ell_g = " << format_double(c.ell_g) << "\n"
        << "problem.rho_g = " << format_double(c.rho_g) << "\n";
  } else {
    out << "problem.n = " << spec.n << "\n"
        << "problem.m = " << spec.m << "\n"
        << "problem.seed = " << spec.seed << "\n"
        << "problem.convex = " << (spec.convex ? "true" : "false") << "\n"
        << "problem.rho = " << format_double(spec.rho) << "\n";
  }
  return out.str();
}

void write_problem_spec(const std::filesystem::path& path, const ProblemSpec& spec) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIO, "cannot write " + path.string());
  out << format_problem_spec(spec);
  if (!out) throw Error(ErrorKind::kIO, "failed writing " + path.string());
}

ProblemSpec read_problem_spec(const std::filesystem::path& path) {
  const KeyValueFile file = KeyValueFile::load(path);
  file.reject_unknown(problem_spec_keys());
  return problem_spec_from(file);
}

ClosedFormProblem build_problem(const ProblemSpec& spec) {
  if (spec.kind == ProblemKind::kSaddleChain) {
    return saddle_chain_problem(spec.chain, spec.constants);
  }
  return random_quadratic(spec.seed, spec.n, spec.m, spec.convex, spec.rho);
}

}  // namespace minimax
