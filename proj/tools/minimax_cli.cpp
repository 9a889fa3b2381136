// minimax: run solver experiments, plot traces, certify points, check derivatives.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime error.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "minimax/drivers.hpp"
#include "minimax/errors.hpp"
#include "minimax/experiment.hpp"
#include "minimax/instance.hpp"
#include "minimax/keyvalue.hpp"
#include "minimax/plot.hpp"
#include "minimax/problems.hpp"
#include "minimax/trace.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

minimax::Vector read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw minimax::Error(minimax::ErrorKind::kIO, "cannot open " + path);
  std::vector<double> values;
  std::string token;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& c : line) {
      if (c == ',' || c == ';') c = ' ';
    }
    std::istringstream ls(line);
    while (ls >> token) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw minimax::Error(minimax::ErrorKind::kParse, path + ":" + std::to_string(line_no) +
                                                             ": not a number '" + token + "'");
      }
      values.push_back(v);
    }
  }
  return Eigen::Map<minimax::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::optional<std::uint64_t>& seed, int jobs) {
  if (!std::filesystem::is_regular_file(config_path)) {
    std::fprintf(stderr, "error: config file '%s' not found\n", config_path.c_str());
    return kExitConfig;
  }
  minimax::ExperimentConfig cfg = minimax::load_experiment_config(config_path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (seed) {
    cfg.seed = *seed;
    for (auto& a : cfg.algorithms) a.solver.seed = *seed;
  }
  const auto runs = minimax::run_experiment(cfg, jobs);
  for (const auto& r : runs) {
    std::printf("%-11s rep %-3d iters %-7ld gap %-12s certified %-5s time %.3fs\n",
                r.algorithm.c_str(), r.repetition, r.iterations,
                r.final_gap ? minimax::format_double(*r.final_gap).c_str() : "-",
                r.certificate ? (r.certificate->satisfied ? "yes" : "no") : "-", r.wall_time_s);
  }
  if (runs.empty()) std::printf("no runs (repetitions = 0)\n");
  return 0;
}

int cmd_plot(const std::string& mode_name, const std::string& out,
             const std::optional<double>& p_star, const std::vector<std::string>& traces) {
  const auto mode = minimax::plot_mode_from_string(mode_name);
  if (!mode) {
    std::fprintf(stderr, "error: unknown plot mode '%s'\n", mode_name.c_str());
    return kExitConfig;
  }
  if (traces.empty()) {
    std::fprintf(stderr, "error: no trace files given\n");
    return kExitConfig;
  }
  std::vector<minimax::PlotSeries> series;
  for (const auto& path : traces) {
    series.push_back({std::filesystem::path(path).stem().string(), minimax::read_trace_file(path)});
  }
  minimax::write_plot(out, series, *mode, p_star);
  return 0;
}

int cmd_certify(const std::string& problem_path, const std::string& x_path, double epsilon,
                const std::string& rule_name) {
  const minimax::ProblemSpec spec = minimax::read_problem_spec(problem_path);
  const minimax::ClosedFormProblem problem = minimax::build_problem(spec);
  const minimax::Vector x = read_vector_file(x_path);
  minimax::CertificateRule rule;
  if (rule_name == "grtr") {
    rule = minimax::CertificateRule::kGrtr;
  } else if (rule_name == "lmnegcur") {
    rule = minimax::CertificateRule::kLmNegCur;
  } else {
    std::fprintf(stderr, "error: --rule must be grtr or lmnegcur\n");
    return kExitConfig;
  }
  const auto rep = minimax::certify(problem.problem, x, epsilon, rule);
  std::printf("grad_norm = %s\nmin_eig = %s\nxi_bound = %s\ntheta_bound = %s\nsatisfied = %s\n",
              minimax::format_double(rep.grad_norm).c_str(),
              minimax::format_double(rep.min_eig).c_str(),
              minimax::format_double(rep.xi_bound).c_str(),
              minimax::format_double(rep.theta_bound).c_str(), rep.satisfied ? "true" : "false");
  return 0;
}

int cmd_validate(const std::string& problem_path, int samples, double step, double tol) {
  const minimax::ProblemSpec spec = minimax::read_problem_spec(problem_path);
  const minimax::ClosedFormProblem problem = minimax::build_problem(spec);
  const auto& prob = problem.problem;
  auto sample = [&](std::uint64_t k) -> minimax::Vector {
    minimax::Vector z(prob.dim_x + prob.dim_y);
    if (spec.kind == minimax::ProblemKind::kSaddleChain) {
      z.head(prob.dim_x) = minimax::sample_saddle_chain_interior(spec.chain, k);
    } else {
      z.head(prob.dim_x) = minimax::experiment_y0({}, prob.dim_x, static_cast<int>(k));
    }
    z.tail(prob.dim_y) = minimax::experiment_y0({}, prob.dim_y, static_cast<int>(k + 1000003));
    return z;
  };
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    worst = std::max(worst, minimax::validate_derivatives(prob, sample(k), step).max());
  }
  const auto assumptions = minimax::sample_assumptions(prob, sample, samples);
  std::printf("derivative_max_error = %s\nconcavity_violation = %s\n"
              "mixed_partial_mismatch = %s\nhessian_asymmetry = %s\n",
              minimax::format_double(worst).c_str(),
              minimax::format_double(assumptions.max_concavity_violation).c_str(),
              minimax::format_double(assumptions.max_mixed_partial_mismatch).c_str(),
              minimax::format_double(assumptions.max_hessian_asymmetry).c_str());
  const bool ok = worst <= tol && assumptions.max_concavity_violation <= tol;
  std::printf("status = %s\n", ok ? "ok" : "failed");
  return ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order minimax solvers: experiments, plots and certificates"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  run->add_option("--config", config_path, "key = value experiment file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--seed", seed, "Random seed (overrides seed)");
  run->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  std::string mode;
  std::string plot_out;
  std::optional<double> p_star;
  std::vector<std::string> traces;
  auto* plot = app.add_subcommand("plot", "Render trace files as an SVG plot");
  plot->add_option("--mode", mode, "gap_vs_time or gnorm_vs_iter")->required();
  plot->add_option("--out", plot_out, "Output SVG file")->required();
  plot->add_option("--p-star", p_star, "Optimal value used for gaps");
  plot->add_option("traces", traces, "Trace CSV files");

  std::string problem_path;
  std::string x_path;
  double epsilon = 0.0;
  std::string rule = "grtr";
  auto* cert = app.add_subcommand("certify", "Certify approximate second-order stationarity");
  cert->add_option("--problem", problem_path, "Instance file")->required();
  cert->add_option("--x", x_path, "File with the point's coordinates")->required();
  cert->add_option("--epsilon", epsilon, "Target accuracy")->required()->check(CLI::PositiveNumber);
  cert->add_option("--rule", rule, "Certificate constants: grtr or lmnegcur");

  std::string validate_problem;
  int samples = 20;
  double step = 1e-5;
  double tol = 1e-4;
  auto* validate = app.add_subcommand("validate", "Finite-difference derivative checks");
  validate->add_option("--problem", validate_problem, "Instance file")->required();
  validate->add_option("--samples", samples, "Number of sample points")->check(CLI::PositiveNumber);
  validate->add_option("--step", step, "Central-difference step")->check(CLI::PositiveNumber);
  validate->add_option("--tol", tol, "Maximum accepted relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, seed, jobs);
    if (*plot) return cmd_plot(mode, plot_out, p_star, traces);
    if (*cert) return cmd_certify(problem_path, x_path, epsilon, rule);
    if (*validate) return cmd_validate(validate_problem, samples, step, tol);
  } catch (const minimax::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const bool config = e.kind() == minimax::ErrorKind::kConfig;
    return config ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitConfig;
}
