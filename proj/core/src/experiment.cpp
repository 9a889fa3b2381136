#include "minimax/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "minimax/errors.hpp"
#include "minimax/trace.hpp"

namespace minimax {

namespace {

constexpr Algorithm kAllAlgorithms[] = {Algorithm::kGrtr, Algorithm::kLmNegCur, Algorithm::kGda,
                                        Algorithm::kMinimaxTr};

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

void apply_solver_overrides(const KeyValueFile& file, std::string_view prefix, SolverConfig& cfg) {
  static const std::set<std::string, std::less<>> fields = {
      "sigma", "r", "eps1", "eps2", "subproblem", "cg_iters", "max_outer_iters",
      "inner_max_iters", "accelerated_inner", "time_limit", "fixed_radius"};
  for (const auto& e : file.entries()) {
    if (!e.key.starts_with(prefix)) continue;
    const std::string field = e.key.substr(prefix.size());
    if (!fields.contains(field)) throw Error(ErrorKind::kConfig, file.where(e, "unknown field"));
  }
  const std::string p(prefix);
  auto positive = [&](const std::string& key) -> std::optional<double> {
    auto v = file.get_double_opt(key);
    if (v && !(*v > 0.0)) throw Error(ErrorKind::kConfig, file.where(*file.find(key), "must be positive"));
    return v;
  };
  if (auto v = file.get_double_opt(p + "sigma")) {
    if (!(*v >= 0.0)) {
      throw Error(ErrorKind::kConfig, file.where(*file.find(p + "sigma"), "must be nonnegative"));
    }
    cfg.sigma = v;
  }
  if (auto v = positive(p + "r")) cfg.r = v;
  if (auto v = positive(p + "eps1")) cfg.eps1 = v;
  if (auto v = positive(p + "eps2")) cfg.eps2 = v;
  if (auto v = positive(p + "time_limit")) cfg.time_limit = v;
  if (auto mode = file.get_string_opt(p + "subproblem")) {
    if (*mode == "exact") {
      cfg.subproblem = SubproblemMode::kExact;
    } else if (*mode == "cg") {
      cfg.subproblem = SubproblemMode::kCg;
    } else {
      throw Error(ErrorKind::kConfig,
                  file.where(*file.find(p + "subproblem"), "expected exact or cg"));
    }
  }
  auto positive_int = [&](const std::string& key) -> std::optional<long> {
    auto v = file.get_int_opt(key);
    if (v && *v < 1) throw Error(ErrorKind::kConfig, file.where(*file.find(key), "must be >= 1"));
    return v;
  };
  if (auto v = positive_int(p + "cg_iters")) cfg.cg_iters = static_cast<int>(*v);
  if (auto v = positive_int(p + "max_outer_iters")) cfg.max_outer_iters = *v;
  if (auto v = positive_int(p + "inner_max_iters")) cfg.inner_max_iters = static_cast<int>(*v);
  if (auto v = file.get_bool_opt(p + "accelerated_inner")) cfg.accelerated_inner = *v;
  if (auto v = file.get_bool_opt(p + "fixed_radius")) cfg.fixed_radius = *v;
}

void apply_gda_overrides(const KeyValueFile& file, GdaConfig& cfg) {
  static const std::set<std::string, std::less<>> fields = {"step_x", "step_y", "max_iters",
                                                            "time_limit"};
  for (const auto& e : file.entries()) {
    if (!e.key.starts_with("gda.")) continue;
    if (!fields.contains(e.key.substr(4))) {
      throw Error(ErrorKind::kConfig, file.where(e, "unknown field"));
    }
  }
  if (auto v = file.get_double_opt("gda.step_x")) {
    if (!(*v >= 0.0)) throw Error(ErrorKind::kConfig, file.where(*file.find("gda.step_x"), "must be nonnegative"));
    cfg.step_x = *v;
  }
  if (auto v = file.get_double_opt("gda.step_y")) {
    if (!(*v > 0.0)) throw Error(ErrorKind::kConfig, file.where(*file.find("gda.step_y"), "must be positive"));
    cfg.step_y = *v;
  }
  if (auto v = file.get_int_opt("gda.max_iters")) {
    if (*v < 0) throw Error(ErrorKind::kConfig, file.where(*file.find("gda.max_iters"), "must be >= 0"));
    cfg.max_iters = *v;
  }
  if (auto v = file.get_double_opt("gda.time_limit")) {
    if (!(*v > 0.0)) throw Error(ErrorKind::kConfig, file.where(*file.find("gda.time_limit"), "must be positive"));
    cfg.time_limit = *v;
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIO, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIO, "failed writing " + path.string());
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kGrtr: return "grtr";
    case Algorithm::kLmNegCur: return "lmnegcur";
    case Algorithm::kGda: return "gda";
    case Algorithm::kMinimaxTr: return "minimax_tr";
  }
  return "grtr";
}

std::optional<Algorithm> algorithm_from_string(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

ExperimentConfig parse_experiment_config(const KeyValueFile& file) {
  std::set<std::string, std::less<>> known = problem_spec_keys();
  for (const char* k : {"algorithms", "epsilon", "repetitions", "output_dir", "time_limit", "seed",
                        "x0", "y0_scale"}) {
    known.insert(k);
  }
  file.reject_unknown(known, {"grtr.", "lmnegcur.", "minimax_tr.", "gda."});

  ExperimentConfig cfg;
  cfg.problem = problem_spec_from(file);

  const KeyValueEntry* algos = file.find("algorithms");
  if (!algos) throw Error(ErrorKind::kConfig, file.source() + ": missing required field 'algorithms'");
  for (const std::string& name : split_list(algos->value)) {
    const auto a = algorithm_from_string(name);
    if (!a) throw Error(ErrorKind::kConfig, file.where(*algos, "unknown algorithm '" + name + "'"));
    for (const auto& existing : cfg.algorithms) {
      if (existing.algorithm == *a) {
        throw Error(ErrorKind::kConfig, file.where(*algos, "algorithm '" + name + "' listed twice"));
      }
    }
    cfg.algorithms.push_back(AlgorithmSpec{*a, {}, {}});
  }

  cfg.epsilon = file.get_double_opt("epsilon").value_or(1e-2);
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    throw Error(ErrorKind::kConfig, file.where(*file.find("epsilon"), "must be positive"));
  }
  const long reps = file.get_int_opt("repetitions").value_or(1);
  if (reps < 0 || reps > 1000000) {
    throw Error(ErrorKind::kConfig, file.where(*file.find("repetitions"), "must be in [0, 1e6]"));
  }
  cfg.repetitions = static_cast<int>(reps);
  if (auto dir = file.get_string_opt("output_dir")) {
    if (dir->empty()) throw Error(ErrorKind::kConfig, file.where(*file.find("output_dir"), "empty path"));
    cfg.output_dir = *dir;
  }
  if (auto t = file.get_double_opt("time_limit")) {
    if (!(*t > 0.0)) throw Error(ErrorKind::kConfig, file.where(*file.find("time_limit"), "must be positive"));
    cfg.time_limit = t;
  }
  cfg.seed = file.get_uint_opt("seed").value_or(0);
  cfg.x0_fill = file.get_double_opt("x0");
  cfg.y0_scale = file.get_double_opt("y0_scale").value_or(1.0);
  if (!(cfg.y0_scale >= 0.0)) {
    throw Error(ErrorKind::kConfig, file.where(*file.find("y0_scale"), "must be nonnegative"));
  }

  for (auto& spec : cfg.algorithms) {
    spec.solver.epsilon = cfg.epsilon;
    spec.solver.time_limit = cfg.time_limit;
    spec.gda.time_limit = cfg.time_limit;
    spec.solver.seed = cfg.seed;
  }
  // Overrides for algorithms not listed are still validated.
  SolverConfig scratch;
  for (Algorithm a : {Algorithm::kGrtr, Algorithm::kLmNegCur, Algorithm::kMinimaxTr}) {
    const std::string prefix = std::string(to_string(a)) + ".";
    bool used = false;
    for (auto& spec : cfg.algorithms) {
      if (spec.algorithm == a) {
        apply_solver_overrides(file, prefix, spec.solver);
        used = true;
      }
    }
    if (!used) apply_solver_overrides(file, prefix, scratch);
  }
  GdaConfig gda_scratch;
  bool gda_used = false;
  for (auto& spec : cfg.algorithms) {
    if (spec.algorithm == Algorithm::kGda) {
      apply_gda_overrides(file, spec.gda);
      gda_used = true;
    }
  }
  if (!gda_used) apply_gda_overrides(file, gda_scratch);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(KeyValueFile::load(path));
}

Vector experiment_x0(const ExperimentConfig& config, const ClosedFormProblem& problem) {
  const double fill =
      config.x0_fill.value_or(config.problem.kind == ProblemKind::kSaddleChain ? 1e-3 : 1.0);
  return Vector::Constant(problem.problem.dim_x, fill);
}

Vector experiment_y0(const ExperimentConfig& config, int dim_y, int rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed & 0xffffffffu),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(rep)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector y(dim_y);
  for (int i = 0; i < dim_y; ++i) y(i) = config.y0_scale * normal(rng);
  return y;
}

SolverResult run_algorithm(const AlgorithmSpec& spec, const ClosedFormProblem& problem,
                           const Vector& x0, const Vector& y0) {
  switch (spec.algorithm) {
    case Algorithm::kGrtr: return run_grtr(problem.problem, x0, y0, spec.solver);
    case Algorithm::kLmNegCur: return run_lmnegcur(problem.problem, x0, y0, spec.solver);
    case Algorithm::kMinimaxTr: return run_minimax_tr(problem.problem, x0, y0, spec.solver);
    case Algorithm::kGda: return run_gda(problem.problem, x0, y0, spec.gda);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown algorithm");
}

std::vector<RunSummary> run_experiment(const ExperimentConfig& config, int jobs) {
  if (config.algorithms.empty()) throw Error(ErrorKind::kConfig, "no algorithms configured");
  if (config.repetitions == 0) return {};
  if (jobs < 1) throw Error(ErrorKind::kInvalidArgument, "jobs must be >= 1");

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIO, "cannot create " + config.output_dir.string() + ": " + ec.message());
  }
  write_text(config.output_dir / "instance.txt", format_problem_spec(config.problem));

  const ClosedFormProblem problem = build_problem(config.problem);
  const Vector x0 = experiment_x0(config, problem);

  struct Task {
    const AlgorithmSpec* spec;
    int rep;
  };
  std::vector<Task> tasks;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    for (const auto& spec : config.algorithms) tasks.push_back({&spec, rep});
  }
  std::vector<RunSummary> summaries(tasks.size());

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      {
        std::lock_guard lock(error_mutex);
        if (first_error) return;
      }
      try {
        const Task& task = tasks[i];
        const Vector y0 = experiment_y0(config, problem.problem.dim_y, task.rep);
        SolverResult res = run_algorithm(*task.spec, problem, x0, y0);
        if (task.spec->algorithm == Algorithm::kGda) {
          CertifyOptions opts;
          opts.y_start = res.y_final;
          res.report = certify(problem.problem, res.x_final, config.epsilon,
                               CertificateRule::kGrtr, opts);
        }
        RunSummary& s = summaries[i];
        s.algorithm = std::string(to_string(task.spec->algorithm));
        s.repetition = task.rep;
        for (const auto& r : res.trace) {
          if (r.step_kind != StepKind::kStop) ++s.iterations;
        }
        s.inner_iterations_total = res.inner_iterations_total;
        s.final_P = problem.P(res.x_final);
        if (problem.P_star) s.final_gap = s.final_P - *problem.P_star;
        s.certificate = res.report;
        s.converged = res.converged;
        s.truncated = res.truncated;
        s.wall_time_s = res.wall_time_s;
        s.trace_file = s.algorithm + "_rep" + std::to_string(task.rep) + ".csv";
        write_trace_file(config.output_dir / s.trace_file, res.trace);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  const int workers = static_cast<int>(std::min<std::size_t>(jobs, tasks.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  write_text(config.output_dir / "summary.txt", format_summary(summaries));
  return summaries;
}

std::string format_summary(const std::vector<RunSummary>& runs) {
  std::ostringstream out;
  out << "runs = " << runs.size() << "\n";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const RunSummary& s = runs[k];
    const std::string p = "run." + std::to_string(k) + ".";
    out << p << "algorithm = " << s.algorithm << "\n"
        << p << "repetition = " << s.repetition << "\n"
        << p << "iterations = " << s.iterations << "\n"
        << p << "inner_iterations_total = " << s.inner_iterations_total << "\n"
        << p << "final_P = " << format_double(s.final_P) << "\n";
    if (s.final_gap) out << p << "final_gap = " << format_double(*s.final_gap) << "\n";
    if (s.certificate) {
      const StationarityReport& c = *s.certificate;
      out << p << "certificate.grad_norm = " << format_double(c.grad_norm) << "\n"
          << p << "certificate.min_eig = " << format_double(c.min_eig) << "\n"
          << p << "certificate.xi_bound = " << format_double(c.xi_bound) << "\n"
          << p << "certificate.theta_bound = " << format_double(c.theta_bound) << "\n"
          << p << "certificate.satisfied = " << (c.satisfied ? "true" : "false") << "\n";
    }
    out << p << "converged = " << (s.converged ? "true" : "false") << "\n"
        << p << "truncated = " << (s.truncated ? "true" : "false") << "\n"
        << p << "wall_time_s = " << format_double(s.wall_time_s) << "\n"
        << p << "trace = " << s.trace_file << "\n";
  }
  return out.str();
}

}  // namespace minimax
