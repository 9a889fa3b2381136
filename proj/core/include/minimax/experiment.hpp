#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minimax/drivers.hpp"
#include "minimax/instance.hpp"
#include "minimax/keyvalue.hpp"

namespace minimax {

enum class Algorithm { kGrtr, kLmNegCur, kGda, kMinimaxTr };

std::string_view to_string(Algorithm algo);
std::optional<Algorithm> algorithm_from_string(std::string_view name);

struct AlgorithmSpec {
  Algorithm algorithm = Algorithm::kGrtr;
  SolverConfig solver;  // unused by GDA
  GdaConfig gda;        // used by GDA only
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<AlgorithmSpec> algorithms;
  double epsilon = 1e-2;
  int repetitions = 1;
  std::filesystem::path output_dir = "results";
  std::optional<double> time_limit;
  std::uint64_t seed = 0;
  std::optional<double> x0_fill;  // default 1e-3 for the saddle chain, 1 otherwise
  double y0_scale = 1.0;          // y0 ~ y0_scale * N(0, I)
};

/// Keys: problem.*, algorithms, epsilon, repetitions, output_dir, time_limit,
/// seed, x0, y0_scale, and per-algorithm overrides `<algo>.<field>`.
/// Unknown keys raise kConfig naming the line.
ExperimentConfig parse_experiment_config(const KeyValueFile& file);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct RunSummary {
  std::string algorithm;
  int repetition = 0;
  long iterations = 0;  // steps taken
  long inner_iterations_total = 0;
  double final_P = 0.0;
  std::optional<double> final_gap;  // P(x_T) - P* when P* is known
  std::optional<StationarityReport> certificate;
  bool converged = false;
  bool truncated = false;
  double wall_time_s = 0.0;
  std::string trace_file;  // relative to output_dir
};

/// Starting points for repetition `rep`; shared by every algorithm.
Vector experiment_x0(const ExperimentConfig& config, const ClosedFormProblem& problem);
Vector experiment_y0(const ExperimentConfig& config, int dim_y, int rep);

/// Runs one (algorithm, repetition) pair without touching the filesystem.
SolverResult run_algorithm(const AlgorithmSpec& spec, const ClosedFormProblem& problem,
                           const Vector& x0, const Vector& y0);

/// Writes instance.txt, <algo>_rep<k>.csv per run and summary.txt under
/// output_dir. Runs execute on up to `jobs` threads; the summary is written
/// once all runs finish. repetitions == 0 writes nothing.
std::vector<RunSummary> run_experiment(const ExperimentConfig& config, int jobs = 1);

std::string format_summary(const std::vector<RunSummary>& runs);

}  // namespace minimax
