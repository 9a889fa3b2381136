#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "minimax/keyvalue.hpp"
#include "minimax/problems.hpp"

namespace minimax {

enum class ProblemKind { kSaddleChain, kQuadratic };

/// Everything needed to rebuild a benchmark instance bit-for-bit.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::kSaddleChain;

  SaddleChainParams chain = make_saddle_chain_params(10, 5, 1.0, 1.0);
  SaddleChainConstants constants;  // estimated when absent from the file

  int n = 3;
  int m = 2;
  std::uint64_t seed = 0;
  bool convex = true;
  double rho = 1e-2;
};

/// Reads `problem.*` fields (problem, problem.n, problem.m, problem.L, ...)
/// from a config or instance file. Saddle-chain constants are read from
/// problem.ell_g / problem.rho_g when present, otherwise estimated.
ProblemSpec problem_spec_from(const KeyValueFile& file);

/// Instance file text: all fields including nu and the estimated constants.
std::string format_problem_spec(const ProblemSpec& spec);

void write_problem_spec(const std::filesystem::path& path, const ProblemSpec& spec);
ProblemSpec read_problem_spec(const std::filesystem::path& path);

ClosedFormProblem build_problem(const ProblemSpec& spec);

/// Keys accepted by problem_spec_from.
const std::set<std::string, std::less<>>& problem_spec_keys();

}  // namespace minimax
