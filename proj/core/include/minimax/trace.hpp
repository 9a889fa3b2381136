#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "minimax/drivers.hpp"

namespace minimax {

/// Column order of the trace CSV. Absent optional values are empty fields.
inline constexpr const char* kTraceHeader =
    "t,x_norm,g_norm,lambda,lambda_min_H,step_norm,step_kind,P_estimate,inner_iters,"
    "wall_time_s,domain_event";

void write_trace(std::ostream& out, const std::vector<IterationRecord>& trace);
void write_trace_file(const std::filesystem::path& path,
                      const std::vector<IterationRecord>& trace);

/// Throws kParse with source:line on malformed input.
std::vector<IterationRecord> parse_trace(std::istream& in, const std::string& source = "<trace>");
std::vector<IterationRecord> read_trace_file(const std::filesystem::path& path);

}  // namespace minimax
