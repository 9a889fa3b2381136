#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "minimax/drivers.hpp"

namespace minimax {

enum class PlotMode { kGapVsTime, kGnormVsIter };

std::optional<PlotMode> plot_mode_from_string(std::string_view name);

struct PlotSeries {
  std::string label;
  std::vector<IterationRecord> records;
};

/// SVG line plot with a log-scale vertical axis and one labeled curve per
/// series. Gaps are P_estimate - p_star; without p_star the smallest
/// P_estimate over all series is used. Throws kInvalidArgument on an empty
/// series list.
std::string render_plot_svg(const std::vector<PlotSeries>& series, PlotMode mode,
                            std::optional<double> p_star = std::nullopt);

/// Renders first and writes only on success.
void write_plot(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
                PlotMode mode, std::optional<double> p_star = std::nullopt);

/// P_estimate - p_star at the last row with wall_time_s <= time (the first
/// row if none qualifies).
double gap_at_time(const std::vector<IterationRecord>& records, double time, double p_star);

}  // namespace minimax
