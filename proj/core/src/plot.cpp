#include "minimax/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "minimax/errors.hpp"

namespace minimax {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 180.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;
constexpr double kFloor = 1e-16;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Point {
  double x;
  double y;
};

}  // namespace

std::optional<PlotMode> plot_mode_from_string(std::string_view name) {
  if (name == "gap_vs_time") return PlotMode::kGapVsTime;
  if (name == "gnorm_vs_iter") return PlotMode::kGnormVsIter;
  return std::nullopt;
}

std::string render_plot_svg(const std::vector<PlotSeries>& series, PlotMode mode,
                            std::optional<double> p_star) {
  if (series.empty()) throw Error(ErrorKind::kInvalidArgument, "no traces to plot");

  double ref = 0.0;
  if (mode == PlotMode::kGapVsTime) {
    if (p_star) {
      ref = *p_star;
    } else {
      ref = std::numeric_limits<double>::infinity();
      for (const auto& s : series) {
        for (const auto& r : s.records) ref = std::min(ref, r.P_estimate);
      }
      if (!std::isfinite(ref)) ref = 0.0;
    }
  }

  std::vector<std::vector<Point>> curves;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : series) {
    std::vector<Point> pts;
    for (const auto& r : s.records) {
      const double x = mode == PlotMode::kGapVsTime ? r.wall_time_s : static_cast<double>(r.t);
      const double raw = mode == PlotMode::kGapVsTime ? r.P_estimate - ref : r.g_norm;
      if (!std::isfinite(x) || !std::isfinite(raw)) continue;
      const double y = std::log10(std::max(raw, kFloor));
      pts.push_back({x, y});
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    curves.push_back(std::move(pts));
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1.0;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int decades = static_cast<int>(ymax - ymin);
  const int ystride = std::max(1, decades / 10);
  for (int k = static_cast<int>(ymin); k <= static_cast<int>(ymax); k += ystride) {
    const double y = sy(k);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\""
        << y << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << k << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double x = sx(xv);
    svg << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18
        << "\" font-size=\"12\" text-anchor=\"middle\">" << xv << "</text>\n";
  }
  const char* xlabel = mode == PlotMode::kGapVsTime ? "wall time (s)" : "iteration";
  const char* ylabel = mode == PlotMode::kGapVsTime ? "P(x) - P*" : "||g||";
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
      << "\" font-size=\"14\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kTop + ph / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << kTop + ph / 2
      << ")\">" << ylabel << "</text>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : curves[i]) svg << sx(p.x) << ',' << sy(p.y) << ' ';
    svg << "\"/>\n";
    const double ly = kTop + 20.0 * (i + 1);
    svg << "<line x1=\"" << kLeft + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 30
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kLeft + pw + 36 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
        << escape_xml(series[i].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_plot(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
                PlotMode mode, std::optional<double> p_star) {
  const std::string svg = render_plot_svg(series, mode, p_star);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIO, "cannot write " + path.string());
  out << svg;
  if (!out) throw Error(ErrorKind::kIO, "failed writing " + path.string());
}

double gap_at_time(const std::vector<IterationRecord>& records, double time, double p_star) {
  if (records.empty()) throw Error(ErrorKind::kInvalidArgument, "empty trace");
  double value = records.front().P_estimate;
  for (const auto& r : records) {
    if (r.wall_time_s > time) break;
    value = r.P_estimate;
  }
  return value - p_star;
}

}  // namespace minimax
