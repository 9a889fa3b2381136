#include "minimax/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "minimax/errors.hpp"
#include "minimax/keyvalue.hpp"

namespace minimax {

namespace {

constexpr int kColumns = 11;

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class RowParser {
 public:
  RowParser(const std::string& source, int line) : source_(source), line_(line) {}

  [[noreturn]] void fail(std::string_view column, std::string_view msg) const {
    throw Error(ErrorKind::kParse, source_ + ":" + std::to_string(line_) + ": column '" +
                                       std::string(column) + "': " + std::string(msg));
  }

  double real(std::string_view text, std::string_view column) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      fail(column, "expected a real number");
    }
    return v;
  }

  std::optional<double> optional_real(std::string_view text, std::string_view column) const {
    if (text.empty()) return std::nullopt;
    return real(text, column);
  }

  long integer(std::string_view text, std::string_view column) const {
    long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      fail(column, "expected an integer");
    }
    return v;
  }

 private:
  const std::string& source_;
  int line_;
};

}  // namespace

void write_trace(std::ostream& out, const std::vector<IterationRecord>& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.t << ',' << format_double(r.x_norm) << ',' << format_double(r.g_norm) << ','
        << optional_field(r.lambda) << ',' << optional_field(r.lambda_min_H) << ','
        << format_double(r.step_norm) << ',' << to_string(r.step_kind) << ','
        << format_double(r.P_estimate) << ',' << r.inner_iters << ','
        << format_double(r.wall_time_s) << ',' << static_cast<int>(r.domain_event) << '\n';
  }
}

void write_trace_file(const std::filesystem::path& path,
                      const std::vector<IterationRecord>& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIO, "cannot write " + path.string());
  write_trace(out, trace);
  if (!out) throw Error(ErrorKind::kIO, "failed writing " + path.string());
}

std::vector<IterationRecord> parse_trace(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::kParse, source + ": empty trace (missing header)");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) {
    throw Error(ErrorKind::kParse, source + ":1: unexpected header");
  }
  std::vector<IterationRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    RowParser p(source, line_no);
    if (static_cast<int>(f.size()) != kColumns) {
      p.fail("*", "expected " + std::to_string(kColumns) + " fields, got " +
                      std::to_string(f.size()));
    }
    IterationRecord r;
    r.t = p.integer(f[0], "t");
    r.x_norm = p.real(f[1], "x_norm");
    r.g_norm = p.real(f[2], "g_norm");
    r.lambda = p.optional_real(f[3], "lambda");
    r.lambda_min_H = p.optional_real(f[4], "lambda_min_H");
    r.step_norm = p.real(f[5], "step_norm");
    const auto kind = step_kind_from_string(f[6]);
    if (!kind) p.fail("step_kind", "unknown step kind '" + std::string(f[6]) + "'");
    r.step_kind = *kind;
    r.P_estimate = p.real(f[7], "P_estimate");
    r.inner_iters = p.integer(f[8], "inner_iters");
    r.wall_time_s = p.real(f[9], "wall_time_s");
    const long ev = p.integer(f[10], "domain_event");
    if (ev < 0 || ev > 3) p.fail("domain_event", "expected 0..3");
    r.domain_event = static_cast<DomainEvent>(ev);
    if (r.g_norm < 0.0 || r.step_norm < 0.0) p.fail("g_norm", "norms must be nonnegative");
    out.push_back(r);
  }
  return out;
}

std::vector<IterationRecord> read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIO, "cannot open " + path.string());
  return parse_trace(in, path.string());
}

}  // namespace minimax
