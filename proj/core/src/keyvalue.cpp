#include "minimax/keyvalue.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "minimax/errors.hpp"

namespace minimax {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char ch : key) {
    const auto c = static_cast<unsigned char>(ch);
    if (!std::isalnum(c) && ch != '_' && ch != '.' && ch != '-') return false;
  }
  return true;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text, std::string source) {
  KeyValueFile out;
  out.source_ = std::move(source);
  int line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    const std::string prefix = out.source_ + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kConfig, prefix + "expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!valid_key(key)) {
      throw Error(ErrorKind::kConfig, prefix + "invalid key '" + std::string(key) + "'");
    }
    if (const KeyValueEntry* prev = out.find(key)) {
      throw Error(ErrorKind::kConfig, prefix + "field '" + std::string(key) +
                                          "' already set on line " + std::to_string(prev->line));
    }
    out.entries_.push_back({std::string(key), std::string(value), line_no});
  }
  return out;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIO, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::kIO, "failed reading " + path.string());
  return parse(buf.str(), path.string());
}

const KeyValueEntry* KeyValueFile::find(std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

std::string KeyValueFile::where(const KeyValueEntry& entry, std::string_view message) const {
  return source_ + ":" + std::to_string(entry.line) + ": field '" + entry.key + "': " +
         std::string(message);
}

std::string KeyValueFile::get_string(std::string_view key) const {
  if (auto v = get_string_opt(key)) return *v;
  throw Error(ErrorKind::kConfig, source_ + ": missing required field '" + std::string(key) + "'");
}

std::optional<std::string> KeyValueFile::get_string_opt(std::string_view key) const {
  const KeyValueEntry* e = find(key);
  if (!e) return std::nullopt;
  return e->value;
}

double KeyValueFile::get_double(std::string_view key) const {
  if (auto v = get_double_opt(key)) return *v;
  throw Error(ErrorKind::kConfig, source_ + ": missing required field '" + std::string(key) + "'");
}

std::optional<double> KeyValueFile::get_double_opt(std::string_view key) const {
  const KeyValueEntry* e = find(key);
  if (!e) return std::nullopt;
  double v = 0.0;
  const char* first = e->value.data();
  const char* last = first + e->value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::kConfig, where(*e, "expected a real number, got '" + e->value + "'"));
  }
  return v;
}

long KeyValueFile::get_int(std::string_view key) const {
  if (auto v = get_int_opt(key)) return *v;
  throw Error(ErrorKind::kConfig, source_ + ": missing required field '" + std::string(key) + "'");
}

std::optional<long> KeyValueFile::get_int_opt(std::string_view key) const {
  const KeyValueEntry* e = find(key);
  if (!e) return std::nullopt;
  long v = 0;
  const char* first = e->value.data();
  const char* last = first + e->value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::kConfig, where(*e, "expected an integer, got '" + e->value + "'"));
  }
  return v;
}

std::optional<std::uint64_t> KeyValueFile::get_uint_opt(std::string_view key) const {
  const KeyValueEntry* e = find(key);
  if (!e) return std::nullopt;
  std::uint64_t v = 0;
  const char* first = e->value.data();
  const char* last = first + e->value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::kConfig,
                where(*e, "expected a nonnegative integer, got '" + e->value + "'"));
  }
  return v;
}

std::optional<bool> KeyValueFile::get_bool_opt(std::string_view key) const {
  const KeyValueEntry* e = find(key);
  if (!e) return std::nullopt;
  if (e->value == "true" || e->value == "1") return true;
  if (e->value == "false" || e->value == "0") return false;
  throw Error(ErrorKind::kConfig, where(*e, "expected true or false, got '" + e->value + "'"));
}

void KeyValueFile::reject_unknown(const std::set<std::string, std::less<>>& known,
                                  const std::vector<std::string>& prefixes) const {
  for (const auto& e : entries_) {
    if (known.contains(e.key)) continue;
    bool matched = false;
    for (const auto& p : prefixes) {
      if (e.key.starts_with(p)) matched = true;
    }
    if (!matched) throw Error(ErrorKind::kConfig, where(e, "unknown field"));
  }
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

}  // namespace minimax
