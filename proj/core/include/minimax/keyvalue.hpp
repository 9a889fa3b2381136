#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace minimax {

struct KeyValueEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// `key = value` lines; `#` starts a comment, blank lines are skipped.
/// Malformed lines and duplicate keys raise kConfig naming source:line.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::string_view text, std::string source = "<input>");
  static KeyValueFile load(const std::filesystem::path& path);

  const std::vector<KeyValueEntry>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

  const KeyValueEntry* find(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }

  std::string get_string(std::string_view key) const;
  std::optional<std::string> get_string_opt(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::optional<double> get_double_opt(std::string_view key) const;
  long get_int(std::string_view key) const;
  std::optional<long> get_int_opt(std::string_view key) const;
  std::optional<std::uint64_t> get_uint_opt(std::string_view key) const;
  std::optional<bool> get_bool_opt(std::string_view key) const;

  /// Throws kConfig for the first key not in `known` and not matched by a
  /// listed prefix (e.g. "grtr.").
  void reject_unknown(const std::set<std::string, std::less<>>& known,
                      const std::vector<std::string>& prefixes = {}) const;

  /// "source:line: field 'key': message"
  std::string where(const KeyValueEntry& entry, std::string_view message) const;

 private:
  std::string source_;
  std::vector<KeyValueEntry> entries_;
};

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

}  // namespace minimax
