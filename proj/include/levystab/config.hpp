#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace levystab {

/// Flat key = value settings. Lines starting with '#' or ';' are comments,
/// blank lines are ignored, later assignments win.
class Config {
 public:
  static Config from_text(const std::string& text, const std::string& origin = "<text>");
  static Config from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  /// Parses "key=value" and sets it.
  void assign(const std::string& assignment);
  void erase(const std::string& key);
  /// Copies every entry of `overrides` over this config.
  void merge(const Config& overrides);

  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct KeySpec {
  std::string key;
  std::string default_value;
};

/// Typed view of a Config against a fixed schema. Unknown keys are rejected so
/// typos fail loudly; malformed values raise ConfigError naming the key.
class Settings {
 public:
  Settings(const Config& config, const std::vector<KeySpec>& schema, const std::string& command);

  const std::string& str(const std::string& key) const;
  double real(const std::string& key) const;
  std::optional<double> optional_real(const std::string& key) const;  // empty means unset
  std::int64_t integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  std::size_t count(const std::string& key) const;  // nonnegative integer
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::size_t> counts(const std::string& key) const;

  /// Effective value of every schema key, sorted by key.
  const std::map<std::string, std::string>& effective() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string command_;
};

/// Whitespace-trimmed copy.
std::string trim(const std::string& s);
/// Splits on `sep`, trimming each piece and dropping empty ones.
std::vector<std::string> split_list(const std::string& s, char sep = ',');
/// Strict decimal parse of the whole string.
std::optional<double> parse_real(const std::string& s);

}  // namespace levystab
