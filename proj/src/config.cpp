#include "levystab/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "levystab/errors.hpp"

namespace levystab {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, sep)) {
    piece = trim(piece);
    if (!piece.empty()) out.push_back(piece);
  }
  return out;
}

std::optional<double> parse_real(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) return std::nullopt;
  return v;
}

namespace {

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
  }
  return true;
}

std::pair<std::string, std::string> split_assignment(const std::string& line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
  std::string key = trim(line.substr(0, eq));
  if (!valid_key(key)) throw ConfigError(where + ": invalid key '" + key + "'");
  return {std::move(key), trim(line.substr(eq + 1))};
}

}  // namespace

Config Config::from_text(const std::string& text, const std::string& origin) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    auto [key, value] = split_assignment(t, origin + ":" + std::to_string(line_no));
    cfg.entries_[key] = value;
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  const std::string k = trim(key);
  if (!valid_key(k)) throw ConfigError("invalid key '" + key + "'");
  entries_[k] = trim(value);
}

void Config::assign(const std::string& assignment) {
  auto [key, value] = split_assignment(assignment, "override '" + assignment + "'");
  entries_[key] = value;
}

void Config::erase(const std::string& key) { entries_.erase(key); }

void Config::merge(const Config& overrides) {
  for (const auto& [k, v] : overrides.entries_) entries_[k] = v;
}

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- Settings

Settings::Settings(const Config& config, const std::vector<KeySpec>& schema,
                   const std::string& command)
    : command_(command) {
  for (const auto& spec : schema) values_[spec.key] = spec.default_value;
  for (const auto& [k, v] : config.entries()) {
    if (!values_.count(k)) throw ConfigError(command + ": unknown key '" + k + "'");
    values_[k] = v;
  }
}

const std::string& Settings::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorCode::Internal, command_ + ": key '" + key + "' not in schema");
  return it->second;
}

double Settings::real(const std::string& key) const {
  const auto v = parse_real(str(key));
  if (!v || !std::isfinite(*v)) throw ConfigError(command_ + ": '" + key + "' must be a finite number");
  return *v;
}

std::optional<double> Settings::optional_real(const std::string& key) const {
  if (trim(str(key)).empty()) return std::nullopt;
  return real(key);
}

std::int64_t Settings::integer(const std::string& key) const {
  const std::string t = trim(str(key));
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError(command_ + ": '" + key + "' must be an integer");
  }
  return v;
}

std::uint64_t Settings::u64(const std::string& key) const {
  const std::string t = trim(str(key));
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || t[0] == '-' || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError(command_ + ": '" + key + "' must be an unsigned 64-bit integer");
  }
  return v;
}

std::size_t Settings::count(const std::string& key) const {
  const auto v = integer(key);
  if (v < 0) throw ConfigError(command_ + ": '" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

bool Settings::flag(const std::string& key) const {
  const std::string t = trim(str(key));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(command_ + ": '" + key + "' must be true or false");
}

std::vector<double> Settings::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& piece : split_list(str(key))) {
    const auto v = parse_real(piece);
    if (!v || !std::isfinite(*v)) {
      throw ConfigError(command_ + ": '" + key + "' has a bad entry '" + piece + "'");
    }
    out.push_back(*v);
  }
  return out;
}

std::vector<std::size_t> Settings::counts(const std::string& key) const {
  std::vector<std::size_t> out;
  for (const auto& piece : split_list(str(key))) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(piece.c_str(), &end, 10);
    if (end != piece.c_str() + piece.size() || errno == ERANGE || v < 0) {
      throw ConfigError(command_ + ": '" + key + "' has a bad entry '" + piece + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace levystab
