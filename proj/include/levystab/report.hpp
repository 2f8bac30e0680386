#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace levystab {

inline constexpr int kSchemaVersion = 1;

/// Rendered command output plus the exit status it implies.
struct Report {
  std::string format;  // "csv" or "json"
  std::string text;
  int status = 0;
};

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-ordered table rendered as CSV or as a JSON array of objects.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// "%.12g", with "inf", "-inf" and "nan" spelled out.
std::string format_number(double v);

/// Number or null for non-finite values.
nlohmann::ordered_json json_number(double v);
nlohmann::ordered_json table_to_json(const Table& table);

/// Comment lines "# key=value" for each metadata pair, then header and rows.
std::string render_csv(const std::vector<std::pair<std::string, std::string>>& metadata,
                       const Table& table);

/// Top-level document {schema_version, command, config_echo, seed, results,
/// constants_provenance}, pretty-printed with a trailing newline.
std::string render_json(const std::string& command, const std::map<std::string, std::string>& config,
                        std::uint64_t seed, const nlohmann::ordered_json& results,
                        const nlohmann::ordered_json& provenance);

}  // namespace levystab
