#include "levystab/report.hpp"

#include <cmath>
#include <cstdio>

#include "levystab/errors.hpp"

namespace levystab {

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw Error(ErrorCode::Internal, "table row has " + std::to_string(row.size()) +
                                         " cells, expected " + std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

nlohmann::ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return json_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

nlohmann::ordered_json table_to_json(const Table& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows()) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns()[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

namespace {

// RFC 4180 quoting, applied only when needed.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

std::string render_csv(const std::vector<std::pair<std::string, std::string>>& metadata,
                       const Table& table) {
  std::string out;
  for (const auto& [k, v] : metadata) out += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < table.columns().size(); ++i) {
    out += (i ? "," : "") + csv_field(table.columns()[i]);
  }
  out += '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(cell_text(row[i]));
    out += '\n';
  }
  return out;
}

std::string render_json(const std::string& command, const std::map<std::string, std::string>& config,
                        std::uint64_t seed, const nlohmann::ordered_json& results,
                        const nlohmann::ordered_json& provenance) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  auto echo = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) echo[k] = v;
  doc["config_echo"] = std::move(echo);
  doc["seed"] = seed;
  doc["results"] = results;
  doc["constants_provenance"] = provenance;
  return doc.dump(2) + "\n";
}

}  // namespace levystab
