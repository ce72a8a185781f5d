#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <type_traits>

#include <json.hpp>

namespace igid::cli {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("report row has " + std::to_string(row.size()) +
                           " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_cell(const Cell& cell) {
  struct Formatter {
    std::string operator()(double v) const {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
    }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "1" : "0"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Formatter{}, cell);
}

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

void check_writable(const std::filesystem::path& path, bool force) {
  if (!force && std::filesystem::exists(path)) {
    throw OutputError("refusing to overwrite existing file " + path.string() +
                      " (pass --force)");
  }
}

namespace {

nlohmann::json to_json(const Table& table) {
  nlohmann::json doc;
  doc["comments"] = table.comments;
  doc["columns"] = table.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              obj[table.columns[i]] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_cell(v));
            } else {
              obj[table.columns[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

}  // namespace

void emit_report(const Table& table, const std::filesystem::path& path, bool force,
                 bool json_mirror) {
  std::filesystem::path json_path = path;
  json_path += ".json";
  check_writable(path, force);
  if (json_mirror) check_writable(json_path, force);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + path.string());
    write_csv(out, table);
    if (!out) throw OutputError("write failed for " + path.string());
  }
  if (json_mirror) {
    std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + json_path.string());
    out << to_json(table).dump(2) << '\n';
  }
}

}  // namespace igid::cli
