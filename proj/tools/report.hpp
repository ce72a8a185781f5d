#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace igid::cli {

using Cell = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

// A CSV artifact: '#' comment lines, a header row, then data rows in a fixed
// column order.
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

// Doubles are written with 17 significant digits, booleans as 0/1.
std::string format_cell(const Cell& cell);
void write_csv(std::ostream& out, const Table& table);

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes `table` to `path` and, with json_mirror, to `path` + ".json".
// Refuses to replace an existing file unless `force`.
void emit_report(const Table& table, const std::filesystem::path& path, bool force,
                 bool json_mirror);

// Throws OutputError if `path` exists and `force` is false.
void check_writable(const std::filesystem::path& path, bool force);

}  // namespace igid::cli
