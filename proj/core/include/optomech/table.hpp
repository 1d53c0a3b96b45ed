#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace optomech {

/// A number, or a status string standing in for an undefined number.
using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws kInvalidArgument if the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

/// value, or `status` when value is empty or non-finite.
[[nodiscard]] Cell cell_or(const std::optional<double>& value, std::string_view status);

/// Shortest representation that parses back to the same double.
[[nodiscard]] std::string format_double(double v);

/// Header row then one line per row, CRLF-free, RFC-4180 quoting. Non-finite
/// doubles are written as "undefined".
[[nodiscard]] std::string to_csv(const Table& table);

/// Array of objects keyed by column name.
[[nodiscard]] std::string to_json(const Table& table);

/// Cells that parse completely as doubles become numbers.
[[nodiscard]] Table parse_csv(std::string_view text);

enum class TableFormat { kCsv, kJson };

/// Throws kIoError.
void write_table(const Table& table, const std::filesystem::path& path, TableFormat format);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace optomech
