#include "optomech/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "optomech/error.hpp"

namespace optomech {
namespace {

std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    return std::isfinite(*d) ? format_double(*d) : std::string("undefined");
  }
  const auto& s = std::get<std::string>(c);
  // Keep numeric-looking strings strings on the way back in.
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (!s.empty() && ec == std::errc() && ptr == s.data() + s.size()) return "\"" + s + "\"";
  return quote(s);
}

Cell parse_cell(const std::string& s, bool quoted) {
  if (!quoted && !s.empty()) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  }
  return s;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorCode::kInvalidArgument, "row has " + std::to_string(row.size()) +
                                                 " cells, table has " +
                                                 std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

Cell cell_or(const std::optional<double>& value, std::string_view status) {
  if (value && std::isfinite(*value)) return *value;
  return std::string(status);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorCode::kInvalidArgument, "cannot format double");
  return std::string(buf, ptr);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += quote(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += render(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& c = row[i];
      if (const auto* d = std::get_if<double>(&c)) {
        obj[table.columns[i]] = std::isfinite(*d) ? nlohmann::ordered_json(*d)
                                                  : nlohmann::ordered_json("undefined");
      } else {
        obj[table.columns[i]] = std::get<std::string>(c);
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

Table parse_csv(std::string_view text) {
  std::vector<std::vector<std::pair<std::string, bool>>> records;
  std::vector<std::pair<std::string, bool>> record;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = quoted = any = true;
    } else if (c == ',') {
      record.emplace_back(std::move(field), quoted);
      field.clear();
      quoted = false;
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.emplace_back(std::move(field), quoted);
      records.push_back(std::move(record));
      record.clear();
      field.clear();
      quoted = any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (in_quotes) throw Error(ErrorCode::kParseError, "unterminated quoted CSV field");
  if (any) {
    record.emplace_back(std::move(field), quoted);
    records.push_back(std::move(record));
  }

  Table t;
  if (records.empty()) return t;
  for (auto& [name, q] : records.front()) t.columns.push_back(name);
  for (std::size_t r = 1; r < records.size(); ++r) {
    std::vector<Cell> row;
    for (const auto& [s, q] : records[r]) row.push_back(parse_cell(s, q));
    t.add_row(std::move(row));
  }
  return t;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write to '" + path.string() + "' failed");
}

void write_table(const Table& table, const std::filesystem::path& path, TableFormat format) {
  write_text(path, format == TableFormat::kCsv ? to_csv(table) : to_json(table));
}

}  // namespace optomech
