#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relaxrk::cli {

/// Raw CSV table: cells are kept as text so parse -> emit is lossless.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws ConfigError if absent
  double number(std::size_t row, std::string_view name) const;
  bool blank(std::size_t row, std::string_view name) const;
};

/// Doubles as %.16e, integers verbatim, undefined values as empty cells.
std::string format_cell(double value);
std::string format_cell(std::int64_t value);
std::string format_cell(std::optional<double> value);

/// One CSV row under construction.
class CsvRow {
 public:
  CsvRow& operator<<(double v);
  CsvRow& operator<<(std::optional<double> v);
  CsvRow& operator<<(std::int64_t v);
  CsvRow& operator<<(std::size_t v) { return *this << static_cast<std::int64_t>(v); }
  CsvRow& operator<<(int v) { return *this << static_cast<std::int64_t>(v); }
  CsvRow& operator<<(const std::string& v);
  CsvRow& operator<<(const char* v) { return *this << std::string(v); }

  std::vector<std::string> cells;
};

CsvTable parse_csv(std::string_view text);
std::string emit_csv(const CsvTable& table);

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace relaxrk::cli
