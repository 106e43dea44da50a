#include "relaxrk/cli/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "relaxrk/errors.hpp"

namespace relaxrk::cli {

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("CSV has no column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::string_view name) const {
  const std::string& cell = rows.at(row).at(column(name));
  if (cell.empty()) throw ConfigError("CSV cell '" + std::string(name) + "' is blank");
  return std::stod(cell);
}

bool CsvTable::blank(std::size_t row, std::string_view name) const { return rows.at(row).at(column(name)).empty(); }

std::string format_cell(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

std::string format_cell(std::int64_t value) { return std::to_string(value); }

std::string format_cell(std::optional<double> value) { return value ? format_cell(*value) : std::string(); }

CsvRow& CsvRow::operator<<(double v) {
  cells.push_back(format_cell(v));
  return *this;
}

CsvRow& CsvRow::operator<<(std::optional<double> v) {
  cells.push_back(format_cell(v));
  return *this;
}

CsvRow& CsvRow::operator<<(std::int64_t v) {
  cells.push_back(format_cell(v));
  return *this;
}

CsvRow& CsvRow::operator<<(const std::string& v) {
  if (v.find_first_of(",\n\r\"") != std::string::npos) throw ConfigError("CSV cell contains a separator: " + v);
  cells.push_back(v);
  return *this;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::vector<std::vector<std::string>> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) throw ConfigError("CSV text must end with a line feed");
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') throw ConfigError("CSV must use LF line endings");
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    lines.push_back(std::move(cells));
    pos = end + 1;
  }
  if (lines.empty()) throw ConfigError("CSV has no header row");
  table.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != table.header.size()) {
      throw ConfigError("CSV row " + std::to_string(i) + " has " + std::to_string(lines[i].size()) +
                        " cells, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(lines[i]));
  }
  return table;
}

std::string emit_csv(const CsvTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  const std::string text = emit_csv(table);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace relaxrk::cli
