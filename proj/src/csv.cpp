#include "veo/csv.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace veo {

void CsvTable::require_width(std::size_t w) const {
  if (header.size() != w) throw std::runtime_error("csv: header width mismatch");
  for (const auto& r : rows)
    if (r.size() != w) throw std::runtime_error("csv: ragged row");
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_csv_double(const std::string& cell) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0')
    throw std::runtime_error("csv: cannot parse number '" + cell + "'");
  return v;
}

namespace {
void check_cell(const std::string& cell) {
  for (char c : cell)
    if (c == ',' || c == '"' || c == '\n' || c == '\r')
      throw std::runtime_error("csv: cell contains a delimiter: '" + cell + "'");
}

void append_row(std::ostringstream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    check_cell(row[i]);
    if (i) out << ',';
    out << row[i];
  }
  out << '\n';
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}
}  // namespace

std::string csv_to_string(const CsvTable& table) {
  std::ostringstream out;
  append_row(out, table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw std::runtime_error("csv: ragged row on write");
    append_row(out, r);
  }
  return out.str();
}

CsvTable csv_from_string(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) throw std::runtime_error("csv: empty input");
  return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("csv: cannot write " + path);
  out << csv_to_string(table);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("csv: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return csv_from_string(buf.str());
}

std::string fnv1a_hex(const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace veo
