#pragma once

#include <string>
#include <vector>

namespace veo {

// Plain comma-separated tables. Cells must not contain commas, quotes, or
// line breaks; numeric cells use shortest round-trip formatting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void require_width(std::size_t w) const;  // throws on ragged rows
};

std::string format_double(double v);
double parse_csv_double(const std::string& cell);

std::string csv_to_string(const CsvTable& table);
CsvTable csv_from_string(const std::string& text);
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// 64-bit FNV-1a over raw bytes, hex-encoded; used for observation hashes.
std::string fnv1a_hex(const void* data, std::size_t len);

}  // namespace veo
