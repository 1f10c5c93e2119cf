#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ptwig {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& text);

// Deterministic decimal text, 17 significant digits (round-trips exactly).
std::string format_double(double v);

using Meta = std::vector<std::pair<std::string, std::string>>;

// Column-named rows with pre-formatted cells; the one shape every command
// serializes through.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// UTF-8, LF endings, RFC-4180 quoting; meta echoed as leading '#' lines.
std::string to_csv(const Table& table, const Meta& meta);

// {"meta": {...}, "data": [...]} with insertion-ordered keys.
std::string to_json(const Table& table, const Meta& meta);

std::string serialize(const Table& table, const Meta& meta,
                      OutputFormat format);

// Write via temp file + rename so partial output never lands at `path`.
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace ptwig
