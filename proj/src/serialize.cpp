#include "ptwig/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ptwig {

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + text + "' (csv|json)");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// numeric cells pass through as raw JSON numbers, everything else as strings
bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end && *end == '\0';
}
}  // namespace

std::string to_csv(const Table& table, const Meta& meta) {
  std::string out;
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_quote(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_quote(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table, const Meta& meta) {
  nlohmann::ordered_json root;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) m[k] = v;
  root["meta"] = m;
  nlohmann::ordered_json data = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
      if (looks_numeric(row[c]))
        obj[table.columns[c]] = std::strtod(row[c].c_str(), nullptr);
      else
        obj[table.columns[c]] = row[c];
    }
    data.push_back(std::move(obj));
  }
  root["data"] = std::move(data);
  return root.dump(2) + "\n";
}

std::string serialize(const Table& table, const Meta& meta,
                      OutputFormat format) {
  return format == OutputFormat::Csv ? to_csv(table, meta)
                                     : to_json(table, meta);
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::ios_base::failure("cannot open " + tmp.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::ios_base::failure("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
    throw std::ios_base::failure("rename to " + path + ": " + ec.message());
}

}  // namespace ptwig
